#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "c2f/hybrid_action.hpp"
#include "c2f/toy_env.hpp"

namespace c2f {

// One expert episode. Observations/actions are stored per step, row-major;
// the final record is the terminal state paired with the expert's hold
// action there, so chunk padding repeats a stable action.
struct Trajectory {
    std::uint64_t env_seed = 0;
    int task_id = 0;
    bool success = false;
    int length = 0;  // number of (obs, action) pairs
    std::vector<double> planner_obs;  // [length][planner_dim]
    std::vector<double> refiner_obs;  // [length][refiner_dim]
    std::vector<double> actions;      // [length][dims]
};

struct Dataset {
    std::uint64_t config_hash = 0;
    std::uint64_t seed = 0;
    int dims = 0;
    int num_targets = 0;
    int planner_dim = 0;
    int refiner_dim = 0;
    std::vector<Trajectory> episodes;
};

// Rolls the scripted expert. Episode i uses independent seed substreams, so
// the result is identical whether generated serially or across threads.
Trajectory run_expert_episode(const EnvConfig& cfg, std::uint64_t episode_seed, int task_id);

Dataset generate_dataset(const EnvConfig& cfg, int episodes, std::uint64_t seed,
                         std::uint64_t config_hash, bool parallel);

// Binary file: magic + version byte header, then per-episode records.
// Little-endian throughout; loaders reject unknown magic/version.
void save_dataset(const std::string& path, const Dataset& ds);
Dataset load_dataset(const std::string& path);

// Training view: one conditioning step plus its ground-truth targets.
struct ChunkSample {
    std::vector<double> planner_obs;
    std::vector<double> refiner_obs;
    CoarseChunk gt_chunk;             // quantized expert actions, l_macro rows
    std::vector<double> fine_chunk;   // [h_chunk][dims] raw expert actions
};

// gt rows beyond the recorded length repeat the last recorded action.
ChunkSample make_chunk_sample(const Dataset& ds, const Trajectory& ep, int t,
                              const QuantizerConfig& q, int l_macro, int h_chunk);

ChunkSample sample_chunk(const Dataset& ds, const QuantizerConfig& q, int l_macro, int h_chunk,
                         RngState& rng);

}  // namespace c2f
