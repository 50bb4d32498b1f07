#pragma once
#include <cstdint>
#include <vector>

#include "c2f/hybrid_action.hpp"
#include "c2f/rng.hpp"

namespace c2f {

// Reach-and-align workspace: the agent starts near the origin and must align
// with the task-selected target among G candidates, first coarsely (macro
// reaching), then within a tight tolerance (micro alignment).
struct EnvConfig {
    int dims = 2;             // D
    int num_targets = 4;      // G >= 2
    double step_scale = 0.05; // workspace units moved per unit action
    double fine_tol = 0.01;   // max-norm success tolerance
    int horizon = 200;
    int grid_cells = 20;      // planner-channel quantization per dimension
    double start_jitter = 0.1;
    double target_box = 0.85;      // targets sampled in [-box, box]^D ...
    double target_min_norm = 0.5;  // ... at least this far (max-norm) from origin
    double min_separation = 0.5;   // pairwise Euclidean separation
    double expert_noise = 0.02;    // noise band on non-hold expert actions
    double expert_kill_range = 0.05;  // proportional one-step closure below this error
};

struct EnvState {
    std::vector<double> agent_pos;           // [D], within [-1,1]
    std::vector<std::vector<double>> targets; // [G][D]
    int task_id = 0;
    int step_count = 0;
    bool done = false;
    bool success = false;
};

enum class ObsChannel { Planner, Refiner };

// Deterministic in seed; throws on task_id out of range, G < 2, or when
// target placement cannot satisfy the separation constraints.
EnvState env_reset(const EnvConfig& cfg, std::uint64_t seed, int num_targets, int task_id);

// Pure transition: pos <- clip(pos + action*step_scale, [-1,1]).
EnvState env_step(const EnvConfig& cfg, const EnvState& state, const ActionVector& action);

// Scripted demonstrator. Per axis, with e = target - pos:
//   |e| >  kill_range : saturated unit move toward the target
//   tol <= |e|        : proportional one-step closure (e / step_scale)
//   |e| <  tol        : exact-zero hold (keeps the settled axis parked)
// Noise (clipped to +-expert_noise) is added on the moving branches only.
ActionVector expert_action(const EnvConfig& cfg, const EnvState& state, RngState& rng);

// Planner channel: agent+target positions snapped to grid-cell centers, then
// one-hot task id. Refiner channel: full-precision agent+target positions,
// no task identity.
std::vector<double> observe(const EnvConfig& cfg, const EnvState& state, ObsChannel channel);

int planner_obs_dim(const EnvConfig& cfg);
int refiner_obs_dim(const EnvConfig& cfg);

// Distance of the agent to the task target under the success norm.
double task_error(const EnvState& state);

}  // namespace c2f
