#pragma once
#include <cstdint>
#include <map>
#include <string>

#include "c2f/async_runtime.hpp"
#include "c2f/curriculum.hpp"
#include "c2f/toy_env.hpp"

namespace c2f {

// Flat experiment settings, parsed from `key = value` lines ('#' comments).
// Unknown keys are rejected up front.
struct ExperimentConfig {
    std::uint64_t seed = 1;
    int dims = 2;
    int num_targets = 4;
    int n_bins = 10;
    int h_chunk = 5;
    int m_factor = 2;
    int k_diff = 50;
    int d_emb = 8;
    double tau = 0.9;
    double lambda_diff = 1.0;
    double lambda_plan = 0.5;
    int planner_width = 32;
    int planner_depth = 2;
    int refiner_width = 64;
    long train_steps = 6000;
    int batch_size = 16;
    int episodes = 500;       // dataset size
    int eval_episodes = 200;
    double lr_peak = 1e-3;
    long warmup_steps = 100;
    double ema_decay = 0.99;
    std::string strategy = "dynamic";
    std::string compose_mode = "direct";
    std::string sample_mode = "argmax";
    std::string exec_mode = "async";
    double c_refine_ms = 92.0;
    double c_plan_ms = 60.0;
    double baseline_ms = 220.0;
    std::string data_path = "out/dataset.bin";
    std::string out_dir = "out";
    long mid_save_step = 0;  // 0 disables the mid-run checkpoint

    int l_macro() const { return m_factor * h_chunk; }

    // Fingerprint over the model/data-relevant keys; runtime-only settings
    // (eval episode count, paths, mid-save) do not participate, so evaluating
    // an existing checkpoint with a different eval setup stays legal.
    std::uint64_t fingerprint() const;
    std::string canonical_fingerprint_text() const;

    void validate() const;

    EnvConfig env_config() const;
    PlannerConfig planner_config(int planner_obs_dim) const;
    RefinerConfig refiner_config(int refiner_obs_dim) const;
    RefinerConfig monolithic_config(int planner_obs_dim, int refiner_obs_dim) const;
    TrainConfig train_config() const;
    HorizonConfig horizon_config() const;
    ClockModel clock_model() const;
};

ExperimentConfig load_config(const std::string& path);

// Parses from in-memory text (used by tests); `origin` labels error messages.
ExperimentConfig parse_config_text(const std::string& text, const std::string& origin = "<text>");

std::uint64_t fnv1a64(const std::string& text);

std::string hash_hex(std::uint64_t h);

}  // namespace c2f
