#pragma once
#include <string>
#include <vector>

#include "c2f/config.hpp"
#include "c2f/eval.hpp"

namespace c2f {

// One sweep row: setting value, success over the evaluation episodes,
// modeled per-chunk latency, and the seed it ran under.
struct SweepRow {
    double setting = 0.0;
    double success = 0.0;
    double ci_half = 0.0;
    double latency_ms = 0.0;
    int episodes = 0;
    std::uint64_t seed = 0;
};

struct SweepResult {
    std::string setting_name;
    std::vector<SweepRow> rows;
};

Dataset make_dataset(const ExperimentConfig& cfg, bool parallel = true);

struct HierarchicalRun {
    HierarchicalModels models;
    CurriculumState curriculum;
    std::vector<MetricsRow> metrics;
};

// Trains the full stack from a dataset under cfg (strategy, budget, seed all
// from cfg unless overridden by the caller mutating cfg first).
HierarchicalRun run_training(const Dataset& data, const ExperimentConfig& cfg);

struct MonolithicRun {
    RefinerModel model;
    std::vector<MetricsRow> metrics;
};

MonolithicRun run_training_monolithic(const Dataset& data, const ExperimentConfig& cfg);

PolicyBundle make_bundle(const HierarchicalModels& models, const ExperimentConfig& cfg);
PolicyBundle make_bundle_monolithic(const RefinerModel& model, const ExperimentConfig& cfg);

// Evaluation under cfg at horizon factor m (clamped nowhere: caller must keep
// m*h_chunk within the trained macro horizon).
EvalResult run_eval(const PolicyBundle& bundle, const ExperimentConfig& cfg, int m,
                    ExecMode mode, std::vector<ExecutionTrace>* traces = nullptr,
                    bool parallel = true);

// Fixed-budget bin sweep: same dataset, same seed and step budget per N.
SweepResult sweep_bins(const ExperimentConfig& base, const std::vector<int>& values,
                       const Dataset& data);

// One model trained at cfg.m_factor, evaluated at each runtime M.
SweepResult sweep_horizon(const ExperimentConfig& base, const std::vector<int>& values,
                          const Dataset& data);

void write_sweep_csv(const std::string& path, const SweepResult& sweep,
                     std::uint64_t config_hash);

// Closed-form latency table rows (m, latency_ms, reduction vs baseline).
std::vector<std::vector<std::string>> latency_table(const ClockModel& clock, double baseline_ms,
                                                    const std::vector<int>& m_values);

// Renders plots for a csv based on its header; returns the files written.
// Throws (writing nothing) on malformed or empty input.
std::vector<std::string> plot_csv(const std::string& csv_path, const std::string& out_dir);

}  // namespace c2f
