#pragma once
#include <functional>
#include <string>
#include <vector>

#include "c2f/dataset.hpp"
#include "c2f/planner.hpp"
#include "c2f/refiner.hpp"

namespace c2f {

enum class IntentSource { GroundTruth, Predicted };

// pure_tf: always ground truth; no_tf: always predicted; dynamic: one-way
// latch once planner accuracy crosses tau; dynamic_reversible: same gate
// without the latch (ablation flag).
enum class StrategyMode { PureTF, NoTF, Dynamic, DynamicReversible };

StrategyMode parse_strategy(const std::string& s);
const char* strategy_name(StrategyMode m);
const char* source_name(IntentSource s);

struct CurriculumState {
    double accuracy_ema = 0.0;
    double ema_decay = 0.99;
    bool switched = false;   // one-way latch
    long switch_step = -1;

    void update(double batch_accuracy) {
        accuracy_ema = ema_decay * accuracy_ema + (1.0 - ema_decay) * batch_accuracy;
    }
};

struct LossWeights {
    double lambda_diff = 1.0;
    double lambda_plan = 0.5;
};

// Latch semantics: GroundTruth while not switched and ema < tau, Predicted
// otherwise; the first crossing records switch_step. The reversible variant
// re-evaluates the gate every step.
IntentSource select_intent_source(CurriculumState& state, double tau, long step,
                                  StrategyMode mode = StrategyMode::Dynamic);

double total_loss(double l_diff, double l_plan, const LossWeights& w);

struct MetricsRow {
    long step = 0;
    double l_plan = 0.0;
    double l_diff = 0.0;
    double l_total = 0.0;
    double acc_ema = 0.0;
    std::string source;
};

struct TrainConfig {
    long steps = 6000;
    int batch_size = 16;
    double lr_peak = 1e-3;
    long warmup_steps = 100;
    double tau = 0.9;
    double ema_decay = 0.99;
    LossWeights weights;
    StrategyMode mode = StrategyMode::Dynamic;
    std::uint64_t seed = 0;
    int log_every = 1;  // metrics row granularity
    // called after each optimizer step with the live models (mid-run
    // checkpoints, progress); planner is null in monolithic training
    std::function<void(long /*step*/, const PlannerModel*, const RefinerModel*)> on_step;
};

struct HierarchicalModels {
    PlannerModel planner;
    RefinerModel refiner;
};

struct TrainResult {
    HierarchicalModels models;
    CurriculumState curriculum;
    std::vector<MetricsRow> metrics;
};

// Joint loop: planner CE + refiner diffusion loss with the curriculum gating
// the intent source. Single-threaded and bit-deterministic in seed.
TrainResult train_hierarchical(const Dataset& data, const PlannerConfig& pcfg,
                               const RefinerConfig& rcfg, const DiffusionSchedule& schedule,
                               const TrainConfig& cfg);

struct MonolithicTrainResult {
    RefinerModel model;
    std::vector<MetricsRow> metrics;
};

// Width-matched baseline: one diffusion net regresses full actions from the
// concatenated observation channels; no planner, no intent pathway.
MonolithicTrainResult train_monolithic(const Dataset& data, const RefinerConfig& rcfg,
                                       const DiffusionSchedule& schedule, const TrainConfig& cfg);

void write_metrics_csv(const std::string& path, const std::vector<MetricsRow>& rows,
                       std::uint64_t config_hash);

}  // namespace c2f
