#pragma once
#include <cstdint>
#include <vector>

#include "c2f/async_runtime.hpp"

namespace c2f {

struct EvalConfig {
    int episodes = 200;
    std::uint64_t seed = 0;
    ExecMode mode = ExecMode::Async;
    HorizonConfig horizon;
    ClockModel clock;
    bool parallel = true;
};

struct EvalResult {
    int episodes = 0;
    std::vector<std::uint8_t> successes;  // per episode, in order
    double success_rate = 0.0;
    double ci_half = 0.0;  // normal-approximation 95% binomial half-width
    double mean_latency_ms = 0.0;
};

double binomial_ci_half(double p, int n);

// Episode i rolls with env seed stream 2i and policy stream 2i+1 derived from
// cfg.seed, task id i mod G. Independent seed streams make the parallel and
// serial paths produce identical results; tests assert that.
EvalResult evaluate(const EnvConfig& env_cfg, const PolicyBundle& policy, const EvalConfig& cfg,
                    std::vector<ExecutionTrace>* traces_out = nullptr);

// Expert-in-the-loop sanity evaluation (no learned models).
EvalResult evaluate_expert(const EnvConfig& env_cfg, const EvalConfig& cfg);

}  // namespace c2f
