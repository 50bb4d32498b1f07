#include "c2f/eval.hpp"

#include <cmath>
#include <stdexcept>

#include "c2f/dataset.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace c2f {

double binomial_ci_half(double p, int n) {
    if (n <= 0) throw std::invalid_argument("binomial_ci_half: n must be positive");
    return 1.96 * std::sqrt(std::max(p * (1.0 - p), 0.0) / n);
}

namespace {

EvalResult finalize(std::vector<std::uint8_t> successes, std::vector<double> latencies) {
    EvalResult r;
    r.episodes = static_cast<int>(successes.size());
    r.successes = std::move(successes);
    int hits = 0;
    for (auto s : r.successes) hits += s;
    r.success_rate = r.episodes ? static_cast<double>(hits) / r.episodes : 0.0;
    r.ci_half = r.episodes ? binomial_ci_half(r.success_rate, r.episodes) : 0.0;
    double lat = 0.0;
    for (double l : latencies) lat += l;
    r.mean_latency_ms = latencies.empty() ? 0.0 : lat / static_cast<double>(latencies.size());
    return r;
}

}  // namespace

EvalResult evaluate(const EnvConfig& env_cfg, const PolicyBundle& policy, const EvalConfig& cfg,
                    std::vector<ExecutionTrace>* traces_out) {
    if (cfg.episodes <= 0) throw std::invalid_argument("evaluate: episodes must be positive");
    std::vector<std::uint8_t> successes(cfg.episodes, 0);
    std::vector<double> latencies(cfg.episodes, 0.0);
    std::vector<ExecutionTrace> traces;
    if (traces_out) traces.resize(cfg.episodes);

    auto run_one = [&](int i) {
        const std::uint64_t env_seed = derive_stream(cfg.seed, 2 * static_cast<std::uint64_t>(i)).seed;
        RngState policy_rng = derive_stream(cfg.seed, 2 * static_cast<std::uint64_t>(i) + 1);
        const int task = i % env_cfg.num_targets;
        ExecutionTrace tr = run_episode(env_cfg, env_seed, task, policy, cfg.horizon, cfg.clock,
                                        cfg.mode, policy_rng);
        successes[i] = tr.success ? 1 : 0;
        latencies[i] = tr.chunks.empty() ? 0.0 : measure_latency(tr);
        if (traces_out) traces[i] = std::move(tr);
    };

    if (cfg.parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
        for (int i = 0; i < cfg.episodes; ++i) run_one(i);
    } else {
        for (int i = 0; i < cfg.episodes; ++i) run_one(i);
    }

    if (traces_out) *traces_out = std::move(traces);
    return finalize(std::move(successes), std::move(latencies));
}

EvalResult evaluate_expert(const EnvConfig& env_cfg, const EvalConfig& cfg) {
    if (cfg.episodes <= 0) throw std::invalid_argument("evaluate_expert: episodes must be positive");
    std::vector<std::uint8_t> successes(cfg.episodes, 0);

    auto run_one = [&](int i) {
        const std::uint64_t env_seed = derive_stream(cfg.seed, 2 * static_cast<std::uint64_t>(i)).seed;
        Trajectory ep = run_expert_episode(env_cfg, env_seed, i % env_cfg.num_targets);
        successes[i] = ep.success ? 1 : 0;
    };

    if (cfg.parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
        for (int i = 0; i < cfg.episodes; ++i) run_one(i);
    } else {
        for (int i = 0; i < cfg.episodes; ++i) run_one(i);
    }
    return finalize(std::move(successes), {});
}

}  // namespace c2f
