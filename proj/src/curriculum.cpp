#include "c2f/curriculum.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace c2f {

StrategyMode parse_strategy(const std::string& s) {
    if (s == "pure_tf") return StrategyMode::PureTF;
    if (s == "no_tf") return StrategyMode::NoTF;
    if (s == "dynamic") return StrategyMode::Dynamic;
    if (s == "dynamic_reversible") return StrategyMode::DynamicReversible;
    throw std::invalid_argument("unknown training strategy: " + s);
}

const char* strategy_name(StrategyMode m) {
    switch (m) {
        case StrategyMode::PureTF: return "pure_tf";
        case StrategyMode::NoTF: return "no_tf";
        case StrategyMode::Dynamic: return "dynamic";
        case StrategyMode::DynamicReversible: return "dynamic_reversible";
    }
    return "?";
}

const char* source_name(IntentSource s) {
    return s == IntentSource::GroundTruth ? "gt" : "pred";
}

IntentSource select_intent_source(CurriculumState& state, double tau, long step,
                                  StrategyMode mode) {
    if (!(tau > 0.0 && tau < 1.0)) throw std::invalid_argument("tau must be in (0,1)");
    switch (mode) {
        case StrategyMode::PureTF:
            return IntentSource::GroundTruth;
        case StrategyMode::NoTF:
            return IntentSource::Predicted;
        case StrategyMode::DynamicReversible:
            if (!state.switched && state.accuracy_ema >= tau) {
                state.switched = true;
                state.switch_step = step;
            }
            return state.accuracy_ema >= tau ? IntentSource::Predicted
                                             : IntentSource::GroundTruth;
        case StrategyMode::Dynamic:
            break;
    }
    if (!state.switched && state.accuracy_ema >= tau) {
        state.switched = true;  // one-way: never reverts
        state.switch_step = step;
    }
    return state.switched ? IntentSource::Predicted : IntentSource::GroundTruth;
}

double total_loss(double l_diff, double l_plan, const LossWeights& w) {
    if (!(w.lambda_diff > 0.0) || !(w.lambda_plan > 0.0))
        throw std::invalid_argument("loss weights must be positive");
    if (!std::isfinite(l_diff) || !std::isfinite(l_plan))
        throw std::invalid_argument("total_loss: non-finite component");
    return w.lambda_diff * l_diff + w.lambda_plan * l_plan;
}

TrainResult train_hierarchical(const Dataset& data, const PlannerConfig& pcfg,
                               const RefinerConfig& rcfg, const DiffusionSchedule& schedule,
                               const TrainConfig& cfg) {
    if (pcfg.n_bins != rcfg.n_bins)
        throw std::invalid_argument("train_hierarchical: planner/refiner bin mismatch");

    TrainResult result;
    result.models.planner = make_planner(pcfg, derive_stream(cfg.seed, 1).seed);
    result.models.refiner = make_refiner(rcfg, schedule, derive_stream(cfg.seed, 2).seed);
    result.curriculum.ema_decay = cfg.ema_decay;

    PlannerModel& planner = result.models.planner;
    RefinerModel& refiner = result.models.refiner;
    CurriculumState& cur = result.curriculum;

    AdamState opt_planner, opt_refiner;
    RngState batch_rng = derive_stream(cfg.seed, 0xA);
    RngState diff_rng = derive_stream(cfg.seed, 0xB);
    RngState intent_rng = derive_stream(cfg.seed, 0xC);

    const QuantizerConfig qcfg{pcfg.n_bins, pcfg.dims};
    const int batch = cfg.batch_size;

    std::vector<ChunkSample> samples(batch);
    std::vector<PlanCache> caches(batch);
    std::vector<PlanLogits> logits(batch);

    for (long step = 0; step < cfg.steps; ++step) {
        planner.params.zero_grads();
        refiner.params.zero_grads();

        double l_plan = 0.0, l_diff = 0.0, acc = 0.0;
        for (int b = 0; b < batch; ++b) {
            samples[b] = sample_chunk(data, qcfg, pcfg.l_macro, rcfg.h_chunk, batch_rng);
            logits[b] = plan_forward(planner, samples[b].planner_obs, &caches[b]);
            PlanLogits dlogits;
            l_plan += plan_loss(logits[b], samples[b].gt_chunk, &dlogits);
            plan_backward(planner, caches[b], dlogits, cfg.weights.lambda_plan / batch);
            acc += plan_accuracy(logits[b], samples[b].gt_chunk);
        }
        l_plan /= batch;
        acc /= batch;

        cur.update(acc);
        const IntentSource source = select_intent_source(cur, cfg.tau, step, cfg.mode);

        for (int b = 0; b < batch; ++b) {
            CoarseChunk slice(rcfg.h_chunk, rcfg.dims);
            if (source == IntentSource::GroundTruth) {
                for (int t = 0; t < rcfg.h_chunk; ++t)
                    for (int i = 0; i < rcfg.dims; ++i)
                        slice.at(t, i) = samples[b].gt_chunk.at(t, i);
            } else {
                CoarseChunk drawn = sample_coarse(logits[b], SampleMode::Categorical, intent_rng);
                for (int t = 0; t < rcfg.h_chunk; ++t)
                    for (int i = 0; i < rcfg.dims; ++i) slice.at(t, i) = drawn.at(t, i);
            }
            l_diff += diffusion_loss(refiner, samples[b].fine_chunk, samples[b].refiner_obs,
                                     slice, diff_rng, cfg.weights.lambda_diff / batch)
                          .loss;
        }
        l_diff /= batch;

        const double l_tot = total_loss(l_diff, l_plan, cfg.weights);
        if (!std::isfinite(l_tot))
            throw std::runtime_error("training diverged at step " + std::to_string(step) +
                                     ": l_plan=" + std::to_string(l_plan) +
                                     " l_diff=" + std::to_string(l_diff));

        const double lr = lr_schedule(step, cfg.lr_peak, cfg.warmup_steps, cfg.steps);
        opt_planner.step(planner.params, lr);
        opt_refiner.step(refiner.params, lr);

        if (step % cfg.log_every == 0 || step == cfg.steps - 1)
            result.metrics.push_back(
                {step, l_plan, l_diff, l_tot, cur.accuracy_ema, source_name(source)});
        if (cfg.on_step) cfg.on_step(step, &planner, &refiner);
    }
    return result;
}

MonolithicTrainResult train_monolithic(const Dataset& data, const RefinerConfig& rcfg,
                                       const DiffusionSchedule& schedule,
                                       const TrainConfig& cfg) {
    if (rcfg.has_intent())
        throw std::invalid_argument("train_monolithic: config must disable the intent pathway");
    if (rcfg.robs_dim != data.planner_dim + data.refiner_dim)
        throw std::invalid_argument("train_monolithic: expects concatenated observation channels");

    MonolithicTrainResult result;
    result.model = make_refiner(rcfg, schedule, derive_stream(cfg.seed, 2).seed);
    RefinerModel& model = result.model;

    AdamState opt;
    RngState batch_rng = derive_stream(cfg.seed, 0xA);
    RngState diff_rng = derive_stream(cfg.seed, 0xB);
    const QuantizerConfig qcfg{2, rcfg.dims};  // placeholder bins; gt tokens unused here
    const CoarseChunk no_slice;

    for (long step = 0; step < cfg.steps; ++step) {
        model.params.zero_grads();
        double l_diff = 0.0;
        for (int b = 0; b < cfg.batch_size; ++b) {
            ChunkSample s = sample_chunk(data, qcfg, rcfg.h_chunk, rcfg.h_chunk, batch_rng);
            std::vector<double> obs = s.planner_obs;
            obs.insert(obs.end(), s.refiner_obs.begin(), s.refiner_obs.end());
            l_diff += diffusion_loss(model, s.fine_chunk, obs, no_slice, diff_rng,
                                     cfg.weights.lambda_diff / cfg.batch_size)
                          .loss;
        }
        l_diff /= cfg.batch_size;
        const double l_tot = cfg.weights.lambda_diff * l_diff;
        if (!std::isfinite(l_tot))
            throw std::runtime_error("monolithic training diverged at step " +
                                     std::to_string(step));

        opt.step(model.params, lr_schedule(step, cfg.lr_peak, cfg.warmup_steps, cfg.steps));
        if (step % cfg.log_every == 0 || step == cfg.steps - 1)
            result.metrics.push_back({step, 0.0, l_diff, l_tot, 0.0, "none"});
        if (cfg.on_step) cfg.on_step(step, nullptr, &model);
    }
    return result;
}

void write_metrics_csv(const std::string& path, const std::vector<MetricsRow>& rows,
                       std::uint64_t config_hash) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open metrics csv for writing: " + path);
    char hex[17];
    std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(config_hash));
    f << "# config=" << hex << "\n";
    f << "step,l_plan,l_diff,l_total,acc_ema,source\n";
    char buf[256];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof(buf), "%ld,%.17g,%.17g,%.17g,%.17g,%s\n", r.step, r.l_plan,
                      r.l_diff, r.l_total, r.acc_ema, r.source.c_str());
        f << buf;
    }
    if (!f) throw std::runtime_error("short write on metrics csv: " + path);
}

}  // namespace c2f
