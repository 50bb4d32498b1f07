#include "c2f/async_runtime.hpp"

#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace c2f {

void IntentBuffer::refill(const std::vector<CoarseRow>& rows) {
    if (!rows_.empty())
        throw std::runtime_error("IntentBuffer: refill on non-empty buffer (protocol violation)");
    if (static_cast<int>(rows.size()) != capacity_)
        throw std::runtime_error("IntentBuffer: refill must supply exactly " +
                                 std::to_string(capacity_) + " rows, got " +
                                 std::to_string(rows.size()));
    for (const auto& r : rows) rows_.push_back(r);
}

std::vector<CoarseRow> IntentBuffer::pop_slice(int h_chunk) {
    if (h_chunk <= 0) throw std::invalid_argument("pop_slice: h_chunk must be positive");
    if (size() < h_chunk)
        throw std::runtime_error("IntentBuffer: pop of " + std::to_string(h_chunk) +
                                 " rows with only " + std::to_string(size()) +
                                 " available (protocol violation)");
    std::vector<CoarseRow> out;
    out.reserve(h_chunk);
    for (int i = 0; i < h_chunk; ++i) {
        out.push_back(std::move(rows_.front()));
        rows_.pop_front();
    }
    return out;
}

ClockModel fit_clock_model(int m1, double lat1, int m2, double lat2) {
    if (m1 < 1 || m2 < 1 || m1 == m2) throw std::invalid_argument("fit_clock_model: bad anchors");
    ClockModel c;
    c.c_plan_ms = (lat1 - lat2) / (1.0 / m1 - 1.0 / m2);
    c.c_refine_ms = lat1 - c.c_plan_ms / m1;
    return c;
}

double amortized_latency(const ClockModel& clock, int m_factor) {
    if (m_factor < 1) throw std::invalid_argument("amortized_latency: M must be >= 1");
    return clock.c_refine_ms + clock.c_plan_ms / m_factor;
}

double measure_latency(const ExecutionTrace& trace) {
    if (trace.chunks.empty()) throw std::invalid_argument("measure_latency: empty trace");
    return trace.total_ms() / static_cast<double>(trace.chunks.size());
}

bool trace_equal(const ExecutionTrace& a, const ExecutionTrace& b) {
    if (a.success != b.success || a.env_steps != b.env_steps ||
        a.planner_invocations != b.planner_invocations || a.chunks.size() != b.chunks.size())
        return false;
    for (std::size_t i = 0; i < a.chunks.size(); ++i) {
        const auto& x = a.chunks[i];
        const auto& y = b.chunks[i];
        if (x.chunk_index != y.chunk_index || x.planned != y.planned ||
            x.clock_ms != y.clock_ms || x.success != y.success || x.tokens != y.tokens ||
            x.actions != y.actions)
            return false;
    }
    return true;
}

ExecMode parse_exec_mode(const std::string& s) {
    if (s == "sync") return ExecMode::Sync;
    if (s == "async") return ExecMode::Async;
    throw std::invalid_argument("unknown exec mode: " + s);
}

namespace {

CoarseChunk rows_to_chunk(const std::vector<CoarseRow>& rows, int dims) {
    CoarseChunk c(static_cast<int>(rows.size()), dims);
    for (int t = 0; t < c.l_macro; ++t)
        for (int i = 0; i < dims; ++i) c.at(t, i) = rows[t][i];
    return c;
}

std::vector<CoarseToken> flatten_rows(const std::vector<CoarseRow>& rows) {
    std::vector<CoarseToken> out;
    for (const auto& r : rows) out.insert(out.end(), r.begin(), r.end());
    return out;
}

std::vector<double> policy_observation(const EnvConfig& env_cfg, const EnvState& st,
                                       bool monolithic) {
    std::vector<double> robs = observe(env_cfg, st, ObsChannel::Refiner);
    if (!monolithic) return robs;
    // the width-matched baseline sees both channels in one flat vector
    std::vector<double> obs = observe(env_cfg, st, ObsChannel::Planner);
    obs.insert(obs.end(), robs.begin(), robs.end());
    return obs;
}

}  // namespace

ExecutionTrace run_episode(const EnvConfig& env_cfg, std::uint64_t env_seed, int task_id,
                           const PolicyBundle& policy, const HorizonConfig& horizon,
                           const ClockModel& clock, ExecMode mode, RngState rng,
                           int max_chunks) {
    if (!policy.refiner) throw std::invalid_argument("run_episode: refiner model required");
    const bool monolithic = policy.planner == nullptr;
    if (monolithic && policy.compose_mode != ComposeMode::Direct)
        throw std::invalid_argument("run_episode: monolithic policy has no coarse tokens");
    if (!monolithic && policy.planner->cfg.l_macro < horizon.l_macro())
        throw std::invalid_argument("run_episode: planner horizon " +
                                    std::to_string(policy.planner->cfg.l_macro) +
                                    " shorter than runtime M*H = " +
                                    std::to_string(horizon.l_macro()));
    if (policy.refiner->cfg.h_chunk != horizon.h_chunk)
        throw std::invalid_argument("run_episode: refiner chunk size mismatch");

    const int dims = env_cfg.dims;
    const int h = horizon.h_chunk;
    const QuantizerConfig qcfg{monolithic ? 2 : policy.planner->cfg.n_bins, dims};

    EnvState st = env_reset(env_cfg, env_seed, env_cfg.num_targets, task_id);
    IntentBuffer buffer(horizon.l_macro());
    ExecutionTrace trace;
    double clock_ms = 0.0;

    int chunk_index = 0;
    while (!st.done && (max_chunks == 0 || chunk_index < max_chunks)) {
        ChunkRecord rec;
        rec.chunk_index = chunk_index;

        std::vector<CoarseRow> slice;
        if (!monolithic) {
            if (mode == ExecMode::Sync) {
                // fresh plan every chunk; only the leading rows are consumed
                PlanLogits logits =
                    plan_forward(*policy.planner, observe(env_cfg, st, ObsChannel::Planner));
                CoarseChunk plan = sample_coarse(logits, policy.sample_mode, rng);
                for (int t = 0; t < h; ++t) slice.push_back(plan.row(t));
                rec.planned = true;
                rec.planned_tokens = flatten_rows(slice);
                ++trace.planner_invocations;
                clock_ms += clock.c_plan_ms;
            } else {
                if (buffer.empty()) {
                    // refill from the freshest state
                    PlanLogits logits =
                        plan_forward(*policy.planner, observe(env_cfg, st, ObsChannel::Planner));
                    CoarseChunk plan = sample_coarse(logits, policy.sample_mode, rng);
                    std::vector<CoarseRow> rows;
                    rows.reserve(horizon.l_macro());
                    for (int t = 0; t < horizon.l_macro(); ++t) rows.push_back(plan.row(t));
                    buffer.refill(rows);
                    rec.planned = true;
                    rec.planned_tokens = flatten_rows(rows);
                    ++trace.planner_invocations;
                    clock_ms += clock.c_plan_ms;
                }
                slice = buffer.pop_slice(h);
            }
            rec.tokens = flatten_rows(slice);
        }

        const CoarseChunk slice_chunk =
            monolithic ? CoarseChunk{} : rows_to_chunk(slice, dims);
        const std::vector<double> obs = policy_observation(env_cfg, st, monolithic);
        std::vector<double> fine = denoise_sample(*policy.refiner, obs, slice_chunk, rng);

        for (int j = 0; j < h && !st.done; ++j) {
            ActionVector fine_j;
            fine_j.values.assign(fine.begin() + static_cast<std::ptrdiff_t>(j) * dims,
                                 fine.begin() + static_cast<std::ptrdiff_t>(j + 1) * dims);
            ActionVector a = monolithic
                                 ? fine_j
                                 : compose(slice[j], fine_j, policy.compose_mode, qcfg);
            st = env_step(env_cfg, st, a);
            rec.actions.insert(rec.actions.end(), a.values.begin(), a.values.end());
            ++trace.env_steps;
        }
        clock_ms += clock.c_refine_ms;
        rec.clock_ms = clock_ms;
        rec.success = st.success;
        trace.chunks.push_back(std::move(rec));
        ++chunk_index;
    }
    trace.success = st.success;
    return trace;  // unconsumed buffer rows are dropped with the episode
}

// ---------------------------------------------------------------------------
// Two-worker mode: a producer thread owns the planner, the consumer executes.
// The protocol is the same strict alternation (refill only on empty), so the
// concurrency is structural rather than a speedup; used to exercise the
// producer/consumer contract.
// ---------------------------------------------------------------------------

ExecutionTrace run_episode_threaded(const EnvConfig& env_cfg, std::uint64_t env_seed, int task_id,
                                    const PolicyBundle& policy, const HorizonConfig& horizon,
                                    const ClockModel& clock, RngState rng, int max_chunks) {
    if (!policy.refiner || !policy.planner)
        throw std::invalid_argument("run_episode_threaded: needs both models");
    if (policy.planner->cfg.l_macro < horizon.l_macro())
        throw std::invalid_argument("run_episode_threaded: planner horizon too short");

    const int dims = env_cfg.dims;
    const int h = horizon.h_chunk;
    const QuantizerConfig qcfg{policy.planner->cfg.n_bins, dims};

    RngState plan_rng = derive_stream(rng.seed, 0xFACE);
    RngState exec_rng = derive_stream(rng.seed, 0xBEEF);

    std::mutex mu;
    std::condition_variable cv;
    IntentBuffer buffer(horizon.l_macro());
    std::vector<double> request_obs;
    bool request_pending = false;
    bool refilled_flag = false;
    bool stop = false;
    std::vector<CoarseToken> last_plan_tokens;

    std::thread producer([&] {
        std::unique_lock<std::mutex> lk(mu);
        for (;;) {
            cv.wait(lk, [&] { return request_pending || stop; });
            if (stop) return;
            std::vector<double> obs = request_obs;
            lk.unlock();
            PlanLogits logits = plan_forward(*policy.planner, obs);
            CoarseChunk plan = sample_coarse(logits, policy.sample_mode, plan_rng);
            std::vector<CoarseRow> rows;
            for (int t = 0; t < horizon.l_macro(); ++t) rows.push_back(plan.row(t));
            lk.lock();
            buffer.refill(rows);
            last_plan_tokens = flatten_rows(rows);
            request_pending = false;
            refilled_flag = true;
            cv.notify_all();
        }
    });

    EnvState st = env_reset(env_cfg, env_seed, env_cfg.num_targets, task_id);
    ExecutionTrace trace;
    double clock_ms = 0.0;
    int chunk_index = 0;

    while (!st.done && (max_chunks == 0 || chunk_index < max_chunks)) {
        ChunkRecord rec;
        rec.chunk_index = chunk_index;

        std::vector<CoarseRow> slice;
        {
            std::unique_lock<std::mutex> lk(mu);
            if (buffer.empty()) {
                request_obs = observe(env_cfg, st, ObsChannel::Planner);
                request_pending = true;
                refilled_flag = false;
                cv.notify_all();
                cv.wait(lk, [&] { return refilled_flag; });
                rec.planned = true;
                rec.planned_tokens = last_plan_tokens;
                ++trace.planner_invocations;
                clock_ms += clock.c_plan_ms;
            }
            slice = buffer.pop_slice(h);
        }
        rec.tokens = flatten_rows(slice);

        const CoarseChunk slice_chunk = rows_to_chunk(slice, dims);
        const std::vector<double> robs = observe(env_cfg, st, ObsChannel::Refiner);
        std::vector<double> fine = denoise_sample(*policy.refiner, robs, slice_chunk, exec_rng);

        for (int j = 0; j < h && !st.done; ++j) {
            ActionVector fine_j;
            fine_j.values.assign(fine.begin() + static_cast<std::ptrdiff_t>(j) * dims,
                                 fine.begin() + static_cast<std::ptrdiff_t>(j + 1) * dims);
            ActionVector a = compose(slice[j], fine_j, policy.compose_mode, qcfg);
            st = env_step(env_cfg, st, a);
            rec.actions.insert(rec.actions.end(), a.values.begin(), a.values.end());
            ++trace.env_steps;
        }
        clock_ms += clock.c_refine_ms;
        rec.clock_ms = clock_ms;
        rec.success = st.success;
        trace.chunks.push_back(std::move(rec));
        ++chunk_index;
    }

    {
        std::lock_guard<std::mutex> lk(mu);
        stop = true;
        cv.notify_all();
    }
    producer.join();
    trace.success = st.success;
    return trace;
}

void write_trace_csv(const std::string& path, const ExecutionTrace& trace,
                     std::uint64_t config_hash) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open trace csv for writing: " + path);
    char hex[17];
    std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(config_hash));
    f << "# config=" << hex << "\n";
    f << "chunk,planned,clock_ms,tokens,success\n";
    for (const auto& c : trace.chunks) {
        f << c.chunk_index << "," << (c.planned ? 1 : 0) << ",";
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.17g", c.clock_ms);
        f << buf << ",";
        for (std::size_t i = 0; i < c.tokens.size(); ++i) {
            if (i) f << ";";
            f << c.tokens[i].index;
        }
        f << "," << (c.success ? 1 : 0) << "\n";
    }
    if (!f) throw std::runtime_error("short write on trace csv: " + path);
}

}  // namespace c2f
