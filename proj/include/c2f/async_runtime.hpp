#pragma once
#include <cstdint>
#include <deque>
#include <string>
#include <vector>

#include "c2f/planner.hpp"
#include "c2f/refiner.hpp"
#include "c2f/toy_env.hpp"

namespace c2f {

// FIFO of coarse-token rows bridging the low-frequency planner and the
// high-frequency refiner. Refill is legal only on an empty buffer; pops of
// h rows require at least h rows present.
class IntentBuffer {
  public:
    explicit IntentBuffer(int capacity) : capacity_(capacity) {}

    int size() const { return static_cast<int>(rows_.size()); }
    bool empty() const { return rows_.empty(); }
    int capacity() const { return capacity_; }

    void refill(const std::vector<CoarseRow>& rows);
    std::vector<CoarseRow> pop_slice(int h_chunk);
    void clear() { rows_.clear(); }  // episode reset discards unused rows

  private:
    int capacity_;
    std::deque<CoarseRow> rows_;
};

struct HorizonConfig {
    int m_factor = 2;   // M: control-to-planning frequency ratio
    int h_chunk = 5;
    int l_macro() const { return m_factor * h_chunk; }
};

// Injected per-system costs on a simulated clock (milliseconds).
struct ClockModel {
    double c_refine_ms = 92.0;  // per consumed chunk
    double c_plan_ms = 60.0;    // per planner invocation
};

// Exact two-point fit of c_refine + c_plan/M through (m1,lat1), (m2,lat2).
ClockModel fit_clock_model(int m1, double lat1, int m2, double lat2);

// c_refine + c_plan / M
double amortized_latency(const ClockModel& clock, int m_factor);

struct ChunkRecord {
    int chunk_index = 0;
    bool planned = false;             // planner invoked at this chunk
    double clock_ms = 0.0;            // cumulative simulated time after the chunk
    std::vector<CoarseToken> tokens;  // consumed slice, [h_chunk][dims]
    std::vector<double> actions;      // executed fine actions, [<=h_chunk][dims]
    bool success = false;             // env success flag after the chunk
    // full plan pushed at refill (empty unless planned); kept for trace checks
    std::vector<CoarseToken> planned_tokens;
};

struct ExecutionTrace {
    std::vector<ChunkRecord> chunks;
    bool success = false;
    int env_steps = 0;
    int planner_invocations = 0;
    double total_ms() const { return chunks.empty() ? 0.0 : chunks.back().clock_ms; }
};

bool trace_equal(const ExecutionTrace& a, const ExecutionTrace& b);

// total simulated time / number of chunks; throws on an empty trace
double measure_latency(const ExecutionTrace& trace);

enum class ExecMode { Sync, Async };

ExecMode parse_exec_mode(const std::string& s);

// Frozen models plus the composition/sampling conventions used at execution.
struct PolicyBundle {
    const PlannerModel* planner = nullptr;  // null -> monolithic refiner-only policy
    const RefinerModel* refiner = nullptr;
    SampleMode sample_mode = SampleMode::Argmax;
    ComposeMode compose_mode = ComposeMode::Direct;
};

// Async: refill on empty buffer from the freshest observation (+c_plan),
// planner dormant for the following M-1 chunks; every chunk pops h_chunk
// rows, denoises fine actions conditioned on them, executes them (+c_refine).
// Sync: a fresh plan every chunk, no buffer. max_chunks = 0 means run to
// env termination.
ExecutionTrace run_episode(const EnvConfig& env_cfg, std::uint64_t env_seed, int task_id,
                           const PolicyBundle& policy, const HorizonConfig& horizon,
                           const ClockModel& clock, ExecMode mode, RngState rng,
                           int max_chunks = 0);

// Two-worker variant (producer thread plans, consumer executes). Preserves
// FIFO and dormancy invariants; excluded from bit-exactness claims.
ExecutionTrace run_episode_threaded(const EnvConfig& env_cfg, std::uint64_t env_seed, int task_id,
                                    const PolicyBundle& policy, const HorizonConfig& horizon,
                                    const ClockModel& clock, RngState rng, int max_chunks = 0);

void write_trace_csv(const std::string& path, const ExecutionTrace& trace,
                     std::uint64_t config_hash);

}  // namespace c2f
