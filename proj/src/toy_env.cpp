#include "c2f/toy_env.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace c2f {

namespace {

double max_norm(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

double euclid(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

}  // namespace

EnvState env_reset(const EnvConfig& cfg, std::uint64_t seed, int num_targets, int task_id) {
    if (num_targets < 2) throw std::invalid_argument("env_reset: need at least 2 targets");
    if (task_id < 0 || task_id >= num_targets)
        throw std::invalid_argument("env_reset: task_id out of range");

    RngState rng = derive_stream(seed, 0x7f0e);
    EnvState st;
    st.task_id = task_id;
    st.agent_pos.resize(cfg.dims);
    for (int i = 0; i < cfg.dims; ++i)
        st.agent_pos[i] = rng.uniform_in(-cfg.start_jitter, cfg.start_jitter);

    constexpr int kMaxAttempts = 10000;
    int attempts = 0;
    while (static_cast<int>(st.targets.size()) < num_targets) {
        if (++attempts > kMaxAttempts)
            throw std::runtime_error("env_reset: target placement infeasible for G=" +
                                     std::to_string(num_targets));
        std::vector<double> cand(cfg.dims);
        double norm = 0.0;
        for (int i = 0; i < cfg.dims; ++i) {
            cand[i] = rng.uniform_in(-cfg.target_box, cfg.target_box);
            norm = std::max(norm, std::abs(cand[i]));
        }
        if (norm < cfg.target_min_norm) continue;
        bool ok = true;
        for (const auto& other : st.targets)
            if (euclid(cand, other) < cfg.min_separation) {
                ok = false;
                break;
            }
        if (ok) st.targets.push_back(std::move(cand));
    }
    return st;
}

EnvState env_step(const EnvConfig& cfg, const EnvState& state, const ActionVector& action) {
    if (static_cast<int>(action.dims()) != cfg.dims)
        throw std::invalid_argument("env_step: action dimension mismatch");
    EnvState next = state;
    for (int i = 0; i < cfg.dims; ++i)
        next.agent_pos[i] =
            std::clamp(state.agent_pos[i] + action[i] * cfg.step_scale, -1.0, 1.0);
    next.step_count = state.step_count + 1;
    next.success = max_norm(next.agent_pos, next.targets[next.task_id]) < cfg.fine_tol;
    next.done = next.success || next.step_count >= cfg.horizon;
    return next;
}

ActionVector expert_action(const EnvConfig& cfg, const EnvState& state, RngState& rng) {
    const auto& goal = state.targets[state.task_id];
    ActionVector a;
    a.values.resize(cfg.dims);
    for (int i = 0; i < cfg.dims; ++i) {
        const double e = goal[i] - state.agent_pos[i];
        const double mag = std::abs(e);
        if (mag < cfg.fine_tol) {
            a.values[i] = 0.0;  // hold: settled axes stay exactly put
            continue;
        }
        double move;
        if (mag > cfg.expert_kill_range)
            move = e > 0 ? 1.0 : -1.0;
        else
            move = e / cfg.step_scale;  // closes the remaining error in one step
        const double noise =
            std::clamp(cfg.expert_noise * rng.normal(), -cfg.expert_noise, cfg.expert_noise);
        a.values[i] = std::clamp(move + noise, -1.0, 1.0);
    }
    return a;
}

int planner_obs_dim(const EnvConfig& cfg) {
    return cfg.dims * (cfg.num_targets + 1) + cfg.num_targets;
}

int refiner_obs_dim(const EnvConfig& cfg) { return cfg.dims * (cfg.num_targets + 1); }

std::vector<double> observe(const EnvConfig& cfg, const EnvState& state, ObsChannel channel) {
    std::vector<double> out;
    if (channel == ObsChannel::Refiner) {
        out.reserve(refiner_obs_dim(cfg));
        for (double x : state.agent_pos) out.push_back(x);
        for (const auto& tgt : state.targets)
            for (double x : tgt) out.push_back(x);
        return out;  // deliberately no task identity
    }
    out.reserve(planner_obs_dim(cfg));
    auto coarse = [&](double x) {
        double scaled = (x + 1.0) * 0.5 * cfg.grid_cells;
        auto cell = static_cast<long>(std::floor(scaled));
        cell = std::clamp<long>(cell, 0, cfg.grid_cells - 1);
        return 2.0 * (cell + 0.5) / cfg.grid_cells - 1.0;  // cell center
    };
    for (double x : state.agent_pos) out.push_back(coarse(x));
    for (const auto& tgt : state.targets)
        for (double x : tgt) out.push_back(coarse(x));
    for (int g = 0; g < cfg.num_targets; ++g) out.push_back(g == state.task_id ? 1.0 : 0.0);
    return out;
}

double task_error(const EnvState& state) {
    return max_norm(state.agent_pos, state.targets[state.task_id]);
}

}  // namespace c2f
