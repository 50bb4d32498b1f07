#include "c2f/config.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace c2f {

std::uint64_t fnv1a64(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hash_hex(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::string fmt_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct Binder {
    std::map<std::string, std::function<void(const std::string&)>> setters;

    void num(const std::string& key, double* target) {
        setters[key] = [target, key](const std::string& v) {
            std::size_t pos = 0;
            *target = std::stod(v, &pos);
            if (pos != v.size()) throw std::invalid_argument("bad number for " + key + ": " + v);
        };
    }
    void integer(const std::string& key, int* target) {
        setters[key] = [target, key](const std::string& v) {
            std::size_t pos = 0;
            long x = std::stol(v, &pos, 10);
            if (pos != v.size()) throw std::invalid_argument("bad integer for " + key + ": " + v);
            *target = static_cast<int>(x);
        };
    }
    void integer(const std::string& key, long* target) {
        setters[key] = [target, key](const std::string& v) {
            std::size_t pos = 0;
            *target = std::stol(v, &pos, 10);
            if (pos != v.size()) throw std::invalid_argument("bad integer for " + key + ": " + v);
        };
    }
    void u64(const std::string& key, std::uint64_t* target) {
        setters[key] = [target, key](const std::string& v) {
            std::size_t pos = 0;
            *target = std::stoull(v, &pos, 10);
            if (pos != v.size()) throw std::invalid_argument("bad integer for " + key + ": " + v);
        };
    }
    void str(const std::string& key, std::string* target) {
        setters[key] = [target](const std::string& v) { *target = v; };
    }
};

Binder make_binder(ExperimentConfig& c) {
    Binder b;
    b.u64("seed", &c.seed);
    b.integer("dims", &c.dims);
    b.integer("num_targets", &c.num_targets);
    b.integer("n_bins", &c.n_bins);
    b.integer("h_chunk", &c.h_chunk);
    b.integer("m_factor", &c.m_factor);
    b.integer("k_diff", &c.k_diff);
    b.integer("d_emb", &c.d_emb);
    b.num("tau", &c.tau);
    b.num("lambda_diff", &c.lambda_diff);
    b.num("lambda_plan", &c.lambda_plan);
    b.integer("planner_width", &c.planner_width);
    b.integer("planner_depth", &c.planner_depth);
    b.integer("refiner_width", &c.refiner_width);
    b.integer("train_steps", &c.train_steps);
    b.integer("batch_size", &c.batch_size);
    b.integer("episodes", &c.episodes);
    b.integer("eval_episodes", &c.eval_episodes);
    b.num("lr_peak", &c.lr_peak);
    b.integer("warmup_steps", &c.warmup_steps);
    b.num("ema_decay", &c.ema_decay);
    b.str("strategy", &c.strategy);
    b.str("compose_mode", &c.compose_mode);
    b.str("sample_mode", &c.sample_mode);
    b.str("exec_mode", &c.exec_mode);
    b.num("c_refine_ms", &c.c_refine_ms);
    b.num("c_plan_ms", &c.c_plan_ms);
    b.num("baseline_ms", &c.baseline_ms);
    b.str("data_path", &c.data_path);
    b.str("out_dir", &c.out_dir);
    b.integer("mid_save_step", &c.mid_save_step);
    return b;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text, const std::string& origin) {
    ExperimentConfig cfg;
    Binder binder = make_binder(cfg);
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(origin + ":" + std::to_string(lineno) +
                                        ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        auto it = binder.setters.find(key);
        if (it == binder.setters.end())
            throw std::invalid_argument(origin + ":" + std::to_string(lineno) +
                                        ": unknown key '" + key + "'");
        it->second(value);
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open config: " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config_text(ss.str(), path);
}

void ExperimentConfig::validate() const {
    auto require = [](bool ok, const std::string& msg) {
        if (!ok) throw std::invalid_argument("config: " + msg);
    };
    require(dims >= 1, "dims must be >= 1");
    require(num_targets >= 2, "num_targets must be >= 2");
    require(n_bins >= 2, "n_bins must be >= 2");
    require(h_chunk >= 1, "h_chunk must be >= 1");
    require(m_factor >= 1, "m_factor must be >= 1");
    require(k_diff >= 1, "k_diff must be >= 1");
    require(d_emb >= 1, "d_emb must be >= 1");
    require(tau > 0.0 && tau < 1.0, "tau must be in (0,1)");
    require(lambda_diff > 0.0 && lambda_plan > 0.0, "loss weights must be positive");
    require(planner_width >= 2 && refiner_width >= 2, "widths must be >= 2");
    require(planner_depth >= 1, "planner_depth must be >= 1");
    require(train_steps >= 1, "train_steps must be >= 1");
    require(batch_size >= 1, "batch_size must be >= 1");
    require(episodes >= 1, "episodes must be >= 1");
    require(eval_episodes >= 1, "eval_episodes must be >= 1");
    require(lr_peak > 0.0, "lr_peak must be positive");
    require(warmup_steps >= 0, "warmup_steps must be >= 0");
    require(ema_decay > 0.0 && ema_decay < 1.0, "ema_decay must be in (0,1)");
    require(c_refine_ms >= 0.0 && c_plan_ms >= 0.0, "clock costs must be >= 0");
    require(mid_save_step >= 0, "mid_save_step must be >= 0");
    parse_strategy(strategy);
    parse_compose_mode(compose_mode);
    parse_sample_mode(sample_mode);
    parse_exec_mode(exec_mode);
}

std::string ExperimentConfig::canonical_fingerprint_text() const {
    std::ostringstream s;
    s << "batch_size=" << batch_size << "\n";
    s << "compose_mode=" << compose_mode << "\n";
    s << "d_emb=" << d_emb << "\n";
    s << "dims=" << dims << "\n";
    s << "ema_decay=" << fmt_num(ema_decay) << "\n";
    s << "episodes=" << episodes << "\n";
    s << "h_chunk=" << h_chunk << "\n";
    s << "k_diff=" << k_diff << "\n";
    s << "lambda_diff=" << fmt_num(lambda_diff) << "\n";
    s << "lambda_plan=" << fmt_num(lambda_plan) << "\n";
    s << "lr_peak=" << fmt_num(lr_peak) << "\n";
    s << "m_factor=" << m_factor << "\n";
    s << "n_bins=" << n_bins << "\n";
    s << "num_targets=" << num_targets << "\n";
    s << "planner_depth=" << planner_depth << "\n";
    s << "planner_width=" << planner_width << "\n";
    s << "refiner_width=" << refiner_width << "\n";
    s << "sample_mode=" << sample_mode << "\n";
    s << "seed=" << seed << "\n";
    s << "strategy=" << strategy << "\n";
    s << "tau=" << fmt_num(tau) << "\n";
    s << "train_steps=" << train_steps << "\n";
    s << "warmup_steps=" << warmup_steps << "\n";
    return s.str();
}

std::uint64_t ExperimentConfig::fingerprint() const {
    return fnv1a64(canonical_fingerprint_text());
}

EnvConfig ExperimentConfig::env_config() const {
    EnvConfig e;
    e.dims = dims;
    e.num_targets = num_targets;
    return e;
}

PlannerConfig ExperimentConfig::planner_config(int planner_obs_dim) const {
    PlannerConfig p;
    p.obs_dim = planner_obs_dim;
    p.n_bins = n_bins;
    p.l_macro = l_macro();
    p.dims = dims;
    p.width = planner_width;
    p.depth = planner_depth;
    return p;
}

RefinerConfig ExperimentConfig::refiner_config(int refiner_obs_dim) const {
    RefinerConfig r;
    r.robs_dim = refiner_obs_dim;
    r.n_bins = n_bins;
    r.h_chunk = h_chunk;
    r.dims = dims;
    r.width = refiner_width;
    r.d_emb = d_emb;
    r.d_geo = refiner_width / 2;
    r.k_diff = k_diff;
    return r;
}

RefinerConfig ExperimentConfig::monolithic_config(int planner_obs_dim,
                                                  int refiner_obs_dim) const {
    RefinerConfig r;
    r.robs_dim = planner_obs_dim + refiner_obs_dim;
    r.n_bins = 0;  // no intent pathway
    r.d_emb = 0;
    r.h_chunk = h_chunk;
    r.dims = dims;
    // width parity with the hierarchical pair isolates the paradigm
    r.width = planner_width + refiner_width;
    r.d_geo = (planner_width + refiner_width) / 2;
    r.k_diff = k_diff;
    return r;
}

TrainConfig ExperimentConfig::train_config() const {
    TrainConfig t;
    t.steps = train_steps;
    t.batch_size = batch_size;
    t.lr_peak = lr_peak;
    t.warmup_steps = warmup_steps;
    t.tau = tau;
    t.ema_decay = ema_decay;
    t.weights = {lambda_diff, lambda_plan};
    t.mode = parse_strategy(strategy);
    t.seed = seed;
    return t;
}

HorizonConfig ExperimentConfig::horizon_config() const {
    HorizonConfig h;
    h.m_factor = m_factor;
    h.h_chunk = h_chunk;
    return h;
}

ClockModel ExperimentConfig::clock_model() const { return {c_refine_ms, c_plan_ms}; }

}  // namespace c2f
