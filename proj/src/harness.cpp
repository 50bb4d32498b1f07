#include "c2f/harness.hpp"

#include <filesystem>
#include <stdexcept>

#include "c2f/csv.hpp"
#include "c2f/svg_plot.hpp"

namespace c2f {

Dataset make_dataset(const ExperimentConfig& cfg, bool parallel) {
    return generate_dataset(cfg.env_config(), cfg.episodes, cfg.seed, cfg.fingerprint(), parallel);
}

HierarchicalRun run_training(const Dataset& data, const ExperimentConfig& cfg) {
    TrainResult r = train_hierarchical(data, cfg.planner_config(data.planner_dim),
                                       cfg.refiner_config(data.refiner_dim),
                                       DiffusionSchedule::linear(cfg.k_diff), cfg.train_config());
    return {std::move(r.models), r.curriculum, std::move(r.metrics)};
}

MonolithicRun run_training_monolithic(const Dataset& data, const ExperimentConfig& cfg) {
    MonolithicTrainResult r = train_monolithic(
        data, cfg.monolithic_config(data.planner_dim, data.refiner_dim),
        DiffusionSchedule::linear(cfg.k_diff), cfg.train_config());
    return {std::move(r.model), std::move(r.metrics)};
}

PolicyBundle make_bundle(const HierarchicalModels& models, const ExperimentConfig& cfg) {
    PolicyBundle b;
    b.planner = &models.planner;
    b.refiner = &models.refiner;
    b.sample_mode = parse_sample_mode(cfg.sample_mode);
    b.compose_mode = parse_compose_mode(cfg.compose_mode);
    return b;
}

PolicyBundle make_bundle_monolithic(const RefinerModel& model, const ExperimentConfig& cfg) {
    PolicyBundle b;
    b.planner = nullptr;
    b.refiner = &model;
    b.compose_mode = ComposeMode::Direct;
    return b;
}

EvalResult run_eval(const PolicyBundle& bundle, const ExperimentConfig& cfg, int m,
                    ExecMode mode, std::vector<ExecutionTrace>* traces, bool parallel) {
    EvalConfig ec;
    ec.episodes = cfg.eval_episodes;
    ec.seed = derive_stream(cfg.seed, 0xE7A1).seed;
    ec.mode = mode;
    ec.horizon = {m, cfg.h_chunk};
    ec.clock = cfg.clock_model();
    ec.parallel = parallel;
    return evaluate(cfg.env_config(), bundle, ec, traces);
}

SweepResult sweep_bins(const ExperimentConfig& base, const std::vector<int>& values,
                       const Dataset& data) {
    if (values.empty()) throw std::invalid_argument("sweep_bins: no values");
    SweepResult out;
    out.setting_name = "n_bins";
    for (int n : values) {
        ExperimentConfig cfg = base;  // identical budget and data per setting
        cfg.n_bins = n;
        cfg.validate();
        HierarchicalRun run = run_training(data, cfg);
        PolicyBundle bundle = make_bundle(run.models, cfg);
        EvalResult ev = run_eval(bundle, cfg, cfg.m_factor, parse_exec_mode(cfg.exec_mode));
        out.rows.push_back({static_cast<double>(n), ev.success_rate, ev.ci_half,
                            amortized_latency(cfg.clock_model(), cfg.m_factor), ev.episodes,
                            cfg.seed});
    }
    return out;
}

SweepResult sweep_horizon(const ExperimentConfig& base, const std::vector<int>& values,
                          const Dataset& data) {
    if (values.empty()) throw std::invalid_argument("sweep_horizon: no values");
    for (int m : values)
        if (m < 1 || m * base.h_chunk > base.l_macro())
            throw std::invalid_argument(
                "sweep_horizon: M=" + std::to_string(m) +
                " exceeds the trained macro horizon (l_macro=" + std::to_string(base.l_macro()) +
                ")");
    HierarchicalRun run = run_training(data, base);
    PolicyBundle bundle = make_bundle(run.models, base);
    SweepResult out;
    out.setting_name = "m_factor";
    for (int m : values) {
        EvalResult ev = run_eval(bundle, base, m, ExecMode::Async);
        out.rows.push_back({static_cast<double>(m), ev.success_rate, ev.ci_half,
                            amortized_latency(base.clock_model(), m), ev.episodes, base.seed});
    }
    return out;
}

void write_sweep_csv(const std::string& path, const SweepResult& sweep,
                     std::uint64_t config_hash) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : sweep.rows)
        rows.push_back({csv_num(r.setting), csv_num(r.success), csv_num(r.ci_half),
                        csv_num(r.latency_ms), std::to_string(r.episodes),
                        std::to_string(r.seed)});
    write_csv(path, config_hash,
              {sweep.setting_name, "success", "ci_half", "latency_ms", "episodes", "seed"}, rows);
}

std::vector<std::vector<std::string>> latency_table(const ClockModel& clock, double baseline_ms,
                                                    const std::vector<int>& m_values) {
    std::vector<std::vector<std::string>> rows;
    for (int m : m_values) {
        const double lat = amortized_latency(clock, m);
        const double reduction = baseline_ms > 0.0 ? (1.0 - lat / baseline_ms) * 100.0 : 0.0;
        rows.push_back({std::to_string(m), csv_num(lat), csv_num(reduction)});
    }
    return rows;
}

namespace {

std::string stem_of(const std::string& path) {
    return std::filesystem::path(path).stem().string();
}

std::vector<double> column_values(const CsvTable& t, const std::string& name) {
    const int c = t.column(name);
    if (c < 0) throw std::runtime_error("csv missing column " + name);
    std::vector<double> out;
    out.reserve(t.rows.size());
    for (std::size_t r = 0; r < t.rows.size(); ++r) out.push_back(t.num(r, c));
    return out;
}

}  // namespace

std::vector<std::string> plot_csv(const std::string& csv_path, const std::string& out_dir) {
    const CsvTable t = read_csv(csv_path);  // throws on empty/malformed input
    std::filesystem::create_directories(out_dir);
    const std::string stem = (std::filesystem::path(out_dir) / stem_of(csv_path)).string();
    std::vector<std::string> written;

    if (t.has_column("step") && t.has_column("l_diff")) {
        // training metrics: linear and log-scale loss curves
        std::vector<double> steps = column_values(t, "step");
        std::vector<PlotSeries> series;
        for (const char* col : {"l_plan", "l_diff", "l_total"})
            if (t.has_column(col)) series.push_back({col, steps, column_values(t, col), {}});
        PlotSpec lin{"training loss", "step", "loss", false, false};
        render_line_plot(stem + "_loss.svg", lin, series);
        written.push_back(stem + "_loss.svg");
        PlotSpec log{"training loss (log scale)", "step", "loss", true, false};
        render_line_plot(stem + "_loss_log.svg", log, series);
        written.push_back(stem + "_loss_log.svg");
        return written;
    }
    if (t.has_column("n_bins") && t.has_column("success")) {
        PlotSeries s{"success", column_values(t, "n_bins"), column_values(t, "success"),
                     column_values(t, "ci_half")};
        PlotSpec spec{"success rate vs bin count", "bins (log2 spacing)", "success rate", false,
                      true};
        render_line_plot(stem + ".svg", spec, {s});
        written.push_back(stem + ".svg");
        return written;
    }
    if (t.has_column("m_factor") && t.has_column("success")) {
        PlotSeries s{"success", column_values(t, "m_factor"), column_values(t, "success"),
                     column_values(t, "ci_half")};
        PlotSpec spec{"success rate vs horizon factor", "M", "success rate", false, false};
        render_line_plot(stem + "_success.svg", spec, {s});
        written.push_back(stem + "_success.svg");
        PlotSeries lat{"latency", column_values(t, "m_factor"), column_values(t, "latency_ms"), {}};
        PlotSpec lspec{"amortized latency vs horizon factor", "M", "latency (ms)", false, false};
        render_line_plot(stem + "_latency.svg", lspec, {lat});
        written.push_back(stem + "_latency.svg");
        return written;
    }
    if (t.has_column("m") && t.has_column("latency_ms")) {
        PlotSeries s{"latency", column_values(t, "m"), column_values(t, "latency_ms"), {}};
        PlotSpec spec{"latency model", "M", "latency (ms)", false, false};
        render_line_plot(stem + ".svg", spec, {s});
        written.push_back(stem + ".svg");
        return written;
    }
    throw std::runtime_error("unrecognized csv schema: " + csv_path);
}

}  // namespace c2f
