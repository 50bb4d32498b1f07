#include "c2f/hybrid_action.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace c2f {

ComposeMode parse_compose_mode(const std::string& s) {
    if (s == "direct") return ComposeMode::Direct;
    if (s == "residual") return ComposeMode::Residual;
    throw std::invalid_argument("unknown compose mode: " + s);
}

void validate(const QuantizerConfig& cfg) {
    if (cfg.num_bins < 2) throw std::invalid_argument("QuantizerConfig: num_bins must be >= 2");
    if (cfg.dims < 1) throw std::invalid_argument("QuantizerConfig: dims must be >= 1");
}

void validate(const NormalizationStats& stats, int dims) {
    if (static_cast<int>(stats.low.size()) != dims || static_cast<int>(stats.high.size()) != dims)
        throw std::invalid_argument("NormalizationStats: dimension mismatch");
    for (int i = 0; i < dims; ++i)
        if (!(stats.low[i] < stats.high[i]))
            throw std::invalid_argument("NormalizationStats: low must be < high per dimension");
}

ActionVector normalize(const std::vector<double>& raw, const NormalizationStats& stats) {
    validate(stats, static_cast<int>(raw.size()));
    ActionVector out;
    out.values.resize(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        double a = 2.0 * (raw[i] - stats.low[i]) / (stats.high[i] - stats.low[i]) - 1.0;
        out.values[i] = std::clamp(a, -1.0, 1.0);
    }
    return out;
}

std::vector<double> denormalize(const ActionVector& a, const NormalizationStats& stats) {
    validate(stats, static_cast<int>(a.dims()));
    std::vector<double> out(a.dims());
    for (std::size_t i = 0; i < a.dims(); ++i)
        out[i] = stats.low[i] + (a[i] + 1.0) * 0.5 * (stats.high[i] - stats.low[i]);
    return out;
}

CoarseRow quantize(const ActionVector& a, const QuantizerConfig& cfg) {
    validate(cfg);
    CoarseRow out(a.dims());
    for (std::size_t i = 0; i < a.dims(); ++i) {
        double scaled = (a[i] + 1.0) * 0.5 * cfg.num_bins;
        auto idx = static_cast<std::int64_t>(std::floor(scaled));
        idx = std::clamp<std::int64_t>(idx, 0, cfg.num_bins - 1);
        out[i].index = static_cast<std::int32_t>(idx);
    }
    return out;
}

ActionVector dequantize(const CoarseRow& tok, const QuantizerConfig& cfg) {
    validate(cfg);
    ActionVector out;
    out.values.resize(tok.size());
    for (std::size_t i = 0; i < tok.size(); ++i) {
        if (tok[i].index < 0 || tok[i].index >= cfg.num_bins)
            throw std::invalid_argument("dequantize: token index out of range");
        out.values[i] = 2.0 * (tok[i].index + 0.5) / cfg.num_bins - 1.0;
    }
    return out;
}

ActionVector compose(const CoarseRow& coarse, const ActionVector& fine, ComposeMode mode,
                     const QuantizerConfig& cfg) {
    if (mode == ComposeMode::Direct) return fine;
    if (coarse.size() != fine.dims())
        throw std::invalid_argument("compose: coarse/fine dimension mismatch");
    ActionVector center = dequantize(coarse, cfg);
    ActionVector out;
    out.values.resize(fine.dims());
    // fine in [-1,1] spans exactly one bin around its center
    for (std::size_t i = 0; i < fine.dims(); ++i)
        out.values[i] = std::clamp(center[i] + fine[i] / cfg.num_bins, -1.0, 1.0);
    return out;
}

}  // namespace c2f
