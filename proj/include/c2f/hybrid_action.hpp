#pragma once
#include <cstdint>
#include <string>
#include <vector>

namespace c2f {

// D-dimensional normalized continuous action, every component in [-1,1].
struct ActionVector {
    std::vector<double> values;

    ActionVector() = default;
    explicit ActionVector(std::vector<double> v) : values(std::move(v)) {}
    std::size_t dims() const { return values.size(); }
    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }
};

// Per-dimension raw-unit bounds used to map raw actions into [-1,1].
struct NormalizationStats {
    std::vector<double> low;
    std::vector<double> high;
};

struct QuantizerConfig {
    int num_bins = 10;  // N >= 2
    int dims = 2;       // D >= 1
};

// Index into the N uniform bins of one action dimension.
struct CoarseToken {
    std::int32_t index = 0;
    friend bool operator==(CoarseToken a, CoarseToken b) { return a.index == b.index; }
    friend bool operator!=(CoarseToken a, CoarseToken b) { return a.index != b.index; }
};

using CoarseRow = std::vector<CoarseToken>;  // one timestep, D tokens

// L_macro x D grid of bin indices.
struct CoarseChunk {
    int l_macro = 0;
    int dims = 0;
    std::vector<CoarseToken> tokens;  // row-major [l_macro][dims]

    CoarseChunk() = default;
    CoarseChunk(int l, int d) : l_macro(l), dims(d), tokens(static_cast<std::size_t>(l) * d) {}

    CoarseToken& at(int t, int i) { return tokens[static_cast<std::size_t>(t) * dims + i]; }
    CoarseToken at(int t, int i) const { return tokens[static_cast<std::size_t>(t) * dims + i]; }
    CoarseRow row(int t) const {
        return CoarseRow(tokens.begin() + static_cast<std::ptrdiff_t>(t) * dims,
                         tokens.begin() + static_cast<std::ptrdiff_t>(t + 1) * dims);
    }
    friend bool operator==(const CoarseChunk& a, const CoarseChunk& b) {
        return a.l_macro == b.l_macro && a.dims == b.dims && a.tokens == b.tokens;
    }
};

enum class ComposeMode { Direct, Residual };

ComposeMode parse_compose_mode(const std::string& s);

void validate(const QuantizerConfig& cfg);
void validate(const NormalizationStats& stats, int dims);

// 2*(raw-low)/(high-low) - 1, clipped to [-1,1].
ActionVector normalize(const std::vector<double>& raw, const NormalizationStats& stats);

// Raw-unit inverse of normalize (midpoint of the affine map, no clipping).
std::vector<double> denormalize(const ActionVector& a, const NormalizationStats& stats);

// index_i = clip(floor((a_i+1)/2 * N), 0, N-1)
CoarseRow quantize(const ActionVector& a, const QuantizerConfig& cfg);

// bin center: a_i = 2*(index_i + 0.5)/N - 1
ActionVector dequantize(const CoarseRow& tok, const QuantizerConfig& cfg);

// direct: fine as-is; residual: clip(dequantize(coarse) + fine/N, -1, 1)
ActionVector compose(const CoarseRow& coarse, const ActionVector& fine, ComposeMode mode,
                     const QuantizerConfig& cfg);

}  // namespace c2f
