#pragma once
#include <cstdint>
#include <string>

#include "c2f/hybrid_action.hpp"
#include "c2f/nn.hpp"

namespace c2f {

struct PlannerConfig {
    int obs_dim = 0;
    int n_bins = 10;
    int l_macro = 10;
    int dims = 2;
    int width = 32;   // token/hidden width d
    int depth = 2;    // encoder layers
    int ctx_tokens = 2;

    int query_tokens() const { return l_macro * dims; }  // K
};

// [l_macro][dims][n_bins] categorical logits, one distribution per grid cell.
struct PlanLogits {
    int l_macro = 0;
    int dims = 0;
    int n_bins = 0;
    std::vector<double> v;

    PlanLogits() = default;
    PlanLogits(int l, int d, int n)
        : l_macro(l), dims(d), n_bins(n), v(static_cast<std::size_t>(l) * d * n, 0.0) {}

    double* at(int t, int i) {
        return v.data() + (static_cast<std::size_t>(t) * dims + i) * n_bins;
    }
    const double* at(int t, int i) const {
        return v.data() + (static_cast<std::size_t>(t) * dims + i) * n_bins;
    }
    std::vector<double> cell(int t, int i) const {
        const double* p = at(t, i);
        return std::vector<double>(p, p + n_bins);
    }
};

// Observation encoder -> learnable query tokens through one attention block
// -> shared linear head. All K = l_macro*dims cells come out of a single
// attention pass (queries first, outputs sliced at [0:K]).
struct PlannerModel {
    PlannerConfig cfg;
    ParamStore params;
    MlpSpec encoder;
    AttentionSpec attn;
    mutable long attention_calls = 0;  // instrumentation: one-pass contract
};

PlannerModel make_planner(const PlannerConfig& cfg, std::uint64_t seed);

struct PlanCache {
    MlpCache enc;
    AttentionCache attn;
    std::vector<double> tokens;   // attention input [K+ctx][d]
    std::vector<double> sliced;   // query outputs [K][d]
};

PlanLogits plan_forward(const PlannerModel& model, const std::vector<double>& obs,
                        PlanCache* cache = nullptr);

// Mean cross-entropy over all l_macro*dims cells.
double plan_loss(const PlanLogits& logits, const CoarseChunk& gt, PlanLogits* dlogits = nullptr);

// Backprop dlogits through head/attention/encoder/queries; grads are scaled
// by `scale` and accumulated into the model's store.
void plan_backward(PlannerModel& model, const PlanCache& cache, const PlanLogits& dlogits,
                   double scale);

enum class SampleMode { Argmax, Categorical };

SampleMode parse_sample_mode(const std::string& s);

// Argmax breaks ties toward the lowest index; categorical draws from the
// softmax of each cell.
CoarseChunk sample_coarse(const PlanLogits& logits, SampleMode mode, RngState& rng);

// Fraction of cells whose argmax matches gt.
double plan_accuracy(const PlanLogits& logits, const CoarseChunk& gt);

}  // namespace c2f
