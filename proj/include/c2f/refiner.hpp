#pragma once
#include <cstdint>
#include <vector>

#include "c2f/hybrid_action.hpp"
#include "c2f/nn.hpp"

namespace c2f {

// Noise-level sequence for forward corruption and ancestral reverse sampling.
struct DiffusionSchedule {
    std::vector<double> beta;
    std::vector<double> alpha;
    std::vector<double> alpha_bar;

    int steps() const { return static_cast<int>(beta.size()); }
    static DiffusionSchedule linear(int k_diff, double beta_start = 1e-4, double beta_end = 0.02);
};

struct RefinerConfig {
    int robs_dim = 0;
    int n_bins = 10;   // 0 disables the intent pathway (monolithic baseline)
    int h_chunk = 5;
    int dims = 2;
    int width = 64;    // hidden width of the noise-prediction net
    int d_emb = 8;     // codebook embedding size per token
    int d_geo = 32;    // geometric feature size
    int d_time = 8;    // sinusoidal timestep features
    int k_diff = 50;

    int chunk_dim() const { return h_chunk * dims; }
    int intent_dim() const { return n_bins > 0 ? chunk_dim() * d_emb : 0; }
    bool has_intent() const { return n_bins > 0; }
};

// eps_theta(x_k, k, F_geo, e_intent): an MLP over the concatenated inputs,
// plus a jointly trained full-precision observation encoder and (when the
// intent pathway is on) a learnable N x d_emb codebook.
struct RefinerModel {
    RefinerConfig cfg;
    DiffusionSchedule schedule;
    ParamStore params;
    MlpSpec geo;
    MlpSpec eps_net;
    mutable long eps_calls = 0;  // instrumentation: sampling cost contract
};

RefinerModel make_refiner(const RefinerConfig& cfg, const DiffusionSchedule& schedule,
                          std::uint64_t seed);

// Per-cell codebook lookup, concatenated in (timestep, dimension) order.
std::vector<double> embed_intent(const Tensor& codebook, const CoarseChunk& slice, int d_emb);

// x_k = sqrt(alpha_bar_k) a0 + sqrt(1 - alpha_bar_k) eps
std::vector<double> forward_noise(const std::vector<double>& a0, int k,
                                  const std::vector<double>& eps,
                                  const DiffusionSchedule& schedule);

std::vector<double> time_features(int k, int k_diff, int d_time);

struct EpsCache {
    MlpCache geo;
    MlpCache net;
    CoarseChunk slice;
    std::vector<double> input;
};

// One evaluation of the noise-prediction network (counted).
std::vector<double> eps_forward(const RefinerModel& model, const std::vector<double>& x_k, int k,
                                const std::vector<double>& robs, const CoarseChunk& slice,
                                EpsCache* cache = nullptr);

// dL/deps_hat -> parameter grads (scaled, accumulated), incl. codebook rows.
void eps_backward(RefinerModel& model, const EpsCache& cache, const std::vector<double>& dout,
                  double scale);

// Draws (k, eps) internally; loss = MSE(eps_hat, eps). Gradients flow through
// the network only (never through k or eps). Returns the sampled k.
struct DiffusionLossResult {
    double loss = 0.0;
    int k = 0;
};
DiffusionLossResult diffusion_loss(RefinerModel& model, const std::vector<double>& a0,
                                   const std::vector<double>& robs, const CoarseChunk& slice,
                                   RngState& rng, double grad_scale);

// Frozen-noise variant used by gradient checks and tests.
double diffusion_loss_at(RefinerModel& model, const std::vector<double>& a0,
                         const std::vector<double>& robs, const CoarseChunk& slice, int k,
                         const std::vector<double>& eps, double grad_scale,
                         bool accumulate_grads);

// Ancestral sampling from pure noise; the k=0 step is deterministic and the
// result is clipped to [-1,1]. Calls eps_theta exactly k_diff times.
std::vector<double> denoise_sample(const RefinerModel& model, const std::vector<double>& robs,
                                   const CoarseChunk& slice, RngState& rng);

}  // namespace c2f
