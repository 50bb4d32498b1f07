#pragma once
#include <string>
#include <utility>
#include <vector>

#include "c2f/param_store.hpp"
#include "c2f/rng.hpp"

namespace c2f {

enum class Activation { Gelu, Tanh };

// ---------------------------------------------------------------------------
// MLP: widths = {in, h1, ..., out}; hidden layers activated, output linear.
// Parameters live in a ParamStore under "<prefix>W<l>" / "<prefix>b<l>".
// ---------------------------------------------------------------------------

struct MlpSpec {
    std::string prefix;
    std::vector<int> widths;
    Activation act = Activation::Gelu;

    int in_dim() const { return widths.front(); }
    int out_dim() const { return widths.back(); }
    int layers() const { return static_cast<int>(widths.size()) - 1; }
};

void mlp_init(ParamStore& store, const MlpSpec& spec, RngState& rng);

struct MlpCache {
    // layer inputs x[0..L] (x[L] = output) and pre-activations z[0..L-1]
    std::vector<std::vector<double>> x;
    std::vector<std::vector<double>> z;
};

std::vector<double> mlp_forward(const ParamStore& store, const MlpSpec& spec,
                                const std::vector<double>& input, MlpCache* cache = nullptr);

// Accumulates parameter gradients into the store; returns dL/dinput.
std::vector<double> mlp_backward(ParamStore& store, const MlpSpec& spec, const MlpCache& cache,
                                 const std::vector<double>& dout);

// ---------------------------------------------------------------------------
// Single-head bidirectional scaled-dot-product attention with residual:
//   Q=XWq+bq, K=XWk+bk, V=XWv+bv, A=softmax(QK^T/sqrt(d)), out = X + (AV)Wo+bo
// ---------------------------------------------------------------------------

struct AttentionSpec {
    std::string prefix;
    int dim = 0;
};

void attention_init(ParamStore& store, const AttentionSpec& spec, RngState& rng);

struct AttentionCache {
    int t = 0;
    std::vector<double> x, q, k, v, a, y;  // [T*d] except a: [T*T]
};

// tokens: row-major [T][d]
std::vector<double> attention_forward(const ParamStore& store, const AttentionSpec& spec,
                                      const std::vector<double>& tokens, int t,
                                      AttentionCache* cache = nullptr);

std::vector<double> attention_backward(ParamStore& store, const AttentionSpec& spec,
                                       const AttentionCache& cache,
                                       const std::vector<double>& dout);

// ---------------------------------------------------------------------------
// Losses
// ---------------------------------------------------------------------------

struct LossGrad {
    double loss = 0.0;
    std::vector<double> grad;
};

// loss = -log softmax(logits)[target]; grad = softmax(logits) - onehot(target)
LossGrad softmax_ce(const std::vector<double>& logits, int target);

// mean of squared differences; grad = 2*(pred-target)/n
LossGrad mse(const std::vector<double>& pred, const std::vector<double>& target);

std::vector<double> softmax(const std::vector<double>& logits);

// ---------------------------------------------------------------------------
// Optimizer: Adam moments, bias correction, shared step counter.
// Schedule: linear warmup to lr_peak then cosine decay to lr_floor.
// ---------------------------------------------------------------------------

struct AdamConfig {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

class AdamState {
  public:
    explicit AdamState(const AdamConfig& cfg = {}) : cfg_(cfg) {}
    // One update over every parameter in the store; throws on non-finite grads.
    void step(ParamStore& store, double lr);
    long steps_taken() const { return t_; }

  private:
    AdamConfig cfg_;
    long t_ = 0;
    std::map<std::string, std::pair<Tensor, Tensor>> moments_;  // name -> (m, v)
};

double lr_schedule(long step, double lr_peak, long warmup_steps, long total_steps,
                   double lr_floor = 0.0);

// Gaussian init scaled by 1/sqrt(fan_in); biases zero.
void linear_init(Tensor& w, int fan_in, RngState& rng);

}  // namespace c2f
