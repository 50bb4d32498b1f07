#include "c2f/refiner.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace c2f {

DiffusionSchedule DiffusionSchedule::linear(int k_diff, double beta_start, double beta_end) {
    if (k_diff < 1) throw std::invalid_argument("DiffusionSchedule: k_diff must be >= 1");
    if (!(beta_start > 0.0) || !(beta_end < 1.0) || beta_start > beta_end)
        throw std::invalid_argument("DiffusionSchedule: need 0 < beta_start <= beta_end < 1");
    DiffusionSchedule s;
    s.beta.resize(k_diff);
    s.alpha.resize(k_diff);
    s.alpha_bar.resize(k_diff);
    double prod = 1.0;
    for (int k = 0; k < k_diff; ++k) {
        s.beta[k] = k_diff == 1
                        ? beta_start
                        : beta_start + (beta_end - beta_start) * k / (k_diff - 1);
        s.alpha[k] = 1.0 - s.beta[k];
        prod *= s.alpha[k];
        s.alpha_bar[k] = prod;
    }
    return s;
}

RefinerModel make_refiner(const RefinerConfig& cfg, const DiffusionSchedule& schedule,
                          std::uint64_t seed) {
    if (cfg.robs_dim <= 0 || cfg.h_chunk <= 0 || cfg.dims <= 0 || cfg.width <= 0 ||
        cfg.d_geo <= 0 || cfg.d_time <= 0 || cfg.d_time % 2 != 0)
        throw std::invalid_argument("make_refiner: bad config");
    if (cfg.has_intent() && cfg.d_emb <= 0)
        throw std::invalid_argument("make_refiner: intent pathway needs d_emb > 0");
    if (schedule.steps() != cfg.k_diff)
        throw std::invalid_argument("make_refiner: schedule/k_diff mismatch");

    RefinerModel m;
    m.cfg = cfg;
    m.schedule = schedule;
    RngState rng = derive_stream(seed, 0x5202);

    m.geo.prefix = "geo.";
    m.geo.act = Activation::Gelu;
    m.geo.widths = {cfg.robs_dim, cfg.width, cfg.d_geo};
    mlp_init(m.params, m.geo, rng);

    const int in_dim = cfg.chunk_dim() + cfg.d_time + cfg.d_geo + cfg.intent_dim();
    m.eps_net.prefix = "eps.";
    m.eps_net.act = Activation::Gelu;
    m.eps_net.widths = {in_dim, cfg.width, cfg.width, cfg.chunk_dim()};
    mlp_init(m.params, m.eps_net, rng);

    if (cfg.has_intent()) {
        Tensor& cb = m.params.add("codebook", {cfg.n_bins, cfg.d_emb});
        for (double& x : cb.v) x = 0.1 * rng.normal();
    }
    return m;
}

std::vector<double> embed_intent(const Tensor& codebook, const CoarseChunk& slice, int d_emb) {
    if (codebook.shape.size() != 2 || codebook.shape[1] != d_emb)
        throw std::invalid_argument("embed_intent: codebook shape mismatch");
    const int n_bins = codebook.shape[0];
    std::vector<double> out;
    out.reserve(slice.tokens.size() * static_cast<std::size_t>(d_emb));
    for (int t = 0; t < slice.l_macro; ++t)
        for (int i = 0; i < slice.dims; ++i) {
            const int idx = slice.at(t, i).index;
            if (idx < 0 || idx >= n_bins)
                throw std::invalid_argument("embed_intent: token index out of range");
            const double* row = codebook.data() + static_cast<std::size_t>(idx) * d_emb;
            out.insert(out.end(), row, row + d_emb);
        }
    return out;
}

std::vector<double> forward_noise(const std::vector<double>& a0, int k,
                                  const std::vector<double>& eps,
                                  const DiffusionSchedule& schedule) {
    if (k < 0 || k >= schedule.steps())
        throw std::invalid_argument("forward_noise: k out of range");
    if (a0.size() != eps.size()) throw std::invalid_argument("forward_noise: shape mismatch");
    const double sa = std::sqrt(schedule.alpha_bar[k]);
    const double sn = std::sqrt(1.0 - schedule.alpha_bar[k]);
    std::vector<double> out(a0.size());
    for (std::size_t i = 0; i < a0.size(); ++i) out[i] = sa * a0[i] + sn * eps[i];
    return out;
}

std::vector<double> time_features(int k, int k_diff, int d_time) {
    std::vector<double> out(d_time);
    const double pos = (k + 0.5) / k_diff;
    for (int j = 0; j < d_time / 2; ++j) {
        const double w = 3.141592653589793 * std::ldexp(1.0, j);  // pi * 2^j
        out[2 * j] = std::sin(w * pos);
        out[2 * j + 1] = std::cos(w * pos);
    }
    return out;
}

std::vector<double> eps_forward(const RefinerModel& model, const std::vector<double>& x_k, int k,
                                const std::vector<double>& robs, const CoarseChunk& slice,
                                EpsCache* cache) {
    const auto& cfg = model.cfg;
    if (static_cast<int>(x_k.size()) != cfg.chunk_dim())
        throw std::invalid_argument("eps_forward: x_k shape mismatch");
    if (cfg.has_intent() &&
        static_cast<int>(slice.tokens.size()) != cfg.h_chunk * cfg.dims)
        throw std::invalid_argument("eps_forward: intent slice shape mismatch");

    EpsCache local;
    EpsCache& c = cache ? *cache : local;
    c.slice = slice;

    std::vector<double> geo = mlp_forward(model.params, model.geo, robs, &c.geo);
    std::vector<double> tf = time_features(k, cfg.k_diff, cfg.d_time);

    c.input.clear();
    c.input.reserve(cfg.chunk_dim() + cfg.d_time + cfg.d_geo + cfg.intent_dim());
    c.input.insert(c.input.end(), x_k.begin(), x_k.end());
    c.input.insert(c.input.end(), tf.begin(), tf.end());
    c.input.insert(c.input.end(), geo.begin(), geo.end());
    if (cfg.has_intent()) {
        std::vector<double> e =
            embed_intent(model.params.value("codebook"), slice, cfg.d_emb);
        c.input.insert(c.input.end(), e.begin(), e.end());
    }

    ++model.eps_calls;
    return mlp_forward(model.params, model.eps_net, c.input, &c.net);
}

void eps_backward(RefinerModel& model, const EpsCache& cache, const std::vector<double>& dout,
                  double scale) {
    const auto& cfg = model.cfg;
    std::vector<double> d = dout;
    if (scale != 1.0)
        for (double& x : d) x *= scale;
    std::vector<double> din = mlp_backward(model.params, model.eps_net, cache.net, d);

    // input layout: [x_k | time | geo | intent]; x_k and time take no grads
    const int geo_off = cfg.chunk_dim() + cfg.d_time;
    std::vector<double> dgeo(din.begin() + geo_off, din.begin() + geo_off + cfg.d_geo);
    mlp_backward(model.params, model.geo, cache.geo, dgeo);

    if (cfg.has_intent()) {
        Tensor& gcb = model.params.grad("codebook");
        const int ioff = geo_off + cfg.d_geo;
        int cell = 0;
        for (int t = 0; t < cache.slice.l_macro; ++t)
            for (int i = 0; i < cache.slice.dims; ++i, ++cell) {
                const int idx = cache.slice.at(t, i).index;
                double* grow = gcb.data() + static_cast<std::size_t>(idx) * cfg.d_emb;
                const double* src = din.data() + ioff + static_cast<std::size_t>(cell) * cfg.d_emb;
                for (int e = 0; e < cfg.d_emb; ++e) grow[e] += src[e];
            }
    }
}

double diffusion_loss_at(RefinerModel& model, const std::vector<double>& a0,
                         const std::vector<double>& robs, const CoarseChunk& slice, int k,
                         const std::vector<double>& eps, double grad_scale,
                         bool accumulate_grads) {
    std::vector<double> x_k = forward_noise(a0, k, eps, model.schedule);
    EpsCache cache;
    std::vector<double> eps_hat = eps_forward(model, x_k, k, robs, slice, &cache);
    LossGrad lg = mse(eps_hat, eps);
    if (!std::isfinite(lg.loss))
        throw std::runtime_error("diffusion loss is non-finite");
    if (accumulate_grads) eps_backward(model, cache, lg.grad, grad_scale);
    return lg.loss;
}

DiffusionLossResult diffusion_loss(RefinerModel& model, const std::vector<double>& a0,
                                   const std::vector<double>& robs, const CoarseChunk& slice,
                                   RngState& rng, double grad_scale) {
    DiffusionLossResult out;
    out.k = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(model.cfg.k_diff)));
    std::vector<double> eps(a0.size());
    for (double& e : eps) e = rng.normal();
    out.loss = diffusion_loss_at(model, a0, robs, slice, out.k, eps, grad_scale, true);
    return out;
}

std::vector<double> denoise_sample(const RefinerModel& model, const std::vector<double>& robs,
                                   const CoarseChunk& slice, RngState& rng) {
    const auto& s = model.schedule;
    const int n = model.cfg.chunk_dim();
    std::vector<double> x(n);
    for (double& xi : x) xi = rng.normal();

    for (int k = s.steps() - 1; k >= 0; --k) {
        std::vector<double> eps_hat = eps_forward(model, x, k, robs, slice, nullptr);
        const double inv_sqrt_alpha = 1.0 / std::sqrt(s.alpha[k]);
        const double coef = s.beta[k] / std::sqrt(1.0 - s.alpha_bar[k]);
        for (int i = 0; i < n; ++i) x[i] = inv_sqrt_alpha * (x[i] - coef * eps_hat[i]);
        if (k > 0) {
            const double sigma = std::sqrt(s.beta[k]);
            for (int i = 0; i < n; ++i) x[i] += sigma * rng.normal();
        }
        // k = 0: deterministic final step
    }
    for (double& xi : x) xi = std::clamp(xi, -1.0, 1.0);
    return x;
}

}  // namespace c2f
