#include "c2f/nn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace c2f {

namespace {

constexpr double kInvSqrt2 = 0.7071067811865475244;
constexpr double kInvSqrt2Pi = 0.3989422804014326779;

double gelu(double x) { return 0.5 * x * (1.0 + std::erf(x * kInvSqrt2)); }

double gelu_grad(double x) {
    const double cdf = 0.5 * (1.0 + std::erf(x * kInvSqrt2));
    const double pdf = kInvSqrt2Pi * std::exp(-0.5 * x * x);
    return cdf + x * pdf;
}

double act_apply(Activation a, double x) { return a == Activation::Gelu ? gelu(x) : std::tanh(x); }

double act_grad(Activation a, double x) {
    if (a == Activation::Gelu) return gelu_grad(x);
    const double t = std::tanh(x);
    return 1.0 - t * t;
}

// y[r] = sum_c m[r,c] * x[c] + b[r]
void affine(const Tensor& w, const Tensor& b, const double* x, double* y, int rows, int cols) {
    for (int r = 0; r < rows; ++r) {
        double acc = b.v[r];
        const double* wr = w.data() + static_cast<std::size_t>(r) * cols;
        for (int c = 0; c < cols; ++c) acc += wr[c] * x[c];
        y[r] = acc;
    }
}

}  // namespace

void linear_init(Tensor& w, int fan_in, RngState& rng) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(std::max(fan_in, 1)));
    for (double& x : w.v) x = scale * rng.normal();
}

// ------------------------------- MLP ---------------------------------------

void mlp_init(ParamStore& store, const MlpSpec& spec, RngState& rng) {
    if (spec.widths.size() < 2) throw std::invalid_argument("mlp_init: need >= 2 widths");
    for (int l = 0; l < spec.layers(); ++l) {
        const int in = spec.widths[l], out = spec.widths[l + 1];
        Tensor& w = store.add(spec.prefix + "W" + std::to_string(l), {out, in});
        linear_init(w, in, rng);
        store.add(spec.prefix + "b" + std::to_string(l), {out});
    }
}

std::vector<double> mlp_forward(const ParamStore& store, const MlpSpec& spec,
                                const std::vector<double>& input, MlpCache* cache) {
    if (static_cast<int>(input.size()) != spec.in_dim())
        throw std::invalid_argument("mlp_forward: input dim " + std::to_string(input.size()) +
                                    " != spec " + std::to_string(spec.in_dim()));
    std::vector<double> x = input;
    if (cache) {
        cache->x.assign(1, x);
        cache->z.clear();
    }
    for (int l = 0; l < spec.layers(); ++l) {
        const int in = spec.widths[l], out = spec.widths[l + 1];
        const Tensor& w = store.value(spec.prefix + "W" + std::to_string(l));
        const Tensor& b = store.value(spec.prefix + "b" + std::to_string(l));
        std::vector<double> z(out);
        affine(w, b, x.data(), z.data(), out, in);
        const bool last = (l == spec.layers() - 1);
        std::vector<double> y(out);
        for (int r = 0; r < out; ++r) y[r] = last ? z[r] : act_apply(spec.act, z[r]);
        if (cache) {
            cache->z.push_back(std::move(z));
            cache->x.push_back(y);
        }
        x = std::move(y);
    }
    return x;
}

std::vector<double> mlp_backward(ParamStore& store, const MlpSpec& spec, const MlpCache& cache,
                                 const std::vector<double>& dout) {
    if (static_cast<int>(dout.size()) != spec.out_dim())
        throw std::invalid_argument("mlp_backward: grad dim mismatch");
    std::vector<double> dy = dout;
    for (int l = spec.layers() - 1; l >= 0; --l) {
        const int in = spec.widths[l], out = spec.widths[l + 1];
        const bool last = (l == spec.layers() - 1);
        const std::vector<double>& z = cache.z[l];
        const std::vector<double>& xin = cache.x[l];
        // through activation
        std::vector<double> dz(out);
        for (int r = 0; r < out; ++r) dz[r] = last ? dy[r] : dy[r] * act_grad(spec.act, z[r]);
        Tensor& gw = store.grad(spec.prefix + "W" + std::to_string(l));
        Tensor& gb = store.grad(spec.prefix + "b" + std::to_string(l));
        const Tensor& w = store.value(spec.prefix + "W" + std::to_string(l));
        std::vector<double> dx(in, 0.0);
        for (int r = 0; r < out; ++r) {
            gb.v[r] += dz[r];
            double* gwr = gw.data() + static_cast<std::size_t>(r) * in;
            const double* wr = w.data() + static_cast<std::size_t>(r) * in;
            for (int c = 0; c < in; ++c) {
                gwr[c] += dz[r] * xin[c];
                dx[c] += dz[r] * wr[c];
            }
        }
        dy = std::move(dx);
    }
    return dy;
}

// ----------------------------- attention ------------------------------------

void attention_init(ParamStore& store, const AttentionSpec& spec, RngState& rng) {
    if (spec.dim <= 0) throw std::invalid_argument("attention_init: dim must be positive");
    for (const char* n : {"Wq", "Wk", "Wv", "Wo"}) {
        Tensor& w = store.add(spec.prefix + n, {spec.dim, spec.dim});
        linear_init(w, spec.dim, rng);
    }
    for (const char* n : {"bq", "bk", "bv", "bo"}) store.add(spec.prefix + n, {spec.dim});
}

std::vector<double> attention_forward(const ParamStore& store, const AttentionSpec& spec,
                                      const std::vector<double>& tokens, int t,
                                      AttentionCache* cache) {
    const int d = spec.dim;
    if (t < 1) throw std::invalid_argument("attention_forward: need T >= 1");
    if (static_cast<int>(tokens.size()) != t * d)
        throw std::invalid_argument("attention_forward: token buffer shape mismatch");

    const Tensor& wq = store.value(spec.prefix + "Wq");
    const Tensor& wk = store.value(spec.prefix + "Wk");
    const Tensor& wv = store.value(spec.prefix + "Wv");
    const Tensor& wo = store.value(spec.prefix + "Wo");
    const Tensor& bq = store.value(spec.prefix + "bq");
    const Tensor& bk = store.value(spec.prefix + "bk");
    const Tensor& bv = store.value(spec.prefix + "bv");
    const Tensor& bo = store.value(spec.prefix + "bo");

    std::vector<double> q(t * d), k(t * d), v(t * d);
    for (int i = 0; i < t; ++i) {
        const double* xi = tokens.data() + static_cast<std::size_t>(i) * d;
        affine(wq, bq, xi, q.data() + static_cast<std::size_t>(i) * d, d, d);
        affine(wk, bk, xi, k.data() + static_cast<std::size_t>(i) * d, d, d);
        affine(wv, bv, xi, v.data() + static_cast<std::size_t>(i) * d, d, d);
    }

    const double scale = 1.0 / std::sqrt(static_cast<double>(d));
    std::vector<double> a(static_cast<std::size_t>(t) * t);
    for (int i = 0; i < t; ++i) {
        double* row = a.data() + static_cast<std::size_t>(i) * t;
        double mx = -1e300;
        for (int j = 0; j < t; ++j) {
            double s = 0.0;
            const double* qi = q.data() + static_cast<std::size_t>(i) * d;
            const double* kj = k.data() + static_cast<std::size_t>(j) * d;
            for (int c = 0; c < d; ++c) s += qi[c] * kj[c];
            row[j] = s * scale;
            mx = std::max(mx, row[j]);
        }
        double denom = 0.0;
        for (int j = 0; j < t; ++j) {
            row[j] = std::exp(row[j] - mx);
            denom += row[j];
        }
        for (int j = 0; j < t; ++j) row[j] /= denom;
    }

    std::vector<double> y(static_cast<std::size_t>(t) * d, 0.0);
    for (int i = 0; i < t; ++i)
        for (int j = 0; j < t; ++j) {
            const double aij = a[static_cast<std::size_t>(i) * t + j];
            const double* vj = v.data() + static_cast<std::size_t>(j) * d;
            double* yi = y.data() + static_cast<std::size_t>(i) * d;
            for (int c = 0; c < d; ++c) yi[c] += aij * vj[c];
        }

    std::vector<double> out(static_cast<std::size_t>(t) * d);
    for (int i = 0; i < t; ++i) {
        const double* yi = y.data() + static_cast<std::size_t>(i) * d;
        double* oi = out.data() + static_cast<std::size_t>(i) * d;
        affine(wo, bo, yi, oi, d, d);
        const double* xi = tokens.data() + static_cast<std::size_t>(i) * d;
        for (int c = 0; c < d; ++c) oi[c] += xi[c];  // residual
    }

    if (cache) {
        cache->t = t;
        cache->x = tokens;
        cache->q = std::move(q);
        cache->k = std::move(k);
        cache->v = std::move(v);
        cache->a = std::move(a);
        cache->y = std::move(y);
    }
    return out;
}

std::vector<double> attention_backward(ParamStore& store, const AttentionSpec& spec,
                                       const AttentionCache& cache,
                                       const std::vector<double>& dout) {
    const int d = spec.dim, t = cache.t;
    if (static_cast<int>(dout.size()) != t * d)
        throw std::invalid_argument("attention_backward: grad shape mismatch");

    const Tensor& wq = store.value(spec.prefix + "Wq");
    const Tensor& wk = store.value(spec.prefix + "Wk");
    const Tensor& wv = store.value(spec.prefix + "Wv");
    const Tensor& wo = store.value(spec.prefix + "Wo");
    Tensor& gwq = store.grad(spec.prefix + "Wq");
    Tensor& gwk = store.grad(spec.prefix + "Wk");
    Tensor& gwv = store.grad(spec.prefix + "Wv");
    Tensor& gwo = store.grad(spec.prefix + "Wo");
    Tensor& gbq = store.grad(spec.prefix + "bq");
    Tensor& gbk = store.grad(spec.prefix + "bk");
    Tensor& gbv = store.grad(spec.prefix + "bv");
    Tensor& gbo = store.grad(spec.prefix + "bo");

    std::vector<double> dx(dout);  // residual path
    std::vector<double> dy(static_cast<std::size_t>(t) * d, 0.0);
    for (int i = 0; i < t; ++i) {
        const double* doi = dout.data() + static_cast<std::size_t>(i) * d;
        const double* yi = cache.y.data() + static_cast<std::size_t>(i) * d;
        double* dyi = dy.data() + static_cast<std::size_t>(i) * d;
        for (int r = 0; r < d; ++r) {
            gbo.v[r] += doi[r];
            const double* wor = wo.data() + static_cast<std::size_t>(r) * d;
            double* gwor = gwo.data() + static_cast<std::size_t>(r) * d;
            for (int c = 0; c < d; ++c) {
                gwor[c] += doi[r] * yi[c];
                dyi[c] += doi[r] * wor[c];
            }
        }
    }

    // dA = dY V^T ; dV = A^T dY
    std::vector<double> da(static_cast<std::size_t>(t) * t, 0.0);
    std::vector<double> dv(static_cast<std::size_t>(t) * d, 0.0);
    for (int i = 0; i < t; ++i)
        for (int j = 0; j < t; ++j) {
            const double aij = cache.a[static_cast<std::size_t>(i) * t + j];
            const double* dyi = dy.data() + static_cast<std::size_t>(i) * d;
            const double* vj = cache.v.data() + static_cast<std::size_t>(j) * d;
            double* dvj = dv.data() + static_cast<std::size_t>(j) * d;
            double acc = 0.0;
            for (int c = 0; c < d; ++c) {
                acc += dyi[c] * vj[c];
                dvj[c] += aij * dyi[c];
            }
            da[static_cast<std::size_t>(i) * t + j] = acc;
        }

    // softmax backward per row: dS_ij = A_ij (dA_ij - sum_k A_ik dA_ik)
    std::vector<double> ds(static_cast<std::size_t>(t) * t);
    for (int i = 0; i < t; ++i) {
        const double* ai = cache.a.data() + static_cast<std::size_t>(i) * t;
        const double* dai = da.data() + static_cast<std::size_t>(i) * t;
        double dot = 0.0;
        for (int j = 0; j < t; ++j) dot += ai[j] * dai[j];
        double* dsi = ds.data() + static_cast<std::size_t>(i) * t;
        for (int j = 0; j < t; ++j) dsi[j] = ai[j] * (dai[j] - dot);
    }

    const double scale = 1.0 / std::sqrt(static_cast<double>(d));
    std::vector<double> dq(static_cast<std::size_t>(t) * d, 0.0);
    std::vector<double> dk(static_cast<std::size_t>(t) * d, 0.0);
    for (int i = 0; i < t; ++i)
        for (int j = 0; j < t; ++j) {
            const double dsij = ds[static_cast<std::size_t>(i) * t + j] * scale;
            const double* kj = cache.k.data() + static_cast<std::size_t>(j) * d;
            const double* qi = cache.q.data() + static_cast<std::size_t>(i) * d;
            double* dqi = dq.data() + static_cast<std::size_t>(i) * d;
            double* dkj = dk.data() + static_cast<std::size_t>(j) * d;
            for (int c = 0; c < d; ++c) {
                dqi[c] += dsij * kj[c];
                dkj[c] += dsij * qi[c];
            }
        }

    // through the three input projections
    auto proj_backward = [&](const Tensor& w, Tensor& gw, Tensor& gb,
                             const std::vector<double>& dproj) {
        for (int i = 0; i < t; ++i) {
            const double* dpi = dproj.data() + static_cast<std::size_t>(i) * d;
            const double* xi = cache.x.data() + static_cast<std::size_t>(i) * d;
            double* dxi = dx.data() + static_cast<std::size_t>(i) * d;
            for (int r = 0; r < d; ++r) {
                gb.v[r] += dpi[r];
                const double* wr = w.data() + static_cast<std::size_t>(r) * d;
                double* gwr = gw.data() + static_cast<std::size_t>(r) * d;
                for (int c = 0; c < d; ++c) {
                    gwr[c] += dpi[r] * xi[c];
                    dxi[c] += dpi[r] * wr[c];
                }
            }
        }
    };
    proj_backward(wq, gwq, gbq, dq);
    proj_backward(wk, gwk, gbk, dk);
    proj_backward(wv, gwv, gbv, dv);
    return dx;
}

// ------------------------------- losses -------------------------------------

std::vector<double> softmax(const std::vector<double>& logits) {
    std::vector<double> p(logits.size());
    double mx = -1e300;
    for (double l : logits) mx = std::max(mx, l);
    double denom = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        p[i] = std::exp(logits[i] - mx);
        denom += p[i];
    }
    for (double& x : p) x /= denom;
    return p;
}

LossGrad softmax_ce(const std::vector<double>& logits, int target) {
    const int c = static_cast<int>(logits.size());
    if (target < 0 || target >= c) throw std::invalid_argument("softmax_ce: target out of range");
    double mx = -1e300;
    for (double l : logits) mx = std::max(mx, l);
    double denom = 0.0;
    for (double l : logits) denom += std::exp(l - mx);
    LossGrad out;
    // loss = logsumexp(l) - l[target], computed in shifted space
    out.loss = std::log(denom) + mx - logits[target];
    out.grad.resize(c);
    for (int i = 0; i < c; ++i) out.grad[i] = std::exp(logits[i] - mx) / denom;
    out.grad[target] -= 1.0;
    return out;
}

LossGrad mse(const std::vector<double>& pred, const std::vector<double>& target) {
    if (pred.size() != target.size()) throw std::invalid_argument("mse: shape mismatch");
    const double n = static_cast<double>(pred.size());
    LossGrad out;
    out.grad.resize(pred.size());
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double diff = pred[i] - target[i];
        out.loss += diff * diff;
        out.grad[i] = 2.0 * diff / n;
    }
    out.loss /= n;
    return out;
}

// ------------------------------ optimizer -----------------------------------

void AdamState::step(ParamStore& store, double lr) {
    if (!(lr > 0.0)) throw std::invalid_argument("AdamState::step: lr must be positive");
    for (auto& [name, p] : store)
        if (!p.grad.finite())
            throw std::runtime_error("non-finite gradient in parameter '" + name + "'");

    ++t_;
    const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
    for (auto& [name, p] : store) {
        auto it = moments_.find(name);
        if (it == moments_.end())
            it = moments_.emplace(name, std::make_pair(Tensor(p.value.shape), Tensor(p.value.shape)))
                     .first;
        Tensor& m = it->second.first;
        Tensor& v = it->second.second;
        for (std::size_t i = 0; i < p.value.size(); ++i) {
            const double g = p.grad.v[i];
            m.v[i] = cfg_.beta1 * m.v[i] + (1.0 - cfg_.beta1) * g;
            v.v[i] = cfg_.beta2 * v.v[i] + (1.0 - cfg_.beta2) * g * g;
            const double mhat = m.v[i] / bc1;
            const double vhat = v.v[i] / bc2;
            p.value.v[i] -= lr * mhat / (std::sqrt(vhat) + cfg_.eps);
        }
    }
}

double lr_schedule(long step, double lr_peak, long warmup_steps, long total_steps,
                   double lr_floor) {
    if (warmup_steps > 0 && step < warmup_steps)
        return lr_peak * static_cast<double>(step + 1) / static_cast<double>(warmup_steps);
    if (total_steps <= warmup_steps) return lr_peak;
    const double progress =
        static_cast<double>(step - warmup_steps) / static_cast<double>(total_steps - warmup_steps);
    const double cosine = 0.5 * (1.0 + std::cos(3.141592653589793 * std::min(progress, 1.0)));
    return lr_floor + (lr_peak - lr_floor) * cosine;
}

}  // namespace c2f
