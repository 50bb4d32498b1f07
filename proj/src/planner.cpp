#include "c2f/planner.hpp"

#include <cmath>
#include <stdexcept>

namespace c2f {

PlannerModel make_planner(const PlannerConfig& cfg, std::uint64_t seed) {
    if (cfg.obs_dim <= 0 || cfg.width <= 0 || cfg.l_macro <= 0 || cfg.dims <= 0 ||
        cfg.n_bins < 2 || cfg.ctx_tokens < 1 || cfg.depth < 1)
        throw std::invalid_argument("make_planner: bad config");

    PlannerModel m;
    m.cfg = cfg;
    RngState rng = derive_stream(seed, 0x9101);

    m.encoder.prefix = "enc.";
    m.encoder.act = Activation::Gelu;
    m.encoder.widths.push_back(cfg.obs_dim);
    for (int l = 1; l < cfg.depth; ++l) m.encoder.widths.push_back(cfg.width * 2);
    m.encoder.widths.push_back(cfg.ctx_tokens * cfg.width);
    mlp_init(m.params, m.encoder, rng);

    Tensor& q = m.params.add("queries", {cfg.query_tokens(), cfg.width});
    for (double& x : q.v) x = 0.1 * rng.normal();

    m.attn.prefix = "attn.";
    m.attn.dim = cfg.width;
    attention_init(m.params, m.attn, rng);

    Tensor& hw = m.params.add("head.W", {cfg.n_bins, cfg.width});
    linear_init(hw, cfg.width, rng);
    m.params.add("head.b", {cfg.n_bins});
    return m;
}

PlanLogits plan_forward(const PlannerModel& model, const std::vector<double>& obs,
                        PlanCache* cache) {
    const auto& cfg = model.cfg;
    const int k = cfg.query_tokens();
    const int d = cfg.width;
    const int t_total = k + cfg.ctx_tokens;

    PlanCache local;
    PlanCache& c = cache ? *cache : local;

    std::vector<double> ctx = mlp_forward(model.params, model.encoder, obs, &c.enc);

    c.tokens.assign(static_cast<std::size_t>(t_total) * d, 0.0);
    const Tensor& q = model.params.value("queries");
    std::copy(q.v.begin(), q.v.end(), c.tokens.begin());
    std::copy(ctx.begin(), ctx.end(), c.tokens.begin() + static_cast<std::ptrdiff_t>(k) * d);

    std::vector<double> attn_out =
        attention_forward(model.params, model.attn, c.tokens, t_total, &c.attn);
    ++model.attention_calls;

    c.sliced.assign(attn_out.begin(), attn_out.begin() + static_cast<std::ptrdiff_t>(k) * d);

    const Tensor& hw = model.params.value("head.W");
    const Tensor& hb = model.params.value("head.b");
    PlanLogits out(cfg.l_macro, cfg.dims, cfg.n_bins);
    for (int i = 0; i < k; ++i) {
        const double* zi = c.sliced.data() + static_cast<std::size_t>(i) * d;
        double* cell = out.v.data() + static_cast<std::size_t>(i) * cfg.n_bins;
        for (int b = 0; b < cfg.n_bins; ++b) {
            double acc = hb.v[b];
            const double* wr = hw.data() + static_cast<std::size_t>(b) * d;
            for (int cidx = 0; cidx < d; ++cidx) acc += wr[cidx] * zi[cidx];
            cell[b] = acc;
        }
    }
    return out;
}

double plan_loss(const PlanLogits& logits, const CoarseChunk& gt, PlanLogits* dlogits) {
    if (logits.l_macro != gt.l_macro || logits.dims != gt.dims)
        throw std::invalid_argument("plan_loss: shape mismatch");
    const int cells = logits.l_macro * logits.dims;
    if (dlogits) *dlogits = PlanLogits(logits.l_macro, logits.dims, logits.n_bins);
    double total = 0.0;
    for (int t = 0; t < logits.l_macro; ++t)
        for (int i = 0; i < logits.dims; ++i) {
            const int target = gt.at(t, i).index;
            if (target < 0 || target >= logits.n_bins)
                throw std::invalid_argument("plan_loss: gt index out of range");
            LossGrad lg = softmax_ce(logits.cell(t, i), target);
            total += lg.loss;
            if (dlogits) {
                double* p = dlogits->at(t, i);
                for (int b = 0; b < logits.n_bins; ++b) p[b] = lg.grad[b] / cells;
            }
        }
    return total / cells;
}

void plan_backward(PlannerModel& model, const PlanCache& cache, const PlanLogits& dlogits,
                   double scale) {
    const auto& cfg = model.cfg;
    const int k = cfg.query_tokens();
    const int d = cfg.width;
    const int t_total = k + cfg.ctx_tokens;

    const Tensor& hw = model.params.value("head.W");
    Tensor& ghw = model.params.grad("head.W");
    Tensor& ghb = model.params.grad("head.b");

    // shared head: accumulate over all K cells, push dZ into query outputs
    std::vector<double> dattn(static_cast<std::size_t>(t_total) * d, 0.0);
    for (int i = 0; i < k; ++i) {
        const double* dcell = dlogits.v.data() + static_cast<std::size_t>(i) * cfg.n_bins;
        const double* zi = cache.sliced.data() + static_cast<std::size_t>(i) * d;
        double* dzi = dattn.data() + static_cast<std::size_t>(i) * d;
        for (int b = 0; b < cfg.n_bins; ++b) {
            const double g = dcell[b] * scale;
            ghb.v[b] += g;
            const double* wr = hw.data() + static_cast<std::size_t>(b) * d;
            double* gwr = ghw.data() + static_cast<std::size_t>(b) * d;
            for (int cidx = 0; cidx < d; ++cidx) {
                gwr[cidx] += g * zi[cidx];
                dzi[cidx] += g * wr[cidx];
            }
        }
    }

    std::vector<double> dtokens =
        attention_backward(model.params, model.attn, cache.attn, dattn);

    Tensor& gq = model.params.grad("queries");
    for (std::size_t i = 0; i < gq.size(); ++i) gq.v[i] += dtokens[i];

    std::vector<double> dctx(dtokens.begin() + static_cast<std::ptrdiff_t>(k) * d,
                             dtokens.end());
    mlp_backward(model.params, model.encoder, cache.enc, dctx);
}

SampleMode parse_sample_mode(const std::string& s) {
    if (s == "argmax") return SampleMode::Argmax;
    if (s == "categorical") return SampleMode::Categorical;
    throw std::invalid_argument("unknown sample mode: " + s);
}

namespace {

int argmax_lowest(const double* p, int n) {
    int best = 0;
    for (int i = 1; i < n; ++i)
        if (p[i] > p[best]) best = i;  // strict: ties keep the lower index
    return best;
}

}  // namespace

CoarseChunk sample_coarse(const PlanLogits& logits, SampleMode mode, RngState& rng) {
    CoarseChunk out(logits.l_macro, logits.dims);
    for (int t = 0; t < logits.l_macro; ++t)
        for (int i = 0; i < logits.dims; ++i) {
            const double* cell = logits.at(t, i);
            for (int b = 0; b < logits.n_bins; ++b)
                if (!std::isfinite(cell[b]))
                    throw std::invalid_argument("sample_coarse: non-finite logits");
            int idx;
            if (mode == SampleMode::Argmax) {
                idx = argmax_lowest(cell, logits.n_bins);
            } else {
                idx = rng.categorical(softmax(logits.cell(t, i)));
            }
            out.at(t, i).index = idx;
        }
    return out;
}

double plan_accuracy(const PlanLogits& logits, const CoarseChunk& gt) {
    if (logits.l_macro != gt.l_macro || logits.dims != gt.dims)
        throw std::invalid_argument("plan_accuracy: shape mismatch");
    int hits = 0;
    for (int t = 0; t < logits.l_macro; ++t)
        for (int i = 0; i < logits.dims; ++i)
            if (argmax_lowest(logits.at(t, i), logits.n_bins) == gt.at(t, i).index) ++hits;
    return static_cast<double>(hits) / (logits.l_macro * logits.dims);
}

}  // namespace c2f
