#include "c2f/dataset.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace c2f {

static_assert(std::endian::native == std::endian::little,
              "dataset io assumes a little-endian host");

Trajectory run_expert_episode(const EnvConfig& cfg, std::uint64_t episode_seed, int task_id) {
    RngState noise_rng = derive_stream(episode_seed, 0x11);
    EnvState st = env_reset(cfg, episode_seed, cfg.num_targets, task_id);

    Trajectory ep;
    ep.env_seed = episode_seed;
    ep.task_id = task_id;

    auto record = [&](const EnvState& s, const ActionVector& a) {
        auto po = observe(cfg, s, ObsChannel::Planner);
        auto ro = observe(cfg, s, ObsChannel::Refiner);
        ep.planner_obs.insert(ep.planner_obs.end(), po.begin(), po.end());
        ep.refiner_obs.insert(ep.refiner_obs.end(), ro.begin(), ro.end());
        ep.actions.insert(ep.actions.end(), a.values.begin(), a.values.end());
        ++ep.length;
    };

    while (!st.done) {
        ActionVector a = expert_action(cfg, st, noise_rng);
        record(st, a);
        st = env_step(cfg, st, a);
    }
    ep.success = st.success;
    // terminal pair: at the solved state the expert holds, so padded chunk
    // tails quantize to the stable center bin
    if (st.success) record(st, expert_action(cfg, st, noise_rng));
    return ep;
}

Dataset generate_dataset(const EnvConfig& cfg, int episodes, std::uint64_t seed,
                         std::uint64_t config_hash, bool parallel) {
    if (episodes <= 0) throw std::invalid_argument("generate_dataset: episodes must be positive");
    Dataset ds;
    ds.config_hash = config_hash;
    ds.seed = seed;
    ds.dims = cfg.dims;
    ds.num_targets = cfg.num_targets;
    ds.planner_dim = planner_obs_dim(cfg);
    ds.refiner_dim = refiner_obs_dim(cfg);
    ds.episodes.resize(episodes);

    auto gen_one = [&](int i) {
        const std::uint64_t ep_seed = derive_stream(seed, 0x1000 + static_cast<std::uint64_t>(i)).seed;
        ds.episodes[i] = run_expert_episode(cfg, ep_seed, i % cfg.num_targets);
    };

    if (parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
        for (int i = 0; i < episodes; ++i) gen_one(i);
    } else {
        for (int i = 0; i < episodes; ++i) gen_one(i);
    }
    return ds;
}

namespace {

constexpr char kMagic[7] = {'c', '2', 'f', 'd', 's', 'e', 't'};
constexpr std::uint8_t kVersion = 1;

template <typename T>
void put(std::ofstream& f, T v) {
    f.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& f) {
    T v{};
    f.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!f) throw std::runtime_error("dataset file truncated");
    return v;
}

void put_doubles(std::ofstream& f, const std::vector<double>& v) {
    f.write(reinterpret_cast<const char*>(v.data()),
            static_cast<std::streamsize>(v.size() * sizeof(double)));
}

void get_doubles(std::ifstream& f, std::vector<double>& v, std::size_t n) {
    v.resize(n);
    f.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(double)));
    if (!f) throw std::runtime_error("dataset file truncated");
}

}  // namespace

void save_dataset(const std::string& path, const Dataset& ds) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open dataset for writing: " + path);
    f.write(kMagic, sizeof(kMagic));
    put(f, kVersion);
    put(f, ds.config_hash);
    put(f, ds.seed);
    put(f, static_cast<std::uint32_t>(ds.episodes.size()));
    put(f, static_cast<std::uint32_t>(ds.dims));
    put(f, static_cast<std::uint32_t>(ds.num_targets));
    put(f, static_cast<std::uint32_t>(ds.planner_dim));
    put(f, static_cast<std::uint32_t>(ds.refiner_dim));
    for (const auto& ep : ds.episodes) {
        put(f, ep.env_seed);
        put(f, static_cast<std::uint32_t>(ep.task_id));
        put(f, static_cast<std::uint32_t>(ep.length));
        put(f, static_cast<std::uint8_t>(ep.success ? 1 : 0));
        put_doubles(f, ep.planner_obs);
        put_doubles(f, ep.refiner_obs);
        put_doubles(f, ep.actions);
    }
    if (!f) throw std::runtime_error("short write on dataset: " + path);
}

Dataset load_dataset(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open dataset: " + path);
    char magic[sizeof(kMagic)];
    f.read(magic, sizeof(magic));
    if (!f || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw std::runtime_error("not a dataset file (bad magic): " + path);
    const auto version = get<std::uint8_t>(f);
    if (version != kVersion)
        throw std::runtime_error("unsupported dataset version " + std::to_string(version));

    Dataset ds;
    ds.config_hash = get<std::uint64_t>(f);
    ds.seed = get<std::uint64_t>(f);
    const auto count = get<std::uint32_t>(f);
    ds.dims = static_cast<int>(get<std::uint32_t>(f));
    ds.num_targets = static_cast<int>(get<std::uint32_t>(f));
    ds.planner_dim = static_cast<int>(get<std::uint32_t>(f));
    ds.refiner_dim = static_cast<int>(get<std::uint32_t>(f));
    ds.episodes.resize(count);
    for (auto& ep : ds.episodes) {
        ep.env_seed = get<std::uint64_t>(f);
        ep.task_id = static_cast<int>(get<std::uint32_t>(f));
        ep.length = static_cast<int>(get<std::uint32_t>(f));
        ep.success = get<std::uint8_t>(f) != 0;
        const auto n = static_cast<std::size_t>(ep.length);
        get_doubles(f, ep.planner_obs, n * ds.planner_dim);
        get_doubles(f, ep.refiner_obs, n * ds.refiner_dim);
        get_doubles(f, ep.actions, n * ds.dims);
    }
    return ds;
}

ChunkSample make_chunk_sample(const Dataset& ds, const Trajectory& ep, int t,
                              const QuantizerConfig& q, int l_macro, int h_chunk) {
    if (t < 0 || t >= ep.length) throw std::invalid_argument("make_chunk_sample: t out of range");
    ChunkSample s;
    s.planner_obs.assign(ep.planner_obs.begin() + static_cast<std::ptrdiff_t>(t) * ds.planner_dim,
                         ep.planner_obs.begin() + static_cast<std::ptrdiff_t>(t + 1) * ds.planner_dim);
    s.refiner_obs.assign(ep.refiner_obs.begin() + static_cast<std::ptrdiff_t>(t) * ds.refiner_dim,
                         ep.refiner_obs.begin() + static_cast<std::ptrdiff_t>(t + 1) * ds.refiner_dim);

    s.gt_chunk = CoarseChunk(l_macro, ds.dims);
    s.fine_chunk.resize(static_cast<std::size_t>(h_chunk) * ds.dims);
    for (int j = 0; j < l_macro; ++j) {
        const int src = std::min(t + j, ep.length - 1);  // repeat last action past the end
        ActionVector a;
        a.values.assign(ep.actions.begin() + static_cast<std::ptrdiff_t>(src) * ds.dims,
                        ep.actions.begin() + static_cast<std::ptrdiff_t>(src + 1) * ds.dims);
        CoarseRow row = quantize(a, q);
        for (int i = 0; i < ds.dims; ++i) s.gt_chunk.at(j, i) = row[i];
        if (j < h_chunk)
            for (int i = 0; i < ds.dims; ++i)
                s.fine_chunk[static_cast<std::size_t>(j) * ds.dims + i] = a.values[i];
    }
    return s;
}

ChunkSample sample_chunk(const Dataset& ds, const QuantizerConfig& q, int l_macro, int h_chunk,
                         RngState& rng) {
    if (ds.episodes.empty()) throw std::invalid_argument("sample_chunk: empty dataset");
    const auto& ep = ds.episodes[rng.uniform_int(ds.episodes.size())];
    const int t = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(ep.length)));
    return make_chunk_sample(ds, ep, t, q, l_macro, h_chunk);
}

}  // namespace c2f
