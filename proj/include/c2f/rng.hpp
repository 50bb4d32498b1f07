#pragma once
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace c2f {

// Counter-based generator (splitmix64 over seed + counter*golden).
// The stream is a pure function of (seed, call sequence), so state can be
// copied, replayed and compared across runs and platforms.
struct RngState {
    std::uint64_t seed = 0;
    std::uint64_t counter = 0;

    RngState() = default;
    explicit RngState(std::uint64_t s) : seed(s) {}

    std::uint64_t next_u64() {
        std::uint64_t z = seed + (++counter) * 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // [0,1)
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
    // (0,1], safe for log()
    double uniform_pos() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

    double uniform_in(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Box-Muller without caching: two draws per sample keeps the stream a
    // function of the call count alone.
    double normal() {
        const double u1 = uniform_pos();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

    // [0,n), Lemire reduction (deterministic, no rejection loop)
    std::uint64_t uniform_int(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    // index sampled proportionally to probs (assumed nonnegative)
    int categorical(const std::vector<double>& probs) {
        double total = 0.0;
        for (double p : probs) total += p;
        if (!(total > 0.0)) throw std::invalid_argument("categorical: zero mass");
        double u = uniform() * total;
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
            acc += probs[i];
            if (u < acc) return static_cast<int>(i);
        }
        return static_cast<int>(probs.size()) - 1;
    }
};

// Independent substream for per-episode / per-worker generators.
inline RngState derive_stream(std::uint64_t seed, std::uint64_t stream_id) {
    std::uint64_t z = seed ^ (stream_id * 0xD1B54A32D192ED03ULL + 0x2545F4914F6CDD1DULL);
    z = (z ^ (z >> 33)) * 0xFF51AFD7ED558CCDULL;
    z = (z ^ (z >> 33)) * 0xC4CEB9FE1A85EC53ULL;
    return RngState(z ^ (z >> 33));
}

}  // namespace c2f
