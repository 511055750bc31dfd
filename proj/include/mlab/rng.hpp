#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace mlab {

// Deterministic random streams. std::mt19937_64 is fully specified by the
// standard, but the distribution adaptors are not, so the mappings from raw
// 64-bit words to doubles live here and nowhere else.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Derives an independent stream for (seed, stream, substream) without
    // correlating nearby indices.
    static Rng derive(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream = 0) {
        std::uint64_t x = seed;
        x = splitmix(x + 0x9e3779b97f4a7c15ULL * (stream + 1));
        x = splitmix(x + 0xbf58476d1ce4e5b9ULL * (substream + 1));
        return Rng(x);
    }

    // Uniform in [0, 1) with 53-bit resolution.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard normal via Box-Muller; explicit so streams are portable.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    std::uint64_t next_u64() { return engine_(); }

private:
    static std::uint64_t splitmix(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace mlab
