#pragma once

#include <cstdint>
#include <random>

namespace hgg {

/// Deterministic random source. Distribution math is hand-rolled on top of
/// mt19937_64 so streams are identical across standard libraries.
class Rng {
public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    double uniform() {  // [0, 1)
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    int uniform_int(int lo, int hi) {  // inclusive bounds
        const uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
        return lo + static_cast<int>(engine_() % span);
    }

    double normal() {  // Box-Muller, two draws per sample
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    uint64_t raw() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

/// FNV-1a; used to derive per-tensor seeds from (seed, name).
inline uint64_t hash_name(const char* s) {
    uint64_t h = 14695981039346656037ull;
    for (; *s; ++s) {
        h ^= static_cast<uint64_t>(static_cast<unsigned char>(*s));
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace hgg
