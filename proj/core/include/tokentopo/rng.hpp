#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace tokentopo {

/// splitmix64 step; used to derive independent seed streams from a master
/// seed. The raw engine is std::mt19937_64, whose output sequence is fixed
/// by the standard, and all value mappings below are explicit, so results
/// are identical across platforms and standard libraries.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seed for stream `stream` derived from `master`. Distinct streams give
/// statistically independent sequences; the mapping is pure.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    std::uint64_t s = master;
    std::uint64_t a = splitmix64(s);
    s = a ^ (stream * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL);
    return splitmix64(s);
}

/// FNV-1a, for deriving per-token seed streams from names.
inline std::uint64_t hash_name(std::string_view name) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : name) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

/// Deterministic generator with explicit distributions. std:: distribution
/// objects are deliberately avoided: their algorithms are
/// implementation-defined and would break the bit-reproducibility contract.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform in [0, 1).
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer in [0, n). Modulo bias is negligible for n << 2^64.
    std::uint64_t below(std::uint64_t n) { return engine_() % n; }

    /// Uniform integer in [lo, hi] inclusive.
    std::int64_t range(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    bool bernoulli(double p) { return uniform01() < p; }

    /// Standard normal via Box-Muller (one value per call).
    double normal() {
        double u1;
        do {
            u1 = uniform01();
        } while (u1 <= 0.0);
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

private:
    std::mt19937_64 engine_;
};

}  // namespace tokentopo
