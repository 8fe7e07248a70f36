#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "nowcast/errors.hpp"

// Deterministic sampling helpers. std::mt19937_64 output is fully specified
// by the standard, but the std::*_distribution mappings are not; every
// mapping used here is spelled out so that a (config, seed) pair gives the
// same draws on any platform.
namespace nowcast::rng {

using Engine = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Seed for an independent sub-stream (epidemic vs. survey vs. bias, per-cell
/// sweep workers, ...) derived from a base seed and a stream tag.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    return splitmix64(base ^ splitmix64(stream + 0x51ED270B7A347295ull));
}

/// Uniform in [0, 1) with 53-bit resolution.
inline double uniform_real(Engine& g) {
    return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

/// Uniform in [0, n). Rejection sampling; no modulo bias.
inline std::uint64_t uniform_below(Engine& g, std::uint64_t n) {
    if (n == 0) throw DomainError("uniform_below: empty range");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v = g();
    while (v >= limit) v = g();
    return v % n;
}

/// Uniform integer in [lo, hi], both ends inclusive.
inline long long uniform_int(Engine& g, long long lo, long long hi) {
    if (hi < lo) throw DomainError("uniform_int: hi < lo");
    return lo + static_cast<long long>(
                    uniform_below(g, static_cast<std::uint64_t>(hi - lo) + 1));
}

/// Uniform real in [lo, hi).
inline double uniform_range(Engine& g, double lo, double hi) {
    return lo + (hi - lo) * uniform_real(g);
}

inline bool bernoulli(Engine& g, double p) {
    return uniform_real(g) < p;
}

/// Binomial(n, p) by explicit Bernoulli trials: exact, portable, O(n).
/// n stays small in every caller (bounded by the survey coverage n_d).
inline long long binomial(Engine& g, long long n, double p) {
    if (n <= 0 || p <= 0.0) return 0;
    if (p >= 1.0) return n;
    long long k = 0;
    for (long long i = 0; i < n; ++i) {
        if (bernoulli(g, p)) ++k;
    }
    return k;
}

/// Index sampler for a fixed discrete distribution (inverse CDF).
class DiscreteSampler {
public:
    DiscreteSampler() = default;

    explicit DiscreteSampler(const std::vector<double>& weights) {
        double total = 0.0;
        for (double w : weights) {
            if (w < 0.0) throw DomainError("DiscreteSampler: negative weight");
            total += w;
        }
        if (total <= 0.0) throw DomainError("DiscreteSampler: zero total weight");
        cdf_.reserve(weights.size());
        double acc = 0.0;
        for (double w : weights) {
            acc += w / total;
            cdf_.push_back(acc);
        }
        cdf_.back() = 1.0;
    }

    std::size_t sample(Engine& g) const {
        const double u = uniform_real(g);
        auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
        if (it == cdf_.end()) --it;
        return static_cast<std::size_t>(it - cdf_.begin());
    }

    bool empty() const { return cdf_.empty(); }

private:
    std::vector<double> cdf_;
};

} // namespace nowcast::rng
