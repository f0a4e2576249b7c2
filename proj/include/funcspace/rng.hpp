#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <vector>

#include "funcspace/errors.hpp"

namespace funcspace {

inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Counter-based SplitMix64 stream. The state advances by a fixed odd
/// increment and each output is a hash of the counter, so streams derived
/// from distinct keys never share state. Satisfies UniformRandomBitGenerator.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type(0); }

    result_type operator()() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix64(state_);
    }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller (cosine branch; one value per call so
    /// substream consumption is position-independent).
    double normal() {
        double u1 = (static_cast<double>((*this)() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

private:
    std::uint64_t state_;
};

/// Derives an independent child stream from a master seed and an index path,
/// e.g. substream(seed, {size_index, trial_index}). Identical paths give
/// bitwise-identical streams regardless of thread count or call order.
inline SplitMix64 substream(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
    std::uint64_t key = mix64(master ^ 0x6A09E667F3BCC909ULL);
    for (std::uint64_t p : path) {
        key = mix64(key + 0x9E3779B97F4A7C15ULL * (p + 1));
    }
    return SplitMix64(key);
}

/// Inverse-CDF sampler over a finite set of nonnegative weights.
class DiscreteSampler {
public:
    explicit DiscreteSampler(const std::vector<double>& weights) {
        if (weights.empty()) throw invalid_parameter("DiscreteSampler: empty weight list");
        double total = 0.0;
        cdf_.reserve(weights.size());
        for (double w : weights) {
            if (!(w >= 0.0) || !std::isfinite(w))
                throw invalid_parameter("DiscreteSampler: weights must be finite and >= 0");
            total += w;
            cdf_.push_back(total);
        }
        if (total <= 0.0) throw invalid_parameter("DiscreteSampler: total weight is zero");
        for (double& c : cdf_) c /= total;
        cdf_.back() = 1.0;
    }

    std::size_t operator()(SplitMix64& rng) const {
        double u = rng.uniform();
        std::size_t lo = 0, hi = cdf_.size() - 1;
        while (lo < hi) {
            std::size_t mid = (lo + hi) / 2;
            if (cdf_[mid] <= u)
                lo = mid + 1;
            else
                hi = mid;
        }
        return lo;
    }

    std::size_t size() const { return cdf_.size(); }

private:
    std::vector<double> cdf_;
};

}  // namespace funcspace
