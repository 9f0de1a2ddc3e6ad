#ifndef SFCMFG_RNG_HPP
#define SFCMFG_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

namespace sfcmfg {

// Deterministic RNG helpers. std::mt19937_64 output is pinned by the standard;
// the distributions below are hand-rolled so streams are identical across
// standard library implementations (the std:: distributions are not).
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform double in [0, 1).
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n).
    std::uint64_t uniform_index(std::uint64_t n) {
        if (n == 0) throw std::invalid_argument("uniform_index: n must be > 0");
        // Rejection sampling to avoid modulo bias.
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % n;
    }

    // Knuth's product-of-uniforms Poisson sampler; adequate for the desk-scale
    // rates used here (exp(-rate) must not underflow).
    std::uint64_t poisson(double rate) {
        if (rate < 0.0) throw std::invalid_argument("poisson: rate must be >= 0");
        if (rate == 0.0) return 0;
        if (rate > 500.0) throw std::invalid_argument("poisson: rate too large for sampler");
        const double threshold = std::exp(-rate);
        std::uint64_t k = 0;
        double p = 1.0;
        do {
            ++k;
            p *= uniform();
        } while (p > threshold);
        return k - 1;
    }

    // Index drawn according to `weights` (need not be normalized).
    std::size_t discrete(std::span<const double> weights) {
        double total = 0.0;
        for (double w : weights) {
            if (w < 0.0) throw std::invalid_argument("discrete: negative weight");
            total += w;
        }
        if (total <= 0.0) throw std::invalid_argument("discrete: weights sum to zero");
        double u = uniform() * total;
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
            acc += weights[i];
            if (u < acc) return i;
        }
        return weights.size() - 1;
    }

  private:
    std::mt19937_64 engine_;
};

}  // namespace sfcmfg

#endif
