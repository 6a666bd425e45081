#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mecsim {

// splitmix64 finalizer, used to turn (seed, stream name) into a stream seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// One named draw stream. The engine is std::mt19937_64, which the standard
// pins bit-exactly; the variate transforms below are written out explicitly
// because std::*_distribution adaptors are implementation-defined and would
// break cross-platform reproducibility of traces.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : gen_(seed) {}

    // Uniform in [0, 1) with 53-bit resolution.
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Box-Muller. Consumes exactly two uniforms per call; sigma == 0 is a
    // degenerate draw and consumes nothing.
    double normal(double mean, double sigma) {
        if (sigma == 0.0) return mean;
        double u1 = uniform01();
        double u2 = uniform01();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        double r = std::sqrt(-2.0 * std::log(u1));
        return mean + sigma * r * std::cos(2.0 * std::numbers::pi * u2);
    }

    // Parametrized by the arithmetic mean of the variate (not of its log)
    // and the log-space sigma: mu = ln(mean) - sigma^2 / 2, so the returned
    // samples average to `mean`.
    double lognormal(double mean, double sigma_log) {
        if (mean <= 0.0) throw std::invalid_argument("lognormal mean must be > 0");
        if (sigma_log == 0.0) return mean;
        double mu = std::log(mean) - 0.5 * sigma_log * sigma_log;
        return std::exp(normal(mu, sigma_log));
    }

private:
    std::mt19937_64 gen_;
};

// Root random source. Every stochastic model pulls from its own named
// sub-stream (stream id = module name), so adding a model never perturbs
// the draws seen by existing ones.
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t seed() const { return seed_; }

    RandomStream stream(std::string_view name) const {
        return RandomStream(splitmix64(seed_ ^ fnv1a64(name)));
    }

private:
    std::uint64_t seed_;
};

// Configurable delay component. Lognormal is parametrized as in
// RandomStream::lognormal (arithmetic mean + log-space sigma).
struct DistSpec {
    enum class Kind { Fixed, Uniform, Lognormal };

    Kind kind = Kind::Fixed;
    double a = 0.0;  // Fixed: value; Uniform: lower bound; Lognormal: mean
    double b = 0.0;  // Uniform: upper bound; Lognormal: log-space sigma

    double draw(RandomStream& rng) const {
        switch (kind) {
            case Kind::Fixed: return a;
            case Kind::Uniform: return rng.uniform(a, b);
            case Kind::Lognormal: return rng.lognormal(a, b);
        }
        return a;
    }

    // Draws must be non-negative for every delay component.
    void validate(const std::string& what) const {
        switch (kind) {
            case Kind::Fixed:
                if (a < 0.0) throw std::invalid_argument(what + ": fixed value must be >= 0");
                break;
            case Kind::Uniform:
                if (a < 0.0 || b < a)
                    throw std::invalid_argument(what + ": uniform bounds must satisfy 0 <= lo <= hi");
                break;
            case Kind::Lognormal:
                if (a <= 0.0 || b < 0.0)
                    throw std::invalid_argument(what + ": lognormal needs mean > 0 and sigma >= 0");
                break;
        }
    }

    friend bool operator==(const DistSpec&, const DistSpec&) = default;
};

inline DistSpec fixed_dist(double value) { return {DistSpec::Kind::Fixed, value, 0.0}; }
inline DistSpec uniform_dist(double lo, double hi) { return {DistSpec::Kind::Uniform, lo, hi}; }
inline DistSpec lognormal_dist(double mean, double sigma_log) {
    return {DistSpec::Kind::Lognormal, mean, sigma_log};
}

}  // namespace mecsim
