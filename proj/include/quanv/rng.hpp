#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace quanv {

/// Deterministic random source. Uniform and normal variates are derived from
/// the raw mt19937_64 bit stream instead of the std distributions, which are
/// implementation-defined; seeded runs must reproduce bit for bit.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(mix(seed)) {}

    /// Independent stream for (seed, index) pairs, e.g. one per Monte-Carlo
    /// draw or sweep cell.
    Rng(std::uint64_t seed, std::uint64_t stream)
        : gen_(mix(seed + 0x9e3779b97f4a7c15ULL * (stream + 1))) {}

    /// Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) {
            u1 = uniform();
        }
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double phi = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(phi);
        have_spare_ = true;
        return r * std::cos(phi);
    }

    /// Uniform integer in [0, bound) by rejection.
    std::uint64_t integer(std::uint64_t bound) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t x = gen_();
        while (x >= limit) {
            x = gen_();
        }
        return x % bound;
    }

    /// n angles uniform in [0, 2*pi).
    std::vector<double> angles(int n) {
        std::vector<double> out(static_cast<std::size_t>(n));
        for (double& a : out) {
            a = uniform(0.0, 2.0 * std::numbers::pi);
        }
        return out;
    }

  private:
    // splitmix64 finalizer; decorrelates nearby seeds before feeding mt19937_64
    static std::uint64_t mix(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace quanv
