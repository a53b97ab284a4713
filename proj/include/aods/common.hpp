#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

namespace aods {

// Input files or derived data violate a documented contract.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Battery stepped below zero: the controller failed to prevent it. Fatal.
struct EnergyFault : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Internal inconsistency in the event loop or state machine. Fatal.
struct SimFault : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr double kWalkSpeedMph = 3.0;

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Deterministic RNG wrapper. All draws go through explicit arithmetic so
// that results do not depend on the standard library's distribution
// implementations.
class Rng {
  public:
    explicit Rng(uint64_t seed) : eng_(splitmix64(seed)) {}

    // Child stream whose draws are independent of sibling streams.
    static Rng stream(uint64_t seed, std::string_view name) {
        uint64_t h = 1469598103934665603ULL;
        for (char c : name) {
            h ^= static_cast<unsigned char>(c);
            h *= 1099511628211ULL;
        }
        return Rng(splitmix64(seed ^ h));
    }

    uint64_t next_u64() { return eng_(); }

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n). Rejection sampling keeps it unbiased.
    size_t uniform_index(size_t n) {
        if (n == 0) throw std::invalid_argument("uniform_index: n must be positive");
        const uint64_t bound = ~uint64_t{0} - (~uint64_t{0} % n);
        uint64_t x;
        do {
            x = next_u64();
        } while (x >= bound);
        return static_cast<size_t>(x % n);
    }

    // Standard normal via Box-Muller (always consumes two draws).
    double normal() {
        double u1 = uniform();
        double u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

  private:
    std::mt19937_64 eng_;
};

}  // namespace aods
