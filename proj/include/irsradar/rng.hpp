#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace irsradar {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Stable seed derivation; chain calls to mix in more coordinates.
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t salt) {
    return splitmix64(base ^ (salt + 1) * 0xD1B54A32D192ED03ULL);
}

/// Seed for one Monte-Carlo trial, independent of execution order.
inline std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t gamma_index,
                                std::uint64_t trial_index) {
    return mix_seed(mix_seed(splitmix64(master_seed), gamma_index), trial_index);
}

/// mt19937_64 stream with a hand-rolled Box-Muller transform so that noise
/// sequences are reproducible across standard libraries.
class TrialRng {
public:
    explicit TrialRng(std::uint64_t seed) : eng_(seed) {}

    // Uniform in [0, 1).
    double uniform() { return (eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Circularly-symmetric complex Gaussian with E|n|^2 = variance.
    std::complex<double> complex_gaussian(double variance) {
        const double u1 = ((eng_() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
        const double u2 = uniform();
        const double r = std::sqrt(-variance * std::log(u1));
        return {r * std::cos(2.0 * 3.14159265358979323846 * u2),
                r * std::sin(2.0 * 3.14159265358979323846 * u2)};
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace irsradar
