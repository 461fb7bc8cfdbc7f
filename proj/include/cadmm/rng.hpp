#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace cadmm {

/// Seedable random source with a fully specified output sequence.
///
/// The engine is std::mt19937_64 (whose stream is pinned by the standard);
/// the normal transform is a fixed Box-Muller, because the stdlib's
/// std::normal_distribution output is implementation-defined and would break
/// cross-platform reproducibility of generated instances.
///
/// Draw accounting (for documenting stream layouts): one standard_normal()
/// and one standard_complex_normal() each consume exactly two raw 64-bit
/// engine words. No state is carried between calls.
class PortableRng {
  public:
    explicit PortableRng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform double in (0, 1].
    double uniform01() {
        return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
    }

    /// N(0, 1) real draw. Consumes two engine words; the second Box-Muller
    /// output is discarded.
    double standard_normal() {
        auto [z0, z1] = normal_pair();
        (void)z1;
        return z0;
    }

    /// CN(0, 1) draw: real and imaginary parts independent N(0, 1/2), so the
    /// entry variance E|z|^2 is 1. Consumes two engine words.
    std::complex<double> standard_complex_normal() {
        auto [z0, z1] = normal_pair();
        return {z0 * kInvSqrt2, z1 * kInvSqrt2};
    }

    std::uint64_t raw() { return engine_(); }

  private:
    static constexpr double kInvSqrt2 = 0.70710678118654752440;

    std::pair<double, double> normal_pair() {
        const double u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 2.0 * M_PI * u2;
        return {r * std::cos(t), r * std::sin(t)};
    }

    std::mt19937_64 engine_;
};

}  // namespace cadmm
