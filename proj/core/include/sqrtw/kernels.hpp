#pragma once

#include <numbers>
#include <span>
#include <vector>

#include "sqrtw/paths.hpp"

namespace sqrtw {

/// A complex value in polar form. theta is kept unwrapped: the Wick map
/// theta -> exp(-theta) is not periodic, so reducing theta modulo 2 pi would
/// change the result.
struct KernelSample {
    double rho = 0.0;
    double theta = 0.0;
};

/// Phase of the free propagator prefactor (4 pi i t)^(-1/2) on the principal
/// branch is -pi/4; the sample Wick map removes it by default.
inline constexpr double kPropagatorPhase = std::numbers::pi / 4.0;

/// (4 pi i t)^(-1/2) exp(i x^2 / 4t), principal branch.
/// Throws std::domain_error for t <= 0.
Complex schrodinger_kernel(double x, double t);

/// The Schrodinger kernel as an unwrapped polar sample:
/// rho = (4 pi t)^(-1/2), theta = x^2/4t - pi/4.
KernelSample schrodinger_kernel_sample(double x, double t);

/// (4 pi t)^(-1/2) exp(-x^2 / 4t). Throws std::domain_error for t <= 0.
double heat_kernel(double x, double t);

/// cos(i theta') + i sin(i theta') with theta' = x^2/4t - pi/4, evaluated with
/// complex trigonometric functions. Mathematically real and equal to
/// exp(-theta').
Complex wick_bracket(double x, double t);

/// The Wick-rotated Schrodinger kernel
///   (4 pi t)^(-1/2) [cos(i theta') + i sin(i theta')] exp(-pi/4),
/// which equals heat_kernel(x, t). The cancellation cosh - sinh inside the
/// bracket loses about exp(theta') ulps, so the absolute agreement degrades
/// for x^2/4t beyond ~15. Throws std::domain_error for t <= 0.
double wick_rotate_kernel(double x, double t);

/// Sample-level Wick map rho e^{i theta} -> rho exp(-(theta + phase_offset)).
/// With the default offset a Schrodinger-kernel sample maps onto the heat
/// kernel value at the same (x, t); phase_offset = 0 gives rho exp(-theta).
std::vector<double> wick_rotate_samples(std::span<const KernelSample> samples,
                                        double phase_offset = kPropagatorPhase);

/// Polar form of z^2 with theta = 2 arg(z), so the phase is continuous in z
/// across the negative real axis of z^2.
KernelSample square_sample(Complex z);

}  // namespace sqrtw
