#include "sqrtw/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace sqrtw {

namespace {

constexpr double kPi = std::numbers::pi;

void check_time(double t) {
    if (!(t > 0.0)) throw std::domain_error("kernel time must be > 0");
}

}  // namespace

Complex schrodinger_kernel(double x, double t) {
    check_time(t);
    return std::polar(1.0 / std::sqrt(4.0 * kPi * t), x * x / (4.0 * t) - kPropagatorPhase);
}

KernelSample schrodinger_kernel_sample(double x, double t) {
    check_time(t);
    return {1.0 / std::sqrt(4.0 * kPi * t), x * x / (4.0 * t) - kPropagatorPhase};
}

double heat_kernel(double x, double t) {
    check_time(t);
    return std::exp(-x * x / (4.0 * t)) / std::sqrt(4.0 * kPi * t);
}

Complex wick_bracket(double x, double t) {
    check_time(t);
    const Complex arg{0.0, x * x / (4.0 * t) - kPropagatorPhase};
    return std::cos(arg) + Complex{0.0, 1.0} * std::sin(arg);
}

double wick_rotate_kernel(double x, double t) {
    const Complex bracket = wick_bracket(x, t);
    return (bracket / std::sqrt(4.0 * kPi * t) * std::exp(-kPropagatorPhase)).real();
}

std::vector<double> wick_rotate_samples(std::span<const KernelSample> samples, double phase_offset) {
    std::vector<double> out;
    out.reserve(samples.size());
    for (const auto& s : samples) out.push_back(s.rho * std::exp(-(s.theta + phase_offset)));
    return out;
}

KernelSample square_sample(Complex z) { return {std::norm(z), 2.0 * std::arg(z)}; }

}  // namespace sqrtw
