#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "sqrtw/rng.hpp"

namespace sqrtw {

using Complex = std::complex<double>;

/// Uniform discretization of [t0, t0 + n_steps * dt].
class TimeGrid {
public:
    /// Throws std::invalid_argument naming the offending field when dt is
    /// not a finite positive number or n_steps is zero.
    TimeGrid(double dt, std::size_t n_steps, double t0 = 0.0);

    double t0() const noexcept { return t0_; }
    double dt() const noexcept { return dt_; }
    std::size_t n_steps() const noexcept { return n_steps_; }
    double horizon() const noexcept { return static_cast<double>(n_steps_) * dt_; }
    double time(std::size_t k) const noexcept { return t0_ + static_cast<double>(k) * dt_; }

    friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

private:
    double dt_;
    std::size_t n_steps_;
    double t0_;
};

struct WienerIncrements {
    TimeGrid grid;
    std::vector<double> dw;

    /// Sampled path W(t_k), k = 0..n_steps, with W(t0) = 0.
    std::vector<double> cumulative() const;
};

/// Elements are exactly +1 or -1.
struct SignSequence {
    std::vector<int> s;
};

/// Elements are exactly 1+0i or 0+1i.
struct PhiSequence {
    std::vector<Complex> phi;
};

/// Sign convention shared by every module: sgn(0) = +1.
constexpr int sign_of(double x) noexcept { return x >= 0.0 ? 1 : -1; }

/// (1+b)/2 + i(1-b)/2 for b in {+1, -1}.
constexpr Complex phi_of_sign(int b) noexcept { return b > 0 ? Complex{1.0, 0.0} : Complex{0.0, 1.0}; }

/// Fills `dw` with n_steps draws of N(0, dt).
void fill_wiener(const TimeGrid& grid, RandomStream& rng, std::span<double> dw);

WienerIncrements sample_wiener(const TimeGrid& grid, RandomStream& rng);

SignSequence sign_of(const WienerIncrements& w);
std::vector<double> abs_of(const WienerIncrements& w);

PhiSequence phi_from_bernoulli(const SignSequence& b);

/// (1-i)/2 sgn(dw) + (1+i)/2, element-wise.
PhiSequence phi_half(const WienerIncrements& w);

}  // namespace sqrtw
