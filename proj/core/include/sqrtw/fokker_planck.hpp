#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

#include "sqrtw/paths.hpp"

namespace sqrtw {

/// Coefficients of
///
///     d psi/dt = -drift * d psi/dx + diffusion * d^2 psi/dx^2.
///
/// `drift` is the transport velocity. The square-root process yields the
/// equation with +c d psi/dx, c = (1+i)/2 - beta (1-i)/2, so its velocity is
/// drift = -c = -(1+i)/2 + beta (1-i)/2, and diffusion = -i/4.
struct FPParams {
    Complex drift{};
    Complex diffusion{1.0, 0.0};
    double beta = 0.0;

    static FPParams from_sqrt_process(double beta);
    static FPParams heat(double diffusion = 1.0) { return {Complex{}, Complex{diffusion, 0.0}, 0.0}; }
};

/// Fundamental solution (4 pi D t)^(-1/2) exp(-(x - drift t)^2 / (4 D t)),
/// principal square root. Throws std::domain_error for t <= 0 or D == 0.
Complex fp_analytic_solution(double x, double t, const FPParams& p);

/// Evolution of the normalized Gaussian of width sigma0 centred at x0:
/// (2 pi s^2)^(-1/2) exp(-(x - x0 - drift t)^2 / (2 s^2)), s^2 = sigma0^2 + 2 D t.
/// Requires Re(s^2) > 0; throws std::domain_error otherwise.
Complex fp_gaussian_solution(double x, double t, const FPParams& p, double sigma0, double x0 = 0.0);

/// Width of |psi| for the evolved Gaussian: 1 / sqrt(Re(1/s^2)).
double fp_gaussian_modulus_width(double t, const FPParams& p, double sigma0);

/// Complex samples on a uniform grid including both end points.
struct GridFunction {
    double x_min = 0.0;
    double x_max = 1.0;
    std::vector<Complex> values;

    std::size_t n_points() const noexcept { return values.size(); }
    double dx() const noexcept { return (x_max - x_min) / static_cast<double>(values.size() - 1); }
    double x(std::size_t i) const noexcept { return x_min + dx() * static_cast<double>(i); }
};

/// Throws std::invalid_argument unless x_min < x_max and n_points >= 3.
GridFunction sample_grid_function(double x_min, double x_max, std::size_t n_points,
                                  const std::function<Complex(double)>& f);

/// Trapezoidal integral.
Complex integral(const GridFunction& g);

/// Domain of +-10 modulus widths around the (real part of the) drifted
/// centre, with `n_points` nodes.
struct FPDomain {
    double x_min;
    double x_max;
    std::size_t n_points;
};
FPDomain default_fp_domain(const FPParams& p, double sigma0, double t_final, std::size_t n_points = 4097);

/// Raised by fp_evolve before any stepping when a precondition fails. The
/// message names the violated bound.
class FPConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Largest real part of the semi-discrete operator's eigenvalues over all
/// grid modes. Crank-Nicolson amplifies some mode iff this is positive.
double fp_max_mode_growth(const FPParams& p, double dx);

/// Crank-Nicolson integrator with the end values pinned to 0.
class CrankNicolsonFP {
public:
    /// Throws FPConfigError if dt <= 0, the grid has fewer than 5 points,
    /// |drift| dt / dx > 1/2, any grid mode grows, or the initial profile is
    /// not negligible (> 1e-8 of its maximum) at the boundaries.
    CrankNicolsonFP(GridFunction initial, const FPParams& p, double dt);

    void step();
    void advance(std::size_t n_steps);

    const GridFunction& state() const noexcept { return psi_; }
    double time() const noexcept { return time_; }
    std::size_t steps_taken() const noexcept { return steps_; }

private:
    GridFunction psi_;
    FPParams p_;
    double dt_;
    double time_ = 0.0;
    std::size_t steps_ = 0;
    Complex lo_, di_, up_;           // operator stencil
    std::vector<Complex> cprime_;    // Thomas forward sweep, upper factors
    std::vector<Complex> inv_denom_; // Thomas forward sweep, 1/pivot
    std::vector<Complex> rhs_;
};

/// Evolves `initial` for n_steps of size dt. If mass_history is given, it
/// receives the integral after every step (n_steps + 1 entries, starting
/// with the initial mass).
GridFunction fp_evolve(const GridFunction& initial, const FPParams& p, double dt, std::size_t n_steps,
                       std::vector<Complex>* mass_history = nullptr);

}  // namespace sqrtw
