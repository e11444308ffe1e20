#include "sqrtw/fokker_planck.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace sqrtw {

namespace {
constexpr double kPi = std::numbers::pi;
}

FPParams FPParams::from_sqrt_process(double beta) {
    const Complex c = Complex{0.5, 0.5} - beta * Complex{0.5, -0.5};
    return {-c, Complex{0.0, -0.25}, beta};
}

Complex fp_analytic_solution(double x, double t, const FPParams& p) {
    if (!(t > 0.0)) throw std::domain_error("fp_analytic_solution: t must be > 0");
    if (p.diffusion == Complex{}) throw std::domain_error("fp_analytic_solution: diffusion must be non-zero");
    const Complex four_dt = 4.0 * p.diffusion * t;
    const Complex shift = x - p.drift * t;
    return std::exp(-shift * shift / four_dt) / std::sqrt(kPi * four_dt);
}

Complex fp_gaussian_solution(double x, double t, const FPParams& p, double sigma0, double x0) {
    const Complex s2 = sigma0 * sigma0 + 2.0 * p.diffusion * t;
    if (!(s2.real() > 0.0)) throw std::domain_error("fp_gaussian_solution: Re(sigma0^2 + 2 D t) must be > 0");
    const Complex shift = x - x0 - p.drift * t;
    return std::exp(-shift * shift / (2.0 * s2)) / std::sqrt(2.0 * kPi * s2);
}

double fp_gaussian_modulus_width(double t, const FPParams& p, double sigma0) {
    const Complex s2 = sigma0 * sigma0 + 2.0 * p.diffusion * t;
    const double re_inv = (1.0 / s2).real();
    if (!(re_inv > 0.0)) throw std::domain_error("fp_gaussian_modulus_width: profile is not localized");
    return 1.0 / std::sqrt(re_inv);
}

GridFunction sample_grid_function(double x_min, double x_max, std::size_t n_points,
                                  const std::function<Complex(double)>& f) {
    if (!(x_min < x_max)) throw std::invalid_argument("grid needs x_min < x_max");
    if (n_points < 3) throw std::invalid_argument("grid needs at least 3 points");
    GridFunction g{x_min, x_max, std::vector<Complex>(n_points)};
    for (std::size_t i = 0; i < n_points; ++i) g.values[i] = f(g.x(i));
    return g;
}

Complex integral(const GridFunction& g) {
    if (g.values.size() < 2) return {};
    Complex acc{};
    for (std::size_t i = 1; i + 1 < g.values.size(); ++i) acc += g.values[i];
    acc += 0.5 * (g.values.front() + g.values.back());
    return acc * g.dx();
}

FPDomain default_fp_domain(const FPParams& p, double sigma0, double t_final, std::size_t n_points) {
    const double w = std::max(sigma0, fp_gaussian_modulus_width(t_final, p, sigma0));
    const double c_end = p.drift.real() * t_final;
    const double lo = std::min(0.0, c_end) - 10.0 * w;
    const double hi = std::max(0.0, c_end) + 10.0 * w;
    return {lo, hi, n_points};
}

double fp_max_mode_growth(const FPParams& p, double dx) {
    // Symbol of the centred stencil for the mode exp(i k x), theta = k dx:
    //   lambda = -drift * i sin(theta)/dx + D (2 cos(theta) - 2)/dx^2.
    constexpr int kModes = 4096;
    double worst = 0.0;
    for (int m = -kModes; m <= kModes; ++m) {
        const double theta = kPi * m / kModes;
        const Complex lambda = -p.drift * Complex{0.0, std::sin(theta) / dx} +
                               p.diffusion * ((2.0 * std::cos(theta) - 2.0) / (dx * dx));
        worst = std::max(worst, lambda.real());
    }
    return worst;
}

CrankNicolsonFP::CrankNicolsonFP(GridFunction initial, const FPParams& p, double dt)
    : psi_(std::move(initial)), p_(p), dt_(dt) {
    const std::size_t n = psi_.n_points();
    if (!(dt > 0.0)) throw FPConfigError("time step dt must be > 0");
    if (n < 5) throw FPConfigError("grid needs at least 5 points");
    const double dx = psi_.dx();

    const double courant = std::abs(p.drift) * dt / dx;
    if (courant > 0.5) {
        std::ostringstream os;
        os << "advective bound |drift| dt/dx <= 1/2 violated: " << courant;
        throw FPConfigError(os.str());
    }
    const double scale = std::abs(p.drift) / dx + std::abs(p.diffusion) / (dx * dx);
    const double growth = fp_max_mode_growth(p, dx);
    if (growth > 1e-12 * scale) {
        std::ostringstream os;
        os << "von Neumann bound violated: grid modes grow at rate " << growth
           << " (needs Re(diffusion) >= 0 and a real drift)";
        throw FPConfigError(os.str());
    }
    double peak = 0.0;
    for (const auto& v : psi_.values) peak = std::max(peak, std::abs(v));
    if (std::abs(psi_.values.front()) > 1e-8 * peak || std::abs(psi_.values.back()) > 1e-8 * peak) {
        throw FPConfigError("domain width bound violated: initial profile exceeds 1e-8 of its peak at the boundary");
    }
    psi_.values.front() = Complex{};
    psi_.values.back() = Complex{};

    lo_ = p.drift / (2.0 * dx) + p.diffusion / (dx * dx);
    di_ = -2.0 * p.diffusion / (dx * dx);
    up_ = -p.drift / (2.0 * dx) + p.diffusion / (dx * dx);

    // (I - dt/2 L) psi^{n+1} = (I + dt/2 L) psi^n on the interior nodes.
    const double h = 0.5 * dt;
    const Complex a = -h * lo_, b = 1.0 - h * di_, c = -h * up_;
    const std::size_t m = n - 2;
    cprime_.resize(m);
    inv_denom_.resize(m);
    rhs_.resize(m);
    Complex denom = b;
    inv_denom_[0] = 1.0 / denom;
    cprime_[0] = c * inv_denom_[0];
    for (std::size_t j = 1; j < m; ++j) {
        denom = b - a * cprime_[j - 1];
        inv_denom_[j] = 1.0 / denom;
        cprime_[j] = c * inv_denom_[j];
    }
}

void CrankNicolsonFP::step() {
    auto& v = psi_.values;
    const std::size_t m = v.size() - 2;
    const double h = 0.5 * dt_;
    const Complex a = -h * lo_;

    for (std::size_t j = 0; j < m; ++j) {
        const std::size_t i = j + 1;
        rhs_[j] = v[i] + h * (lo_ * v[i - 1] + di_ * v[i] + up_ * v[i + 1]);
    }
    // Forward sweep then back substitution; v[0] = v[n-1] = 0 throughout.
    rhs_[0] *= inv_denom_[0];
    for (std::size_t j = 1; j < m; ++j) rhs_[j] = (rhs_[j] - a * rhs_[j - 1]) * inv_denom_[j];
    v[m] = rhs_[m - 1];
    for (std::size_t j = m - 1; j-- > 0;) {
        rhs_[j] -= cprime_[j] * rhs_[j + 1];
        v[j + 1] = rhs_[j];
    }
    time_ += dt_;
    ++steps_;
}

void CrankNicolsonFP::advance(std::size_t n_steps) {
    for (std::size_t s = 0; s < n_steps; ++s) step();
}

GridFunction fp_evolve(const GridFunction& initial, const FPParams& p, double dt, std::size_t n_steps,
                       std::vector<Complex>* mass_history) {
    CrankNicolsonFP solver(initial, p, dt);
    if (mass_history) {
        mass_history->clear();
        mass_history->reserve(n_steps + 1);
        mass_history->push_back(integral(solver.state()));
    }
    for (std::size_t s = 0; s < n_steps; ++s) {
        solver.step();
        if (mass_history) mass_history->push_back(integral(solver.state()));
    }
    return solver.state();
}

}  // namespace sqrtw
