#include "sqrtw/sqrt_process.hpp"

#include <cmath>
#include <limits>
#include <new>
#include <string>

namespace sqrtw {

void validate(const SqrtParams& p) {
    if (!std::isfinite(p.mu0) || p.mu0 == 0.0) {
        throw std::invalid_argument("mu0 must be finite and non-zero");
    }
    if (!std::isfinite(p.beta)) {
        throw std::invalid_argument("beta must be finite");
    }
}

GeneralProcessCoeffs scalar_coefficients(const SqrtParams& p) {
    validate(p);
    return {p.mu0, 1.0 / (2.0 * p.mu0), -1.0 / (8.0 * p.mu0 * p.mu0 * p.mu0), 0.0};
}

Complex general_step(const GeneralProcessCoeffs& c, double dw, double dt) {
    const int b = sign_of(dw);
    const double re = (c.kappa + c.xi * (dw * b)) + c.zeta * dt;
    return Complex{re, c.eta * kChiralityWeight} * phi_of_sign(b);
}

namespace {

void check_step_args(double dw, double dt, Complex phi) {
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be > 0");
    if (phi != phi_of_sign(sign_of(dw))) {
        throw std::invalid_argument("phi must equal Phi_1/2(sgn(dw)): 1 for dw >= 0, i otherwise");
    }
}

}  // namespace

Complex sqrt_step_scalar(double dw, double dt, const SqrtParams& params, Complex phi) {
    check_step_args(dw, dt, phi);
    return general_step(scalar_coefficients(params), dw, dt);
}

Complex sqrt_step_drifted(double dw, double dt, const SqrtParams& params, Complex phi) {
    validate(params);
    if (params.mu0 != 0.5) {
        throw std::invalid_argument("the drifted step is only defined at mu0 = 1/2; use sqrt_step_scalar for mu0 = " +
                                    std::to_string(params.mu0));
    }
    check_step_args(dw, dt, phi);
    const int s = sign_of(dw);
    const double re = (0.5 + (dw * s)) + (-1.0 + params.beta * s) * dt;
    return Complex{re, 0.0} * phi;
}

ItoDifferential sqrt_step_scalar_ito(int sign, const SqrtParams& params) {
    const auto c = scalar_coefficients(params);
    const auto bracket = ItoDifferential::constant(c.kappa) + c.xi * ItoDifferential::abs_dw() +
                         c.zeta * ItoDifferential::dt();
    return bracket * phi_of_sign(sign);
}

ItoDifferential sqrt_step_drifted_ito(int sign, const SqrtParams& params) {
    validate(params);
    if (params.mu0 != 0.5) {
        throw std::invalid_argument("the drifted step is only defined at mu0 = 1/2");
    }
    const auto bracket = ItoDifferential::constant(0.5) + ItoDifferential::abs_dw() +
                         (-1.0 + params.beta * sign) * ItoDifferential::dt();
    return bracket * phi_of_sign(sign);
}

Complex sqrt_step(double dw, double dt, const SqrtParams& params) {
    if (params.mu0 == 0.5) {
        return sqrt_step_drifted(dw, dt, params, phi_of_sign(sign_of(dw)));
    }
    if (params.beta != 0.0) {
        throw std::invalid_argument("beta != 0 needs mu0 = 1/2 (the drifted bracket is only defined there)");
    }
    return sqrt_step_scalar(dw, dt, params, phi_of_sign(sign_of(dw)));
}

EnsembleAllocationError::EnsembleAllocationError(std::size_t n_paths, std::size_t n_steps)
    : std::runtime_error("cannot allocate ensemble of " + std::to_string(n_paths) + " paths x " +
                         std::to_string(n_steps) + " steps"),
      n_paths_(n_paths),
      n_steps_(n_steps) {}

template <typename T>
PathEnsemble<T> allocate_ensemble(const TimeGrid& grid, std::size_t n_paths) {
    const std::size_t n = grid.n_steps();
    constexpr std::size_t kMax = std::numeric_limits<std::size_t>::max() / sizeof(T);
    if (n_paths != 0 && (n + 1) > kMax / n_paths) {
        throw EnsembleAllocationError(n_paths, n);
    }
    try {
        PathEnsemble<T> e{grid, std::vector<std::uint64_t>(n_paths), {}, {}};
        e.increments.resize(n_paths * n);
        e.values.resize(n_paths * (n + 1));
        return e;
    } catch (const std::bad_alloc&) {
        throw EnsembleAllocationError(n_paths, n);
    } catch (const std::length_error&) {
        throw EnsembleAllocationError(n_paths, n);
    }
}

template PathEnsemble<double> allocate_ensemble<double>(const TimeGrid&, std::size_t);
template PathEnsemble<Complex> allocate_ensemble<Complex>(const TimeGrid&, std::size_t);

SqrtPathSimulator::SqrtPathSimulator(const TimeGrid& grid, const SqrtParams& params, std::uint64_t master_seed)
    : grid_(grid),
      params_(params),
      master_seed_(master_seed),
      dw_(grid.n_steps()),
      w_(grid.n_steps() + 1),
      dx_(grid.n_steps()),
      x_(grid.n_steps() + 1) {
    validate(params);
    // Rejects beta != 0 at mu0 != 1/2 before any path is run.
    (void)sqrt_step(0.0, grid.dt(), params);
}

const SqrtPathView& SqrtPathSimulator::run(std::uint64_t path_index) {
    RandomStream rng = make_rng(SeedSpec{master_seed_, path_index});
    fill_wiener(grid_, rng, dw_);
    const double dt = grid_.dt();
    w_[0] = 0.0;
    x_[0] = Complex{};
    for (std::size_t k = 0; k < dw_.size(); ++k) {
        w_[k + 1] = w_[k] + dw_[k];
        x_[k + 1] = x_[k] + sqrt_step(dw_[k], dt, params_);
        dx_[k] = x_[k + 1] - x_[k];
    }
    view_ = SqrtPathView{path_index, dw_, w_, dx_, x_};
    return view_;
}

SqrtSimulation simulate_sqrt(const TimeGrid& grid, std::size_t n_paths, const SqrtParams& params,
                             std::uint64_t master_seed, unsigned threads, std::uint64_t first_path) {
    SqrtSimulation out{allocate_ensemble<double>(grid, n_paths), allocate_ensemble<Complex>(grid, n_paths)};
    const std::size_t n = grid.n_steps();
    for_each_sqrt_path(
        grid, n_paths, params, master_seed, threads,
        [&](const SqrtPathView& v) {
            const std::size_t row = v.path_index - first_path;
            out.wiener.path_indices[row] = v.path_index;
            out.sqrt.path_indices[row] = v.path_index;
            std::copy(v.dw.begin(), v.dw.end(), out.wiener.increments.begin() + static_cast<std::ptrdiff_t>(row * n));
            std::copy(v.w.begin(), v.w.end(), out.wiener.values.begin() + static_cast<std::ptrdiff_t>(row * (n + 1)));
            std::copy(v.dx.begin(), v.dx.end(), out.sqrt.increments.begin() + static_cast<std::ptrdiff_t>(row * n));
            std::copy(v.x.begin(), v.x.end(), out.sqrt.values.begin() + static_cast<std::ptrdiff_t>(row * (n + 1)));
        },
        first_path);
    return out;
}

ComplexPathEnsemble integrate_sqrt(const TimeGrid& grid, std::size_t n_paths, const SqrtParams& params,
                                   std::uint64_t master_seed, unsigned threads) {
    return simulate_sqrt(grid, n_paths, params, master_seed, threads).sqrt;
}

std::vector<ComplexPathEnsemble> integrate_general(const TimeGrid& grid, std::size_t n_paths,
                                                   std::span<const GeneralProcessCoeffs> coeffs,
                                                   std::uint64_t master_seed, unsigned threads) {
    if (coeffs.empty()) {
        throw std::invalid_argument("integrate_general needs at least one coefficient tuple");
    }
    for (const auto& c : coeffs) {
        if (!std::isfinite(c.kappa) || !std::isfinite(c.xi) || !std::isfinite(c.zeta) || !std::isfinite(c.eta)) {
            throw std::invalid_argument("generalized process coefficients must be finite");
        }
    }
    const std::size_t n = grid.n_steps();
    const double dt = grid.dt();
    const double scale = std::sqrt(dt);
    std::vector<ComplexPathEnsemble> out;
    out.reserve(coeffs.size());
    for (std::size_t a = 0; a < coeffs.size(); ++a) {
        auto ens = allocate_ensemble<Complex>(grid, n_paths);
        const auto c = coeffs[a];
        const auto stream = StreamId::direction(static_cast<std::uint32_t>(a));
        parallel_for(n_paths, threads, 64, [&](std::size_t b, std::size_t e, unsigned) {
            for (std::size_t p = b; p < e; ++p) {
                RandomStream rng(SeedSpec{master_seed, p}, stream);
                ens.path_indices[p] = p;
                Complex* inc = ens.increments.data() + p * n;
                Complex* val = ens.values.data() + p * (n + 1);
                val[0] = Complex{};
                for (std::size_t k = 0; k < n; ++k) {
                    const double dw = scale * rng.normal();
                    val[k + 1] = val[k] + general_step(c, dw, dt);
                    inc[k] = val[k + 1] - val[k];
                }
            }
        });
        out.push_back(std::move(ens));
    }
    return out;
}

}  // namespace sqrtw
