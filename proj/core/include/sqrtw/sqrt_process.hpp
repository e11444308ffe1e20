#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "sqrtw/ito.hpp"
#include "sqrtw/parallel.hpp"
#include "sqrtw/paths.hpp"

namespace sqrtw {

/// Scale factor mu0 and drift constant beta of the square-root process.
struct SqrtParams {
    double mu0 = 0.5;
    double beta = 0.0;
};

/// Throws std::invalid_argument when mu0 is zero or either field is not finite.
void validate(const SqrtParams& p);

/// Coefficients of one direction of the generalized process
///   (kappa + xi * dw * b + zeta * dt + i * eta * g5) * phi.
struct GeneralProcessCoeffs {
    double kappa = 0.0;
    double xi = 0.0;
    double zeta = 0.0;
    double eta = 0.0;
};

/// Coefficients that make the generalized step equal the undrifted
/// square-root step: kappa = mu0, xi = 1/(2 mu0), zeta = -1/(8 mu0^3).
GeneralProcessCoeffs scalar_coefficients(const SqrtParams& p);

/// Chirality weight used by the generalized process. Only its role as a
/// fixed phase weight on the eta term is modelled.
inline constexpr double kChiralityWeight = 1.0;

/// One step of the generalized process. b = sgn(dw) and phi = Phi(b).
Complex general_step(const GeneralProcessCoeffs& c, double dw, double dt);

/// (mu0 + |dw|/(2 mu0) - dt/(8 mu0^3)) * phi. Throws std::invalid_argument if
/// phi is not the Phi_1/2 value of sgn(dw) or dt <= 0.
Complex sqrt_step_scalar(double dw, double dt, const SqrtParams& params, Complex phi);

/// [1/2 + |dw| + (-1 + beta sgn(dw)) dt] * phi. Only defined at mu0 = 1/2;
/// any other mu0 throws std::invalid_argument.
Complex sqrt_step_drifted(double dw, double dt, const SqrtParams& params, Complex phi);

/// Ito-algebra forms of the two steps, for identity checks.
ItoDifferential sqrt_step_scalar_ito(int sign, const SqrtParams& params);
ItoDifferential sqrt_step_drifted_ito(int sign, const SqrtParams& params);

/// Step rule used by the ensemble integrator: the drifted bracket at
/// mu0 = 1/2, otherwise the scalar bracket (which requires beta = 0).
Complex sqrt_step(double dw, double dt, const SqrtParams& params);

/// Thrown when an ensemble cannot be allocated.
class EnsembleAllocationError : public std::runtime_error {
public:
    EnsembleAllocationError(std::size_t n_paths, std::size_t n_steps);
    std::size_t n_paths() const noexcept { return n_paths_; }
    std::size_t n_steps() const noexcept { return n_steps_; }

private:
    std::size_t n_paths_;
    std::size_t n_steps_;
};

template <typename T>
struct PathEnsemble {
    TimeGrid grid;
    std::vector<std::uint64_t> path_indices;
    std::vector<T> increments;  // n_paths x n_steps, row-major
    std::vector<T> values;      // n_paths x (n_steps + 1), values[p][0] = 0

    std::size_t n_paths() const noexcept { return path_indices.size(); }
    std::size_t n_steps() const noexcept { return grid.n_steps(); }

    std::span<const T> increments_of(std::size_t row) const {
        return {increments.data() + row * n_steps(), n_steps()};
    }
    std::span<const T> values_of(std::size_t row) const {
        return {values.data() + row * (n_steps() + 1), n_steps() + 1};
    }
};

using RealPathEnsemble = PathEnsemble<double>;
using ComplexPathEnsemble = PathEnsemble<Complex>;

/// Allocates an ensemble with zeroed storage; throws EnsembleAllocationError.
template <typename T>
PathEnsemble<T> allocate_ensemble(const TimeGrid& grid, std::size_t n_paths);

/// Everything produced for one path of the square-root simulation. The spans
/// point into simulator-owned buffers and stay valid until the next run().
struct SqrtPathView {
    std::uint64_t path_index = 0;
    std::span<const double> dw;      // Wiener increments
    std::span<const double> w;       // W(t_k), k = 0..n
    std::span<const Complex> dx;     // square-root increments, dx[k] = x[k+1] - x[k] exactly
    std::span<const Complex> x;      // X(t_k), k = 0..n
};

/// Reusable per-thread integrator for single paths.
class SqrtPathSimulator {
public:
    SqrtPathSimulator(const TimeGrid& grid, const SqrtParams& params, std::uint64_t master_seed);

    const SqrtPathView& run(std::uint64_t path_index);

private:
    TimeGrid grid_;
    SqrtParams params_;
    std::uint64_t master_seed_;
    std::vector<double> dw_, w_;
    std::vector<Complex> dx_, x_;
    SqrtPathView view_;
};

/// Calls visit(view) for paths first_path .. first_path + n_paths - 1.
/// Invocations happen concurrently on up to `threads` workers (0 = all
/// cores); each path is visited exactly once.
template <typename Visitor>
void for_each_sqrt_path(const TimeGrid& grid, std::size_t n_paths, const SqrtParams& params,
                        std::uint64_t master_seed, unsigned threads, Visitor&& visit,
                        std::uint64_t first_path = 0) {
    validate(params);
    const unsigned workers = threads == 0 ? default_threads() : threads;
    std::vector<std::optional<SqrtPathSimulator>> sims(workers);
    parallel_for(n_paths, workers, 64, [&](std::size_t b, std::size_t e, unsigned worker) {
        auto& sim = sims[worker];
        if (!sim) sim.emplace(grid, params, master_seed);
        for (std::size_t p = b; p < e; ++p) visit(sim->run(first_path + p));
    });
}

/// Wiener driver and square-root response of the same paths.
struct SqrtSimulation {
    RealPathEnsemble wiener;
    ComplexPathEnsemble sqrt;
};

/// Euler-Maruyama integration of the square-root process. Deterministic in
/// (grid, params, master_seed, first_path) and independent of `threads`.
SqrtSimulation simulate_sqrt(const TimeGrid& grid, std::size_t n_paths, const SqrtParams& params,
                             std::uint64_t master_seed, unsigned threads = 0, std::uint64_t first_path = 0);

ComplexPathEnsemble integrate_sqrt(const TimeGrid& grid, std::size_t n_paths, const SqrtParams& params,
                                   std::uint64_t master_seed, unsigned threads = 0);

/// Integrates the generalized process, one ensemble per coefficient tuple.
/// Direction A draws from its own stream; its Bernoulli sign is sgn(dw_A).
/// Throws std::invalid_argument for an empty list or non-finite coefficients.
std::vector<ComplexPathEnsemble> integrate_general(const TimeGrid& grid, std::size_t n_paths,
                                                   std::span<const GeneralProcessCoeffs> coeffs,
                                                   std::uint64_t master_seed, unsigned threads = 0);

}  // namespace sqrtw
