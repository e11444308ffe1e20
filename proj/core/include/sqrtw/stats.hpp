#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "sqrtw/paths.hpp"
#include "sqrtw/sqrt_process.hpp"

namespace sqrtw {

/// Which estimator convention produced a statistic.
///
///  - IncrementNormalized: moments of the per-step increments. Brownian
///    increments are divided by dt, square-root increments by mu0 (mean) and
///    mu0^2 (pseudo-variance); D = variance / 2.
///  - PathTemporal: per-path time averages of the sampled path values over
///    the grid, then averaged over paths; D = variance / 2.
///  - PaperReported: the convention under which the published reference
///    table is reproduced. Brownian: path-temporal mean and variance with
///    D = sqrt(variance) / 2. Square root: increment mean / mu0, reported
///    variance = D = pseudo-variance / (2 mu0^2).
enum class EstimatorTag { IncrementNormalized, PathTemporal, PaperReported };

std::string_view to_string(EstimatorTag tag);

struct ComplexStat {
    Complex value{};
    /// Component-wise standard error; empty when it is undefined (n < 2 or
    /// too few batches).
    std::optional<Complex> std_error;
    std::size_t n = 0;
};

struct SummaryStats {
    ComplexStat mean;
    ComplexStat pseudo_variance;
    ComplexStat diffusion;
    EstimatorTag estimator_tag = EstimatorTag::IncrementNormalized;
};

/// Arithmetic mean; std_error = component sample standard deviation / sqrt(n).
/// Throws std::invalid_argument on empty input.
ComplexStat complex_mean(std::span<const Complex> samples);

/// (1/(n-1)) sum (z_k - zbar)^2 with complex squaring (no conjugate).
/// std_error from batch means over `n_batches` contiguous batches.
/// Throws std::invalid_argument when n < 2.
ComplexStat complex_pseudo_variance(std::span<const Complex> samples, std::size_t n_batches = 100);

/// Streaming first and second moments of complex samples, mergeable in a
/// fixed order (Welford update, Chan merge).
class ComplexMoments {
public:
    void push(Complex z) noexcept;
    void merge(const ComplexMoments& other) noexcept;

    std::size_t count() const noexcept { return n_; }
    Complex mean() const noexcept { return {mean_re_, mean_im_}; }
    /// Sum of (z - mean)^2, complex square.
    Complex pseudo_m2() const noexcept { return {m2_re_ - m2_im_, 2.0 * co_}; }
    double m2_re() const noexcept { return m2_re_; }
    double m2_im() const noexcept { return m2_im_; }

    /// Unbiased pseudo-variance pseudo_m2 / (n - 1); requires n >= 2.
    Complex pseudo_variance() const noexcept { return pseudo_m2() / static_cast<double>(n_ - 1); }
    /// Component sample standard deviations.
    Complex component_sd() const noexcept;

private:
    std::size_t n_ = 0;
    double mean_re_ = 0.0, mean_im_ = 0.0;
    double m2_re_ = 0.0, m2_im_ = 0.0, co_ = 0.0;
};

/// Everything Table-1 style estimators need from one path.
struct PathSummary {
    std::uint64_t path_index = 0;
    double w_temporal_mean = 0.0;  // mean of W(t_k), k = 0..n
    double w_temporal_var = 0.0;   // population variance of W(t_k)
    double w_end = 0.0;
    ComplexMoments dw;             // Wiener increments (imaginary part 0)
    ComplexMoments dx;             // square-root increments
    Complex x_temporal_mean{};     // mean of X(t_k), k = 0..n
    Complex x_temporal_pvar{};     // population pseudo-variance of X(t_k)
    Complex x_end{};
};

PathSummary summarize_path(std::uint64_t path_index, std::span<const double> dw, std::span<const double> w,
                           std::span<const Complex> dx, std::span<const Complex> x);
PathSummary summarize_path(const SqrtPathView& view);

struct Table1Statistics {
    std::size_t n_paths = 0;
    std::size_t n_steps = 0;
    double dt = 0.0;
    SqrtParams params;
    std::vector<SummaryStats> brownian;
    std::vector<SummaryStats> square_root;

    /// Throws std::out_of_range if the tag is missing.
    const SummaryStats& brownian_row(EstimatorTag tag) const;
    const SummaryStats& square_root_row(EstimatorTag tag) const;
};

/// Number of path batches used for batch-means standard errors.
inline constexpr std::size_t kBatchCount = 100;

/// Reduces per-path summaries in path_index order (the input order is
/// irrelevant). Throws std::invalid_argument for fewer than two paths or
/// duplicated path indices.
Table1Statistics table1_from_summaries(std::vector<PathSummary> summaries, const TimeGrid& grid,
                                       const SqrtParams& params);

/// Table-1 estimators on stored ensembles of the same paths. Throws
/// std::invalid_argument if the two ensembles do not have the same shape and
/// path labels.
Table1Statistics table1_statistics(const RealPathEnsemble& wiener, const ComplexPathEnsemble& sqrt_ens,
                                   const SqrtParams& params);

/// Streams the protocol without storing the ensembles.
Table1Statistics run_table1(const TimeGrid& grid, std::size_t n_paths, const SqrtParams& params,
                            std::uint64_t master_seed, unsigned threads = 0,
                            std::vector<PathSummary>* summaries_out = nullptr);

}  // namespace sqrtw
