#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace sqrtw {

enum class Normalization { Counts, Density };

/// Uniform bins; every bin is half-open except the last, which is closed.
struct Histogram {
    std::vector<double> bin_edges;
    std::vector<std::uint64_t> counts;
    Normalization normalization = Normalization::Counts;

    std::size_t total() const noexcept;
    std::vector<double> centers() const;
    /// Raw counts, or counts / (total * width) for density normalization.
    std::vector<double> heights() const;
};

/// ceil(log2 n) + 1.
std::size_t sturges_bins(std::size_t n_samples);

/// Throws std::invalid_argument for empty or non-finite samples or zero bins.
/// If every sample is equal the bins span [x - 0.5, x + 0.5].
Histogram build_histogram(std::span<const double> samples, std::size_t n_bins,
                          Normalization normalization = Normalization::Density);

struct GaussianFit {
    double amplitude = 0.0;
    double center = 0.0;
    double sigma = 0.0;
    double r_squared = 0.0;
};

class FitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Least-squares fit of A exp(-(x - c)^2 / (2 s^2)) to (x, y) pairs
/// (Levenberg-Marquardt). Needs at least four points with y != 0; throws
/// FitError if that fails, if y is constant, or if the fit does not settle on
/// a finite Gaussian of width comparable to the data span.
GaussianFit gaussian_fit_curve(std::span<const double> x, std::span<const double> y);

/// Fits bin centers against heights().
GaussianFit gaussian_fit(const Histogram& h);

}  // namespace sqrtw
