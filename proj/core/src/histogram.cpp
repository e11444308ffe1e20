#include "sqrtw/histogram.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

namespace sqrtw {

std::size_t Histogram::total() const noexcept {
    return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

std::vector<double> Histogram::centers() const {
    std::vector<double> c(counts.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = 0.5 * (bin_edges[i] + bin_edges[i + 1]);
    return c;
}

std::vector<double> Histogram::heights() const {
    std::vector<double> h(counts.size());
    const double n = static_cast<double>(total());
    for (std::size_t i = 0; i < h.size(); ++i) {
        const double c = static_cast<double>(counts[i]);
        h[i] = normalization == Normalization::Counts ? c : c / (n * (bin_edges[i + 1] - bin_edges[i]));
    }
    return h;
}

std::size_t sturges_bins(std::size_t n_samples) {
    if (n_samples <= 1) return 1;
    return static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(n_samples)))) + 1;
}

Histogram build_histogram(std::span<const double> samples, std::size_t n_bins, Normalization normalization) {
    if (samples.empty()) throw std::invalid_argument("build_histogram: empty samples");
    if (n_bins == 0) throw std::invalid_argument("build_histogram: n_bins must be >= 1");
    double lo = samples[0], hi = samples[0];
    for (double v : samples) {
        if (!std::isfinite(v)) throw std::invalid_argument("build_histogram: non-finite sample");
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (lo == hi) {
        lo -= 0.5;
        hi += 0.5;
    }

    Histogram h;
    h.normalization = normalization;
    h.bin_edges.resize(n_bins + 1);
    const double width = (hi - lo) / static_cast<double>(n_bins);
    for (std::size_t i = 0; i <= n_bins; ++i) h.bin_edges[i] = lo + width * static_cast<double>(i);
    h.bin_edges.back() = hi;
    h.counts.assign(n_bins, 0);
    for (double v : samples) {
        auto idx = static_cast<std::size_t>((v - lo) / width);
        idx = std::min(idx, n_bins - 1);
        // Rounding in the division can land one bin off near an edge.
        while (idx > 0 && v < h.bin_edges[idx]) --idx;
        while (idx + 1 < n_bins && v >= h.bin_edges[idx + 1]) ++idx;
        ++h.counts[idx];
    }
    return h;
}

namespace {

struct Params {
    double a, c, s;
};

double sse(std::span<const double> x, std::span<const double> y, Params p) {
    double r = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - p.c;
        const double e = p.a * std::exp(-d * d / (2.0 * p.s * p.s)) - y[i];
        r += e * e;
    }
    return r;
}

// Solves the 3x3 system m * out = rhs by Gaussian elimination with partial pivoting.
bool solve3(std::array<std::array<double, 3>, 3> m, std::array<double, 3> rhs, std::array<double, 3>& out) {
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::fabs(m[r][col]) > std::fabs(m[piv][col])) piv = r;
        if (m[piv][col] == 0.0) return false;
        std::swap(m[piv], m[col]);
        std::swap(rhs[piv], rhs[col]);
        for (int r = col + 1; r < 3; ++r) {
            const double f = m[r][col] / m[col][col];
            for (int k = col; k < 3; ++k) m[r][k] -= f * m[col][k];
            rhs[r] -= f * rhs[col];
        }
    }
    for (int r = 2; r >= 0; --r) {
        double acc = rhs[r];
        for (int k = r + 1; k < 3; ++k) acc -= m[r][k] * out[k];
        out[r] = acc / m[r][r];
    }
    return true;
}

}  // namespace

GaussianFit gaussian_fit_curve(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("gaussian_fit_curve: x and y differ in length");
    const auto nonzero = std::count_if(y.begin(), y.end(), [](double v) { return v != 0.0; });
    if (nonzero < 4) throw FitError("Gaussian fit needs at least 4 non-empty bins");

    const double ymean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
    double sst = 0.0;
    for (double v : y) sst += (v - ymean) * (v - ymean);
    if (sst == 0.0) throw FitError("Gaussian fit on a constant profile");

    const auto [xmin_it, xmax_it] = std::minmax_element(x.begin(), x.end());
    const double span = *xmax_it - *xmin_it;

    // Start from the weighted moments of the profile.
    double w = 0.0, m1 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        w += std::fabs(y[i]);
        m1 += std::fabs(y[i]) * x[i];
    }
    Params p{*std::max_element(y.begin(), y.end()), m1 / w, 0.0};
    double m2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) m2 += std::fabs(y[i]) * (x[i] - p.c) * (x[i] - p.c);
    p.s = std::sqrt(m2 / w);
    if (!(p.s > 0.0)) p.s = span / 4.0;

    double cost = sse(x, y, p);
    double lambda = 1e-3;
    bool settled = false;
    for (int iter = 0; iter < 500 && !settled; ++iter) {
        std::array<std::array<double, 3>, 3> jtj{};
        std::array<double, 3> jtr{};
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double d = x[i] - p.c;
            const double g = std::exp(-d * d / (2.0 * p.s * p.s));
            const double r = p.a * g - y[i];
            const std::array<double, 3> j{g, p.a * g * d / (p.s * p.s), p.a * g * d * d / (p.s * p.s * p.s)};
            for (int a = 0; a < 3; ++a) {
                jtr[a] += j[a] * r;
                for (int b = 0; b < 3; ++b) jtj[a][b] += j[a] * j[b];
            }
        }
        bool improved = false;
        while (lambda < 1e12) {
            auto m = jtj;
            for (int a = 0; a < 3; ++a) m[a][a] += lambda * (jtj[a][a] > 0.0 ? jtj[a][a] : 1.0);
            std::array<double, 3> step{};
            if (!solve3(m, {-jtr[0], -jtr[1], -jtr[2]}, step)) {
                lambda *= 10.0;
                continue;
            }
            const Params trial{p.a + step[0], p.c + step[1], std::fabs(p.s + step[2])};
            const double c = trial.s > 0.0 ? sse(x, y, trial) : std::numeric_limits<double>::infinity();
            if (std::isfinite(c) && c <= cost) {
                const double rel = (cost - c) / std::max(cost, 1e-300);
                p = trial;
                cost = c;
                lambda = std::max(lambda / 10.0, 1e-12);
                improved = true;
                settled = rel < 1e-13 && lambda < 1.0;
                break;
            }
            lambda *= 10.0;
        }
        if (!improved) break;
    }

    if (!std::isfinite(p.a) || !std::isfinite(p.c) || !std::isfinite(p.s) || !(p.s > 0.0) || p.s > 10.0 * span) {
        throw FitError("Gaussian fit did not converge to a finite, localized peak");
    }
    return {p.a, p.c, p.s, 1.0 - cost / sst};
}

GaussianFit gaussian_fit(const Histogram& h) {
    const auto c = h.centers();
    const auto y = h.heights();
    return gaussian_fit_curve(c, y);
}

}  // namespace sqrtw
