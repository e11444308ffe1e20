#include "sqrtw/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace sqrtw {

std::string_view to_string(EstimatorTag tag) {
    switch (tag) {
        case EstimatorTag::IncrementNormalized: return "increment-normalized";
        case EstimatorTag::PathTemporal: return "path-temporal";
        case EstimatorTag::PaperReported: return "paper-reported";
    }
    return "unknown";
}

// ---------------------------------------------------------------------------
// ComplexMoments

void ComplexMoments::push(Complex z) noexcept {
    ++n_;
    const double inv = 1.0 / static_cast<double>(n_);
    const double dre = z.real() - mean_re_;
    const double dim = z.imag() - mean_im_;
    mean_re_ += dre * inv;
    mean_im_ += dim * inv;
    m2_re_ += dre * (z.real() - mean_re_);
    m2_im_ += dim * (z.imag() - mean_im_);
    co_ += dre * (z.imag() - mean_im_);
}

void ComplexMoments::merge(const ComplexMoments& o) noexcept {
    if (o.n_ == 0) return;
    if (n_ == 0) {
        *this = o;
        return;
    }
    const double na = static_cast<double>(n_);
    const double nb = static_cast<double>(o.n_);
    const double n = na + nb;
    const double dre = o.mean_re_ - mean_re_;
    const double dim = o.mean_im_ - mean_im_;
    const double w = na * nb / n;
    mean_re_ += dre * (nb / n);
    mean_im_ += dim * (nb / n);
    m2_re_ += o.m2_re_ + dre * dre * w;
    m2_im_ += o.m2_im_ + dim * dim * w;
    co_ += o.co_ + dre * dim * w;
    n_ += o.n_;
}

Complex ComplexMoments::component_sd() const noexcept {
    if (n_ < 2) return {};
    const double d = static_cast<double>(n_ - 1);
    return {std::sqrt(m2_re_ / d), std::sqrt(m2_im_ / d)};
}

// ---------------------------------------------------------------------------
// Span estimators

namespace {

Complex two_pass_pvar(std::span<const Complex> s) {
    Complex mean{};
    for (const auto& z : s) mean += z;
    mean /= static_cast<double>(s.size());
    Complex acc{};
    for (const auto& z : s) {
        const Complex d = z - mean;
        acc += d * d;
    }
    return acc / static_cast<double>(s.size() - 1);
}

// Standard error of the mean of a set of complex batch values.
std::optional<Complex> batch_error(std::span<const Complex> batch_values) {
    const std::size_t nb = batch_values.size();
    if (nb < 2) return std::nullopt;
    ComplexMoments m;
    for (const auto& v : batch_values) m.push(v);
    return m.component_sd() / std::sqrt(static_cast<double>(nb));
}

}  // namespace

ComplexStat complex_mean(std::span<const Complex> samples) {
    if (samples.empty()) throw std::invalid_argument("complex_mean: empty input");
    Complex sum{};
    for (const auto& z : samples) sum += z;
    const double n = static_cast<double>(samples.size());
    ComplexStat out{sum / n, std::nullopt, samples.size()};
    if (samples.size() >= 2) {
        double sre = 0.0, sim = 0.0;
        for (const auto& z : samples) {
            const Complex d = z - out.value;
            sre += d.real() * d.real();
            sim += d.imag() * d.imag();
        }
        out.std_error = Complex{std::sqrt(sre / (n - 1.0)), std::sqrt(sim / (n - 1.0))} / std::sqrt(n);
    }
    return out;
}

ComplexStat complex_pseudo_variance(std::span<const Complex> samples, std::size_t n_batches) {
    if (samples.size() < 2) throw std::invalid_argument("complex_pseudo_variance: need at least 2 samples");
    ComplexStat out{two_pass_pvar(samples), std::nullopt, samples.size()};
    const std::size_t n = samples.size();
    const std::size_t nb = std::min(n_batches, n / 2);
    if (nb >= 2) {
        std::vector<Complex> values;
        values.reserve(nb);
        for (std::size_t b = 0; b < nb; ++b) {
            const std::size_t lo = b * n / nb;
            const std::size_t hi = (b + 1) * n / nb;
            values.push_back(two_pass_pvar(samples.subspan(lo, hi - lo)));
        }
        out.std_error = batch_error(values);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Per-path summaries

PathSummary summarize_path(std::uint64_t path_index, std::span<const double> dw, std::span<const double> w,
                           std::span<const Complex> dx, std::span<const Complex> x) {
    if (w.size() != dw.size() + 1 || x.size() != dx.size() + 1 || dw.size() != dx.size() || w.empty()) {
        throw std::invalid_argument("summarize_path: inconsistent path lengths");
    }
    PathSummary s;
    s.path_index = path_index;

    const double nv = static_cast<double>(w.size());
    double wsum = 0.0;
    for (double v : w) wsum += v;
    s.w_temporal_mean = wsum / nv;
    double wss = 0.0;
    for (double v : w) wss += (v - s.w_temporal_mean) * (v - s.w_temporal_mean);
    s.w_temporal_var = wss / nv;
    s.w_end = w.back();

    Complex xsum{};
    for (const auto& z : x) xsum += z;
    s.x_temporal_mean = xsum / nv;
    Complex xss{};
    for (const auto& z : x) {
        const Complex d = z - s.x_temporal_mean;
        xss += d * d;
    }
    s.x_temporal_pvar = xss / nv;
    s.x_end = x.back();

    for (double v : dw) s.dw.push(Complex{v, 0.0});
    for (const auto& z : dx) s.dx.push(z);
    return s;
}

PathSummary summarize_path(const SqrtPathView& v) { return summarize_path(v.path_index, v.dw, v.w, v.dx, v.x); }

// ---------------------------------------------------------------------------
// Table 1

const SummaryStats& Table1Statistics::brownian_row(EstimatorTag tag) const {
    for (const auto& r : brownian)
        if (r.estimator_tag == tag) return r;
    throw std::out_of_range("no Brownian row with tag " + std::string(to_string(tag)));
}

const SummaryStats& Table1Statistics::square_root_row(EstimatorTag tag) const {
    for (const auto& r : square_root)
        if (r.estimator_tag == tag) return r;
    throw std::out_of_range("no square-root row with tag " + std::string(to_string(tag)));
}

namespace {

ComplexStat scaled(const ComplexStat& s, double f) {
    ComplexStat out{s.value * f, std::nullopt, s.n};
    if (s.std_error) out.std_error = Complex{s.std_error->real() * std::fabs(f), s.std_error->imag() * std::fabs(f)};
    return out;
}

// Mean over paths of a per-path complex quantity, with analytic stderr.
ComplexStat mean_over_paths(const std::vector<PathSummary>& s, Complex (*get)(const PathSummary&)) {
    ComplexMoments m;
    for (const auto& p : s) m.push(get(p));
    ComplexStat out{m.mean(), std::nullopt, m.count()};
    if (m.count() >= 2) out.std_error = m.component_sd() / std::sqrt(static_cast<double>(m.count()));
    return out;
}

struct BatchPlan {
    std::size_t n_batches;
    std::size_t n_paths;
    std::size_t lo(std::size_t b) const { return b * n_paths / n_batches; }
    std::size_t hi(std::size_t b) const { return (b + 1) * n_paths / n_batches; }
};

// Mean over paths of a per-path quantity; stderr from batch means.
ComplexStat batched_path_mean(const std::vector<PathSummary>& s, const BatchPlan& plan,
                              Complex (*get)(const PathSummary&)) {
    Complex total{};
    for (const auto& p : s) total += get(p);
    ComplexStat out{total / static_cast<double>(s.size()), std::nullopt, s.size()};
    std::vector<Complex> batch;
    for (std::size_t b = 0; b < plan.n_batches; ++b) {
        Complex acc{};
        for (std::size_t i = plan.lo(b); i < plan.hi(b); ++i) acc += get(s[i]);
        batch.push_back(acc / static_cast<double>(plan.hi(b) - plan.lo(b)));
    }
    out.std_error = batch_error(batch);
    return out;
}

// Pseudo-variance of all increments pooled in path order, batch stderr.
ComplexStat pooled_pvar(const std::vector<PathSummary>& s, const BatchPlan& plan,
                        const ComplexMoments& (*get)(const PathSummary&)) {
    ComplexMoments total;
    std::vector<Complex> batch;
    for (std::size_t b = 0; b < plan.n_batches; ++b) {
        ComplexMoments m;
        for (std::size_t i = plan.lo(b); i < plan.hi(b); ++i) m.merge(get(s[i]));
        if (m.count() >= 2) batch.push_back(m.pseudo_variance());
        total.merge(m);
    }
    ComplexStat out{total.pseudo_variance(), std::nullopt, total.count()};
    if (batch.size() == plan.n_batches) out.std_error = batch_error(batch);
    return out;
}

ComplexStat pooled_mean(const ComplexMoments& m) {
    ComplexStat out{m.mean(), std::nullopt, m.count()};
    if (m.count() >= 2) out.std_error = m.component_sd() / std::sqrt(static_cast<double>(m.count()));
    return out;
}

ComplexMoments pooled(const std::vector<PathSummary>& s, const ComplexMoments& (*get)(const PathSummary&)) {
    ComplexMoments m;
    for (const auto& p : s) m.merge(get(p));
    return m;
}

}  // namespace

Table1Statistics table1_from_summaries(std::vector<PathSummary> s, const TimeGrid& grid, const SqrtParams& params) {
    validate(params);
    if (s.size() < 2) throw std::invalid_argument("Table-1 statistics need at least 2 paths");
    std::sort(s.begin(), s.end(), [](const auto& a, const auto& b) { return a.path_index < b.path_index; });
    for (std::size_t i = 1; i < s.size(); ++i) {
        if (s[i].path_index == s[i - 1].path_index) {
            throw std::invalid_argument("duplicate path index " + std::to_string(s[i].path_index));
        }
    }

    const BatchPlan plan{std::min(kBatchCount, s.size()), s.size()};
    const double dt = grid.dt();
    const double mu0 = params.mu0;

    Table1Statistics t;
    t.n_paths = s.size();
    t.n_steps = grid.n_steps();
    t.dt = dt;
    t.params = params;

    // Brownian, path-temporal moments of W(t).
    const ComplexStat w_mean = mean_over_paths(s, [](const PathSummary& p) { return Complex{p.w_temporal_mean}; });
    const ComplexStat w_var =
        batched_path_mean(s, plan, [](const PathSummary& p) { return Complex{p.w_temporal_var}; });

    t.brownian.push_back({w_mean, w_var, scaled(w_var, 0.5), EstimatorTag::PathTemporal});

    ComplexStat d_paper{Complex{std::sqrt(w_var.value.real()) / 2.0}, std::nullopt, w_var.n};
    if (w_var.std_error && w_var.value.real() > 0.0) {
        d_paper.std_error = Complex{w_var.std_error->real() / (4.0 * std::sqrt(w_var.value.real()))};
    }
    t.brownian.push_back({w_mean, w_var, d_paper, EstimatorTag::PaperReported});

    // Brownian increments, normalized by dt.
    const auto dw_all = pooled(s, [](const PathSummary& p) -> const ComplexMoments& { return p.dw; });
    const ComplexStat dw_mean = scaled(pooled_mean(dw_all), 1.0 / dt);
    const ComplexStat dw_var =
        scaled(pooled_pvar(s, plan, [](const PathSummary& p) -> const ComplexMoments& { return p.dw; }), 1.0 / dt);
    t.brownian.push_back({dw_mean, dw_var, scaled(dw_var, 0.5), EstimatorTag::IncrementNormalized});

    // Square-root increments, normalized by mu0 and mu0^2.
    const auto dx_all = pooled(s, [](const PathSummary& p) -> const ComplexMoments& { return p.dx; });
    const ComplexStat dx_mean = scaled(pooled_mean(dx_all), 1.0 / mu0);
    const ComplexStat dx_pvar = scaled(
        pooled_pvar(s, plan, [](const PathSummary& p) -> const ComplexMoments& { return p.dx; }), 1.0 / (mu0 * mu0));
    t.square_root.push_back({dx_mean, dx_pvar, scaled(dx_pvar, 0.5), EstimatorTag::IncrementNormalized});
    t.square_root.push_back({dx_mean, scaled(dx_pvar, 0.5), scaled(dx_pvar, 0.5), EstimatorTag::PaperReported});

    // Square-root path values X(t), time-averaged per path.
    const ComplexStat x_mean =
        scaled(mean_over_paths(s, [](const PathSummary& p) { return p.x_temporal_mean; }), 1.0 / mu0);
    const ComplexStat x_var = scaled(
        batched_path_mean(s, plan, [](const PathSummary& p) { return p.x_temporal_pvar; }), 1.0 / (mu0 * mu0));
    t.square_root.push_back({x_mean, x_var, scaled(x_var, 0.5), EstimatorTag::PathTemporal});

    return t;
}

Table1Statistics table1_statistics(const RealPathEnsemble& wiener, const ComplexPathEnsemble& sqrt_ens,
                                   const SqrtParams& params) {
    if (!(wiener.grid == sqrt_ens.grid) || wiener.n_paths() != sqrt_ens.n_paths() ||
        wiener.path_indices != sqrt_ens.path_indices) {
        throw std::invalid_argument("table1_statistics: Wiener and square-root ensembles differ in shape or labels");
    }
    const std::size_t n = wiener.n_steps();
    if (wiener.increments.size() != wiener.n_paths() * n || sqrt_ens.increments.size() != sqrt_ens.n_paths() * n ||
        wiener.values.size() != wiener.n_paths() * (n + 1) || sqrt_ens.values.size() != sqrt_ens.n_paths() * (n + 1)) {
        throw std::invalid_argument("table1_statistics: ensemble storage does not match its grid");
    }
    std::vector<PathSummary> s;
    s.reserve(wiener.n_paths());
    for (std::size_t r = 0; r < wiener.n_paths(); ++r) {
        s.push_back(summarize_path(wiener.path_indices[r], wiener.increments_of(r), wiener.values_of(r),
                                   sqrt_ens.increments_of(r), sqrt_ens.values_of(r)));
    }
    return table1_from_summaries(std::move(s), wiener.grid, params);
}

Table1Statistics run_table1(const TimeGrid& grid, std::size_t n_paths, const SqrtParams& params,
                            std::uint64_t master_seed, unsigned threads, std::vector<PathSummary>* summaries_out) {
    std::vector<PathSummary> s(n_paths);
    for_each_sqrt_path(grid, n_paths, params, master_seed, threads,
                       [&](const SqrtPathView& v) { s[v.path_index] = summarize_path(v); });
    if (summaries_out) *summaries_out = s;
    return table1_from_summaries(std::move(s), grid, params);
}

}  // namespace sqrtw
