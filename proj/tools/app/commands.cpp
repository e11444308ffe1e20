#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <iterator>
#include <optional>
#include <ostream>

#include <fmt/format.h>

#include "output.hpp"
#include "sqrtw/clifford.hpp"
#include "sqrtw/fokker_planck.hpp"
#include "sqrtw/histogram.hpp"
#include "sqrtw/kernels.hpp"
#include "sqrtw/rng.hpp"
#include "sqrtw/sqrt_process.hpp"
#include "sqrtw/stats.hpp"

#ifndef SQRTW_VERSION
#define SQRTW_VERSION "0.0.0"
#endif

namespace sqrtw::app {

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

constexpr std::size_t kBlockPaths = 512;
constexpr std::size_t kGzipRowThreshold = 1'000'000;

std::string utc_now() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json complex_json(Complex z) { return {{"re", z.real()}, {"im", z.imag()}}; }

json stat_json(const ComplexStat& s) {
    json j = {{"value", complex_json(s.value)}, {"n", s.n}};
    j["std_error"] = s.std_error ? complex_json(*s.std_error) : json(nullptr);
    return j;
}

json fit_json(const GaussianFit& f) {
    return {{"amplitude", f.amplitude}, {"center", f.center}, {"sigma", f.sigma}, {"r_squared", f.r_squared}};
}

// Buffered CSV output with the provenance comment line in front.
class CsvWriter {
public:
    CsvWriter(const fs::path& path, bool compress, std::string_view header, std::string_view columns)
        : path_(path), sink_(open_sink(path, compress)) {
        if (compress) path_ += ".gz";
        buf_.append(header);
        buf_.push_back('\n');
        buf_.append(columns);
        buf_.push_back('\n');
    }

    template <typename... Args>
    void row(fmt::format_string<Args...> f, Args&&... args) {
        fmt::format_to(std::back_inserter(buf_), f, std::forward<Args>(args)...);
        if (buf_.size() > (1u << 20)) flush();
    }

    fs::path close() {
        flush();
        sink_->close();
        return path_;
    }

private:
    void flush() {
        sink_->write({buf_.data(), buf_.size()});
        buf_.clear();
    }

    fs::path path_;
    std::unique_ptr<TextSink> sink_;
    fmt::memory_buffer buf_;
};

// Shared bookkeeping: validation, output directory, manifest.
class Run {
public:
    Run(const RunConfig& c, std::string_view command) : cfg_(c), command_(command), started_(utc_now()) {
        validate(c);
        prepare_output_dir(c.output_dir);
        manifest_name_ = command_ + ".manifest.json";
        header_ = fmt::format("# sqrtw {} artifact_version={} command={} manifest={} config={}", SQRTW_VERSION,
                              kArtifactVersion, command_, manifest_name_, config_fingerprint(c));
    }

    const std::string& header() const { return header_; }
    const std::string& manifest_name() const { return manifest_name_; }
    fs::path path(std::string_view name) const { return cfg_.output_dir / name; }
    void add(const fs::path& p) { files_.push_back(p); }

    void write_report(std::string_view name, json report) {
        report["artifact_version"] = kArtifactVersion;
        report["manifest"] = manifest_name_;
        const auto p = path(name);
        write_json(p, report);
        add(p);
    }

    CommandResult finish(std::optional<Sha256> increment_digest, json report) {
        json files = json::array();
        for (const auto& f : files_) {
            files.push_back({{"name", f.filename().string()},
                             {"sha256", to_string(digest_file(f))},
                             {"bytes", fs::file_size(f)}});
        }
        json manifest = {
            {"artifact_version", kArtifactVersion},
            {"tool", "sqrtw"},
            {"tool_version", SQRTW_VERSION},
            {"command", command_},
            {"config", to_json(cfg_)},
            {"config_fingerprint", config_fingerprint(cfg_)},
            {"rng", {{"name", kRngName}, {"seed", cfg_.seed}, {"path_streams", "counter = (block, path_index, stream id)"}}},
            {"pauli_pair", {kDefaultPauliFirst.index, kDefaultPauliSecond.index}},
            {"increment_digest", increment_digest ? json(to_string(*increment_digest)) : json(nullptr)},
            {"timestamps", {{"started", started_}, {"finished", utc_now()}}},
            {"files", files},
        };
        const auto mp = path(manifest_name_);
        write_json(mp, manifest);
        files_.push_back(mp);
        if (report.is_null()) report = manifest;
        return {files_, std::move(report)};
    }

private:
    const RunConfig& cfg_;
    std::string command_;
    std::string started_;
    std::string manifest_name_;
    std::string header_;
    std::vector<fs::path> files_;
};

void require_paths(const RunConfig& c, std::size_t n, std::string_view command) {
    if (c.n_paths < n) throw ConfigError(fmt::format("invalid n_paths: {} needs at least {} paths", command, n));
}

std::size_t bins_for(const RunConfig& c, std::size_t n) { return c.hist_bins == 0 ? sturges_bins(n) : c.hist_bins; }

// Histogram + fit; a failed fit is reported, not fatal.
struct FittedHistogram {
    Histogram hist;
    std::optional<GaussianFit> fit;
    std::string fit_error;
};

FittedHistogram fitted_histogram(std::span<const double> samples, std::size_t bins) {
    FittedHistogram out{build_histogram(samples, bins), std::nullopt, {}};
    try {
        out.fit = gaussian_fit(out.hist);
    } catch (const FitError& e) {
        out.fit_error = e.what();
    }
    return out;
}

json fitted_json(const FittedHistogram& h) {
    json j = {{"n", h.hist.total()}, {"bins", h.hist.counts.size()},
              {"range", {h.hist.bin_edges.front(), h.hist.bin_edges.back()}}};
    j["fit"] = h.fit ? fit_json(*h.fit) : json(nullptr);
    if (!h.fit) j["fit_error"] = h.fit_error;
    return j;
}

void write_histogram_rows(CsvWriter& csv, std::string_view label, const FittedHistogram& h) {
    const auto heights = h.hist.heights();
    for (std::size_t b = 0; b < h.hist.counts.size(); ++b) {
        const double lo = h.hist.bin_edges[b], hi = h.hist.bin_edges[b + 1];
        std::string fit_value;
        if (h.fit) {
            const double c = 0.5 * (lo + hi), z = (c - h.fit->center) / h.fit->sigma;
            fit_value = fmt::format("{}", h.fit->amplitude * std::exp(-0.5 * z * z));
        }
        csv.row("{},{},{},{},{},{}\n", label, lo, hi, h.hist.counts[b], heights[b], fit_value);
    }
}

// ---------------------------------------------------------------------------
// Published Table 1 reference values (Monte Carlo, 20000 paths x 1000 steps).

struct Published {
    const char* process;
    const char* quantity;
    const char* component;
    double value;
    std::optional<double> uncertainty;
};

constexpr Published kPublished[] = {
    {"brownian", "mean", "re", -0.001, 0.004},
    {"brownian", "variance", "re", 0.1667, 0.0011},
    {"brownian", "diffusion", "re", 0.2041, 0.0013},
    {"square-root", "mean", "re", 0.4986, 0.0025},
    {"square-root", "mean", "im", 0.5016, 0.0025},
    {"square-root", "variance", "re", 0.0, 4e-7},
    {"square-root", "variance", "im", -0.2491, 0.0013},
    {"square-root", "diffusion", "re", 0.0, std::nullopt},
    {"square-root", "diffusion", "im", -0.249, 0.001},
};

const ComplexStat& pick(const SummaryStats& s, std::string_view quantity) {
    if (quantity == "mean") return s.mean;
    if (quantity == "variance") return s.pseudo_variance;
    return s.diffusion;
}

void table1_rows(CsvWriter& csv, std::string_view process, const std::vector<SummaryStats>& rows) {
    auto se = [](const ComplexStat& s, bool re) {
        if (!s.std_error) return std::string{};
        return fmt::format("{}", re ? s.std_error->real() : s.std_error->imag());
    };
    for (const auto& r : rows) {
        csv.row("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", process, to_string(r.estimator_tag),
                r.mean.value.real(), r.mean.value.imag(), se(r.mean, true), se(r.mean, false),
                r.pseudo_variance.value.real(), r.pseudo_variance.value.imag(), se(r.pseudo_variance, true),
                se(r.pseudo_variance, false), r.diffusion.value.real(), r.diffusion.value.imag(),
                se(r.diffusion, true), se(r.diffusion, false), r.mean.n);
    }
}

json rows_json(const std::vector<SummaryStats>& rows) {
    json out = json::array();
    for (const auto& r : rows) {
        out.push_back({{"estimator_tag", to_string(r.estimator_tag)},
                       {"mean", stat_json(r.mean)},
                       {"variance", stat_json(r.pseudo_variance)},
                       {"diffusion", stat_json(r.diffusion)}});
    }
    return out;
}

json published_comparison(const Table1Statistics& t) {
    json out = json::array();
    for (const auto& p : kPublished) {
        const bool brownian = std::string_view(p.process) == "brownian";
        const auto& row = brownian ? t.brownian_row(EstimatorTag::PaperReported)
                                   : t.square_root_row(EstimatorTag::PaperReported);
        const ComplexStat& s = pick(row, p.quantity);
        const bool re = std::string_view(p.component) == "re";
        const double ours = re ? s.value.real() : s.value.imag();
        std::optional<double> ours_se;
        if (s.std_error) ours_se = re ? s.std_error->real() : s.std_error->imag();

        json j = {{"process", p.process},
                  {"quantity", p.quantity},
                  {"component", p.component},
                  {"published", p.value},
                  {"published_uncertainty", p.uncertainty ? json(*p.uncertainty) : json(nullptr)},
                  {"reproduced", ours},
                  {"reproduced_std_error", ours_se ? json(*ours_se) : json(nullptr)},
                  {"difference", ours - p.value}};
        const double u2 = std::pow(p.uncertainty.value_or(0.0), 2) + std::pow(ours_se.value_or(0.0), 2);
        if (u2 > 0.0) {
            const double z = (ours - p.value) / std::sqrt(u2);
            j["z_score"] = z;
            j["within_3_sigma"] = std::abs(z) <= 3.0;
        } else {
            j["z_score"] = nullptr;
            j["within_3_sigma"] = nullptr;
        }
        out.push_back(std::move(j));
    }
    return out;
}

// ---------------------------------------------------------------------------
// fpsolve helpers

FPParams fp_params_for(const RunConfig& c) {
    if (c.fp_mode == "heat") return FPParams::heat(1.0);
    if (c.fp_mode == "schrodinger") return FPParams{Complex{}, Complex{0.0, -0.25}, 0.0};
    return FPParams::from_sqrt_process(c.beta);
}

double linf_error(const GridFunction& g, double t, const FPParams& p, double sigma0) {
    double worst = 0.0;
    for (std::size_t i = 0; i < g.n_points(); ++i) {
        worst = std::max(worst, std::abs(g.values[i] - fp_gaussian_solution(g.x(i), t, p, sigma0)));
    }
    return worst;
}

// Discrete L2 norm of the error, sqrt(dx * sum |e_i|^2).
double l2_error(const GridFunction& g, double t, const FPParams& p, double sigma0) {
    double sum = 0.0;
    for (std::size_t i = 0; i < g.n_points(); ++i) {
        sum += std::norm(g.values[i] - fp_gaussian_solution(g.x(i), t, p, sigma0));
    }
    return std::sqrt(sum * g.dx());
}

GridFunction fp_initial(const FPDomain& d, std::size_t n_points, const FPParams& p, double sigma0) {
    return sample_grid_function(d.x_min, d.x_max, n_points,
                                [&](double x) { return fp_gaussian_solution(x, 0.0, p, sigma0); });
}

}  // namespace

std::string config_fingerprint(const RunConfig& c) {
    json j = to_json(c);
    j.erase("threads");
    j.erase("output");
    j.erase("compress");
    return to_string(digest_bytes(j.dump()));
}

// ---------------------------------------------------------------------------

CommandResult cmd_simulate(const RunConfig& c) {
    Run run(c, "simulate");
    const TimeGrid grid(c.dt, c.n_steps);
    const SqrtParams params{c.mu0, c.beta};

    const std::size_t csv_paths = c.csv_paths == 0 ? c.n_paths : std::min(c.csv_paths, c.n_paths);
    const std::size_t rows_per_path = (c.n_steps + c.csv_stride - 1) / c.csv_stride;
    const std::size_t rows = csv_paths * rows_per_path;
    CsvWriter csv(run.path("ensemble.csv"), c.compress && rows > kGzipRowThreshold, run.header(),
                  "path_index,step_index,t,dw,re_dx,im_dx");

    std::vector<Sha256> digests(c.n_paths);
    std::vector<std::vector<double>> dw(kBlockPaths);
    std::vector<std::vector<Complex>> dx(kBlockPaths);
    for (std::size_t first = 0; first < c.n_paths; first += kBlockPaths) {
        const std::size_t nb = std::min(kBlockPaths, c.n_paths - first);
        for_each_sqrt_path(
            grid, nb, params, c.seed, c.threads,
            [&](const SqrtPathView& v) {
                digests[v.path_index] = digest_increments(v.dx);
                if (v.path_index < csv_paths) {
                    const std::size_t slot = v.path_index - first;
                    dw[slot].assign(v.dw.begin(), v.dw.end());
                    dx[slot].assign(v.dx.begin(), v.dx.end());
                }
            },
            first);
        const std::size_t last = std::min(first + nb, csv_paths);
        for (std::size_t p = first; p < last; ++p) {
            const auto& a = dw[p - first];
            const auto& z = dx[p - first];
            for (std::size_t k = 0; k < c.n_steps; k += c.csv_stride) {
                csv.row("{},{},{},{},{},{}\n", p, k, grid.time(k), a[k], z[k].real(), z[k].imag());
            }
        }
    }
    run.add(csv.close());
    return run.finish(digest_of_digests(digests), nullptr);
}

CommandResult cmd_table1(const RunConfig& c) {
    Run run(c, "table1");
    require_paths(c, 2, "table1");
    const TimeGrid grid(c.dt, c.n_steps);
    const SqrtParams params{c.mu0, c.beta};

    std::vector<PathSummary> summaries(c.n_paths);
    std::vector<Sha256> digests(c.n_paths);
    for_each_sqrt_path(grid, c.n_paths, params, c.seed, c.threads, [&](const SqrtPathView& v) {
        summaries[v.path_index] = summarize_path(v);
        digests[v.path_index] = digest_increments(v.dx);
    });
    const Table1Statistics stats = table1_from_summaries(summaries, grid, params);

    CsvWriter csv(run.path("table1.csv"), false, run.header(),
                  "process,estimator_tag,mean_re,mean_im,mean_se_re,mean_se_im,var_re,var_im,var_se_re,var_se_im,"
                  "D_re,D_im,D_se_re,D_se_im,n");
    table1_rows(csv, "brownian", stats.brownian);
    table1_rows(csv, "square-root", stats.square_root);
    run.add(csv.close());

    // Per-path distributions of the square-root mean and variance.
    const double mu0 = c.mu0;
    std::vector<double> mean_re, mean_im, var_re, var_im;
    for (const auto& s : summaries) {
        const Complex m = s.dx.mean() / mu0;
        const Complex v = s.dx.pseudo_variance() / (2.0 * mu0 * mu0);
        mean_re.push_back(m.real());
        mean_im.push_back(m.imag());
        var_re.push_back(v.real());
        var_im.push_back(v.imag());
    }
    const std::size_t bins = bins_for(c, c.n_paths);
    CsvWriter hist_csv(run.path("fig3_histograms.csv"), false, run.header(),
                       "quantity,bin_lo,bin_hi,count,density,fit_density");
    json fig3 = json::object();
    const std::pair<const char*, const std::vector<double>*> quantities[] = {
        {"mean_re", &mean_re}, {"mean_im", &mean_im}, {"variance_re", &var_re}, {"variance_im", &var_im}};
    for (const auto& [name, samples] : quantities) {
        const auto h = fitted_histogram(*samples, bins);
        write_histogram_rows(hist_csv, name, h);
        fig3[name] = fitted_json(h);
    }
    run.add(hist_csv.close());

    json report = {
        {"protocol", {{"paths", c.n_paths}, {"steps", c.n_steps}, {"dt", c.dt}, {"mu0", c.mu0}, {"beta", c.beta}}},
        {"brownian", rows_json(stats.brownian)},
        {"square_root", rows_json(stats.square_root)},
        {"published_reference",
         {{"label", "published reference values, Monte Carlo with 20000 paths x 1000 steps"},
          {"estimator_tag", to_string(EstimatorTag::PaperReported)}}},
        {"comparison", published_comparison(stats)},
        {"fig3", fig3},
    };
    run.write_report("table1.json", report);
    return run.finish(digest_of_digests(digests), report);
}

CommandResult cmd_kernels(const RunConfig& c) {
    Run run(c, "kernels");
    require_paths(c, 2, "kernels");
    const double t = c.kernel_t;

    CsvWriter curves(run.path("kernels_curves.csv"), false, run.header(),
                     "x,schrodinger_re,schrodinger_im,schrodinger_abs,heat,wick,sample_wick");
    double max_wick = 0.0, max_imag = 0.0, max_sample = 0.0, sum_sq_wick = 0.0;
    const double kernel_dx = (c.x_max - c.x_min) / static_cast<double>(c.kernel_points - 1);
    for (std::size_t i = 0; i < c.kernel_points; ++i) {
        const double x =
            c.x_min + (c.x_max - c.x_min) * static_cast<double>(i) / static_cast<double>(c.kernel_points - 1);
        const Complex s = schrodinger_kernel(x, t);
        const double h = heat_kernel(x, t);
        const double w = wick_rotate_kernel(x, t);
        const KernelSample ks = schrodinger_kernel_sample(x, t);
        const double sw = wick_rotate_samples(std::span(&ks, 1)).front();
        const double prefactor = std::exp(-kPropagatorPhase) / std::sqrt(4.0 * std::numbers::pi * t);
        max_wick = std::max(max_wick, std::abs(w - h));
        sum_sq_wick += (w - h) * (w - h);
        max_imag = std::max(max_imag, std::abs(wick_bracket(x, t).imag()) * prefactor);
        max_sample = std::max(max_sample, std::abs(sw - h));
        curves.row("{},{},{},{},{},{},{}\n", x, s.real(), s.imag(), std::abs(s), h, w, sw);
    }
    run.add(curves.close());

    // Empirical histograms at the horizon of the simulated ensemble.
    const TimeGrid grid(c.dt, c.n_steps);
    const SqrtParams params{c.mu0, c.beta};
    std::vector<double> w_end(c.n_paths);
    std::vector<Complex> x_end(c.n_paths);
    std::vector<Sha256> digests(c.n_paths);
    for_each_sqrt_path(grid, c.n_paths, params, c.seed, c.threads, [&](const SqrtPathView& v) {
        w_end[v.path_index] = v.w.back();
        x_end[v.path_index] = v.x.back();
        digests[v.path_index] = digest_increments(v.dx);
    });
    const double norm = c.mu0 * static_cast<double>(c.n_steps);
    std::vector<KernelSample> squared(c.n_paths);
    for (std::size_t p = 0; p < c.n_paths; ++p) squared[p] = square_sample(x_end[p] / norm);
    const std::vector<double> rotated = wick_rotate_samples(squared);

    const std::size_t bins = bins_for(c, c.n_paths);
    const auto brownian = fitted_histogram(w_end, bins);
    const auto sqrt_hist = fitted_histogram(rotated, bins);
    CsvWriter hist_csv(run.path("kernels_histograms.csv"), false, run.header(),
                       "histogram,bin_lo,bin_hi,count,density,fit_density");
    write_histogram_rows(hist_csv, "brownian-endpoint", brownian);
    write_histogram_rows(hist_csv, "wick-rotated-squared-sqrt-process-values", sqrt_hist);
    run.add(hist_csv.close());

    json shift = json::object();
    if (brownian.fit && sqrt_hist.fit) {
        const double se = sqrt_hist.fit->sigma / std::sqrt(static_cast<double>(c.n_paths));
        shift = {{"brownian_center", brownian.fit->center},
                 {"sqrt_center", sqrt_hist.fit->center},
                 {"shift", sqrt_hist.fit->center - brownian.fit->center},
                 {"sqrt_center_std_error", se},
                 {"sqrt_center_shifted", std::abs(sqrt_hist.fit->center) > 3.0 * se}};
    }
    json report = {
        {"t", t},
        {"x_range", {c.x_min, c.x_max}},
        {"points", c.kernel_points},
        {"max_abs_wick_minus_heat", max_wick},
        {"l2_wick_minus_heat", std::sqrt(sum_sq_wick * kernel_dx)},
        {"max_abs_wick_imaginary_residual", max_imag},
        {"max_abs_sample_wick_minus_heat", max_sample},
        {"ensemble", {{"paths", c.n_paths}, {"steps", c.n_steps}, {"horizon", grid.horizon()}}},
        {"histograms",
         {{"brownian-endpoint", fitted_json(brownian)},
          {"wick-rotated-squared-sqrt-process-values", fitted_json(sqrt_hist)}}},
        {"center_shift", shift},
    };
    run.write_report("kernels_report.json", report);
    return run.finish(digest_of_digests(digests), report);
}

CommandResult cmd_fpsolve(const RunConfig& c) {
    Run run(c, "fpsolve");
    const FPParams p = fp_params_for(c);
    const FPDomain domain = default_fp_domain(p, c.sigma0, c.t_final, c.fp_points);
    const double dt = c.t_final / static_cast<double>(c.fp_steps);

    std::vector<double> snapshots = c.snapshot_times.empty() ? std::vector<double>{c.t_final} : c.snapshot_times;
    std::vector<std::size_t> snapshot_steps;
    for (double ts : snapshots) {
        snapshot_steps.push_back(std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(ts / dt))));
    }

    // Base run: snapshots and mass history.
    CrankNicolsonFP solver(fp_initial(domain, c.fp_points, p, c.sigma0), p, dt);
    Complex mass = integral(solver.state());
    const Complex mass0 = mass;
    double max_mass_change = 0.0;
    json snapshot_json = json::array();
    for (std::size_t s = 1; s <= c.fp_steps; ++s) {
        solver.step();
        const Complex m = integral(solver.state());
        max_mass_change = std::max(max_mass_change, std::abs(m - mass));
        mass = m;
        for (std::size_t k = 0; k < snapshot_steps.size(); ++k) {
            if (snapshot_steps[k] != s) continue;
            const double ts = solver.time();
            const auto name = fmt::format("fp_{}_t{:.4f}.csv", c.fp_mode, ts);
            CsvWriter csv(run.path(name), false, run.header(), "x,re,im,abs,analytic_re,analytic_im");
            const auto& g = solver.state();
            for (std::size_t i = 0; i < g.n_points(); ++i) {
                const Complex a = fp_gaussian_solution(g.x(i), ts, p, c.sigma0);
                csv.row("{},{},{},{},{},{}\n", g.x(i), g.values[i].real(), g.values[i].imag(),
                        std::abs(g.values[i]), a.real(), a.imag());
            }
            run.add(csv.close());
            snapshot_json.push_back({{"t", ts}, {"step", s}, {"file", name},
                                     {"linf_error_vs_analytic", linf_error(g, ts, p, c.sigma0)},
                                     {"l2_error_vs_analytic", l2_error(g, ts, p, c.sigma0)}});
        }
    }
    const double base_error = linf_error(solver.state(), solver.time(), p, c.sigma0);
    const double base_l2 = l2_error(solver.state(), solver.time(), p, c.sigma0);

    // Refinement study: points (n - 1) * 2 + 1 and twice the steps per level.
    std::vector<GridFunction> finals{solver.state()};
    json levels = json::array();
    levels.push_back({{"points", c.fp_points}, {"steps", c.fp_steps}, {"dx", solver.state().dx()}, {"dt", dt},
                      {"linf_error_vs_analytic", base_error}, {"l2_error_vs_analytic", base_l2}});
    std::vector<double> errors{base_error};
    std::size_t points = c.fp_points, steps = c.fp_steps;
    for (std::size_t level = 1; level <= c.refinements; ++level) {
        points = (points - 1) * 2 + 1;
        steps *= 2;
        const double ldt = c.t_final / static_cast<double>(steps);
        GridFunction g = fp_evolve(fp_initial(domain, points, p, c.sigma0), p, ldt, steps);
        const double err = linf_error(g, c.t_final, p, c.sigma0);
        levels.push_back(
            {{"points", points}, {"steps", steps}, {"dx", g.dx()}, {"dt", ldt}, {"linf_error_vs_analytic", err},
             {"l2_error_vs_analytic", l2_error(g, c.t_final, p, c.sigma0)}});
        errors.push_back(err);
        finals.push_back(std::move(g));
    }
    json error_ratios = json::array();
    for (std::size_t l = 0; l + 1 < errors.size(); ++l) error_ratios.push_back(errors[l] / errors[l + 1]);
    // Self-convergence: differences of successive levels on the coarse nodes.
    std::vector<double> diffs;
    for (std::size_t l = 0; l + 1 < finals.size(); ++l) {
        double d = 0.0;
        for (std::size_t i = 0; i < finals[l].n_points(); ++i) {
            d = std::max(d, std::abs(finals[l].values[i] - finals[l + 1].values[2 * i]));
        }
        diffs.push_back(d);
    }
    json self_ratios = json::array();
    for (std::size_t l = 0; l + 1 < diffs.size(); ++l) self_ratios.push_back(diffs[l] / diffs[l + 1]);

    json report = {
        {"mode", c.fp_mode},
        {"drift", complex_json(p.drift)},
        {"diffusion", complex_json(p.diffusion)},
        {"sigma0", c.sigma0},
        {"t_final", c.t_final},
        {"domain", {{"x_min", domain.x_min}, {"x_max", domain.x_max}, {"points", c.fp_points}}},
        {"dt", dt},
        {"steps", c.fp_steps},
        {"linf_error_vs_analytic", base_error},
        {"l2_error_vs_analytic", base_l2},
        {"mass_initial", complex_json(mass0)},
        {"mass_final", complex_json(mass)},
        {"max_mass_change_per_step", max_mass_change},
        {"snapshots", snapshot_json},
        {"convergence",
         {{"levels", levels},
          {"error_ratios", error_ratios},
          {"successive_differences", diffs},
          {"self_convergence_ratios", self_ratios}}},
    };
    run.write_report("fp_report.json", report);
    return run.finish(std::nullopt, report);
}

}  // namespace sqrtw::app
