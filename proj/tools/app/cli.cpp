#include <filesystem>
#include <functional>
#include <memory>
#include <ostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "output.hpp"
#include "sqrtw/fokker_planck.hpp"

namespace sqrtw::app {

namespace {

using Setter = std::function<void(RunConfig&)>;

// Registers a flag whose value is copied into the config only when given.
template <typename T, typename Assign>
void flag(CLI::App* sub, std::vector<Setter>& setters, const std::string& name, const std::string& help,
          Assign assign) {
    auto value = std::make_shared<T>();
    CLI::Option* opt = sub->add_option(name, *value, help);
    setters.push_back([opt, value, assign](RunConfig& c) {
        if (opt->count() > 0) assign(c, *value);
    });
}

#define SQRTW_FIELD(member) [](RunConfig& c, const auto& v) { c.member = v; }

struct Subcommand {
    explicit Subcommand(CLI::App* a) : app(a) {}
    CLI::App* app;
    std::vector<Setter> setters;
    std::string config_file;
    bool no_compress = false;
};

void add_common(Subcommand& s) {
    auto* a = s.app;
    flag<std::size_t>(a, s.setters, "--paths", "number of paths", SQRTW_FIELD(n_paths));
    flag<std::size_t>(a, s.setters, "--steps", "steps per path", SQRTW_FIELD(n_steps));
    flag<double>(a, s.setters, "--dt", "time step", SQRTW_FIELD(dt));
    flag<double>(a, s.setters, "--mu0", "scale factor mu0", SQRTW_FIELD(mu0));
    flag<double>(a, s.setters, "--beta", "drift constant beta", SQRTW_FIELD(beta));
    flag<std::uint64_t>(a, s.setters, "--seed", "master seed", SQRTW_FIELD(seed));
    flag<unsigned>(a, s.setters, "--threads", "worker threads (0 = all cores)", SQRTW_FIELD(threads));
    flag<std::string>(a, s.setters, "--output", "output directory", SQRTW_FIELD(output_dir));
    a->add_option("--config", s.config_file, "JSON config file (flags take precedence)");
    a->add_flag("--no-compress", s.no_compress, "never gzip large CSV files");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Square root of a Wiener process: simulation, statistics, kernels and Fokker-Planck checks",
                 "sqrtw"};
    app.set_version_flag("--version", std::string(SQRTW_VERSION));
    app.require_subcommand(1);

    Subcommand simulate{app.add_subcommand("simulate", "simulate the square-root ensemble and write it as CSV")};
    Subcommand table1{app.add_subcommand("table1", "estimate means, variances and diffusion coefficients")};
    Subcommand kernels{app.add_subcommand("kernels", "kernel curves, Wick rotation and empirical histograms")};
    Subcommand fpsolve{app.add_subcommand("fpsolve", "Crank-Nicolson solution of the complex Fokker-Planck equation")};
    for (auto* s : {&simulate, &table1, &kernels, &fpsolve}) add_common(*s);

    flag<std::size_t>(simulate.app, simulate.setters, "--csv-paths", "paths written to CSV (0 = all)",
                      SQRTW_FIELD(csv_paths));
    flag<std::size_t>(simulate.app, simulate.setters, "--csv-stride", "write every k-th step",
                      SQRTW_FIELD(csv_stride));
    flag<std::size_t>(table1.app, table1.setters, "--bins", "histogram bins (0 = Sturges)", SQRTW_FIELD(hist_bins));
    flag<double>(kernels.app, kernels.setters, "--t", "kernel time", SQRTW_FIELD(kernel_t));
    flag<double>(kernels.app, kernels.setters, "--x-min", "left end of the x range", SQRTW_FIELD(x_min));
    flag<double>(kernels.app, kernels.setters, "--x-max", "right end of the x range", SQRTW_FIELD(x_max));
    flag<std::size_t>(kernels.app, kernels.setters, "--points", "curve points", SQRTW_FIELD(kernel_points));
    flag<std::size_t>(kernels.app, kernels.setters, "--bins", "histogram bins (0 = Sturges)", SQRTW_FIELD(hist_bins));
    flag<std::string>(fpsolve.app, fpsolve.setters, "--mode", "heat | schrodinger | sqrt-process",
                      SQRTW_FIELD(fp_mode));
    flag<double>(fpsolve.app, fpsolve.setters, "--sigma0", "initial Gaussian width", SQRTW_FIELD(sigma0));
    flag<double>(fpsolve.app, fpsolve.setters, "--t-final", "final time", SQRTW_FIELD(t_final));
    flag<std::size_t>(fpsolve.app, fpsolve.setters, "--fp-points", "grid points", SQRTW_FIELD(fp_points));
    flag<std::size_t>(fpsolve.app, fpsolve.setters, "--fp-steps", "time steps", SQRTW_FIELD(fp_steps));
    flag<std::size_t>(fpsolve.app, fpsolve.setters, "--refinements", "2x refinement levels",
                      SQRTW_FIELD(refinements));
    flag<std::vector<double>>(fpsolve.app, fpsolve.setters, "--snapshot", "profile output times",
                              SQRTW_FIELD(snapshot_times));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    Subcommand* chosen = nullptr;
    for (auto* s : {&simulate, &table1, &kernels, &fpsolve}) {
        if (s->app->parsed()) chosen = s;
    }
    const std::string name = chosen->app->get_name();

    try {
        RunConfig config = default_config();
        if (!chosen->config_file.empty()) apply_json(config, load_config_file(chosen->config_file));
        for (const auto& set : chosen->setters) set(config);
        if (chosen->no_compress) config.compress = false;

        CommandResult result;
        if (name == "simulate") result = cmd_simulate(config);
        else if (name == "table1") result = cmd_table1(config);
        else if (name == "kernels") result = cmd_kernels(config);
        else result = cmd_fpsolve(config);
        for (const auto& f : result.files) out << "wrote " << f.string() << '\n';
        return 0;
    } catch (const IoError& e) {
        err << "sqrtw " << name << ": I/O error: " << e.what() << '\n';
        return 2;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "sqrtw " << name << ": I/O error: " << e.what() << '\n';
        return 2;
    } catch (const FPConfigError& e) {
        err << "sqrtw " << name << ": stability precondition failed: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        // ConfigError and argument checks raised by the library.
        err << "sqrtw " << name << ": configuration error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace sqrtw::app
