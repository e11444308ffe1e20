#include "config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>

#include "sqrtw/rng.hpp"

namespace sqrtw::app {

RunConfig default_config() {
    RunConfig c;
    c.rng_name = std::string(kRngName);
    if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') {
        c.output_dir = env;
    }
    return c;
}

namespace {

void require(bool ok, const std::string& field, const std::string& what) {
    if (!ok) throw ConfigError("invalid " + field + ": " + what);
}

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

void validate(const RunConfig& c) {
    require(c.n_paths >= 1, "n_paths", "must be >= 1");
    require(c.n_steps >= 1, "n_steps", "must be >= 1");
    require(positive_finite(c.dt), "dt", "must be finite and > 0");
    require(std::isfinite(c.mu0) && c.mu0 != 0.0, "mu0", "must be finite and non-zero");
    require(std::isfinite(c.beta), "beta", "must be finite");
    require(c.mu0 == 0.5 || c.beta == 0.0, "beta", "a non-zero beta is only defined at mu0 = 0.5");
    require(!c.output_dir.empty(), "output", "must not be empty");
    require(c.csv_stride >= 1, "csv_stride", "must be >= 1");
    require(positive_finite(c.kernel_t), "t", "kernel time must be finite and > 0");
    require(std::isfinite(c.x_min) && std::isfinite(c.x_max) && c.x_min < c.x_max, "x_range", "needs x_min < x_max");
    require(c.kernel_points >= 2, "kernel_points", "must be >= 2");
    require(c.fp_mode == "heat" || c.fp_mode == "schrodinger" || c.fp_mode == "sqrt-process", "mode",
            "must be heat, schrodinger or sqrt-process");
    require(positive_finite(c.sigma0), "sigma0", "must be finite and > 0");
    require(positive_finite(c.t_final), "t_final", "must be finite and > 0");
    require(c.fp_points >= 5, "fp_points", "must be >= 5");
    require(c.fp_steps >= 1, "fp_steps", "must be >= 1");
    for (double t : c.snapshot_times) {
        require(std::isfinite(t) && t > 0.0 && t <= c.t_final, "snapshot_times", "each time must be in (0, t_final]");
    }
}

nlohmann::json to_json(const RunConfig& c) {
    return {
        {"paths", c.n_paths},
        {"steps", c.n_steps},
        {"dt", c.dt},
        {"mu0", c.mu0},
        {"beta", c.beta},
        {"seed", c.seed},
        {"output", c.output_dir.string()},
        {"rng", c.rng_name},
        {"threads", c.threads},
        {"compress", c.compress},
        {"csv_paths", c.csv_paths},
        {"csv_stride", c.csv_stride},
        {"t", c.kernel_t},
        {"x_min", c.x_min},
        {"x_max", c.x_max},
        {"kernel_points", c.kernel_points},
        {"bins", c.hist_bins},
        {"mode", c.fp_mode},
        {"sigma0", c.sigma0},
        {"t_final", c.t_final},
        {"fp_points", c.fp_points},
        {"fp_steps", c.fp_steps},
        {"refinements", c.refinements},
        {"snapshot_times", c.snapshot_times},
    };
}

void apply_json(RunConfig& c, const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
    for (const auto& [key, v] : j.items()) {
        try {
            if (key == "paths") c.n_paths = v.get<std::size_t>();
            else if (key == "steps") c.n_steps = v.get<std::size_t>();
            else if (key == "dt") c.dt = v.get<double>();
            else if (key == "mu0") c.mu0 = v.get<double>();
            else if (key == "beta") c.beta = v.get<double>();
            else if (key == "seed") c.seed = v.get<std::uint64_t>();
            else if (key == "output") c.output_dir = v.get<std::string>();
            else if (key == "threads") c.threads = v.get<unsigned>();
            else if (key == "compress") c.compress = v.get<bool>();
            else if (key == "csv_paths") c.csv_paths = v.get<std::size_t>();
            else if (key == "csv_stride") c.csv_stride = v.get<std::size_t>();
            else if (key == "t") c.kernel_t = v.get<double>();
            else if (key == "x_min") c.x_min = v.get<double>();
            else if (key == "x_max") c.x_max = v.get<double>();
            else if (key == "kernel_points") c.kernel_points = v.get<std::size_t>();
            else if (key == "bins") c.hist_bins = v.get<std::size_t>();
            else if (key == "mode") c.fp_mode = v.get<std::string>();
            else if (key == "sigma0") c.sigma0 = v.get<double>();
            else if (key == "t_final") c.t_final = v.get<double>();
            else if (key == "fp_points") c.fp_points = v.get<std::size_t>();
            else if (key == "fp_steps") c.fp_steps = v.get<std::size_t>();
            else if (key == "refinements") c.refinements = v.get<std::size_t>();
            else if (key == "snapshot_times") c.snapshot_times = v.get<std::vector<double>>();
            else if (key == "rng") {
                if (v.get<std::string>() != c.rng_name) {
                    throw ConfigError("invalid rng: only " + c.rng_name + " is available");
                }
            } else throw ConfigError("unknown config key '" + key + "'");
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError("invalid " + key + ": " + e.what());
        }
    }
}

nlohmann::json load_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("malformed config file " + path.string() + ": " + e.what());
    }
}

}  // namespace sqrtw::app
