#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace sqrtw::app {

/// Invalid configuration (exit code 1).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Unwritable output or failed write (exit code 2).
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Optional environment override of the default output directory.
inline constexpr const char* kOutputDirEnv = "SQRTW_OUTPUT_DIR";

struct RunConfig {
    // Monte Carlo protocol: 20000 paths of 1000 steps on [0, 1], mu0 = 1/2, beta = 0.
    std::size_t n_paths = 20000;
    std::size_t n_steps = 1000;
    double dt = 0.001;
    double mu0 = 0.5;
    double beta = 0.0;
    std::uint64_t seed = 1;
    std::filesystem::path output_dir = "sqrtw-out";
    std::string rng_name;  // filled from the library, not configurable
    unsigned threads = 0;  // 0 = machine parallelism; never changes results
    bool compress = true;

    // simulate
    std::size_t csv_paths = 0;   // 0 = all paths
    std::size_t csv_stride = 1;

    // kernels
    double kernel_t = 1.0;
    double x_min = -5.0;
    double x_max = 5.0;
    std::size_t kernel_points = 1001;
    std::size_t hist_bins = 0;  // 0 = Sturges

    // fpsolve
    std::string fp_mode = "schrodinger";  // heat | schrodinger | sqrt-process
    double sigma0 = 0.5;
    double t_final = 1.0;
    std::size_t fp_points = 4097;
    std::size_t fp_steps = 1000;
    std::size_t refinements = 2;
    std::vector<double> snapshot_times;  // empty = {t_final}
};

/// Defaults, with the environment override applied to output_dir.
RunConfig default_config();

/// Throws ConfigError naming the first invalid field.
void validate(const RunConfig& c);

nlohmann::json to_json(const RunConfig& c);

/// Overlays the keys present in `j` onto `c`. Unknown keys and wrong types
/// raise ConfigError.
void apply_json(RunConfig& c, const nlohmann::json& j);

/// Reads a JSON config file (ConfigError if missing or malformed).
nlohmann::json load_config_file(const std::filesystem::path& path);

}  // namespace sqrtw::app
