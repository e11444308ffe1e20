#pragma once

#include <filesystem>
#include <iosfwd>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "config.hpp"

namespace sqrtw::app {

/// Version of the CSV column layouts and JSON report schemas (docs/artifacts.md).
inline constexpr std::string_view kArtifactVersion = "1";

struct CommandResult {
    std::vector<std::filesystem::path> files;  // everything written, manifest last
    nlohmann::json report;                     // the command's JSON report
};

/// Each command validates `config`, writes into config.output_dir and throws
/// ConfigError / IoError (or a library std::invalid_argument) on failure.
CommandResult cmd_simulate(const RunConfig& config);
CommandResult cmd_table1(const RunConfig& config);
CommandResult cmd_kernels(const RunConfig& config);
CommandResult cmd_fpsolve(const RunConfig& config);

/// Digest of the configuration fields that determine emitted numbers
/// (threads, output location and compression are excluded).
std::string config_fingerprint(const RunConfig& config);

/// Full command line entry point. Returns 0 on success, 1 for configuration
/// errors and 2 for I/O errors.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sqrtw::app
