// cli.hpp: run configuration and dispatch for the `survival` command-line tool.

#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "survival/propagate.hpp"

namespace survival::cli {

enum class Command { Ldos, Evolve, Regimes, Zeno, Tridiag };
enum class Spacing { Linear, Log };

std::string to_string(Command c);
std::string to_string(Spacing s);

/// Bad command line or configuration file; maps to exit code 1.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// `--help` was requested; carries the rendered help text.
class HelpRequested : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Tolerances {
    double quadrature = 1e-10;
    double chain_margin = 1.25;
    double zeno_delta = 0.05;

    friend bool operator==(const Tolerances&, const Tolerances&) = default;
};

struct RunConfig {
    Command command = Command::Evolve;
    std::optional<double> eps0;
    std::optional<double> v0;
    double v = 1.0;
    std::optional<std::string> star;
    double t_min = 0.01;
    double t_max = 100.0;
    std::size_t points = 2000;
    Spacing spacing = Spacing::Log;
    std::vector<Route> routes{Route::EigenOracle};
    std::string out = ".";
    std::optional<std::size_t> depth;
    bool timestamp = true;
    Tolerances tolerances;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

inline constexpr int kExitSuccess = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNumeric = 2;

/// Parses `args` (subcommand first, program name excluded). Flags override
/// values from `--config <file>`. Throws UsageError or HelpRequested.
RunConfig parse_config(const std::vector<std::string>& args);

nlohmann::json config_to_json(const RunConfig& config);

/// Inverse of config_to_json; also accepts hand-written config files, where
/// every key is optional. Throws UsageError on unknown keys or bad values.
RunConfig config_from_json(const nlohmann::json& doc, RunConfig base = {});

/// Reads the `# config: {...}` header embedded in an artifact.
RunConfig config_from_artifact(const std::filesystem::path& path);

std::vector<double> time_grid(const RunConfig& config);

/// Executes the command and returns the written artifact paths.
std::vector<std::filesystem::path> run(const RunConfig& config);

/// Full tool entry point: parse, run, report; returns the process exit code.
int main(const std::vector<std::string>& args);

} // namespace survival::cli
