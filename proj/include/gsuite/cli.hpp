#pragma once

// Command-line front end: `gsuite run|check|datasets [flags]`.
//
// Every setting resolves as: command-line flag > config file > built-in
// default. The config file is UTF-8 "key = value" lines with '#' comments;
// keys are the long flag names. It is taken from --config, else from the
// GSUITE_CONFIG environment variable.

#include <gsuite/bench.hpp>
#include <gsuite/models.hpp>

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gsuite::cli {

enum ExitCode : int {
    kSuccess = 0,
    kUsageError = 2,
    kDataError = 3,
    kConsistencyError = 4,
};

struct CliConfig {
    ModelKind model = ModelKind::gcn;
    CompModel comp = CompModel::mp;
    std::string dataset = "er:64:0.1:42";
    std::size_t layers = 2;
    std::size_t hidden = 16;
    double epsilon = 0.0;
    Activation activation = Activation::relu;
    std::size_t repeats = 3;
    std::uint64_t seed = 0;
    Precision precision = Precision::f64;
    std::string output = "-"; ///< "-" is stdout
    ReportFormat format = ReportFormat::json;
    std::size_t warmup = 0;

    friend bool operator==(const CliConfig&, const CliConfig&) = default;
};

/// Raw key -> value settings, as read from flags or a config file.
using Settings = std::map<std::string, std::string>;

/// The recognized keys (long flag names without "--").
const std::vector<std::string>& config_keys();

/// Built-in defaults in config-file syntax.
std::string_view default_config_text();

/// Parses config-file text; rejects unknown keys, duplicates and malformed lines.
Settings parse_config_text(std::string_view text, std::string_view origin = "<config>");

/// Applies defaults < file < flags and validates the result.
CliConfig resolve_config(const Settings& flags, const Settings& file);

/// Parses flags (no subcommand, no program name) and merges them over the
/// given config-file text.
CliConfig parse_config(const std::vector<std::string>& args, std::string_view config_text = {});

/// The model spec a config describes for a dataset of `feature_length` columns.
ModelSpec build_spec(const CliConfig& config, std::size_t feature_length);

int run(const CliConfig& config, std::ostream& out, std::ostream& err);
int check(const CliConfig& config, std::ostream& out, std::ostream& err);
int datasets(std::ostream& out);

/// Full entry point: args exclude the program name. `env_config` is the value
/// of GSUITE_CONFIG, if set.
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
               std::optional<std::string> env_config = std::nullopt);

} // namespace gsuite::cli
