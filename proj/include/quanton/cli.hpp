#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "quanton/core.hpp"

namespace quanton::cli {

/// Bad command line or config file: missing, unknown or mistyped keys. Maps to exit status 2.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class OutputFormat { json, csv };

/// Fully resolved run: flags over config file over defaults.
struct RunConfig {
    std::string command;
    nlohmann::json parameters = nlohmann::json::object();
    UnitSystem units;
    std::optional<std::string> output_path;
    OutputFormat format = OutputFormat::json;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitNumerical = 1;
inline constexpr int kExitValidation = 2;

/// Names of the supported subcommands.
std::vector<std::string> command_names();

/// Parse argv-style arguments (without the program name). Throws ValidationError.
RunConfig parse_arguments(const std::vector<std::string>& args);

/// Run a resolved config and render its output document.
std::string execute(const RunConfig& config);

/// Full front end: parse, execute, write. Returns the exit status; diagnostics go to `err`,
/// output to `out` unless an output path is configured.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// 17 significant digits, scientific notation ("%.16e").
std::string format_number(double value);

/// JSON text with every floating-point number in format_number form; keys sorted, 2-space indent.
std::string dump_json(const nlohmann::json& value);

}  // namespace quanton::cli
