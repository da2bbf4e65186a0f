#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "culinary/config.hpp"
#include "culinary/error.hpp"

namespace culinary {

inline constexpr std::array<std::string_view, 8> kSubcommands = {
    "ingest", "diversity", "complexity", "notable", "similarity", "classify", "health", "report"};

struct RunResult {
    /// 0 ok, 2 config error, 3 data error, 4 numeric failure, 1 anything else.
    int exit_code = 0;
    /// Single machine-parsable line when exit_code != 0.
    std::string error_line;
    std::filesystem::path manifest;
    std::vector<std::filesystem::path> artifacts;
};

/// Runs one subcommand end to end. Never throws; failures are reported
/// through exit_code and error_line.
RunResult run(std::string_view subcommand, const RunConfig& config);

/// `error kind=<kind> module=<module> message="<escaped>"`
std::string format_error_line(std::string_view kind, std::string_view module, std::string_view message);

/// Library version string.
std::string_view version();

}  // namespace culinary
