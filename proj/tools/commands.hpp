#ifndef TOMOCIRC_TOOLS_COMMANDS_HPP
#define TOMOCIRC_TOOLS_COMMANDS_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "tomocirc/io.hpp"

namespace tomocirc::cli {

enum ExitCode : int { ok = 0, verify_failure = 1, validation_failure = 2, numerical_failure = 3 };

enum class OutputFormat { csv, json };

/// Flag overrides shared by every subcommand.
struct Options {
    std::filesystem::path out_dir = ".";
    std::optional<std::uint64_t> seed;
    std::optional<double> tol;
    std::optional<std::string> method;
    OutputFormat format = OutputFormat::csv;
    bool corrupt_s_sign = false;  // verify only: mutation check for the sweep
};

int cmd_tomogram(const io::Json& config, const Options& options, std::ostream& out);
int cmd_wigner(const io::Json& config, const Options& options, std::ostream& out);
int cmd_josephson(const io::Json& config, const Options& options, std::ostream& out);
int cmd_coupled(const io::Json& config, const Options& options, std::ostream& out);
int cmd_measures(const io::Json& config, const Options& options, std::ostream& out);
int cmd_verify(const io::Json& config, const Options& options, std::ostream& out);

/// Parses argv, dispatches, and maps exceptions to exit codes. Errors are
/// written to `err` as one line of JSON.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

} // namespace tomocirc::cli

#endif
