#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "uptail/families.hpp"

namespace uptail {

enum class OutputFormat { csv, json };

/// Everything a CLI invocation needs after argument parsing.
struct RunConfig {
    std::string subcommand;
    FamilySpec family;
    /// Hypergraph text file used instead of a built-in family.
    std::string graph_path;
    std::vector<std::size_t> n_grid;
    std::vector<double> p_grid{0.5};
    std::vector<double> t_grid;
    std::vector<double> eps_grid;
    std::string method = "exact";
    double samples = 1e5;
    std::uint64_t seed = 1;
    std::size_t workers = 1;
    double r = 1.0;
    std::optional<double> beta;
    double gamma = 0.125;
    std::optional<double> witness_x;
    double constant_c = 1.0;
    double constant_d = 1.0;
    std::vector<std::string> suites;
    double scale = 1.0;
    OutputFormat format = OutputFormat::csv;
    std::string output_path;

    /// Throws ContractViolation when the configuration is unusable.
    void validate() const;
};

/// Default worker count: the UPTAIL_WORKERS environment variable when set,
/// otherwise the machine's hardware concurrency.
std::size_t default_workers();

/// Formats with 17 significant digits.
std::string format_number(double x);

/// Executes a parsed configuration, writing rows to `out` (or to the
/// configured output file) and diagnostics to `err`. Returns the exit status:
/// 0 success, 1 verification failure, 2 usage error.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv (flags, optionally layered over a --config file) and runs.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace uptail
