// cli.hpp
// Experiment configuration, execution and result serialization for the
// command-line front end.

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace qgamble::cli {

inline constexpr const char* kVersion = "qgamble 0.1.0";

enum class Command { Honest, Cheat, Sweep, Entangle, Verify };
enum class Format { Json, Csv };

std::string to_string(Command c);

struct RunConfig {
    Command command = Command::Verify;
    std::uint64_t seed = 0;
    std::uint64_t rounds = 1'000'000;
    std::optional<double> r;  // defaults to the optimal check rate for R
    double R = 1e4;
    double noise = 0.0;
    double abort_threshold = 1.0;
    double theta = 0.0;
    double phi = 0.0;
    std::string claim = "zero";           // zero | zerobar | nearest
    std::string policy = "z,z";           // basis per guess (Zero,ZeroBar): z, x or a plane angle in radians
    std::string table = "zero,zerobar";   // claim on plus, claim on minus
    std::size_t theta_points = 200;
    Format format = Format::Json;
    std::optional<std::string> output;

    double check_rate() const;
    /// Throws ConfigError naming the offending field.
    void validate() const;
};

/// Invalid configuration; maps to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Scalar = std::variant<double, std::int64_t, std::string, bool>;

struct Metric {
    std::string name;
    double value;
    std::optional<double> std_error;
};

/// A comparison embedded in a result. `relation` is one of
/// "abs_diff" (|lhs - rhs| <= tolerance), "le" (lhs <= rhs + tolerance) or
/// "ge" (lhs >= rhs - tolerance).
struct Check {
    std::string name;
    double lhs;
    double rhs;
    double tolerance;
    std::string relation;
    bool pass;
};

Check make_check(std::string name, double lhs, double rhs, double tolerance, std::string relation = "abs_diff");

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Scalar>> rows;
};

struct ResultDocument {
    std::string version = kVersion;
    std::string command;
    std::vector<std::pair<std::string, Scalar>> config;
    std::vector<Metric> metrics;
    std::vector<Check> checks;
    Table table;

    bool all_passed() const;
};

/// Parses argv (including argv[0]). Throws ConfigError on bad input.
/// Returns nullopt when help or version output was requested; `message`
/// then holds the text to print.
std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::string& message);

ResultDocument run(const RunConfig& config);

/// JSON is a single object with fixed key order; CSV is the table when the
/// document has one, otherwise one row per metric and check. Doubles are
/// printed with 17 significant digits.
std::string serialize(const ResultDocument& doc, Format format);

/// Full CLI: parse, run, write output. Returns the process exit code
/// (0 all checks passed, 1 a check failed, 2 configuration error).
int main_entry(int argc, const char* const* argv, std::string& out, std::string& err);

}  // namespace qgamble::cli
