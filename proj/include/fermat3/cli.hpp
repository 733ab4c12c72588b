#ifndef FERMAT3_CLI_HPP
#define FERMAT3_CLI_HPP

#include <array>
#include <complex>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include <fermat3/solver.hpp>

namespace fermat3::cli
{

enum class Command { Solve, Verify, Wp, Param, Nevanlinna };
enum class PairMode { Forward, Explicit };
enum class OutputFormat { Json, Csv };

namespace exit_code
{
inline constexpr int success = 0;
inline constexpr int failure = 1;
inline constexpr int usage = 2;
inline constexpr int fails_unless_c_zero = 3;
inline constexpr int no_exponential_solution = 4;
} // namespace exit_code

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    Command command = Command::Solve;

    // Equation instance (solve, verify).
    std::optional<std::array<cd, 3>> a;
    std::optional<std::array<cd, 3>> b;
    cd alpha = 0;
    cd beta = 0;
    std::optional<cd> c;

    PairMode pair_mode = PairMode::Forward;
    std::optional<cd> c0;
    std::optional<cd> c1;

    // Homogeneous constant requested for solve, or the candidate's C for verify.
    cd requested_C = 0;
    // Candidate constants for verify.
    std::optional<cd> A;
    std::optional<cd> D;

    // Points per circle (solve, verify), points per side (wp, param) or
    // initial angular nodes (nevanlinna). Unset means the command default.
    std::optional<int> grid;
    std::string output_path;
    OutputFormat format = OutputFormat::Json;

    // param
    std::vector<cd> h{cd(0), cd(1)};
    int eta = 0;

    // nevanlinna
    std::string function = "wp";
    double r_min = 4;
    double r_max = 20;
    int r_count = 9;
    std::string r_spacing = "linear";

    // Throws UsageError when a, b or c is missing.
    EquationInstance instance() const;
    int grid_or_default() const;

    bool operator==(const RunConfig &) const = default;
};

std::string to_string(Command command);

// "re,im" or "re"; locale independent. Throws UsageError.
cd parse_complex_literal(const std::string &text);

nlohmann::json complex_to_json(cd z);
// Requires a two-element numeric array. Throws UsageError.
cd complex_from_json(const nlohmann::json &j, const std::string &key);

// Applies the keys of a config document onto base; unknown keys are rejected.
RunConfig apply_config_json(const nlohmann::json &doc, RunConfig base = {});
nlohmann::json config_to_json(const RunConfig &cfg);

// Cross-field checks (c != 0, Fermat pair, ranges). Throws UsageError.
void validate_config(const RunConfig &cfg);

// Parses argv. Returns either a validated RunConfig or an exit code when
// help was printed or parsing failed (message written to err).
std::variant<RunConfig, int> parse_config(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

struct Report {
    nlohmann::json json;
    CsvTable csv;
};

std::string format_number(double value);
std::string render(const Report &report, OutputFormat format);

// Writes to path, or to out when path is empty. Returns false when the
// file cannot be written.
bool emit_report(const Report &report, OutputFormat format, const std::string &path, std::ostream &out);

// Runs the command and returns the process exit code.
int dispatch(const RunConfig &cfg, std::ostream &out, std::ostream &err);

// Report builders, also used by tests.
nlohmann::json solution_json(const CandidateSolution &sol, const VerificationReport &report);
int exit_code_for(Verdict verdict);

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace fermat3::cli

#endif
