#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mzjm/jointmeas.hpp"
#include "mzjm/mzi.hpp"

namespace mzjm::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitViolation = 1,
    kExitInvalidInput = 2,
};

/// Malformed scenario file or command argument.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ExplicitStrategy {
    CMatrix basis;
    std::vector<std::size_t> subset;
};

/// A fully resolved scenario: presets are expanded into matrices at parse time,
/// so emitting and re-parsing reproduces the same setup.
struct Scenario {
    std::string id;
    CMatrix quanton;
    std::size_t detector_dim = 2;
    CMatrix detector_state;
    CMatrix detector_unitary;
    double phi = 0.0;
    std::optional<ExplicitStrategy> strategy;  // empty: optimal strategy
    std::uint64_t seed = 0;

    MZISetup setup() const;
    Strategy make_strategy(const MZISetup &setup) const;
};

/// Throws InputError for malformed JSON and mzjm::Error when the resolved
/// matrices do not form a valid setup or strategy.
Scenario parse_scenario(std::string_view json_text);
Scenario load_scenario(const std::string &path);
std::string emit_scenario(const Scenario &scenario);

struct ResultRow {
    std::string id;
    std::uint64_t seed = 0;
    std::size_t dim = 0;
    bool optimal = false;
    DualityReport report;
    double identity_residual = 0.0;
    double jm_margin = 0.0;
};

ResultRow evaluate(const Scenario &scenario);
ResultRow evaluate(const std::string &id, std::uint64_t seed, const MZISetup &setup, const Strategy &strategy,
                   bool optimal);

/// "#schema=1" line followed by the column names, newline terminated.
std::string csv_header();
/// Floats with 17 significant digits, newline terminated.
std::string csv_row(const ResultRow &row);

/// Named checks that must hold on every row; returns the first failure.
struct Violation {
    std::string check;
    double value = 0.0;
};
std::optional<Violation> check_row(const ResultRow &row);

/// Structure of the joint observable: smallest eigenvalue over the four
/// effects and the worst residuals of completeness and both marginals.
struct JointCheck {
    double min_eigenvalue = 0.0;
    double completeness = 0.0;
    double marginal_N = 0.0;
    double marginal_M = 0.0;
};
JointCheck check_joint(const MZISetup &setup, const Strategy &strategy);

int cmd_report(const Scenario &scenario, std::ostream &out);

struct CheckJmOptions {
    double m0 = 0.5;
    double m = 0.0;
    double n = 0.0;
    std::string oracle = "full";  // full | reduced | off
    double resolution = 0.01;
    double slack = 0.0;
};

/// m along x and n along z.
int cmd_check_jm(const CheckJmOptions &options, std::ostream &out);
/// Instance derived from a scenario via instance_from_setup; m0/m/n in options are ignored.
int cmd_check_jm(const Scenario &scenario, const CheckJmOptions &options, std::ostream &out);

struct SweepOptions {
    std::size_t count = 1000;
    std::uint64_t seed = 1;
    std::size_t dim = 0;  // 0 cycles through 2, 3, 4
    unsigned threads = 0;
};

/// Rows go to `out` in index order; violations are reported on `err`.
int cmd_sweep(const SweepOptions &options, std::ostream &out, std::ostream &err);

int cmd_sample(const Scenario &scenario, std::uint64_t shots, std::uint64_t seed, std::ostream &out);

int cmd_gamma_slope(const Scenario &scenario, double p_step, std::ostream &out);

/// Log verbosity from MZJM_LOG (quiet, info, debug); defaults to info.
enum class LogLevel { Quiet, Info, Debug };
LogLevel log_level();
void log_info(std::string_view message);
void log_debug(std::string_view message);

}  // namespace mzjm::cli
