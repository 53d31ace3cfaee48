#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fermicycle/bounds.hpp"
#include "fermicycle/config.hpp"

namespace fermicycle::harness {

// Stable CLI exit-code contract.
enum ExitCode : int {
    kOk = 0,
    kConfigError = 1,
    kNonConvergence = 2,
    kCertificationFailure = 3,  // bound ordering or ledger law violated
};

struct SweepRow {
    std::optional<double> swept_value;  // empty for single runs
    CycleReport report;
    BoundReport bounds;
};

// Run the configured cycle (finite-time or quasistatic), certify it against
// the bound hierarchy, and re-verify the first/second-law ledger checks.
SweepRow evaluate_point(const RunConfig& config, std::optional<double> swept_value);

// Ledger law checks applied to every emitted row; returns human-readable
// descriptions of any breach.
std::vector<std::string> ledger_violations(const CycleReport& report);

// Deterministic CSV: 17 significant digits, '.' decimal separator, '\n'
// line endings; absent values (undefined efficiency, bounds awaiting their
// closed form) serialize as empty fields.
std::string csv_header(const RunConfig& config, bool with_sweep_column);
std::string csv_row(const SweepRow& row, bool with_sweep_column);
std::string format_number(double value);

// Single run: human-readable report to `out`, optional one-row CSV.
int run_single(const RunConfig& config, std::ostream& out,
               const std::optional<std::string>& csv_path);

// Sweep over the config's grid; rows are computed (possibly by several
// workers) and written in grid order. Returns an ExitCode.
int run_sweep(const RunConfig& config, const std::string& csv_path, int workers,
              std::ostream& out);

// Invariant suite for one config: convergence, start-state independence,
// report periodicity, ledger laws, bound orderings. One line per check.
int verify_config(const RunConfig& config, std::ostream& out);

}  // namespace fermicycle::harness
