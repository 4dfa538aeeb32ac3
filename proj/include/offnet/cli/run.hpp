#pragma once

#include "offnet/cli/scenario.hpp"
#include "offnet/cli/table.hpp"

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace offnet::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kUnreadable = 2,
    kSchema = 3,
    kInvalidParameters = 4,
    kSolverError = 5,
    kVerifyFailed = 6,
    kOutputError = 7,
};

struct RunOptions {
    std::string verb = "solve";
    std::string scenario_path;
    std::string out_dir;  ///< empty: scenario "output" field, then "out"
    std::optional<std::size_t> grid;
    std::optional<double> tol;
    std::size_t threads = 0;
    bool quiet = false;
};

const std::vector<std::string> &verbs();

/// Result table of the regime the scenario names.
Table solve_table(const Scenario &s);

Table trajectory_table(const Trajectory &tr);
Table dynamics_table(const Scenario &s);
Table collusion_table(const Scenario &s);
Table collusion_metrics_table(const Scenario &s);
Table compare_table(const Scenario &s);

struct VerifyOutcome {
    Table table;
    bool passed = true;
};

/// Oracle checks of the scenario's solver output.
VerifyOutcome verify_table(const Scenario &s, std::optional<std::size_t> grid, std::optional<double> tol);

/// One row per sweep sample, merged in sample order.
Table sweep_table(const Scenario &s, std::size_t threads = 0);

/// Runs a verb end to end: loads the scenario, writes CSVs and the manifest,
/// and maps errors to exit codes with a one-line diagnostic on err.
int run(const RunOptions &options, std::ostream &out, std::ostream &err);

} // namespace offnet::cli
