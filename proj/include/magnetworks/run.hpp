// Batch driver: evolve densities, balance, solve, derive, dump.
#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>

#include "magnetworks/flow.hpp"
#include "magnetworks/scenario.hpp"

namespace magnetworks {

enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitSolver = 2, kExitIo = 3 };

struct RunConfig {
    std::filesystem::path scenario;
    std::optional<std::filesystem::path> out_dir;
    std::optional<int> stride;
    int verbosity = 0;
    std::optional<int> nx;
    std::optional<double> tol;
};

// Everything produced for one snapshot time.
struct SnapshotData {
    int index = 0;
    SolveSnapshot solve;
    ScalarField rho_plus;
    ScalarField rho_minus;
    double sink_factor = 1.0;
    double imbalance = 0.0;
    double capacity_violation = 0.0;
};

// Loads the scenario, applies overrides and re-validates.
Scenario resolve_scenario(const RunConfig& config);

// Output directory: --out, then the scenario's [output] dir, then
// $MAGNETWORKS_OUT, then "magnetworks_out".
std::filesystem::path resolve_output_dir(const RunConfig& config, const Scenario& s);

// Snapshot times t_start + k (t_end - t_start) / n_steps, k = 0..n_steps.
std::vector<double> snapshot_times(const Scenario& s);

// Largest internal evolution step and the number of substeps per snapshot
// interval.
struct StepPlan {
    double dt_limit = 0.0;
    long substeps = 0;
    double dt = 0.0;
};
StepPlan plan_steps(const Scenario& s);

// In-memory pipeline. The callback sees every snapshot in order, including a
// non-converged one; SolverError is thrown after it.
RunSummary simulate(const Scenario& s, const std::function<void(const SnapshotData&)>& on_snapshot);

struct RunResult {
    RunSummary summary;
    int exit_code = kExitOk;
    std::string message;
};

RunResult run(const RunConfig& config, std::ostream& log);

// Dry run report; returns the exit code.
int describe(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace magnetworks
