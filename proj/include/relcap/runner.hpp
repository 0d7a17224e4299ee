#pragma once

// Scenario runner behind the command-line tool.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "relcap/config.hpp"
#include "relcap/report.hpp"

namespace relcap {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// simulate runs the listed tasks (default: capacities); verify runs every
/// applicable task (default) and adds cross-checks; sweep runs only the sweep.
enum class Mode { simulate, verify, sweep };
enum class Format { csv, json };

std::string extension(Format format);

struct RunOptions {
    Mode mode = Mode::simulate;
    Format format = Format::csv;
    std::filesystem::path out = ".";
    std::optional<std::uint64_t> seed;
    std::optional<double> tol;
    std::optional<SweepConfig> sweep;
};

struct TaskReport {
    std::string scenario_id;
    std::string task;
    Table table;
    std::vector<Assertion> assertions;
    std::vector<std::string> warnings;

    bool passed() const;
    std::string render(Format format) const;
};

/// Seed, tolerance and sweep overrides from the command line; re-validated.
ScenarioConfig apply_overrides(ScenarioConfig config, const RunOptions& options);

/// Tasks executed for a scenario in the given mode.
std::vector<Task> planned_tasks(const ScenarioConfig& config, Mode mode);

/// Pure computation for one scenario; no I/O. Numerical failures become
/// failed assertions instead of exceptions.
std::vector<TaskReport> run_scenario(const ScenarioConfig& config, Mode mode);

/// Standalone extremal-oracle report (the oracle subcommand). Uses the
/// OpenMP kernel when `parallel` is set.
TaskReport run_oracle(const std::string& id, double b, std::size_t grid, bool verify, bool parallel);

struct RunSummary {
    std::vector<TaskReport> reports;
    std::vector<std::filesystem::path> files;
    int exit_code = 0;
};

/// Runs every scenario (concurrently), writes one file per task as
/// <out>/<scenario_id>.<task>.<ext>, then the index file last.
/// Throws IoError when the output directory or a file cannot be written.
RunSummary run(const std::vector<ScenarioConfig>& configs, const RunOptions& options);

/// Writes already computed reports plus the index (used by the oracle subcommand).
RunSummary write_reports(std::vector<TaskReport> reports, const RunOptions& options);

}  // namespace relcap
