#include "relcap/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "relcap/parallel.hpp"

namespace relcap {

std::string extension(Format format) { return format == Format::csv ? "csv" : "json"; }

bool TaskReport::passed() const {
    return std::all_of(assertions.begin(), assertions.end(), [](const Assertion& a) { return a.passed; });
}

std::string TaskReport::render(Format format) const {
    return format == Format::csv ? to_csv(table) : to_json(table, scenario_id, task, assertions);
}

namespace {

constexpr double kClosedFormTolerance = 1e-8;
constexpr double kIdentityTolerance = 1e-7;
constexpr double kDisplacementTolerance = 1e-8;
constexpr double kKlTolerance = 1e-10;

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

Assertion check(std::string name, bool passed, std::string detail = {}) {
    return {std::move(name), passed, std::move(detail)};
}

CompareOptions compare_options(const ScenarioConfig& c) {
    return {c.numerics.quadrature(), c.numerics.radial_grid, kClosedFormTolerance};
}

TrajectoryParams with_beta(TrajectoryParams params, double beta) {
    std::visit(
        [&](auto& p) {
            if constexpr (requires { p.beta; }) {
                p.beta = beta;
            } else {
                throw DomainError("a sampled trajectory has no adjustable beta");
            }
        },
        params);
    return params;
}

// Trajectory witness for the inequality; only constant-speed paths carry a
// zero-mean radial profile.
std::optional<InequalityWitness> trajectory_witness(const Trajectory& traj, const ScenarioConfig& c) {
    if (!traj.constant_speed()) return std::nullopt;
    const auto profile = profile_from_trajectory(traj, c.numerics.quadrature(), c.numerics.radial_grid);
    return check_theorem1(profile, "trajectory");
}

CapacityRow capacity_row(const std::string& id, const Trajectory& traj, const ChannelParams& channel,
                         const ScenarioConfig& c, Mode mode, std::vector<Assertion>& assertions,
                         std::vector<std::string>& warnings, const std::string& label) {
    const CapacityReport report = compare_symmetric(traj, channel, compare_options(c));
    CapacityRow row;
    row.scenario_id = id;
    row.fill(report);
    if (auto w = trajectory_witness(traj, c)) {
        row.fill(*w);
        row.b = report.b;
        if (mode == Mode::verify) {
            assertions.push_back(check(label + "theorem inequality (margin > 0 unless b = 0)", w->verdict != Verdict::fail,
                                       "margin " + format_double(w->margin)));
        }
    }
    for (const auto& msg : report.warnings) warnings.push_back(label + msg);

    if (report.constant_speed && report.admissible) {
        assertions.push_back(check(label + "gap > 0", report.gap > 0.0, "gap " + format_double(report.gap)));
    } else if (report.status == CapacityStatus::counterexample_candidate) {
        warnings.push_back(label + "non-positive gap flagged as counterexample candidate");
    }
    if (mode == Mode::verify && report.coverage_a && report.coverage_b) {
        const double dev = std::max(report.closed_form_deviation_a, report.closed_form_deviation_b);
        assertions.push_back(check(label + "closed-form capacity agreement", dev <= kClosedFormTolerance,
                                   "relative deviation " + sci(dev)));
    }
    return row;
}

TaskReport run_capacities(const ScenarioConfig& c, Mode mode) {
    TaskReport out{c.scenario_id, "capacities", {}, {}, {}};
    const Trajectory traj = make_trajectory(c.trajectory);
    const CapacityRow row = capacity_row(c.scenario_id, traj, c.channel, c, mode, out.assertions, out.warnings, "");
    out.table = capacity_table({row});
    return out;
}

TaskReport run_identities(const ScenarioConfig& c, Mode) {
    TaskReport out{c.scenario_id, "identities", {}, {}, {}};
    const Trajectory traj = make_trajectory(c.trajectory);
    const QuadratureSpec spec = c.numerics.quadrature();
    const TimeMap map(traj, spec);
    const TimeIdentityReport rep = verify_time_identities(traj, spec);
    const double displacement = radial_displacement_integral(traj, spec);

    out.assertions.push_back(check("integral dt/alpha_A = T_B", rep.deviation_a < kIdentityTolerance * rep.expected_a,
                                   "deviation " + sci(rep.deviation_a)));
    out.assertions.push_back(check("integral dtau/alpha_B = T_A", rep.deviation_b < kIdentityTolerance * rep.expected_b,
                                   "deviation " + sci(rep.deviation_b)));
    if (traj.constant_speed()) {
        out.assertions.push_back(check("radial displacement = 0", std::fabs(displacement) < kDisplacementTolerance,
                                       "integral " + sci(displacement)));
    }
    out.table.columns = {"scenario_id", "beta",        "T_A",         "T_B",
                         "gamma",       "integral_a",  "deviation_a", "integral_b",
                         "deviation_b", "radial_displacement",        "status"};
    out.table.rows.push_back({c.scenario_id, traj.beta(), map.alice_duration(), map.bob_duration(), map.gamma(),
                              rep.integral_a, rep.deviation_a, rep.integral_b, rep.deviation_b, displacement,
                              std::string(out.passed() ? "pass" : "fail")});
    return out;
}

TaskReport run_theorem(const ScenarioConfig& c, Mode mode) {
    TaskReport out{c.scenario_id, "theorem", {}, {}, {}};
    std::vector<CapacityRow> rows;
    const auto add = [&](const std::string& id, const ZeroMeanProfile& f, std::optional<double> beta) {
        const InequalityWitness w = check_theorem1(f, id);
        CapacityRow row;
        row.scenario_id = id;
        row.beta = beta;
        row.fill(w);
        row.status = to_string(w.verdict);
        rows.push_back(row);
        out.assertions.push_back(check(id + ": margin > 0 unless b = 0", w.verdict != Verdict::fail, "margin " + format_double(w.margin)));
        if (mode == Mode::verify) {
            const double diff = std::fabs(kl_form(f) - w.lhs);
            out.assertions.push_back(check(id + ": KL identity", diff <= kKlTolerance, "difference " + sci(diff)));
        }
    };

    if (c.profile) {
        add(c.scenario_id, ZeroMeanProfile::from_table(c.profile->values, c.profile->edges), std::nullopt);
    } else {
        const Trajectory traj = make_trajectory(c.trajectory);
        if (traj.constant_speed()) {
            add(c.scenario_id, profile_from_trajectory(traj, c.numerics.quadrature(), c.numerics.radial_grid),
                traj.beta());
        } else {
            CapacityRow row;
            row.scenario_id = c.scenario_id;
            row.beta = traj.beta();
            row.status = to_string(CapacityStatus::outside_proved_scope);
            rows.push_back(row);
            out.warnings.push_back("variable-speed trajectory: radial profile is not zero-mean; no witness");
        }
    }
    if (c.numerics.random_profiles > 0) {
        RandomSuiteOptions suite;
        suite.seed = c.numerics.seed;
        suite.count = c.numerics.random_profiles;
        const auto profiles = random_profiles(suite);
        for (std::size_t i = 0; i < profiles.size(); ++i) {
            char suffix[32];
            std::snprintf(suffix, sizeof suffix, "/rand%04zu", i + 1);
            add(c.scenario_id + suffix, profiles[i], std::nullopt);
        }
    }
    out.table = capacity_table(rows);
    return out;
}

TaskReport run_lemma(const ScenarioConfig& c, Mode) {
    TaskReport out{c.scenario_id, "lemma", {}, {}, {}};
    const Trajectory traj = make_trajectory(c.trajectory);
    CapacityRow row;
    row.scenario_id = c.scenario_id;
    row.beta = traj.beta();
    row.sigma = c.channel.sigma();
    row.bandwidth = c.channel.bandwidth;
    if (!traj.constant_speed()) {
        row.status = to_string(CapacityStatus::outside_proved_scope);
        out.warnings.push_back("variable-speed trajectory: lemma not applicable");
        out.table = capacity_table({row});
        return out;
    }
    const double b = max_abs_radial(traj, c.numerics.radial_grid);
    row.b = b;
    row.gamma = 1.0 / std::sqrt((1.0 - traj.beta()) * (1.0 + traj.beta()));
    try {
        const LemmaReport rep = check_lemma1(traj.beta(), b, c.channel.sigma());
        row.lhs = rep.lhs;
        row.bound = rep.rhs;
        row.margin = rep.slack;
        row.status = rep.boundary ? "boundary" : (rep.holds ? "pass" : "fail");
        out.assertions.push_back(check("ln(1-b^3) >= ln((sigma/gamma+1)/(gamma sigma+1))", rep.holds,
                                       "slack " + format_double(rep.slack)));
    } catch (const DomainError& e) {
        row.status = to_string(CapacityStatus::infeasible);
        out.warnings.push_back(e.what());
    }
    out.table = capacity_table({row});
    return out;
}

Table oracle_table(const std::string& id, double b, std::size_t grid, const ExtremalResult& res) {
    Table t;
    t.columns = {"scenario_id", "b", "u_grid", "q_grid", "min_L", "u", "p", "q", "r", "R_b", "status"};
    t.rows.push_back({id, b, std::uint64_t{grid}, std::uint64_t{grid}, res.min_objective, res.argmin.u, res.argmin.p,
                      res.argmin.q, res.argmin.r, proof_r(b),
                      std::string(res.min_objective > 0.0 ? "pass" : "fail")});
    return t;
}

TaskReport oracle_report(const std::string& id, double b, std::size_t grid, bool verify, const ExtremalResult& res) {
    TaskReport out{id, "oracle", oracle_table(id, b, grid, res), {}, {}};
    out.assertions.push_back(check("grid minimum of L > 0", res.min_objective > 0.0,
                                   "min_L " + format_double(res.min_objective)));
    if (verify) {
        const double at_q0 = three_point_objective(three_point(b, 0.0, 0.0));
        const double diff = std::fabs(at_q0 - proof_r(b));
        out.assertions.push_back(check("L(q=0) = R(b)", diff <= 1e-12, "difference " + sci(diff)));
    }
    return out;
}

TaskReport run_oracle_task(const ScenarioConfig& c, Mode mode) {
    const double b = c.oracle ? c.oracle->b : OracleConfig{}.b;
    return oracle_report(c.scenario_id, b, c.numerics.grid, mode == Mode::verify,
                         extremal_oracle(b, c.numerics.grid, c.numerics.grid));
}

TaskReport run_sweep(const ScenarioConfig& c, Mode mode) {
    TaskReport out{c.scenario_id, "sweep", {}, {}, {}};
    const SweepConfig& s = *c.sweep;
    std::vector<double> values;
    for (std::size_t i = 0; i < s.steps; ++i) {
        values.push_back(s.steps == 1 ? s.from
                                       : s.from + (s.to - s.from) * static_cast<double>(i) /
                                                      static_cast<double>(s.steps - 1));
    }
    std::sort(values.begin(), values.end());

    std::vector<CapacityRow> rows;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double v = values[i];
        const std::string label = "step " + std::to_string(i + 1) + " (" + to_string(s.axis) + "=" + format_double(v) + "): ";
        const Trajectory traj =
            make_trajectory(s.axis == SweepAxis::beta ? with_beta(c.trajectory, v) : c.trajectory);
        ChannelParams channel = c.channel;
        double sigma = s.axis == SweepAxis::sigma ? v : c.channel.sigma();
        if (s.sigma_factor) {
            const double gamma = TimeMap(traj, c.numerics.quadrature()).gamma();
            const double bound = coverage_sigma_bound(gamma, max_abs_radial(traj, c.numerics.radial_grid));
            if (bound > 0.0) sigma = *s.sigma_factor * bound;
        }
        channel.power = sigma * channel.noise_density * channel.bandwidth;
        CapacityRow row = capacity_row(c.scenario_id, traj, channel, c, mode, out.assertions, out.warnings, label);
        const bool admissible = *row.sigma >= coverage_sigma_bound(*row.gamma, *row.b) * (1.0 - 1e-12);
        if (!admissible) row.status = to_string(CapacityStatus::infeasible);
        rows.push_back(row);
    }
    out.table = capacity_table(rows);
    return out;
}

TaskReport run_task(Task task, const ScenarioConfig& c, Mode mode) {
    try {
        switch (task) {
            case Task::capacities: return run_capacities(c, mode);
            case Task::identities: return run_identities(c, mode);
            case Task::theorem: return run_theorem(c, mode);
            case Task::lemma: return run_lemma(c, mode);
            case Task::oracle: return run_oracle_task(c, mode);
            case Task::sweep: return run_sweep(c, mode);
        }
    } catch (const std::exception& e) {
        // DomainError/NumericsError surfacing mid-task: the invariant could
        // not be evaluated, which counts as a failed assertion.
        TaskReport out{c.scenario_id, to_string(task), {}, {}, {}};
        out.table.columns = {"scenario_id", "status"};
        out.table.rows.push_back({c.scenario_id, std::string("error")});
        out.assertions.push_back(check(to_string(task) + " evaluation", false, e.what()));
        return out;
    }
    return {};
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw IoError("cannot open " + path.string() + " for writing");
    file << text;
    file.close();
    if (!file) throw IoError("failed writing " + path.string());
}

std::string index_text(const std::vector<TaskReport>& reports, const std::vector<std::filesystem::path>& files,
                       Format format) {
    const auto failed_names = [](const TaskReport& r) {
        std::string names;
        for (const auto& a : r.assertions) {
            if (a.passed) continue;
            if (!names.empty()) names += ";";
            names += a.name;
        }
        return names;
    };
    Table t;
    t.columns = {"scenario_id", "task", "file", "status", "failed_assertions"};
    for (std::size_t i = 0; i < reports.size(); ++i) {
        t.rows.push_back({reports[i].scenario_id, reports[i].task, files[i].filename().string(),
                          std::string(reports[i].passed() ? "pass" : "fail"), failed_names(reports[i])});
    }
    if (format == Format::csv) return to_csv(t);
    nlohmann::ordered_json j;
    bool all = true;
    auto list = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < reports.size(); ++i) {
        all = all && reports[i].passed();
        list.push_back({{"scenario_id", reports[i].scenario_id},
                        {"task", reports[i].task},
                        {"file", files[i].filename().string()},
                        {"status", reports[i].passed() ? "pass" : "fail"},
                        {"failed_assertions", failed_names(reports[i])}});
    }
    j["passed"] = all;
    j["reports"] = std::move(list);
    return j.dump(2) + "\n";
}

std::filesystem::path report_path(const RunOptions& options, const TaskReport& r) {
    std::string name = r.scenario_id + "." + r.task + "." + extension(options.format);
    return options.out / name;
}

void prepare_out(const std::filesystem::path& out) {
    std::error_code ec;
    std::filesystem::create_directories(out, ec);
    if (ec || !std::filesystem::is_directory(out)) {
        throw IoError("cannot create output directory " + out.string() + (ec ? ": " + ec.message() : ""));
    }
}

}  // namespace

ScenarioConfig apply_overrides(ScenarioConfig config, const RunOptions& options) {
    if (options.seed) config.numerics.seed = *options.seed;
    if (options.tol) config.numerics.rel_tol = *options.tol;
    if (options.sweep) config.sweep = options.sweep;
    validate_config(config);
    return config;
}

std::vector<Task> planned_tasks(const ScenarioConfig& c, Mode mode) {
    if (mode == Mode::sweep) return {Task::sweep};
    if (!c.tasks.empty()) return c.tasks;
    if (mode == Mode::simulate) return {Task::capacities};
    std::vector<Task> all = {Task::capacities, Task::identities, Task::theorem, Task::lemma, Task::oracle};
    if (c.sweep) all.push_back(Task::sweep);
    return all;
}

std::vector<TaskReport> run_scenario(const ScenarioConfig& config, Mode mode) {
    std::vector<TaskReport> out;
    for (Task t : planned_tasks(config, mode)) {
        if (t == Task::sweep && !config.sweep) {
            throw ConfigError("task 'sweep' needs a sweep block or --axis/--from/--to/--steps", "sweep", 0);
        }
        out.push_back(run_task(t, config, mode));
    }
    return out;
}

TaskReport run_oracle(const std::string& id, double b, std::size_t grid, bool verify, bool use_parallel) {
    const ExtremalResult res = use_parallel ? parallel::extremal_oracle(b, grid, grid) : extremal_oracle(b, grid, grid);
    return oracle_report(id, b, grid, verify, res);
}

RunSummary write_reports(std::vector<TaskReport> reports, const RunOptions& options) {
    prepare_out(options.out);
    RunSummary summary;
    for (const auto& r : reports) {
        summary.files.push_back(report_path(options, r));
        write_file(summary.files.back(), r.render(options.format));
    }
    write_file(options.out / ("index." + extension(options.format)), index_text(reports, summary.files, options.format));
    summary.exit_code =
        std::all_of(reports.begin(), reports.end(), [](const TaskReport& r) { return r.passed(); }) ? 0 : 1;
    summary.reports = std::move(reports);
    return summary;
}

RunSummary run(const std::vector<ScenarioConfig>& configs, const RunOptions& options) {
    std::vector<ScenarioConfig> prepared;
    for (const auto& c : configs) {
        prepared.push_back(apply_overrides(c, options));
        for (Task t : planned_tasks(prepared.back(), options.mode)) {
            if (t == Task::sweep && !prepared.back().sweep) {
                throw ConfigError("task 'sweep' needs a sweep block or --axis/--from/--to/--steps",
                                  "scenario " + prepared.back().scenario_id + ".sweep", 0);
            }
        }
    }
    prepare_out(options.out);

    const auto n = static_cast<std::ptrdiff_t>(prepared.size());
    std::vector<std::vector<TaskReport>> per_scenario(prepared.size());
    std::vector<std::exception_ptr> errors(prepared.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        try {
            per_scenario[i] = run_scenario(prepared[i], options.mode);
            for (const auto& r : per_scenario[i]) write_file(report_path(options, r), r.render(options.format));
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    RunSummary summary;
    for (auto& list : per_scenario) {
        for (auto& r : list) {
            summary.files.push_back(report_path(options, r));
            summary.reports.push_back(std::move(r));
        }
    }
    write_file(options.out / ("index." + extension(options.format)),
               index_text(summary.reports, summary.files, options.format));
    summary.exit_code = std::all_of(summary.reports.begin(), summary.reports.end(),
                                    [](const TaskReport& r) { return r.passed(); })
                            ? 0
                            : 1;
    return summary;
}

}  // namespace relcap
