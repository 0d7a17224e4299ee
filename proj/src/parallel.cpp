#include "relcap/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <optional>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace relcap::parallel {

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

ExtremalResult extremal_oracle(double b, std::size_t u_grid, std::size_t q_grid) {
    if (!(b > 0.0 && b < 1.0)) throw DomainError("extremal_oracle: b must lie in (0, 1)");
    if (u_grid < 100 || q_grid < 100) throw DomainError("extremal_oracle: grids must have at least 100 points");
    std::vector<ExtremalResult> rows(u_grid);
    const auto n = static_cast<std::ptrdiff_t>(u_grid);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < n; ++k) {
        const std::size_t i = static_cast<std::size_t>(k) + 1;
        const double u = -b + 2.0 * b * static_cast<double>(i) / static_cast<double>(u_grid + 1);
        ExtremalResult row;
        row.min_objective = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < q_grid; ++j) {
            const double q = static_cast<double>(j) / static_cast<double>(q_grid - 1);
            const ThreePointDistribution d = three_point(b, u, q);
            if (d.p < 0.0 || d.r < 0.0) continue;
            ++row.feasible_points;
            const double value = three_point_objective(d);
            if (value < row.min_objective) {
                row.min_objective = value;
                row.argmin = d;
            }
        }
        rows[static_cast<std::size_t>(k)] = row;
    }
    ExtremalResult best;
    best.min_objective = std::numeric_limits<double>::infinity();
    for (const ExtremalResult& row : rows) {
        best.feasible_points += row.feasible_points;
        if (row.min_objective < best.min_objective) {
            best.min_objective = row.min_objective;
            best.argmin = row.argmin;
        }
    }
    return best;
}

double max_abs_radial(const Trajectory& traj, std::size_t grid) {
    if (grid == 0) throw DomainError("max_abs_radial: grid must be positive");
    const double period = traj.duration();
    std::vector<double> values(grid + 1);
    const auto n = static_cast<std::ptrdiff_t>(grid + 1);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < n; ++k) {
        const auto j = static_cast<std::size_t>(k);
        const double t = j == grid ? period : period * static_cast<double>(j) / static_cast<double>(grid);
        values[j] = std::fabs(traj.beta_radial(t));
    }
    double best = 0.0;
    for (double v : values) best = std::max(best, v);
    for (double c : traj.singular_times()) {
        best = std::max(best, std::fabs(traj.beta_radial(c, Side::right)));
        best = std::max(best, std::fabs(traj.beta_radial(c, Side::left)));
    }
    return std::min(best, traj.beta());
}

std::vector<InequalityWitness> check_theorem1_batch(std::span<const ZeroMeanProfile> profiles) {
    std::vector<InequalityWitness> out(profiles.size());
    std::vector<std::exception_ptr> errors(profiles.size());
    const auto n = static_cast<std::ptrdiff_t>(profiles.size());
#pragma omp parallel for schedule(dynamic, 8)
    for (std::ptrdiff_t k = 0; k < n; ++k) {
        const auto i = static_cast<std::size_t>(k);
        try {
            out[i] = check_theorem1(profiles[i]);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return out;
}

std::vector<CapacityReport> compare_symmetric_batch(std::span<const Scenario> scenarios,
                                                    const CompareOptions& options) {
    std::vector<std::optional<CapacityReport>> slots(scenarios.size());
    std::vector<std::exception_ptr> errors(scenarios.size());
    const auto n = static_cast<std::ptrdiff_t>(scenarios.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t k = 0; k < n; ++k) {
        const auto i = static_cast<std::size_t>(k);
        try {
            slots[i] = compare_symmetric(scenarios[i].trajectory, scenarios[i].channel, options);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    std::vector<CapacityReport> out;
    out.reserve(slots.size());
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

}  // namespace relcap::parallel
