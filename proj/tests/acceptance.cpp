// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "relcap/channel.hpp"
#include "relcap/inequality.hpp"
#include "relcap/lightcone.hpp"
#include "relcap/parallel.hpp"

using namespace relcap;

namespace {

struct Outcome {
    bool passed = true;
    std::string detail;
};

Trajectory circle(double beta) { return make_trajectory(CircleParams{1.0, beta, {}, 2}); }
Trajectory radial(double beta) { return make_trajectory(RadialParams{1.0, beta, {1, 0, 0}, 2}); }
Trajectory square(double beta) {
    return make_trajectory(PolygonParams{{{1, 1, 0}, {-1, 1, 0}, {-1, -1, 0}, {1, -1, 0}, {1, 1, 0}}, beta, 2});
}

double rel_err(double value, double expected) { return std::fabs(value - expected) / std::fabs(expected); }

std::string fmt(const char* format, auto... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

Outcome ac1() {
    double worst = 0.0;
    for (double beta : {0.3, 0.6, 0.9}) {
        for (const Trajectory& traj : {circle(beta), radial(beta), square(beta)}) {
            const TimeIdentityReport rep = verify_time_identities(traj);
            worst = std::max({worst, rep.deviation_a / rep.expected_a, rep.deviation_b / rep.expected_b});
        }
    }
    return {worst < 1e-7, fmt("worst relative deviation %.3e (limit 1e-7)", worst)};
}

bool near_any(double t, const std::vector<double>& points, double width) {
    for (double p : points) {
        if (std::fabs(t - p) < width) return true;
    }
    return false;
}

Outcome ac2() {
    double worst = 0.0;
    std::size_t samples = 0;
    std::size_t skipped = 0;
    for (double beta : {0.3, 0.6, 0.9}) {
        for (const Trajectory& traj : {circle(beta), radial(beta), square(beta)}) {
            const TimeMap map(traj);
            const double h = 1e-6 * traj.duration();
            const auto images = singular_emission_times(Direction::a_to_b, traj, map);
            for (int i = 0; i < 500; ++i) {
                const double t = (traj.duration() - 2.0 * h) * (i + 0.5) / 500.0;
                if (near_any(t, images, 4.0 * h)) {
                    ++skipped;
                    continue;
                }
                const double fd = doppler_a_kinematic_oracle(traj, map, t, h);
                worst = std::max(worst, rel_err(fd, doppler_a(traj, t + 0.5 * h)));
                ++samples;
            }
        }
    }
    return {worst < 1e-5,
            fmt("%zu samples, %zu near cusp images skipped, worst relative error %.3e (limit 1e-5)", samples, skipped,
                worst)};
}

Outcome ac3() {
    std::mt19937_64 rng(2024);
    std::vector<Trajectory> paths;
    for (double beta : {0.3, 0.6, 0.9}) {
        paths.push_back(circle(beta));
        paths.push_back(radial(beta));
        paths.push_back(square(beta));
    }
    while (paths.size() < 15) paths.push_back(make_trajectory(oracle::random_polygon(rng)));
    double worst = 0.0;
    std::size_t combos = 0;
    bool all_covered = true;
    for (const Trajectory& traj : paths) {
        const double bound = coverage_sigma_bound(TimeMap(traj).gamma(), max_abs_radial(traj));
        for (double factor : {1.1, 3.0}) {
            const ChannelParams params = ChannelParams::with_sigma(factor * bound + 0.05, 2.0);
            for (Direction d : {Direction::a_to_b, Direction::b_to_a}) {
                const CapacityResult res = capacity(d, traj, params);
                if (!res.allocation.coverage || !res.closed_form_constant_speed) {
                    all_covered = false;
                    continue;
                }
                worst = std::max(worst, rel_err(res.value, *res.closed_form_constant_speed));
            }
            ++combos;
        }
    }
    return {all_covered && combos >= 30 && worst <= 1e-8,
            fmt("%zu combinations, full coverage %s, worst relative deviation %.3e (limit 1e-8)", combos,
                all_covered ? "yes" : "no", worst)};
}

Outcome ac4() {
    const CapacityReport c = compare_symmetric(circle(0.6), ChannelParams::with_sigma(1.0));
    const CapacityReport r = compare_symmetric(radial(0.6), ChannelParams::with_sigma(1.5));
    const double ea = std::fabs(c.c_a - 1.169925);
    const double eb = std::fabs(c.c_b - 0.847997);
    const bool circle_ok = std::fabs(c.c_a - std::log2(2.25)) < 1e-9 && std::fabs(c.c_b - std::log2(1.8)) < 1e-9;
    const double ra = std::fabs(r.c_a - 1.80177);
    const double rb = std::fabs(r.c_b - 1.45943);
    const bool radial_ok = ra < 1e-5 && rb < 1e-5;
    return {circle_ok && radial_ok,
            fmt("circle C_A=%.9f C_B=%.9f (|diff| %.1e, %.1e vs rounded values; exact log2 check %s); "
                "radial C_A=%.6f vs 1.80177 (|diff| %.2e), C_B=%.6f vs 1.45943 (|diff| %.2e), tol 1e-5",
                c.c_a, c.c_b, ea, eb, circle_ok ? "ok" : "off", r.c_a, ra, r.c_b, rb)};
}

Outcome ac5() {
    std::mt19937_64 rng(5);
    std::vector<parallel::Scenario> scenarios;
    for (int i = 0; i < 100; ++i) {
        const Trajectory traj = make_trajectory(oracle::random_polygon(rng, 0.05, 0.95));
        const double bound = coverage_sigma_bound(TimeMap(traj).gamma(), max_abs_radial(traj));
        scenarios.push_back({traj, ChannelParams::with_sigma(1.1 * bound + 0.01)});
    }
    const auto reports = parallel::compare_symmetric_batch(scenarios);
    std::size_t failures = 0;
    std::size_t inadmissible = 0;
    double min_gap = 1e300;
    for (const CapacityReport& rep : reports) {
        if (!rep.admissible) ++inadmissible;
        if (!(rep.gap > 0.0)) ++failures;
        min_gap = std::min(min_gap, rep.gap);
    }
    const CapacityReport degenerate = compare_symmetric(circle(0.6), ChannelParams::with_sigma(1.0));
    const bool degenerate_ok = degenerate.b == 0.0 && degenerate.gap > 0.0;
    return {failures == 0 && inadmissible == 0 && degenerate_ok,
            fmt("100 polygons: %zu failures, %zu inadmissible, min gap %.4e; b=0 circle gap %.6f", failures,
                inadmissible, min_gap, degenerate.gap)};
}

Outcome ac6() {
    RandomSuiteOptions opts;
    opts.count = 1000;
    const auto profiles = random_profiles(opts);
    const auto witnesses = parallel::check_theorem1_batch(profiles);
    std::size_t failures = 0;
    std::size_t degenerate = 0;
    double min_margin = 1e300;
    double worst_kl = 0.0;
    for (std::size_t i = 0; i < profiles.size(); ++i) {
        const InequalityWitness& w = witnesses[i];
        if (w.b > 0.0) {
            if (!(w.margin > 0.0)) ++failures;
            min_margin = std::min(min_margin, w.margin);
        } else {
            ++degenerate;
        }
        worst_kl = std::max(worst_kl, std::fabs(kl_form(profiles[i]) - theorem_lhs(profiles[i])));
    }
    return {failures == 0 && worst_kl <= 1e-10,
            fmt("%zu profiles, %zu margin failures, %zu with b=0, min margin %.4e, worst KL deviation %.2e", profiles.size(),
                failures, degenerate, min_margin, worst_kl)};
}

Outcome ac7() {
    const LemmaReport rep = check_lemma1(0.6, 0.6, 1.2);
    const double target = std::log(0.784);
    const double el = std::fabs(rep.lhs - target);
    const double er = std::fabs(rep.rhs - target);
    return {el <= 1e-12 && er <= 1e-12, fmt("lhs %.15f, rhs %.15f, |diff| to ln 0.784: %.1e, %.1e", rep.lhs, rep.rhs, el, er)};
}

Outcome ac8() {
    bool positive = true;
    std::string mins;
    for (double b : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        const ExtremalResult res = parallel::extremal_oracle(b, 200, 200);
        positive = positive && res.feasible_points > 0 && res.min_objective > 0.0;
        mins += fmt(" %.3e", res.min_objective);
    }
    const double r_half = std::log(0.75) - std::log(0.875) + 0.25 * std::log(3.0);
    double worst = 0.0;
    for (double u : {-0.4, 0.0, 0.3}) {
        worst = std::max(worst, std::fabs(three_point_objective(three_point(0.5, u, 0.0)) - r_half));
    }
    return {positive && worst <= 1e-9,
            fmt("min L over b=0.1..0.9:%s; L(q=0, b=0.5) vs ln0.75-ln0.875+0.25ln3 = %.12f: |diff| %.1e", mins.c_str(),
                r_half, worst)};
}

Outcome ac9() {
    double worst_r = 0.0;
    double worst_rp = 0.0;
    double min_second = 1e300;
    const double h = 1e-5;
    for (int i = 0; i <= 90; ++i) {
        const double b = 0.05 + 0.01 * i;
        worst_r = std::max(worst_r, std::fabs((proof_r(b + h) - proof_r(b - h)) / (2 * h) - proof_r_prime(b)));
        worst_rp =
            std::max(worst_rp, std::fabs((proof_r_prime(b + h) - proof_r_prime(b - h)) / (2 * h) - proof_r_second(b)));
    }
    for (int i = 1; i < 1000; ++i) min_second = std::min(min_second, proof_r_second(i / 1000.0));
    return {worst_r <= 1e-6 && worst_rp <= 1e-4 && min_second > 0.0,
            fmt("R' error %.2e (limit 1e-6), R'' error %.2e (limit 1e-4), min R'' on (0,1) %.4e", worst_r, worst_rp,
                min_second)};
}

Outcome ac10() {
    double last_a = -1e300;
    double last_b = 1e300;
    bool ok = true;
    std::string values;
    for (double beta : {0.5, 0.7, 0.9}) {
        const CapacityReport rep = compare_symmetric(radial(beta), ChannelParams::with_sigma(4.0));
        ok = ok && rep.admissible && rep.c_a > last_a && rep.c_b < last_b;
        last_a = rep.c_a;
        last_b = rep.c_b;
        values += fmt(" beta=%.1f: C_A=%.6f C_B=%.6f;", beta, rep.c_a, rep.c_b);
    }
    return {ok, "sigma=4 (admissible at every beta), C_A increasing and C_B decreasing required;" + values};
}

struct Criterion {
    const char* name;
    double limit_seconds;
    std::function<Outcome()> run;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {"AC1 time identities", 5, ac1},          {"AC2 Doppler oracle agreement", 10, ac2},
        {"AC3 closed-form capacity", 30, ac3},    {"AC4 worked numbers", 1, ac4},
        {"AC5 gap > 0 on random paths", 120, ac5}, {"AC6 Theorem 1 suite", 30, ac6},
        {"AC7 Lemma 1 boundary", 1, ac7},          {"AC8 extremal oracle", 20, ac8},
        {"AC9 derivative checks", 5, ac9},         {"AC10 radial trend", 10, ac10},
    };
    int failed = 0;
    for (const Criterion& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = c.run();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = seconds < c.limit_seconds;
        const bool passed = out.passed && in_time;
        if (!passed) ++failed;
        std::printf("%s %s: %s [%.2f s, limit %.0f s%s]\n", passed ? "PASS" : "FAIL", c.name, out.detail.c_str(),
                    seconds, c.limit_seconds, in_time ? "" : ", too slow");
    }
    std::printf("%d of %zu criteria failed\n", failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
