#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "relcap/lightcone.hpp"

using namespace relcap;

namespace {

Trajectory circle(double radius, double beta) { return make_trajectory(CircleParams{radius, beta, {}, 2}); }
Trajectory radial(double distance, double beta) { return make_trajectory(RadialParams{distance, beta, {1, 0, 0}, 2}); }
Trajectory square(double beta) {
    return make_trajectory(PolygonParams{{{1, 1, 0}, {-1, 1, 0}, {-1, -1, 0}, {1, -1, 0}, {1, 1, 0}}, beta, 2});
}

bool near_any(double t, const std::vector<double>& points, double width) {
    for (double p : points) {
        if (std::fabs(t - p) < width) return true;
    }
    return false;
}

}  // namespace

TEST_CASE("reception on the outbound and inbound legs") {
    {
        const Trajectory r = radial(2.0, 0.6);
        const TimeMap map(r);
        const Reception rec = reception_time_a_to_b(r, map, 1.0);
        CHECK(rec.t_star == doctest::Approx(2.5).epsilon(1e-14));
        CHECK(rec.tau_b == doctest::Approx(2.0).epsilon(1e-12));
    }
    {
        // With D = 1 the pulse emitted at t = 1 meets Bob on his way back.
        const Trajectory r = radial(1.0, 0.6);
        const TimeMap map(r);
        const Reception rec = reception_time_a_to_b(r, map, 1.0);
        CHECK(rec.t_star == doctest::Approx(1.875).epsilon(1e-14));
        CHECK(rec.tau_b == doctest::Approx(1.5).epsilon(1e-12));
    }
    {
        const Trajectory c = circle(1.0, 0.6);
        const TimeMap map(c);
        const Reception rec = reception_time_a_to_b(c, map, 2.0);
        CHECK(rec.t_star == doctest::Approx(3.0).epsilon(1e-14));
        CHECK(rec.tau_b == doctest::Approx(3.0 * 0.8).epsilon(1e-12));
    }
    CHECK_THROWS_AS(reception_alice_time(circle(1.0, 0.6), -1.0), DomainError);
}

TEST_CASE("reception agrees with a brute-force scan and is monotone") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 20; ++trial) {
        const Trajectory traj = make_trajectory(oracle::random_polygon(rng));
        const TimeMap map(traj);
        double previous = -1.0;
        double previous_tau = -1.0;
        for (int i = 0; i <= 50; ++i) {
            const double t = traj.duration() * i / 50.0;
            const double t_star = reception_alice_time(traj, t);
            CHECK(t_star == doctest::Approx(oracle::reception_scan(traj, t)).epsilon(1e-12));
            CHECK(t_star > previous);
            const double tau = reception_time_a_to_b(traj, map, t).tau_b;
            CHECK(tau > previous_tau);
            previous = t_star;
            previous_tau = tau;
        }
    }
}

TEST_CASE("Doppler factors for the worked trajectories") {
    const Trajectory c = circle(1.0, 0.6);
    const TimeMap cm(c);
    for (double t : {0.0, 1.0, 5.0, c.duration()}) CHECK(doppler_a(c, t) == doctest::Approx(1.25).epsilon(1e-14));
    for (double tau : {0.0, 2.0, cm.bob_duration()}) CHECK(doppler_b(c, cm, tau) == doctest::Approx(0.8).epsilon(1e-14));

    const Trajectory r = radial(1.0, 0.6);
    const TimeMap rm(r);
    // Outbound receptions cover emissions up to t = 0.4 D / beta.
    CHECK(doppler_a(r, 0.3) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(doppler_a(r, 1.0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(doppler_b(r, rm, 0.5) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(doppler_b(r, rm, 2.0) == doctest::Approx(2.0).epsilon(1e-14));
    const auto cusps = singular_emission_times(Direction::a_to_b, r, rm);
    REQUIRE(cusps.size() == 1);
    CHECK(cusps[0] == doctest::Approx(0.4 / 0.6).epsilon(1e-14));
}

TEST_CASE("kinematic oracles match the closed forms away from cusp images") {
    std::mt19937_64 rng(99);
    std::vector<Trajectory> paths = {circle(1.0, 0.6), radial(1.0, 0.6), square(0.7),
                                     make_trajectory(CircleParams{1.0, 0.5, {2.0, 1.0, 0.0}, 2})};
    for (int i = 0; i < 6; ++i) paths.push_back(make_trajectory(oracle::random_polygon(rng)));
    for (const Trajectory& traj : paths) {
        const TimeMap map(traj);
        const double h = 1e-6 * traj.duration();
        const auto images_a = singular_emission_times(Direction::a_to_b, traj, map);
        const auto images_b = singular_emission_times(Direction::b_to_a, traj, map);
        for (int i = 0; i < 100; ++i) {
            const double t = (traj.duration() - 2.0 * h) * (i + 0.5) / 100.0;
            if (!near_any(t, images_a, 4.0 * h)) {
                const double fd = doppler_a_kinematic_oracle(traj, map, t, h);
                CHECK(fd == doctest::Approx(doppler_a(traj, t + 0.5 * h)).epsilon(1e-5));
            }
            const double tau = (map.bob_duration() - 2.0 * h) * (i + 0.5) / 100.0;
            if (!near_any(tau, images_b, 4.0 * h)) {
                const double fd = doppler_b_kinematic_oracle(traj, map, tau, h);
                CHECK(fd == doctest::Approx(doppler_b(traj, map, tau + 0.5 * h)).epsilon(1e-5));
            }
        }
    }
}

TEST_CASE("kinematic oracle step guards") {
    const Trajectory c = circle(1.0, 0.6);
    const TimeMap map(c);
    CHECK_THROWS_AS(doppler_a_kinematic_oracle(c, map, 1.0, 1e-15), NumericsError);
    CHECK_THROWS_AS(doppler_a_kinematic_oracle(c, map, 1.0, -1.0), DomainError);
    CHECK_THROWS_AS(doppler_b_kinematic_oracle(c, map, map.bob_duration(), 1e-3), DomainError);
}

TEST_CASE("pulse-count identities") {
    for (double beta : {0.3, 0.6, 0.9}) {
        for (const Trajectory& traj : {circle(1.0, beta), radial(1.0, beta), square(beta)}) {
            const TimeIdentityReport rep = verify_time_identities(traj);
            CAPTURE(beta);
            CHECK(rep.deviation_a < 1e-7 * rep.expected_a);
            CHECK(rep.deviation_b < 1e-7 * rep.expected_b);
        }
    }
    // Also for a path that never touches Alice and one with variable speed.
    SampledParams p;
    p.times = {0.0, 2.0, 5.0, 7.0, 10.0};
    p.positions = {{1, 0, 0}, {0, 1, 0}, {-1, 0, 0}, {0, -1, 0}, {1, 0, 0}};
    const TimeIdentityReport rep = verify_time_identities(make_trajectory(p));
    CHECK(rep.deviation_a < 1e-9 * rep.expected_a);
    CHECK(rep.deviation_b < 1e-9 * rep.expected_b);
}

TEST_CASE("Doppler profile envelope and averages") {
    const Trajectory r = radial(1.0, 0.6);
    const DopplerProfile a(Direction::a_to_b, r);
    const DopplerProfile b(Direction::b_to_a, r);
    CHECK(a.emitter_duration() == doctest::Approx(2.0 / 0.6));
    CHECK(b.emitter_duration() == doctest::Approx(1.6 / 0.6));
    CHECK(a.max_inverse_alpha() == doctest::Approx(2.0));
    CHECK(a.min_inverse_alpha() == doctest::Approx(0.5));
    CHECK(b.max_inverse_alpha() == doctest::Approx(2.0));
    // Mean of 1/alpha is T_B / T_A for A->B.
    CHECK(a.average([](double alpha, double) { return 1.0 / alpha; }) == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(b.average([](double alpha, double) { return 1.0 / alpha; }) == doctest::Approx(1.25).epsilon(1e-12));

    const Trajectory s = square(0.7);
    const DopplerProfile sa(Direction::a_to_b, s);
    double grid_max = 0.0;
    for (int i = 0; i <= 20000; ++i) grid_max = std::max(grid_max, 1.0 / sa.alpha(s.duration() * i / 20000.0));
    CHECK(sa.max_inverse_alpha() >= grid_max * (1.0 - 1e-12));
    // The supremum sits at a jump (a vertex seen from Alice), so compare with
    // sqrt(1 - beta^2) / (1 - b) rather than the grid.
    const double b_sq = 0.7 / std::sqrt(2.0);
    CHECK(sa.max_inverse_alpha() == doctest::Approx(std::sqrt(1.0 - 0.49) / (1.0 - b_sq)).epsilon(1e-9));
}
