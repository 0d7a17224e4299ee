#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "relcap/kinematics.hpp"

using namespace relcap;

namespace {

Trajectory circle(double radius, double beta) { return make_trajectory(CircleParams{radius, beta, {}, 2}); }
Trajectory radial(double distance, double beta) { return make_trajectory(RadialParams{distance, beta, {1, 0, 0}, 2}); }
Trajectory square(double beta) {
    return make_trajectory(PolygonParams{{{1, 1, 0}, {-1, 1, 0}, {-1, -1, 0}, {1, -1, 0}, {1, 1, 0}}, beta, 2});
}

// |x . v| / |x| sampled from positions alone (velocity by central differences).
double sampled_radial_bound(const Trajectory& traj, int n) {
    double best = 0.0;
    const double period = traj.duration();
    const double h = 1e-7 * period;
    for (int i = 0; i < n; ++i) {
        const double t = period * i / n;
        const Vec3 v = (1.0 / h) * (traj.position_periodic(t + h) - traj.position(t));
        const Vec3 x = traj.position(t);
        best = std::max(best, std::fabs(dot(x, v)) / norm(x));
    }
    return best;
}

}  // namespace

TEST_CASE("circle geometry") {
    const Trajectory c = circle(1.0, 0.6);
    CHECK(c.kind() == TrajectoryKind::circle);
    CHECK(c.duration() == doctest::Approx(2.0 * std::numbers::pi / 0.6).epsilon(1e-15));
    CHECK(c.breakpoints().empty());
    CHECK(c.constant_speed());
    for (int i = 0; i <= 1000; ++i) {
        const double t = c.duration() * i / 1000.0;
        CHECK(std::fabs(c.speed(t) - 0.6) < 1e-9);
        CHECK(c.beta_radial(t) == 0.0);
        CHECK(norm(c.position(t)) == doctest::Approx(1.0).epsilon(1e-14));
    }
    CHECK(max_abs_radial(c) == 0.0);
    CHECK(std::fabs(radial_displacement_integral(c)) < 1e-12);
}

TEST_CASE("radial out-and-back geometry and the origin rule") {
    const Trajectory r = radial(1.0, 0.6);
    REQUIRE(r.breakpoints().size() == 1);
    CHECK(r.breakpoints()[0] == doctest::Approx(1.0 / 0.6).epsilon(1e-15));
    CHECK(r.duration() == doctest::Approx(2.0 / 0.6).epsilon(1e-15));
    CHECK(r.beta_radial(0.0) == doctest::Approx(0.6));
    CHECK(r.beta_radial(0.5) == doctest::Approx(0.6));
    CHECK(r.beta_radial(2.5) == doctest::Approx(-0.6));
    CHECK(r.beta_radial(r.duration()) == doctest::Approx(-0.6));
    CHECK(beta_radial(r, r.breakpoints()[0]) == doctest::Approx(-0.6));
    CHECK(r.beta_radial(r.breakpoints()[0], Side::left) == doctest::Approx(0.6));
    CHECK(max_abs_radial(r) == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(std::fabs(radial_displacement_integral(r)) < 1e-12);
    const Vec3 far = r.position(r.breakpoints()[0]);
    CHECK(far.x == doctest::Approx(1.0));
}

TEST_CASE("square polygon radial bound against a sampling oracle") {
    const Trajectory s = square(0.5);
    const double b = max_abs_radial(s);
    CHECK(b < 0.5);
    CHECK(b == doctest::Approx(0.5 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(b == doctest::Approx(sampled_radial_bound(s, 40000)).epsilon(1e-6));
    CHECK(s.breakpoints().size() == 3);
    CHECK(std::fabs(radial_displacement_integral(square(0.7))) < 1e-8);
}

TEST_CASE("constant-speed invariants on random polygons and circles") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 40; ++trial) {
        const Trajectory traj = trial % 4 == 3 ? make_trajectory(oracle::random_circle(rng))
                                               : make_trajectory(oracle::random_polygon(rng));
        CAPTURE(trial);
        const double beta = traj.beta();
        const TimeMap map(traj);
        CHECK(map.gamma() == doctest::Approx(1.0 / std::sqrt(1.0 - beta * beta)).epsilon(1e-9));
        CHECK(std::fabs(radial_displacement_integral(traj)) < 1e-8);
        CHECK(max_abs_radial(traj) <= beta + 1e-12);
        std::uniform_real_distribution<double> u(0.0, traj.duration());
        for (int i = 0; i < 1000; ++i) {
            const double t = u(rng);
            CHECK(std::fabs(traj.speed(t) - beta) < 1e-9);
            CHECK(std::fabs(traj.beta_radial(t)) <= beta + 1e-12);
            if (i % 10 == 0) {
                const double back = map.alice_time(map.proper_time(t));
                CHECK(std::fabs(back - t) < 1e-9);
            }
        }
    }
}

TEST_CASE("proper time against a Simpson oracle on a variable-speed path") {
    SampledParams p;
    p.times = {0.0, 2.0, 5.0, 7.0, 10.0};
    p.positions = {{1, 0, 0}, {0, 1, 0}, {-1, 0, 0}, {0, -1, 0}, {1, 0, 0}};
    const Trajectory traj = make_trajectory(p);
    CHECK_FALSE(traj.constant_speed());
    CHECK(traj.beta() == doctest::Approx(std::sqrt(2.0) / 2.0));
    const TimeMap map(traj);
    for (double t : {0.5, 2.0, 3.3, 6.9, 9.99}) {
        CHECK(map.proper_time(t) == doctest::Approx(oracle::proper_time_simpson(traj, t)).epsilon(1e-12));
    }
    const double slow = std::sqrt(1.0 - 2.0 / 9.0);
    const double fast = std::sqrt(1.0 - 2.0 / 4.0);
    CHECK(map.bob_duration() == doctest::Approx(4.0 * fast + 6.0 * slow).epsilon(1e-13));
}

TEST_CASE("periodic extension") {
    const Trajectory r = radial(2.0, 0.4);
    const double period = r.duration();
    for (double t : {0.3, 1.7, 4.9, 9.0}) {
        CHECK(norm(r.position_periodic(t + 3.0 * period) - r.position(t)) < 1e-12);
        CHECK(r.beta_radial_periodic(t - period) == doctest::Approx(r.beta_radial(t)));
    }
    const TimeMap map(r);
    CHECK(map.proper_time_periodic(1.0 + 2.0 * period) ==
          doctest::Approx(map.proper_time(1.0) + 2.0 * map.bob_duration()).epsilon(1e-14));
}

TEST_CASE("three-dimensional trajectories") {
    const Trajectory c = make_trajectory(CircleParams{1.0, 0.5, {0.0, 0.0, 2.0}, 3});
    CHECK(c.dimension() == 3);
    CHECK(c.max_range() == doctest::Approx(std::sqrt(5.0)));
    CHECK(max_abs_radial(c) == 0.0);
    const Trajectory r = make_trajectory(RadialParams{1.0, 0.5, {0.0, 0.0, 1.0}, 3});
    CHECK(r.position(1.0).z == doctest::Approx(0.5));
}

TEST_CASE("off-centre circle through the origin") {
    const Trajectory c = make_trajectory(CircleParams{1.0, 0.5, {-1.0, 0.0, 0.0}, 2});
    // Bob starts at the origin and passes it again each period.
    CHECK(c.beta_radial(0.0) == doctest::Approx(0.5));
    CHECK(c.beta_radial(c.duration()) == doctest::Approx(-0.5));
    CHECK(max_abs_radial(c) == doctest::Approx(0.5));
    CHECK(std::fabs(radial_displacement_integral(c)) < 1e-8);
}

TEST_CASE("trajectory validation") {
    CHECK_THROWS_AS(circle(1.0, 1.0), DomainError);
    CHECK_THROWS_AS(circle(1.0, 0.0), DomainError);
    CHECK_THROWS_AS(circle(-1.0, 0.5), DomainError);
    CHECK_THROWS_AS(radial(0.0, 0.5), DomainError);
    CHECK_THROWS_AS(make_trajectory(RadialParams{1.0, 0.5, {0, 0, 0}, 2}), DomainError);
    CHECK_THROWS_AS(make_trajectory(PolygonParams{{{0, 0, 0}, {1, 0, 0}, {1, 1, 0}}, 0.5, 2}), DomainError);
    CHECK_THROWS_AS(make_trajectory(PolygonParams{{{0, 0, 0}, {0, 0, 0}}, 0.5, 2}), DomainError);
    CHECK_THROWS_AS(make_trajectory(PolygonParams{{{0, 0, 0}, {1, 0, 0}, {1, 0, 0}, {0, 0, 0}}, 0.5, 2}),
                    DomainError);
    CHECK_THROWS_AS(make_trajectory(PolygonParams{{{0, 0, 1}, {1, 0, 0}, {0, 0, 1}}, 0.5, 2}), DomainError);
    CHECK_THROWS_AS(make_trajectory(SampledParams{{0, 1, 1}, {{0, 0, 0}, {0.5, 0, 0}, {0, 0, 0}}, 2}), DomainError);
    CHECK_THROWS_AS(make_trajectory(SampledParams{{0, 1, 2}, {{0, 0, 0}, {1.5, 0, 0}, {0, 0, 0}}, 2}), DomainError);
    const Trajectory c = circle(1.0, 0.5);
    CHECK_THROWS_AS(c.position(-1e-3), DomainError);
    CHECK_THROWS_AS(c.position(c.duration() * 1.001), DomainError);
    CHECK_THROWS_AS(TimeMap(c).alice_time(-1.0), DomainError);
}
