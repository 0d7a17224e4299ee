#include <cstring>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "oracles.hpp"
#include "relcap/parallel.hpp"

using namespace relcap;

namespace {

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST_CASE("parallel extremal oracle is bit-identical to the serial one") {
    CHECK(parallel::max_threads() >= 1);
    for (double b : {0.1, 0.5, 0.9}) {
        const ExtremalResult serial = extremal_oracle(b, 150, 120);
        const ExtremalResult par = parallel::extremal_oracle(b, 150, 120);
        CHECK(same_bits(serial.min_objective, par.min_objective));
        CHECK(same_bits(serial.argmin.u, par.argmin.u));
        CHECK(same_bits(serial.argmin.q, par.argmin.q));
        CHECK(serial.feasible_points == par.feasible_points);
    }
    CHECK_THROWS_AS(parallel::extremal_oracle(0.5, 10, 200), DomainError);
}

TEST_CASE("parallel radial bound matches the serial scan") {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 10; ++trial) {
        const Trajectory traj = make_trajectory(oracle::random_polygon(rng));
        CHECK(same_bits(max_abs_radial(traj, 5000), parallel::max_abs_radial(traj, 5000)));
    }
}

TEST_CASE("parallel theorem batch") {
    RandomSuiteOptions opts;
    opts.count = 200;
    const auto profiles = random_profiles(opts);
    const auto batch = parallel::check_theorem1_batch(profiles);
    REQUIRE(batch.size() == profiles.size());
    for (std::size_t i = 0; i < profiles.size(); ++i) {
        const InequalityWitness w = check_theorem1(profiles[i]);
        CHECK(same_bits(w.lhs, batch[i].lhs));
        CHECK(same_bits(w.margin, batch[i].margin));
        CHECK(w.verdict == batch[i].verdict);
    }
}

TEST_CASE("parallel scenario batch") {
    std::mt19937_64 rng(9);
    std::vector<parallel::Scenario> scenarios;
    for (int i = 0; i < 12; ++i) {
        scenarios.push_back({make_trajectory(oracle::random_polygon(rng)), ChannelParams::with_sigma(0.5 + i)});
    }
    const auto batch = parallel::compare_symmetric_batch(scenarios);
    REQUIRE(batch.size() == scenarios.size());
    for (std::size_t i = 0; i < scenarios.size(); ++i) {
        const CapacityReport r = compare_symmetric(scenarios[i].trajectory, scenarios[i].channel);
        CHECK(same_bits(r.c_a, batch[i].c_a));
        CHECK(same_bits(r.c_b, batch[i].c_b));
        CHECK(same_bits(r.b, batch[i].b));
    }
}

TEST_CASE("batch errors surface from the lowest index") {
    std::vector<parallel::Scenario> scenarios;
    const Trajectory c = make_trajectory(CircleParams{1.0, 0.5, {}, 2});
    scenarios.push_back({c, ChannelParams::with_sigma(1.0)});
    scenarios.push_back({c, ChannelParams{1.0, -1.0, 1.0}});
    scenarios.push_back({c, ChannelParams{-1.0, 1.0, 1.0}});
    try {
        (void)parallel::compare_symmetric_batch(scenarios);
        FAIL("expected DomainError");
    } catch (const DomainError& e) {
        CHECK(std::string(e.what()).find("bandwidth") != std::string::npos);
    }
}
