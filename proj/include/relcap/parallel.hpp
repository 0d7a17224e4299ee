#pragma once

// OpenMP versions of the data-parallel loops. Each kernel writes results by
// index and reduces serially in index order, so its output is bit-identical
// to the serial reference it mirrors (noted per function) for any thread
// count.

#include <span>
#include <vector>

#include "relcap/channel.hpp"
#include "relcap/inequality.hpp"
#include "relcap/kinematics.hpp"

namespace relcap::parallel {

/// Threads an OpenMP region would use; 1 when built without OpenMP.
int max_threads();

/// Mirrors relcap::extremal_oracle.
ExtremalResult extremal_oracle(double b, std::size_t u_grid, std::size_t q_grid);

/// Mirrors relcap::max_abs_radial.
double max_abs_radial(const Trajectory& traj, std::size_t grid = 10000);

/// Mirrors a serial loop of relcap::check_theorem1.
std::vector<InequalityWitness> check_theorem1_batch(std::span<const ZeroMeanProfile> profiles);

struct Scenario {
    Trajectory trajectory;
    ChannelParams channel;
};

/// Mirrors a serial loop of relcap::compare_symmetric. The first exception
/// raised by any scenario (lowest index) is rethrown after the loop.
std::vector<CapacityReport> compare_symmetric_batch(std::span<const Scenario> scenarios,
                                                    const CompareOptions& options = {});

}  // namespace relcap::parallel
