#pragma once

// Relativistic AWGN channel: water-filling over the Doppler profile and the
// resulting bidirectional capacities. Logarithms are base 2 here; rates are
// bits per second of the transmitter's clock.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "relcap/kinematics.hpp"
#include "relcap/lightcone.hpp"
#include "relcap/numerics.hpp"

namespace relcap {

/// Symmetric link budget shared by both directions.
struct ChannelParams {
    double power = 1.0;          // average transmit power P, watts
    double bandwidth = 1.0;      // W, hertz
    double noise_density = 1.0;  // eta, watts per hertz

    /// sigma = P / (eta W).
    double sigma() const { return power / (noise_density * bandwidth); }
    double noise_power() const { return noise_density * bandwidth; }
    void validate() const;

    /// Parameters with the given sigma, keeping W and eta.
    static ChannelParams with_sigma(double sigma, double bandwidth = 1.0, double noise_density = 1.0);

    friend bool operator==(const ChannelParams&, const ChannelParams&) = default;
};

/// Smallest sigma for which both water-filled profiles stay strictly
/// positive: max{ b / (gamma (1 - b)), gamma b }.
double coverage_sigma_bound(double gamma, double b);

struct PowerAllocation {
    Direction direction = Direction::a_to_b;
    double water_level = 0.0;  // lambda, watts
    double noise_power = 0.0;  // eta W
    bool coverage = false;     // lambda >= max eta W / alpha
    /// lambda from the full-coverage closed form: P + eta W / gamma (A->B) or
    /// P + eta W gamma (B->A).
    double closed_form_level = 0.0;

    /// P*(alpha) = max{0, lambda - eta W / alpha}.
    double power_for_alpha(double alpha) const {
        const double p = water_level - noise_power / alpha;
        return p > 0.0 ? p : 0.0;
    }
};

/// Water level for the average-power constraint, found by monotone
/// bracketing on lambda over [0, P + eta W max(1/alpha)].
PowerAllocation waterfill(const DopplerProfile& profile, const ChannelParams& params);

/// Time average of the water-filled power, for checking the constraint.
double average_power(const DopplerProfile& profile, const PowerAllocation& allocation);

struct CapacityResult {
    Direction direction = Direction::a_to_b;
    double value = 0.0;  // water-filled rate, bits/s
    PowerAllocation allocation;
    /// Full-coverage closed form valid for any speed profile.
    std::optional<double> closed_form;
    /// Constant-speed closed form written in Bob's proper time.
    std::optional<double> closed_form_constant_speed;
    /// Largest relative deviation of the available closed forms from value.
    double closed_form_deviation = 0.0;
};

CapacityResult capacity(const DopplerProfile& profile, const ChannelParams& params);
CapacityResult capacity(Direction direction, const Trajectory& traj, const ChannelParams& params,
                        const QuadratureSpec& spec = {});

enum class CapacityStatus { pass, counterexample_candidate, outside_proved_scope, infeasible };

std::string to_string(CapacityStatus status);

struct CapacityReport {
    double beta = 0.0;
    double b = 0.0;
    double gamma = 0.0;
    double sigma = 0.0;
    double bandwidth = 0.0;
    double c_a = 0.0;
    double c_b = 0.0;
    double gap = 0.0;
    double energy_per_bit_ratio = 0.0;  // C_B / C_A = (E_A/N_A) / (E_B/N_B)
    bool coverage_a = false;
    bool coverage_b = false;
    bool constant_speed = true;
    /// sigma meets the coverage bound built from b.
    bool admissible = false;
    double closed_form_deviation_a = 0.0;
    double closed_form_deviation_b = 0.0;
    CapacityStatus status = CapacityStatus::pass;
    std::vector<std::string> warnings;
};

struct CompareOptions {
    QuadratureSpec spec{};
    std::size_t radial_grid = 10000;
    /// Relative tolerance for the closed-form cross-check.
    double closed_form_tolerance = 1e-8;
};

/// Both capacities under one set of channel parameters. A non-positive gap
/// is reported as a counterexample candidate, never thrown.
CapacityReport compare_symmetric(const Trajectory& traj, const ChannelParams& params,
                                 const CompareOptions& options = {});

/// Wideband limit (log2 e / eta) * (1/T) * integral of alpha P over the
/// emitter window, for a caller-supplied power profile of emitter time.
double capacity_infinite_bandwidth(const DopplerProfile& profile,
                                   const std::function<double(double)>& power_profile,
                                   double noise_density);

}  // namespace relcap
