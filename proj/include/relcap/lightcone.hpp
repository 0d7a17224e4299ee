#pragma once

// Photon exchange between Alice (at the origin) and Bob, and the Doppler
// factors it induces.

#include <string>
#include <vector>

#include "relcap/kinematics.hpp"
#include "relcap/numerics.hpp"

namespace relcap {

enum class Direction { a_to_b, b_to_a };

std::string to_string(Direction direction);

struct Reception {
    double t_star;  // Alice coordinate time at which Bob receives the pulse
    double tau_b;   // the same event on Bob's clock
};

/// Solves t* - |x(t*)| = t with the trajectory extended periodically. The
/// left side is strictly increasing (slope >= 1 - beta), so the root is
/// unique.
double reception_alice_time(const Trajectory& traj, double t);

Reception reception_time_a_to_b(const Trajectory& traj, const TimeMap& map, double t);

/// alpha_A(t) = (1 - beta_r) / sqrt(1 - beta^2) evaluated where Bob
/// receives Alice's pulse emitted at t. Right-hand limits at cusps.
double doppler_a(const Trajectory& traj, double t);

/// alpha_B(tau) = sqrt(1 - beta^2) / (1 + beta_r) at Bob proper time tau.
double doppler_b(const Trajectory& traj, const TimeMap& map, double tau);

// Doppler factors indexed by Bob's position on his worldline (Alice time s,
// periodic): alpha_A for a pulse he receives at s, alpha_B for one he emits
// at s.
double doppler_a_at_worldline(const Trajectory& traj, double s);
double doppler_b_at_worldline(const Trajectory& traj, double s);

/// h / (tau_B(t + h) - tau_B(t)): alpha_A straight from the pulse-spacing
/// definition, without the closed form.
double doppler_a_kinematic_oracle(const Trajectory& traj, const TimeMap& map, double t, double h);

/// h / (t_recv(tau + h) - t_recv(tau)), the same construction for alpha_B.
double doppler_b_kinematic_oracle(const Trajectory& traj, const TimeMap& map, double tau, double h);

/// Emission times (in the emitter's clock) whose pulses meet Bob exactly at
/// a cusp or at Alice's location. Sorted, strictly inside the emitter window.
std::vector<double> singular_emission_times(Direction direction, const Trajectory& traj,
                                            const TimeMap& map);

class DopplerProfile {
public:
    DopplerProfile(Direction direction, Trajectory traj, QuadratureSpec spec = {});

    Direction direction() const { return direction_; }
    const Trajectory& trajectory() const { return map_.trajectory(); }
    const TimeMap& time_map() const { return map_; }
    const QuadratureSpec& spec() const { return spec_; }

    /// T_A for A->B, T_B for B->A.
    double emitter_duration() const;
    double alpha(double emitter_time) const;
    /// tau_B(t) for A->B, Alice reception time for B->A.
    double reception(double emitter_time) const;
    const std::vector<double>& singular_times() const { return singular_; }

    /// Upper/lower envelope of 1/alpha over a fine worldline grid refined
    /// around the extremum.
    double max_inverse_alpha() const { return max_inverse_alpha_; }
    double min_inverse_alpha() const { return min_inverse_alpha_; }

    /// (1/T) * integral over the emitter window of h(alpha(x), x).
    template <class H>
    double average(const H& h) const {
        const double period = emitter_duration();
        const auto integrand = [&](double x) { return h(alpha(x), x); };
        return integrate(integrand, 0.0, period, spec_.with_breakpoints(singular_)) / period;
    }

private:
    Direction direction_;
    TimeMap map_;
    QuadratureSpec spec_;
    std::vector<double> singular_;
    double max_inverse_alpha_ = 0.0;
    double min_inverse_alpha_ = 0.0;
};

struct TimeIdentityReport {
    double integral_a = 0.0;  // integral of dt / alpha_A over [0, T_A]
    double expected_a = 0.0;  // T_B
    double deviation_a = 0.0;
    double integral_b = 0.0;  // integral of dtau / alpha_B over [0, T_B]
    double expected_b = 0.0;  // T_A
    double deviation_b = 0.0;
};

/// Both pulse-count identities. For paths that never meet Alice these hold
/// in the periodic sense (tau_B(T_A) - tau_B(0) = T_B).
TimeIdentityReport verify_time_identities(const Trajectory& traj, const QuadratureSpec& spec = {});

}  // namespace relcap
