#include "relcap/channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace relcap {

void ChannelParams::validate() const {
    const auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!positive(power)) throw DomainError("channel: average power must be positive");
    if (!positive(bandwidth)) throw DomainError("channel: bandwidth must be positive");
    if (!positive(noise_density)) throw DomainError("channel: noise density must be positive");
}

ChannelParams ChannelParams::with_sigma(double sigma, double bandwidth, double noise_density) {
    ChannelParams p{sigma * noise_density * bandwidth, bandwidth, noise_density};
    p.validate();
    return p;
}

double coverage_sigma_bound(double gamma, double b) {
    if (!(b >= 0.0 && b < 1.0)) throw DomainError("coverage_sigma_bound: b must lie in [0, 1)");
    return std::max(b / (gamma * (1.0 - b)), gamma * b);
}

std::string to_string(CapacityStatus status) {
    switch (status) {
        case CapacityStatus::pass: return "pass";
        case CapacityStatus::counterexample_candidate: return "counterexample_candidate";
        case CapacityStatus::outside_proved_scope: return "outside_proved_scope";
        case CapacityStatus::infeasible: return "infeasible";
    }
    return "unknown";
}

namespace {

// Full coverage is declared when lambda reaches the noise floor within
// rounding of the envelope computation.
constexpr double kCoverageSlack = 1e-12;

double flat_fill(const DopplerProfile& profile, double level, double noise) {
    return profile.average([&](double alpha, double) {
        const double p = level - noise / alpha;
        return p > 0.0 ? p : 0.0;
    });
}

}  // namespace

PowerAllocation waterfill(const DopplerProfile& profile, const ChannelParams& params) {
    params.validate();
    PowerAllocation out;
    out.direction = profile.direction();
    out.noise_power = params.noise_power();
    const double gamma = profile.time_map().gamma();
    out.closed_form_level = profile.direction() == Direction::a_to_b
                                ? params.power + out.noise_power / gamma
                                : params.power + out.noise_power * gamma;

    const double floor = out.noise_power * profile.max_inverse_alpha();
    const auto excess = [&](double level) { return flat_fill(profile, level, out.noise_power) - params.power; };
    double hi = params.power + floor;
    for (int i = 0; i < 8 && excess(hi) < 0.0; ++i) hi = params.power + 2.0 * (hi - params.power);
    try {
        out.water_level = find_root_monotone(excess, 0.0, hi, 1e-15 * hi);
    } catch (const RootFindError& e) {
        throw NumericsError(std::string("waterfill: water level search failed: ") + e.what());
    }
    out.coverage = out.water_level >= floor * (1.0 - kCoverageSlack);
    return out;
}

double average_power(const DopplerProfile& profile, const PowerAllocation& allocation) {
    return profile.average([&](double alpha, double) { return allocation.power_for_alpha(alpha); });
}

CapacityResult capacity(const DopplerProfile& profile, const ChannelParams& params) {
    CapacityResult out;
    out.direction = profile.direction();
    out.allocation = waterfill(profile, params);
    const double noise = out.allocation.noise_power;
    const double width = params.bandwidth;
    out.value = width * profile.average([&](double alpha, double) {
        return std::log2(1.0 + alpha * out.allocation.power_for_alpha(alpha) / noise);
    });

    if (!out.allocation.coverage) return out;

    const double sigma = params.sigma();
    const double gamma = profile.time_map().gamma();
    const double shift = profile.direction() == Direction::a_to_b ? sigma + 1.0 / gamma : sigma + gamma;
    out.closed_form = width * profile.average([&](double alpha, double) { return std::log2(alpha * shift); });
    out.closed_form_deviation = std::fabs(*out.closed_form - out.value) / std::fabs(out.value);

    const Trajectory& traj = profile.trajectory();
    if (traj.constant_speed()) {
        // Integrated over Bob's worldline with d tau = ds / gamma.
        const double period = traj.duration();
        const QuadratureSpec spec = profile.spec().with_breakpoints(traj.singular_times());
        double integral;
        if (profile.direction() == Direction::a_to_b) {
            const double gain = gamma * sigma + 1.0;
            integral = integrate(
                [&](double s) {
                    const double lead = 1.0 - traj.beta_radial(s);
                    return lead * std::log2(lead * gain);
                },
                0.0, period, spec);
        } else {
            const double gain = sigma / gamma + 1.0;
            integral = integrate([&](double s) { return std::log2(gain / (1.0 + traj.beta_radial(s))); }, 0.0,
                                 period, spec);
        }
        out.closed_form_constant_speed = width * integral / period;
        out.closed_form_deviation =
            std::max(out.closed_form_deviation,
                     std::fabs(*out.closed_form_constant_speed - out.value) / std::fabs(out.value));
    }
    return out;
}

CapacityResult capacity(Direction direction, const Trajectory& traj, const ChannelParams& params,
                        const QuadratureSpec& spec) {
    return capacity(DopplerProfile(direction, traj, spec), params);
}

CapacityReport compare_symmetric(const Trajectory& traj, const ChannelParams& params,
                                 const CompareOptions& options) {
    params.validate();
    const DopplerProfile forward(Direction::a_to_b, traj, options.spec);
    const DopplerProfile backward(Direction::b_to_a, traj, options.spec);
    const CapacityResult a = capacity(forward, params);
    const CapacityResult b = capacity(backward, params);

    CapacityReport report;
    report.beta = traj.beta();
    report.b = max_abs_radial(traj, options.radial_grid);
    report.gamma = forward.time_map().gamma();
    report.sigma = params.sigma();
    report.bandwidth = params.bandwidth;
    report.c_a = a.value;
    report.c_b = b.value;
    report.gap = a.value - b.value;
    report.energy_per_bit_ratio = b.value / a.value;
    report.coverage_a = a.allocation.coverage;
    report.coverage_b = b.allocation.coverage;
    report.constant_speed = traj.constant_speed();
    report.admissible =
        report.sigma >= coverage_sigma_bound(report.gamma, report.b) * (1.0 - kCoverageSlack);
    report.closed_form_deviation_a = a.closed_form_deviation;
    report.closed_form_deviation_b = b.closed_form_deviation;

    const auto warn = [&](const std::string& what, double deviation) {
        std::ostringstream msg;
        msg.precision(3);
        msg << "closed-form mismatch " << what << ": relative deviation " << std::scientific << deviation;
        report.warnings.push_back(msg.str());
    };
    if (a.closed_form_deviation > options.closed_form_tolerance) warn("A->B", a.closed_form_deviation);
    if (b.closed_form_deviation > options.closed_form_tolerance) warn("B->A", b.closed_form_deviation);
    if (report.constant_speed && report.admissible && !(report.coverage_a && report.coverage_b)) {
        report.warnings.push_back("sigma admissible but water-filling reports partial coverage");
    }

    if (!(report.gap > 0.0)) {
        report.status = CapacityStatus::counterexample_candidate;
    } else if (!report.constant_speed) {
        report.status = CapacityStatus::outside_proved_scope;
    } else {
        report.status = CapacityStatus::pass;
    }
    return report;
}

double capacity_infinite_bandwidth(const DopplerProfile& profile,
                                   const std::function<double(double)>& power_profile,
                                   double noise_density) {
    if (!(noise_density > 0.0)) throw DomainError("capacity_infinite_bandwidth: noise density must be positive");
    const double mean = profile.average([&](double alpha, double x) {
        const double p = power_profile(x);
        if (!(p >= 0.0)) throw DomainError("capacity_infinite_bandwidth: power profile must be non-negative");
        return alpha * p;
    });
    return std::numbers::log2e / noise_density * mean;
}

}  // namespace relcap
