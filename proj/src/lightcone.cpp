#include "relcap/lightcone.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace relcap {

std::string to_string(Direction direction) {
    return direction == Direction::a_to_b ? "A->B" : "B->A";
}

namespace {

double lorentz_root(double speed) { return std::sqrt((1.0 - speed) * (1.0 + speed)); }

// Pulls a periodic worldline time onto a nearby cusp (or the wrap point) so
// that one-sided quantities are evaluated as right-hand limits.
double snap_to_singular(const Trajectory& traj, double s) {
    const double period = traj.duration();
    const double tol = 1e-12 * period;
    if (s <= tol || s >= period - tol) return 0.0;
    const auto& singular = traj.singular_times();
    auto it = std::lower_bound(singular.begin(), singular.end(), s - tol);
    if (it != singular.end() && std::fabs(*it - s) <= tol) return *it;
    return s;
}

double inverse_alpha_at(Direction direction, const Trajectory& traj, double s, Side side) {
    double radial;
    double speed;
    if (side == Side::right) {
        radial = traj.beta_radial_periodic(s);
        speed = traj.speed_periodic(s);
    } else {
        radial = traj.beta_radial(s, Side::left);
        speed = traj.speed(s, Side::left);
    }
    const double root = lorentz_root(speed);
    return direction == Direction::a_to_b ? root / (1.0 - radial) : (1.0 + radial) / root;
}

template <class F, class Better>
double refine_extremum(const F& f, double lo, double hi, double start, const Better& better) {
    constexpr double kInvPhi = 0.6180339887498949;
    double best = start;
    double a = lo;
    double b = hi;
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double fc = f(c);
    double fd = f(d);
    for (int i = 0; i < 80 && b - a > 1e-15 * (1.0 + std::fabs(b)); ++i) {
        if (better(fc, fd)) {
            b = d;
            d = c;
            fd = fc;
            c = b - kInvPhi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kInvPhi * (b - a);
            fd = f(d);
        }
        if (better(fc, best)) best = fc;
        if (better(fd, best)) best = fd;
    }
    return best;
}

}  // namespace

double reception_alice_time(const Trajectory& traj, double t) {
    const double period = traj.duration();
    if (!(t >= 0.0 && t <= period)) {
        throw DomainError("reception_alice_time: emission time outside [0, T_A]");
    }
    const auto residual = [&](double s) { return s - norm(traj.position_periodic(s)) - t; };
    const double tol = 4.0 * std::numeric_limits<double>::epsilon() * std::max(period, 1.0);
    try {
        // Bob at distance max_range makes the residual vanish at the upper end
        // exactly; the margin keeps rounding from losing the sign change.
        const double hi = t + traj.max_range() + 2.0 * tol;
        return find_root_monotone(residual, t, hi, tol);
    } catch (const RootFindError& e) {
        throw RootFindError(std::string("reception solve failed (internal consistency): ") + e.what());
    }
}

Reception reception_time_a_to_b(const Trajectory& traj, const TimeMap& map, double t) {
    const double t_star = reception_alice_time(traj, t);
    return {t_star, map.proper_time_periodic(t_star)};
}

double doppler_a_at_worldline(const Trajectory& traj, double s) {
    const double r = snap_to_singular(traj, traj.reduce(s));
    return (1.0 - traj.beta_radial_periodic(r)) / lorentz_root(traj.speed_periodic(r));
}

double doppler_b_at_worldline(const Trajectory& traj, double s) {
    const double r = snap_to_singular(traj, traj.reduce(s));
    return lorentz_root(traj.speed_periodic(r)) / (1.0 + traj.beta_radial_periodic(r));
}

double doppler_a(const Trajectory& traj, double t) {
    return doppler_a_at_worldline(traj, reception_alice_time(traj, t));
}

double doppler_b(const Trajectory& traj, const TimeMap& map, double tau) {
    return doppler_b_at_worldline(traj, map.alice_time(tau));
}

double doppler_a_kinematic_oracle(const Trajectory& traj, const TimeMap& map, double t, double h) {
    const double period = traj.duration();
    if (!(h > 0.0)) throw DomainError("doppler_a_kinematic_oracle: step must be positive");
    if (!(t >= 0.0 && t + h <= period)) {
        throw DomainError("doppler_a_kinematic_oracle: [t, t + h] must lie in [0, T_A]");
    }
    if (h < 1e-12 * std::max(period, 1.0)) {
        throw NumericsError("doppler_a_kinematic_oracle: step below numeric resolution");
    }
    const double spacing = reception_time_a_to_b(traj, map, t + h).tau_b -
                           reception_time_a_to_b(traj, map, t).tau_b;
    if (!(spacing > 0.0)) throw NumericsError("doppler_a_kinematic_oracle: unresolved pulse spacing");
    return h / spacing;
}

double doppler_b_kinematic_oracle(const Trajectory& traj, const TimeMap& map, double tau, double h) {
    const double period = map.bob_duration();
    if (!(h > 0.0)) throw DomainError("doppler_b_kinematic_oracle: step must be positive");
    if (!(tau >= 0.0 && tau + h <= period)) {
        throw DomainError("doppler_b_kinematic_oracle: [tau, tau + h] must lie in [0, T_B]");
    }
    if (h < 1e-12 * std::max(period, 1.0)) {
        throw NumericsError("doppler_b_kinematic_oracle: step below numeric resolution");
    }
    const auto arrival = [&](double bob_time) {
        const double s = map.alice_time(bob_time);
        return s + norm(traj.position(s));
    };
    const double spacing = arrival(tau + h) - arrival(tau);
    if (!(spacing > 0.0)) throw NumericsError("doppler_b_kinematic_oracle: unresolved pulse spacing");
    return h / spacing;
}

std::vector<double> singular_emission_times(Direction direction, const Trajectory& traj,
                                            const TimeMap& map) {
    std::vector<double> out;
    if (direction == Direction::a_to_b) {
        const double period = traj.duration();
        const double edge = 1e-14 * period;
        std::vector<double> cusps{0.0};
        cusps.insert(cusps.end(), traj.singular_times().begin(), traj.singular_times().end());
        for (double c : cusps) {
            const double e = traj.reduce(c - norm(traj.position(c)));
            if (e > edge && e < period - edge) out.push_back(e);
        }
    } else {
        for (double c : traj.singular_times()) out.push_back(map.proper_time(c));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

DopplerProfile::DopplerProfile(Direction direction, Trajectory traj, QuadratureSpec spec)
    : direction_(direction), map_(std::move(traj), spec), spec_(std::move(spec)) {
    const Trajectory& path = map_.trajectory();
    singular_ = singular_emission_times(direction_, path, map_);

    // Every worldline point is hit exactly once per period by the pulse
    // train, so extremes over the worldline are extremes over emitter time.
    constexpr std::size_t kGrid = 10000;
    const double period = path.duration();
    const auto inv = [&](double s) { return inverse_alpha_at(direction_, path, s, Side::right); };
    std::size_t arg_max = 0;
    std::size_t arg_min = 0;
    double hi = -std::numeric_limits<double>::infinity();
    double lo = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < kGrid; ++j) {
        const double v = inv(period * static_cast<double>(j) / kGrid);
        if (v > hi) { hi = v; arg_max = j; }
        if (v < lo) { lo = v; arg_min = j; }
    }
    for (double c : path.singular_times()) {
        for (Side side : {Side::right, Side::left}) {
            const double v = inverse_alpha_at(direction_, path, c, side);
            hi = std::max(hi, v);
            lo = std::min(lo, v);
        }
    }
    const double left = inverse_alpha_at(direction_, path, period, Side::left);
    hi = std::max(hi, left);
    lo = std::min(lo, left);
    const auto window = [&](std::size_t j) {
        const double step = period / kGrid;
        return std::pair{std::max(0.0, (static_cast<double>(j) - 1.0) * step),
                         std::min(period, (static_cast<double>(j) + 1.0) * step)};
    };
    auto [a1, b1] = window(arg_max);
    hi = refine_extremum(inv, a1, b1, hi, [](double x, double y) { return x > y; });
    auto [a2, b2] = window(arg_min);
    lo = refine_extremum(inv, a2, b2, lo, [](double x, double y) { return x < y; });
    max_inverse_alpha_ = hi;
    min_inverse_alpha_ = lo;
}

double DopplerProfile::emitter_duration() const {
    return direction_ == Direction::a_to_b ? map_.alice_duration() : map_.bob_duration();
}

double DopplerProfile::alpha(double emitter_time) const {
    const Trajectory& path = map_.trajectory();
    if (direction_ == Direction::a_to_b) return doppler_a(path, emitter_time);
    return doppler_b(path, map_, emitter_time);
}

double DopplerProfile::reception(double emitter_time) const {
    const Trajectory& path = map_.trajectory();
    if (direction_ == Direction::a_to_b) {
        return reception_time_a_to_b(path, map_, emitter_time).tau_b;
    }
    const double s = map_.alice_time(emitter_time);
    return s + norm(path.position(s));
}

TimeIdentityReport verify_time_identities(const Trajectory& traj, const QuadratureSpec& spec) {
    const TimeMap map(traj, spec);
    TimeIdentityReport report;
    {
        const auto integrand = [&](double t) { return 1.0 / doppler_a(traj, t); };
        const auto splits = singular_emission_times(Direction::a_to_b, traj, map);
        report.integral_a = integrate(integrand, 0.0, map.alice_duration(), spec.with_breakpoints(splits));
        report.expected_a = map.bob_duration();
        report.deviation_a = std::fabs(report.integral_a - report.expected_a);
    }
    {
        const auto integrand = [&](double tau) { return 1.0 / doppler_b(traj, map, tau); };
        const auto splits = singular_emission_times(Direction::b_to_a, traj, map);
        report.integral_b = integrate(integrand, 0.0, map.bob_duration(), spec.with_breakpoints(splits));
        report.expected_b = map.alice_duration();
        report.deviation_b = std::fabs(report.integral_b - report.expected_b);
    }
    return report;
}

}  // namespace relcap
