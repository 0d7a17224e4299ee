#include "relcap/kinematics.hpp"

#include <algorithm>
#include <limits>
#include <numbers>
#include <sstream>

namespace relcap {

std::string to_string(TrajectoryKind kind) {
    switch (kind) {
        case TrajectoryKind::circle: return "circle";
        case TrajectoryKind::radial_out_back: return "radial_out_back";
        case TrajectoryKind::polygon: return "polygon";
        case TrajectoryKind::sampled: return "sampled";
    }
    return "unknown";
}

struct Trajectory::Geometry {
    TrajectoryParams params;
    TrajectoryKind kind = TrajectoryKind::circle;
    int dimension = 2;
    double beta = 0.0;
    bool constant_speed = true;
    double duration = 0.0;
    std::vector<double> breakpoints;
    std::vector<double> singular;
    double max_range = 0.0;

    // Circle representation.
    bool circular = false;
    Vec3 center{};
    double radius = 0.0;
    double omega = 0.0;

    // Piecewise-linear representation: segment i spans [knots[i], knots[i+1]].
    std::vector<double> knots;
    std::vector<Vec3> points;
    std::vector<Vec3> velocities;

    std::size_t segment(double t, Side side) const {
        const std::size_t last = knots.size() - 2;
        if (side == Side::right) {
            auto it = std::upper_bound(knots.begin(), knots.end(), t);
            if (it == knots.begin()) return 0;
            return std::min<std::size_t>(static_cast<std::size_t>(it - knots.begin()) - 1, last);
        }
        auto it = std::lower_bound(knots.begin(), knots.end(), t);
        if (it == knots.begin()) return last;  // left limit at 0 wraps to the end
        return std::min<std::size_t>(static_cast<std::size_t>(it - knots.begin()) - 1, last);
    }

    Vec3 position(double t) const {
        if (circular) {
            const double phase = omega * t;
            return center + Vec3{radius * std::cos(phase), radius * std::sin(phase), 0.0};
        }
        const std::size_t i = segment(t, Side::right);
        if (t >= knots[i + 1]) return points[i + 1];
        return points[i] + (t - knots[i]) * velocities[i];
    }

    Vec3 velocity(double t, Side side) const {
        if (circular) {
            const double phase = omega * t;
            return Vec3{-beta * std::sin(phase), beta * std::cos(phase), 0.0};
        }
        return velocities[segment(t, side)];
    }
};

namespace {

void check_dimension(int dimension, std::initializer_list<Vec3> points) {
    if (dimension != 2 && dimension != 3) throw DomainError("trajectory: dimension must be 2 or 3");
    if (dimension == 2) {
        for (const Vec3& p : points) {
            if (p.z != 0.0) throw DomainError("trajectory: 2-D trajectory has a non-zero z coordinate");
        }
    }
}

void check_beta(double beta) {
    if (!(beta > 0.0 && beta < 1.0)) {
        std::ostringstream msg;
        msg << "trajectory: beta must lie in (0, 1), got " << beta;
        throw DomainError(msg.str());
    }
}

double path_scale(const std::vector<Vec3>& points) {
    double scale = 0.0;
    for (const Vec3& p : points) scale = std::max(scale, norm(p));
    return scale;
}

void finish_segments(Trajectory::Geometry& g) {
    g.velocities.clear();
    double vmin = std::numeric_limits<double>::infinity();
    double vmax = 0.0;
    for (std::size_t i = 0; i + 1 < g.points.size(); ++i) {
        const double dt = g.knots[i + 1] - g.knots[i];
        const Vec3 v = (1.0 / dt) * (g.points[i + 1] - g.points[i]);
        g.velocities.push_back(v);
        vmin = std::min(vmin, norm(v));
        vmax = std::max(vmax, norm(v));
    }
    g.duration = g.knots.back();
    g.breakpoints.assign(g.knots.begin() + 1, g.knots.end() - 1);
    g.max_range = path_scale(g.points);

    // Interior passages through Alice's location.
    std::vector<double> passages;
    for (std::size_t i = 0; i < g.velocities.size(); ++i) {
        const Vec3 v = g.velocities[i];
        const double vv = dot(v, v);
        if (vv == 0.0) continue;
        const double s = -dot(g.points[i], v) / vv;
        const double dt = g.knots[i + 1] - g.knots[i];
        if (s <= 0.0 || s >= dt) continue;
        if (norm(g.points[i] + s * v) < kOriginEpsilon) passages.push_back(g.knots[i] + s);
    }
    g.singular = g.breakpoints;
    g.singular.insert(g.singular.end(), passages.begin(), passages.end());
    std::sort(g.singular.begin(), g.singular.end());
    g.singular.erase(std::unique(g.singular.begin(), g.singular.end()), g.singular.end());

    g.beta = vmax;
    g.constant_speed = (vmax - vmin) <= 1e-9 * vmax;
}

std::shared_ptr<Trajectory::Geometry> build(const CircleParams& p) {
    check_beta(p.beta);
    check_dimension(p.dimension, {p.center});
    if (!(p.radius > 0.0) || !std::isfinite(p.radius)) throw DomainError("circle: radius must be positive");
    auto g = std::make_shared<Trajectory::Geometry>();
    g->kind = TrajectoryKind::circle;
    g->dimension = p.dimension;
    g->beta = p.beta;
    g->circular = true;
    g->center = p.center;
    g->radius = p.radius;
    g->omega = p.beta / p.radius;
    g->duration = 2.0 * std::numbers::pi * p.radius / p.beta;
    const double planar = std::hypot(p.center.x, p.center.y);
    g->max_range = std::hypot(p.center.z, planar + p.radius);
    if (std::hypot(p.center.z, planar - p.radius) < kOriginEpsilon && planar > 0.0) {
        double angle = std::atan2(-p.center.y, -p.center.x);
        if (angle < 0.0) angle += 2.0 * std::numbers::pi;
        const double t = angle / g->omega;
        if (t > 0.0 && t < g->duration) g->singular.push_back(t);
    }
    return g;
}

std::shared_ptr<Trajectory::Geometry> build(const RadialParams& p) {
    check_beta(p.beta);
    check_dimension(p.dimension, {p.direction});
    if (!(p.distance > 0.0) || !std::isfinite(p.distance)) {
        throw DomainError("radial_out_back: distance must be positive");
    }
    const double len = norm(p.direction);
    if (!(len > 0.0)) throw DomainError("radial_out_back: direction must be non-zero");
    const Vec3 unit = (1.0 / len) * p.direction;
    auto g = std::make_shared<Trajectory::Geometry>();
    g->kind = TrajectoryKind::radial_out_back;
    g->dimension = p.dimension;
    g->points = {Vec3{}, p.distance * unit, Vec3{}};
    const double half = p.distance / p.beta;
    g->knots = {0.0, half, 2.0 * half};
    finish_segments(*g);
    g->beta = p.beta;
    g->constant_speed = true;
    return g;
}

std::shared_ptr<Trajectory::Geometry> build(const PolygonParams& p) {
    check_beta(p.beta);
    if (p.waypoints.size() < 3) {
        throw DomainError("polygon: need at least two distinct vertices plus the closing waypoint");
    }
    for (const Vec3& w : p.waypoints) check_dimension(p.dimension, {w});
    const double scale = std::max(path_scale(p.waypoints), 1.0);
    if (norm(p.waypoints.back() - p.waypoints.front()) > 1e-12 * scale) {
        throw DomainError("polygon: open polygon (last waypoint must repeat the first)");
    }
    auto g = std::make_shared<Trajectory::Geometry>();
    g->kind = TrajectoryKind::polygon;
    g->dimension = p.dimension;
    g->points = p.waypoints;
    g->points.back() = g->points.front();
    g->knots = {0.0};
    for (std::size_t i = 0; i + 1 < g->points.size(); ++i) {
        const double edge = norm(g->points[i + 1] - g->points[i]);
        if (!(edge > 1e-12 * scale)) throw DomainError("polygon: zero-length edge");
        g->knots.push_back(g->knots.back() + edge / p.beta);
    }
    finish_segments(*g);
    g->beta = p.beta;
    g->constant_speed = true;
    return g;
}

std::shared_ptr<Trajectory::Geometry> build(const SampledParams& p) {
    if (p.times.size() != p.positions.size()) {
        throw DomainError("sampled: times and positions differ in length");
    }
    if (p.times.size() < 3) throw DomainError("sampled: need at least three samples");
    if (p.times.front() != 0.0) throw DomainError("sampled: first sample time must be 0");
    for (std::size_t i = 0; i + 1 < p.times.size(); ++i) {
        if (!(p.times[i + 1] > p.times[i])) throw DomainError("sampled: times must increase strictly");
    }
    for (const Vec3& w : p.positions) check_dimension(p.dimension, {w});
    const double scale = std::max(path_scale(p.positions), 1.0);
    if (norm(p.positions.back() - p.positions.front()) > 1e-12 * scale) {
        throw DomainError("sampled: open trajectory (last sample must repeat the first position)");
    }
    auto g = std::make_shared<Trajectory::Geometry>();
    g->kind = TrajectoryKind::sampled;
    g->dimension = p.dimension;
    g->points = p.positions;
    g->points.back() = g->points.front();
    g->knots = p.times;
    finish_segments(*g);
    if (!(g->beta > 0.0)) throw DomainError("sampled: zero-length geometry");
    if (!(g->beta < 1.0)) throw DomainError("sampled: segment speed must stay below 1");
    return g;
}

}  // namespace

Trajectory make_trajectory(const TrajectoryParams& params) {
    auto geometry = std::visit([](const auto& p) { return build(p); }, params);
    geometry->params = params;
    return Trajectory(std::move(geometry));
}

TrajectoryKind Trajectory::kind() const { return geometry_->kind; }
int Trajectory::dimension() const { return geometry_->dimension; }
double Trajectory::beta() const { return geometry_->beta; }
bool Trajectory::constant_speed() const { return geometry_->constant_speed; }
double Trajectory::duration() const { return geometry_->duration; }
const std::vector<double>& Trajectory::breakpoints() const { return geometry_->breakpoints; }
const std::vector<double>& Trajectory::singular_times() const { return geometry_->singular; }
double Trajectory::max_range() const { return geometry_->max_range; }
const TrajectoryParams& Trajectory::params() const { return geometry_->params; }

void Trajectory::check_domain(double t) const {
    if (!(t >= 0.0 && t <= geometry_->duration)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "trajectory: time " << t << " outside [0, " << geometry_->duration << "]";
        throw DomainError(msg.str());
    }
}

Vec3 Trajectory::position(double t) const {
    check_domain(t);
    return geometry_->position(t);
}

Vec3 Trajectory::velocity(double t, Side side) const {
    check_domain(t);
    if (t == geometry_->duration) side = Side::left;
    return geometry_->velocity(t, side);
}

double Trajectory::speed(double t, Side side) const { return norm(velocity(t, side)); }

double Trajectory::radial_from(Vec3 x, Vec3 v, bool arriving) const {
    const double r = norm(x);
    if (r < kOriginEpsilon) return arriving ? -norm(v) : norm(v);
    // On a circle x - center is orthogonal to v; dropping that term keeps a
    // centered circle at exactly zero.
    if (geometry_->circular) return dot(geometry_->center, v) / r;
    return dot(x, v) / r;
}

double Trajectory::beta_radial(double t, Side side) const {
    check_domain(t);
    if (t == geometry_->duration) side = Side::left;
    return radial_from(geometry_->position(t), geometry_->velocity(t, side), side == Side::left);
}

double Trajectory::reduce(double t) const {
    const double period = geometry_->duration;
    if (t >= 0.0 && t < period) return t;
    double r = std::fmod(t, period);
    if (r < 0.0) r += period;
    if (r >= period) r = 0.0;
    return r;
}

Vec3 Trajectory::position_periodic(double t) const { return geometry_->position(reduce(t)); }

double Trajectory::speed_periodic(double t) const {
    return norm(geometry_->velocity(reduce(t), Side::right));
}

double Trajectory::beta_radial_periodic(double t) const {
    const double r = reduce(t);
    return radial_from(geometry_->position(r), geometry_->velocity(r, Side::right), false);
}

double beta_radial(const Trajectory& traj, double t) { return traj.beta_radial(t); }

TimeMap::TimeMap(Trajectory traj, QuadratureSpec spec)
    : traj_(std::move(traj)), spec_(std::move(spec)) {
    spec_.breakpoints.clear();
    spec_.validate();
    knots_.push_back(0.0);
    for (double b : traj_.breakpoints()) knots_.push_back(b);
    knots_.push_back(traj_.duration());
    cumulative_.push_back(0.0);
    for (std::size_t i = 0; i + 1 < knots_.size(); ++i) {
        const auto rate = [this](double u) {
            const double v = traj_.speed(u);
            return std::sqrt((1.0 - v) * (1.0 + v));
        };
        cumulative_.push_back(cumulative_.back() + integrate(rate, knots_[i], knots_[i + 1], spec_));
    }
    alice_duration_ = traj_.duration();
    bob_duration_ = cumulative_.back();
}

std::size_t TimeMap::segment_of(double t) const {
    auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
    const std::size_t last = knots_.size() - 2;
    if (it == knots_.begin()) return 0;
    return std::min<std::size_t>(static_cast<std::size_t>(it - knots_.begin()) - 1, last);
}

double TimeMap::proper_time(double t) const {
    if (!(t >= 0.0 && t <= alice_duration_)) {
        throw DomainError("TimeMap: Alice time outside [0, T_A]");
    }
    const std::size_t i = segment_of(t);
    if (t == knots_[i]) return cumulative_[i];
    if (t == knots_[i + 1]) return cumulative_[i + 1];
    const auto rate = [this](double u) {
        const double v = traj_.speed(u);
        return std::sqrt((1.0 - v) * (1.0 + v));
    };
    return cumulative_[i] + integrate(rate, knots_[i], t, spec_);
}

double TimeMap::proper_time_periodic(double t) const {
    if (t >= 0.0 && t <= alice_duration_) return proper_time(t);
    const double periods = std::floor(t / alice_duration_);
    double r = t - periods * alice_duration_;
    r = std::clamp(r, 0.0, alice_duration_);
    return periods * bob_duration_ + proper_time(r);
}

double TimeMap::alice_time(double tau) const {
    const double slack = 1e-14 * bob_duration_;
    if (!(tau >= -slack && tau <= bob_duration_ + slack)) {
        throw DomainError("TimeMap: proper time outside [0, T_B]");
    }
    tau = std::clamp(tau, 0.0, bob_duration_);
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), tau);
    std::size_t i = it == cumulative_.begin() ? 0 : static_cast<std::size_t>(it - cumulative_.begin()) - 1;
    i = std::min(i, knots_.size() - 2);
    if (tau == cumulative_[i]) return knots_[i];
    const auto residual = [&](double t) { return proper_time(t) - tau; };
    return find_root_monotone(residual, knots_[i], knots_[i + 1],
                              4.0 * std::numeric_limits<double>::epsilon() * alice_duration_);
}

TimeMap proper_time_map(const Trajectory& traj, const QuadratureSpec& spec) { return TimeMap(traj, spec); }

double max_abs_radial(const Trajectory& traj, std::size_t grid) {
    if (grid == 0) throw DomainError("max_abs_radial: grid must be positive");
    const double period = traj.duration();
    double best = 0.0;
    for (std::size_t j = 0; j <= grid; ++j) {
        const double t = j == grid ? period : period * static_cast<double>(j) / static_cast<double>(grid);
        best = std::max(best, std::fabs(traj.beta_radial(t)));
    }
    for (double c : traj.singular_times()) {
        best = std::max(best, std::fabs(traj.beta_radial(c, Side::right)));
        best = std::max(best, std::fabs(traj.beta_radial(c, Side::left)));
    }
    return std::min(best, traj.beta());
}

double radial_displacement_integral(const Trajectory& traj, const QuadratureSpec& spec) {
    const auto integrand = [&](double t) {
        const double v = traj.speed(t);
        return traj.beta_radial(t) * std::sqrt((1.0 - v) * (1.0 + v));
    };
    return integrate(integrand, 0.0, traj.duration(), spec.with_breakpoints(traj.singular_times()));
}

}  // namespace relcap
