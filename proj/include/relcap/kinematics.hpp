#pragma once

// Bob's closed worldline in Alice's rest frame.
//
// Units: c = 1, positions in light-seconds, times in seconds. Alice sits at
// the spatial origin and trajectories are parameterized by her coordinate
// time t in [0, T_A].

#include <cmath>
#include <cstddef>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "relcap/numerics.hpp"

namespace relcap {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
    friend bool operator==(const Vec3&, const Vec3&) = default;
};

inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm(Vec3 a) { return std::sqrt(dot(a, a)); }

/// Below this distance from Alice the radial direction is taken from the
/// trajectory limit instead of x/|x|.
inline constexpr double kOriginEpsilon = 1e-9;

enum class TrajectoryKind { circle, radial_out_back, polygon, sampled };

std::string to_string(TrajectoryKind kind);

/// Circle of the given radius in the plane z = center.z, traversed
/// counter-clockwise starting from center + (radius, 0, 0).
struct CircleParams {
    double radius = 1.0;
    double beta = 0.5;
    Vec3 center{};
    int dimension = 2;
    friend bool operator==(const CircleParams&, const CircleParams&) = default;
};

/// Straight out to `distance` along `direction` and straight back.
struct RadialParams {
    double distance = 1.0;
    double beta = 0.5;
    Vec3 direction{1.0, 0.0, 0.0};
    int dimension = 2;
    friend bool operator==(const RadialParams&, const RadialParams&) = default;
};

/// Closed polygon; the last waypoint must repeat the first.
struct PolygonParams {
    std::vector<Vec3> waypoints;
    double beta = 0.5;
    int dimension = 2;
    friend bool operator==(const PolygonParams&, const PolygonParams&) = default;
};

/// Piecewise-linear worldline through timestamped samples. Speed may vary
/// between segments; such trajectories fall outside the constant-speed
/// theory and are flagged by Trajectory::constant_speed().
struct SampledParams {
    std::vector<double> times;
    std::vector<Vec3> positions;
    int dimension = 2;
    friend bool operator==(const SampledParams&, const SampledParams&) = default;
};

using TrajectoryParams = std::variant<CircleParams, RadialParams, PolygonParams, SampledParams>;

enum class Side { right, left };

class Trajectory {
public:
    struct Geometry;

    TrajectoryKind kind() const;
    int dimension() const;
    /// Nominal speed for constant-speed kinds, maximum segment speed for
    /// sampled ones.
    double beta() const;
    bool constant_speed() const;
    /// T_A.
    double duration() const;
    /// Cusps strictly inside (0, T_A).
    const std::vector<double>& breakpoints() const;
    /// Breakpoints plus interior instants where Bob passes through Alice
    /// (beta_r jumps there). Sorted, strictly inside (0, T_A).
    const std::vector<double>& singular_times() const;
    /// max |x| over the whole path.
    double max_range() const;
    const TrajectoryParams& params() const;

    // Strict-domain accessors; t must lie in [0, T_A]. Velocity is the
    // right-hand limit except at T_A itself, or the left-hand one when asked.
    Vec3 position(double t) const;
    Vec3 velocity(double t, Side side = Side::right) const;
    double speed(double t, Side side = Side::right) const;
    double beta_radial(double t, Side side = Side::right) const;

    // Periodic extension with period T_A (right-hand limits throughout).
    double reduce(double t) const;
    Vec3 position_periodic(double t) const;
    double speed_periodic(double t) const;
    double beta_radial_periodic(double t) const;

private:
    friend Trajectory make_trajectory(const TrajectoryParams& params);
    explicit Trajectory(std::shared_ptr<const Geometry> geometry) : geometry_(std::move(geometry)) {}
    void check_domain(double t) const;
    double radial_from(Vec3 x, Vec3 v, bool arriving) const;

    std::shared_ptr<const Geometry> geometry_;
};

/// Validates the parameters and builds the trajectory. Throws DomainError on
/// beta outside (0, 1), zero-length geometry or an open polygon/sample table.
Trajectory make_trajectory(const TrajectoryParams& params);

/// Radial component of Bob's velocity at Alice time t (strict domain). At
/// Alice's location the trajectory limit is used: +speed when departing,
/// -speed when arriving at t = T_A.
double beta_radial(const Trajectory& traj, double t);

/// Monotone map between Alice coordinate time and Bob proper time.
class TimeMap {
public:
    explicit TimeMap(Trajectory traj, QuadratureSpec spec = {});

    double alice_duration() const { return alice_duration_; }
    double bob_duration() const { return bob_duration_; }
    double gamma() const { return alice_duration_ / bob_duration_; }
    const Trajectory& trajectory() const { return traj_; }

    /// tau(t) for t in [0, T_A].
    double proper_time(double t) const;
    /// tau(t) extended by tau(t + k T_A) = tau(t) + k T_B.
    double proper_time_periodic(double t) const;
    /// Inverse map t(tau) for tau in [0, T_B].
    double alice_time(double tau) const;

private:
    std::size_t segment_of(double t) const;

    Trajectory traj_;
    QuadratureSpec spec_;
    std::vector<double> knots_;
    std::vector<double> cumulative_;
    double alice_duration_;
    double bob_duration_;
};

TimeMap proper_time_map(const Trajectory& traj, const QuadratureSpec& spec = {});

/// b = max |beta_r| over a uniform grid of `grid` intervals plus both
/// one-sided limits at every singular time. Grid-based, so an
/// approximation of the supremum from below; never exceeds beta.
double max_abs_radial(const Trajectory& traj, std::size_t grid = 10000);

/// Integral of beta_r over Bob's proper time. Zero for any closed
/// constant-speed path, so this is a self-check there; variable-speed
/// paths weight d|x| by sqrt(1 - v^2) and need not give zero.
double radial_displacement_integral(const Trajectory& traj, const QuadratureSpec& spec = {});

}  // namespace relcap
