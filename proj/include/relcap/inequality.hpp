#pragma once

// Numerical verification of the entropy-type inequality behind C_A > C_B:
//
//   integral_0^1 (1 - f) ln(1 - f) + ln(1 + f) dx  >  ln(1 - b^3)
//
// for every f with |f| <= b < 1 and zero mean, together with the auxiliary
// functions used to prove it. Natural logarithms throughout.

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "relcap/kinematics.hpp"
#include "relcap/numerics.hpp"

namespace relcap {

/// g(x) = ln(1 + x) + (1 - x) ln(1 - x) on (-1, 1], with the x = 1 limit.
double g(double x);

/// Zero-mean profile on [0, 1] bounded by b < 1, either a piecewise-constant
/// table or a closure.
class ZeroMeanProfile {
public:
    struct MeanAdjustment {
        double offset = 0.0;  // empirical mean removed from the raw values
        double scale = 1.0;   // factor applied after removing the mean
    };

    /// Table with pieces [edges[i], edges[i+1]); uniform pieces when `edges`
    /// is empty. The weighted mean must vanish within 1e-10.
    static ZeroMeanProfile from_table(std::vector<double> values, std::vector<double> edges = {});

    /// Removes the weighted mean from `raw`, then rescales so that the
    /// largest |f| equals `bound`. A constant input yields f = 0, b = 0.
    static ZeroMeanProfile mean_corrected(std::vector<double> raw, double bound,
                                          std::vector<double> edges = {});

    /// Closure profile. `bound` must dominate |f| (checked on a grid) and the
    /// mean must vanish within `mean_tolerance` by quadrature.
    static ZeroMeanProfile from_function(std::function<double(double)> f, double bound,
                                         std::vector<double> breakpoints = {}, QuadratureSpec spec = {},
                                         double mean_tolerance = 1e-10);

    bool is_table() const { return !closure_; }
    double bound() const { return bound_; }
    double operator()(double x) const;
    const std::vector<double>& values() const { return values_; }
    const std::vector<double>& edges() const { return edges_; }
    const MeanAdjustment& adjustment() const { return adjustment_; }

    /// integral_0^1 h(f(x)) dx: exact weighted sum for tables, quadrature
    /// split at the breakpoints for closures.
    template <class H>
    double integrate_of(const H& h) const {
        if (!closure_) {
            double sum = 0.0;
            for (std::size_t i = 0; i < values_.size(); ++i) sum += (edges_[i + 1] - edges_[i]) * h(values_[i]);
            return sum;
        }
        return integrate([&](double x) { return h(closure_(x)); }, 0.0, 1.0,
                         spec_.with_breakpoints(breakpoints_));
    }

private:
    ZeroMeanProfile() = default;

    std::vector<double> values_;
    std::vector<double> edges_;
    std::function<double(double)> closure_;
    std::vector<double> breakpoints_;
    QuadratureSpec spec_;
    double bound_ = 0.0;
    MeanAdjustment adjustment_;
};

/// f(x) = beta_r(T_B x), Bob's radial velocity on normalized proper time.
/// Zero mean holds to quadrature accuracy for any closed path.
ZeroMeanProfile profile_from_trajectory(const Trajectory& traj, const QuadratureSpec& spec = {},
                                        std::size_t radial_grid = 10000);

/// Left side of the inequality, in nats.
double theorem_lhs(const ZeroMeanProfile& f);

struct KlTerms {
    double divergence_minus;  // D_KL(1 - f || 1)
    double divergence_plus;   // D_KL(1 || 1 + f)
};

KlTerms kl_terms(const ZeroMeanProfile& f);
/// D_KL(1 - f || 1) - D_KL(1 || 1 + f); equals theorem_lhs algebraically.
double kl_form(const ZeroMeanProfile& f);

enum class Verdict { pass, fail, degenerate };

std::string to_string(Verdict verdict);

struct InequalityWitness {
    double lhs = 0.0;    // nats
    double bound = 0.0;  // ln(1 - b^3)
    double margin = 0.0;
    double b = 0.0;
    Verdict verdict = Verdict::fail;
    std::string provenance;
};

InequalityWitness check_theorem1(const ZeroMeanProfile& f, std::string provenance = {});

struct LemmaReport {
    double beta = 0.0;
    double b = 0.0;
    double sigma = 0.0;
    double gamma = 0.0;
    double sigma_min = 0.0;
    double lhs = 0.0;  // ln(1 - b^3)
    double rhs = 0.0;  // ln((sigma/gamma + 1) / (gamma sigma + 1))
    double slack = 0.0;
    bool holds = false;
    /// |slack| within 1e-12: the equality case b = beta,
    /// sigma = beta sqrt((1 + beta) / (1 - beta)).
    bool boundary = false;
    /// 1 when gamma b exceeds b / (gamma (1 - b)) (b < beta^2), else 2.
    int proof_case = 2;
};

/// Throws DomainError for beta outside (0, 1), b outside [0, beta], or a
/// sigma below either coverage bound (the message names the bound).
LemmaReport check_lemma1(double beta, double b, double sigma);

/// Three-point law on {-b, u, b} with zero mean.
struct ThreePointDistribution {
    double b = 0.0;
    double u = 0.0;
    double p = 0.0;  // P(Y = -b)
    double q = 0.0;  // P(Y = u)
    double r = 0.0;  // P(Y = b)
};

/// Masses solving p + q + r = 1 and -p b + q u + r b = 0 for given (b, u, q).
ThreePointDistribution three_point(double b, double u, double q);

/// L = p g(-b) + q g(u) + r g(b) - ln(1 - b^3), straight from the masses.
double three_point_objective(const ThreePointDistribution& d);

struct ExtremalResult {
    double min_objective = 0.0;
    ThreePointDistribution argmin;
    std::size_t feasible_points = 0;
};

/// Brute-force minimum of L over u_i = -b + 2b i / (u_grid + 1), i = 1..u_grid,
/// and q_j = j / (q_grid - 1), skipping points with p < 0 or r < 0. Ties keep
/// the first point in (u, q) row-major order. Grids must be at least 100.
ExtremalResult extremal_oracle(double b, std::size_t u_grid, std::size_t q_grid);

// Auxiliary functions of the two-point reduction, all in nats.
double proof_r(double b);
double proof_r_prime(double b);
double proof_r_second(double b);
double proof_s(double b, double u);
double proof_m(double q, double b, double u);
double proof_f(double b, double u);
double proof_h(double u);

struct ProofFunctions {
    double r, r_prime, r_second, s, m, f, h;
};

/// Every auxiliary function at (b, u, q); H is evaluated at u. Requires
/// b in (0, 1), u in (-b, b), q in [0, 1].
ProofFunctions proof_functions(double b, double u, double q);

/// Random piecewise-constant zero-mean profile with `pieces` pieces of
/// random width and ess sup |f| = bound.
ZeroMeanProfile random_profile(std::mt19937_64& rng, std::size_t pieces, double bound);

struct RandomSuiteOptions {
    std::uint64_t seed = 1;
    std::size_t count = 1000;
    std::size_t min_pieces = 2;
    std::size_t max_pieces = 50;
    double max_bound = 0.95;
};

/// Draws `count` profiles from one seeded stream; reproducible per seed.
std::vector<ZeroMeanProfile> random_profiles(const RandomSuiteOptions& options);

}  // namespace relcap
