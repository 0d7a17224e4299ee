#include "relcap/inequality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace relcap {

double g(double x) {
    if (!(x > -1.0)) throw DomainError("g: argument must exceed -1");
    if (x > 1.0) throw DomainError("g: argument must not exceed 1");
    if (x == 1.0) return std::log(2.0);
    return std::log1p(x) + (1.0 - x) * std::log1p(-x);
}

namespace {

std::vector<double> uniform_edges(std::size_t pieces) {
    std::vector<double> edges(pieces + 1);
    for (std::size_t i = 0; i <= pieces; ++i) {
        edges[i] = static_cast<double>(i) / static_cast<double>(pieces);
    }
    edges.back() = 1.0;
    return edges;
}

void check_edges(const std::vector<double>& edges, std::size_t pieces) {
    if (edges.size() != pieces + 1) throw DomainError("profile: need one more edge than values");
    if (edges.front() != 0.0 || edges.back() != 1.0) throw DomainError("profile: edges must span [0, 1]");
    for (std::size_t i = 0; i < pieces; ++i) {
        if (!(edges[i + 1] > edges[i])) throw DomainError("profile: edges must increase strictly");
    }
}

double weighted_mean(const std::vector<double>& values, const std::vector<double>& edges) {
    double sum = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) sum += (edges[i + 1] - edges[i]) * values[i];
    return sum;
}

constexpr double kMeanTolerance = 1e-10;

}  // namespace

ZeroMeanProfile ZeroMeanProfile::from_table(std::vector<double> values, std::vector<double> edges) {
    if (values.empty()) throw DomainError("profile: empty table");
    if (edges.empty()) edges = uniform_edges(values.size());
    check_edges(edges, values.size());
    double peak = 0.0;
    for (double v : values) {
        if (!std::isfinite(v) || !(std::fabs(v) < 1.0)) throw DomainError("profile: values must satisfy |f| < 1");
        peak = std::max(peak, std::fabs(v));
    }
    const double mean = weighted_mean(values, edges);
    if (std::fabs(mean) > kMeanTolerance) {
        std::ostringstream msg;
        msg << "profile: mean " << mean << " is not zero";
        throw DomainError(msg.str());
    }
    ZeroMeanProfile out;
    out.values_ = std::move(values);
    out.edges_ = std::move(edges);
    out.bound_ = peak;
    return out;
}

ZeroMeanProfile ZeroMeanProfile::mean_corrected(std::vector<double> raw, double bound, std::vector<double> edges) {
    if (raw.empty()) throw DomainError("profile: empty table");
    if (!(bound >= 0.0 && bound < 1.0)) throw DomainError("profile: bound must lie in [0, 1)");
    if (edges.empty()) edges = uniform_edges(raw.size());
    check_edges(edges, raw.size());
    const double mean = weighted_mean(raw, edges);
    double peak = 0.0;
    for (double& v : raw) {
        v -= mean;
        peak = std::max(peak, std::fabs(v));
    }
    const double scale = peak > 0.0 ? bound / peak : 0.0;
    for (double& v : raw) v *= scale;
    ZeroMeanProfile out = from_table(std::move(raw), std::move(edges));
    out.adjustment_ = {mean, scale};
    return out;
}

ZeroMeanProfile ZeroMeanProfile::from_function(std::function<double(double)> f, double bound,
                                               std::vector<double> breakpoints, QuadratureSpec spec,
                                               double mean_tolerance) {
    if (!(bound >= 0.0 && bound < 1.0)) throw DomainError("profile: bound must lie in [0, 1)");
    constexpr int kChecks = 1000;
    for (int j = 0; j <= kChecks; ++j) {
        const double x = static_cast<double>(j) / kChecks;
        if (std::fabs(f(x)) > bound * (1.0 + 1e-12)) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "profile: |f(" << x << ")| exceeds the bound " << bound;
            throw DomainError(msg.str());
        }
    }
    ZeroMeanProfile out;
    out.closure_ = std::move(f);
    out.breakpoints_ = std::move(breakpoints);
    out.spec_ = std::move(spec);
    out.bound_ = bound;
    const double mean = out.integrate_of([](double v) { return v; });
    if (std::fabs(mean) > mean_tolerance) {
        std::ostringstream msg;
        msg << "profile: mean " << mean << " is not zero";
        throw DomainError(msg.str());
    }
    return out;
}

double ZeroMeanProfile::operator()(double x) const {
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("profile: argument outside [0, 1]");
    if (closure_) return closure_(x);
    auto it = std::upper_bound(edges_.begin(), edges_.end(), x);
    std::size_t i = it == edges_.begin() ? 0 : static_cast<std::size_t>(it - edges_.begin()) - 1;
    return values_[std::min(i, values_.size() - 1)];
}

ZeroMeanProfile profile_from_trajectory(const Trajectory& traj, const QuadratureSpec& spec,
                                        std::size_t radial_grid) {
    const TimeMap map(traj, spec);
    const double bob = map.bob_duration();
    auto f = [traj, map, bob](double x) { return traj.beta_radial(map.alice_time(bob * x)); };
    std::vector<double> breakpoints;
    for (double c : traj.singular_times()) breakpoints.push_back(map.proper_time(c) / bob);
    double bound = max_abs_radial(traj, radial_grid);
    for (int j = 0; j <= 1000; ++j) bound = std::max(bound, std::fabs(f(j / 1000.0)));
    return ZeroMeanProfile::from_function(f, bound, std::move(breakpoints), spec, 1e-9);
}

double theorem_lhs(const ZeroMeanProfile& f) {
    return f.integrate_of([](double v) { return g(v); });
}

KlTerms kl_terms(const ZeroMeanProfile& f) {
    return {f.integrate_of([](double v) { return (1.0 - v) * std::log1p(-v); }),
            f.integrate_of([](double v) { return -std::log1p(v); })};
}

double kl_form(const ZeroMeanProfile& f) {
    const KlTerms terms = kl_terms(f);
    return terms.divergence_minus - terms.divergence_plus;
}

std::string to_string(Verdict verdict) {
    switch (verdict) {
        case Verdict::pass: return "pass";
        case Verdict::fail: return "fail";
        case Verdict::degenerate: return "degenerate";
    }
    return "unknown";
}

InequalityWitness check_theorem1(const ZeroMeanProfile& f, std::string provenance) {
    InequalityWitness w;
    w.b = f.bound();
    w.lhs = theorem_lhs(f);
    w.bound = std::log1p(-w.b * w.b * w.b);
    w.margin = w.lhs - w.bound;
    if (w.b == 0.0) {
        w.verdict = Verdict::degenerate;
    } else {
        w.verdict = w.margin > 0.0 ? Verdict::pass : Verdict::fail;
    }
    w.provenance = std::move(provenance);
    return w;
}

LemmaReport check_lemma1(double beta, double b, double sigma) {
    if (!(beta > 0.0 && beta < 1.0)) throw DomainError("lemma: beta must lie in (0, 1)");
    if (!(b >= 0.0 && b <= beta)) throw DomainError("lemma: b must lie in [0, beta]");
    if (!std::isfinite(sigma) || sigma < 0.0) throw DomainError("lemma: sigma must be a non-negative number");
    LemmaReport rep;
    rep.beta = beta;
    rep.b = b;
    rep.sigma = sigma;
    rep.gamma = 1.0 / std::sqrt((1.0 - beta) * (1.0 + beta));
    const double doppler_bound = b / (rep.gamma * (1.0 - b));
    const double dilation_bound = rep.gamma * b;
    rep.sigma_min = std::max(doppler_bound, dilation_bound);
    rep.proof_case = dilation_bound > doppler_bound ? 1 : 2;
    const auto below = [&](double bound) { return sigma < bound * (1.0 - 1e-12); };
    if (below(doppler_bound)) {
        std::ostringstream msg;
        msg.precision(12);
        msg << "lemma: sigma " << sigma << " below (1/gamma) b/(1-b) = " << doppler_bound;
        throw DomainError(msg.str());
    }
    if (below(dilation_bound)) {
        std::ostringstream msg;
        msg.precision(12);
        msg << "lemma: sigma " << sigma << " below gamma b = " << dilation_bound;
        throw DomainError(msg.str());
    }
    rep.lhs = std::log1p(-b * b * b);
    rep.rhs = std::log1p(sigma / rep.gamma) - std::log1p(rep.gamma * sigma);
    rep.slack = rep.lhs - rep.rhs;
    rep.boundary = std::fabs(rep.slack) <= 1e-12;
    rep.holds = rep.slack >= -1e-12;
    return rep;
}

ThreePointDistribution three_point(double b, double u, double q) {
    const double ratio = u / b;
    return {b, u, 0.5 * (1.0 - q * (1.0 - ratio)), q, 0.5 * (1.0 - q * (1.0 + ratio))};
}

double three_point_objective(const ThreePointDistribution& d) {
    return d.p * g(-d.b) + d.q * g(d.u) + d.r * g(d.b) - std::log1p(-d.b * d.b * d.b);
}

ExtremalResult extremal_oracle(double b, std::size_t u_grid, std::size_t q_grid) {
    if (!(b > 0.0 && b < 1.0)) throw DomainError("extremal_oracle: b must lie in (0, 1)");
    if (u_grid < 100 || q_grid < 100) throw DomainError("extremal_oracle: grids must have at least 100 points");
    ExtremalResult best;
    best.min_objective = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i <= u_grid; ++i) {
        const double u = -b + 2.0 * b * static_cast<double>(i) / static_cast<double>(u_grid + 1);
        for (std::size_t j = 0; j < q_grid; ++j) {
            const double q = static_cast<double>(j) / static_cast<double>(q_grid - 1);
            const ThreePointDistribution d = three_point(b, u, q);
            if (d.p < 0.0 || d.r < 0.0) continue;
            ++best.feasible_points;
            const double value = three_point_objective(d);
            if (value < best.min_objective) {
                best.min_objective = value;
                best.argmin = d;
            }
        }
    }
    return best;
}

namespace {

void check_b(double b, const char* who) {
    if (!(b >= 0.0 && b < 1.0)) throw DomainError(std::string(who) + ": b must lie in [0, 1)");
}

void check_u(double u, const char* who) {
    if (!(u > -1.0 && u < 1.0)) throw DomainError(std::string(who) + ": u must lie in (-1, 1)");
}

}  // namespace

double proof_r(double b) {
    check_b(b, "R");
    return std::log1p(-b * b) - std::log1p(-b * b * b) + b * std::atanh(b);
}

double proof_r_prime(double b) {
    check_b(b, "R'");
    return -b / (1.0 - b * b) + 3.0 * b * b / (1.0 - b * b * b) + std::atanh(b);
}

double proof_r_second(double b) {
    check_b(b, "R''");
    const double b2 = b * b;
    const double b3 = b2 * b;
    const double numerator = b * (6.0 + 10.0 * b + 2.0 * b2 - 3.0 * b3 + 2.0 * b2 * b2 + b2 * b3);
    const double c = 1.0 + b + b2;
    const double denominator = (1.0 - b) * (1.0 - b) * (1.0 + b) * (1.0 + b) * c * c;
    return numerator / denominator;
}

double proof_s(double b, double u) {
    check_b(b, "S");
    check_u(u, "S");
    return g(u) - (1.0 - 0.5 * u) * std::log1p(-b * b) - b * std::atanh(b);
}

double proof_m(double q, double b, double u) { return proof_r(b) + q * proof_s(b, u); }

double proof_f(double b, double u) {
    check_b(b, "F");
    check_u(u, "F");
    return g(u) - std::log1p(-b * b * b) + 0.5 * u * std::log1p(-b * b);
}

double proof_h(double u) {
    check_u(u, "H");
    return g(u) + 0.5 * u * std::log1p(-u * u) - std::log1p(u * u * u);
}

ProofFunctions proof_functions(double b, double u, double q) {
    if (!(b > 0.0 && b < 1.0)) throw DomainError("proof_functions: b must lie in (0, 1)");
    if (!(u > -b && u < b)) throw DomainError("proof_functions: u must lie in (-b, b)");
    if (!(q >= 0.0 && q <= 1.0)) throw DomainError("proof_functions: q must lie in [0, 1]");
    return {proof_r(b), proof_r_prime(b), proof_r_second(b), proof_s(b, u),
            proof_m(q, b, u), proof_f(b, u), proof_h(u)};
}

ZeroMeanProfile random_profile(std::mt19937_64& rng, std::size_t pieces, double bound) {
    if (pieces == 0) throw DomainError("random_profile: need at least one piece");
    std::uniform_real_distribution<double> value(-1.0, 1.0);
    std::uniform_real_distribution<double> weight(0.05, 1.0);
    std::vector<double> raw(pieces);
    std::vector<double> widths(pieces);
    double total = 0.0;
    for (std::size_t i = 0; i < pieces; ++i) {
        raw[i] = value(rng);
        widths[i] = weight(rng);
        total += widths[i];
    }
    std::vector<double> edges(pieces + 1, 0.0);
    for (std::size_t i = 0; i < pieces; ++i) edges[i + 1] = edges[i] + widths[i] / total;
    edges.back() = 1.0;
    return ZeroMeanProfile::mean_corrected(std::move(raw), bound, std::move(edges));
}

std::vector<ZeroMeanProfile> random_profiles(const RandomSuiteOptions& options) {
    if (options.min_pieces < 1 || options.max_pieces < options.min_pieces) {
        throw DomainError("random_profiles: invalid piece range");
    }
    if (!(options.max_bound > 0.0 && options.max_bound < 1.0)) {
        throw DomainError("random_profiles: max bound must lie in (0, 1)");
    }
    std::mt19937_64 rng(options.seed);
    std::uniform_int_distribution<std::size_t> pieces(options.min_pieces, options.max_pieces);
    std::uniform_real_distribution<double> bound(0.0, options.max_bound);
    std::vector<ZeroMeanProfile> out;
    out.reserve(options.count);
    for (std::size_t k = 0; k < options.count; ++k) {
        double b = 0.0;
        while (b == 0.0) b = bound(rng);
        const std::size_t n = pieces(rng);
        out.push_back(random_profile(rng, n, b));
    }
    return out;
}

}  // namespace relcap
