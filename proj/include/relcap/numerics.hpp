#pragma once

// Deterministic quadrature and bracketed root finding.
//
// Everything here is a pure function of its inputs: node order, subdivision
// order and summation order are fixed, so repeated calls return bit-identical
// results regardless of which thread makes them.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace relcap {

/// Raised when an argument lies outside the mathematical domain of an
/// operation (bad speed, open polygon, x <= -1 in g, ...).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class NumericsError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Adaptive quadrature failure. Carries whatever estimate was assembled so
/// callers can still report it with an accuracy flag.
class QuadratureError : public NumericsError {
public:
    QuadratureError(const std::string& what, double best_estimate, double error_estimate,
                    std::optional<double> abscissa = std::nullopt)
        : NumericsError(what), best_estimate_(best_estimate), error_estimate_(error_estimate),
          abscissa_(abscissa) {}

    double best_estimate() const noexcept { return best_estimate_; }
    double error_estimate() const noexcept { return error_estimate_; }
    /// Always false: the estimate did not meet the requested tolerance.
    bool accurate() const noexcept { return false; }
    /// Set when the integrand produced a non-finite value.
    std::optional<double> abscissa() const noexcept { return abscissa_; }

private:
    double best_estimate_;
    double error_estimate_;
    std::optional<double> abscissa_;
};

class RootFindError : public NumericsError {
public:
    using NumericsError::NumericsError;
};

struct QuadratureSpec {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    int max_depth = 40;
    /// Abscissae where the integrand may be non-smooth. Must be sorted;
    /// entries outside the open integration interval are ignored.
    std::vector<double> breakpoints;

    /// Throws DomainError when tolerances/depth/breakpoint order are invalid.
    void validate() const;

    QuadratureSpec with_breakpoints(std::vector<double> points) const {
        QuadratureSpec copy = *this;
        copy.breakpoints = std::move(points);
        return copy;
    }
};

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    bool converged = true;
    std::size_t evaluations = 0;
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15).
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5) and the centre.
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double kronrod;
    double gauss;
};

[[noreturn]] void throw_non_finite(double x, double value);

template <class F>
Panel gauss_kronrod_panel(const F& f, double a, double b, std::size_t& evaluations) {
    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    auto eval = [&](double x) {
        const double y = static_cast<double>(f(x));
        ++evaluations;
        if (!std::isfinite(y)) throw_non_finite(x, y);
        return y;
    };
    const double fc = eval(centre);
    double kronrod = kKronrodWeights[7] * fc;
    double gauss = kGaussWeights[3] * fc;
    for (std::size_t j = 0; j < 7; ++j) {
        const double dx = half * kKronrodNodes[j];
        const double pair = eval(centre - dx) + eval(centre + dx);
        kronrod += kKronrodWeights[j] * pair;
        if (j % 2 == 1) gauss += kGaussWeights[j / 2] * pair;
    }
    return {kronrod * half, gauss * half};
}

struct Cell {
    double a, b;
    Panel panel;
    double err;
    int depth;
    bool frozen;  // depth limit, round-off floor or no representable midpoint
};

template <class F>
Cell make_cell(const F& f, double a, double b, int depth, int max_depth, std::size_t& evaluations) {
    const Panel panel = gauss_kronrod_panel(f, a, b, evaluations);
    const double err = std::fabs(panel.kronrod - panel.gauss);
    const double mid = 0.5 * (a + b);
    const bool roundoff = err <= 50.0 * std::numeric_limits<double>::epsilon() * std::fabs(panel.kronrod);
    return {a, b, panel, err, depth, roundoff || depth >= max_depth || !(mid > a && mid < b)};
}

// Upper bound on bisections per call, far beyond what smooth or
// piecewise-smooth integrands need.
inline constexpr std::size_t kMaxSubdivisions = 200000;

std::vector<double> split_points(double a, double b, const std::vector<double>& breakpoints);

}  // namespace detail

/// Adaptive Gauss-Kronrod (7/15) quadrature of f over [a, b] that never
/// throws on non-convergence; inspect `converged` instead.
///
/// The interval is first cut at every breakpoint strictly inside (a, b).
/// Globally adaptive: the panel with the largest error estimate is bisected
/// (ties go to the leftmost) until the summed estimate is within
/// max(abs_tol, rel_tol |I|). Panels deeper than max_depth are not split.
/// The result is summed left to right over the final panels.
template <class F>
QuadratureResult integrate_result(const F& f, double a, double b, const QuadratureSpec& spec) {
    spec.validate();
    if (!(a <= b)) throw DomainError("integrate: require a <= b");
    QuadratureResult acc;
    if (a == b) return acc;
    const auto cuts = detail::split_points(a, b, spec.breakpoints);
    std::vector<detail::Cell> cells;
    std::vector<bool> live;
    const auto worse = [&](std::size_t i, std::size_t j) {
        if (cells[i].err != cells[j].err) return cells[i].err < cells[j].err;
        return cells[i].a > cells[j].a;
    };
    std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(worse)> queue(worse);
    double value = 0.0;
    double err = 0.0;
    const auto add = [&](detail::Cell cell) {
        value += cell.panel.kronrod;
        err += cell.err;
        cells.push_back(cell);
        live.push_back(true);
        if (!cell.frozen) queue.push(cells.size() - 1);
    };
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        add(detail::make_cell(f, cuts[i], cuts[i + 1], 0, spec.max_depth, acc.evaluations));
    }
    for (std::size_t step = 0; step < detail::kMaxSubdivisions && !queue.empty(); ++step) {
        if (err <= std::max(spec.abs_tol, spec.rel_tol * std::fabs(value))) break;
        const std::size_t worst = queue.top();
        queue.pop();
        const detail::Cell parent = cells[worst];
        live[worst] = false;
        value -= parent.panel.kronrod;
        err -= parent.err;
        const double mid = 0.5 * (parent.a + parent.b);
        add(detail::make_cell(f, parent.a, mid, parent.depth + 1, spec.max_depth, acc.evaluations));
        add(detail::make_cell(f, mid, parent.b, parent.depth + 1, spec.max_depth, acc.evaluations));
    }
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (live[i]) order.push_back(i);
    }
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return cells[i].a < cells[j].a; });
    for (std::size_t i : order) {
        acc.value += cells[i].panel.kronrod;
        acc.error_estimate += cells[i].err;
    }
    acc.converged = acc.error_estimate <= std::max(spec.abs_tol, spec.rel_tol * std::fabs(acc.value));
    if (!acc.converged) {
        // Round-off floors count as resolved: their estimate is noise.
        double unresolved = 0.0;
        for (std::size_t i : order) {
            const detail::Cell& c = cells[i];
            const bool noise = c.err <= 50.0 * std::numeric_limits<double>::epsilon() * std::fabs(c.panel.kronrod);
            if (!noise) unresolved += c.err;
        }
        acc.converged = unresolved <= std::max(spec.abs_tol, spec.rel_tol * std::fabs(acc.value));
    }
    return acc;
}

/// Integral of f over [a, b]. Throws QuadratureError (carrying the best
/// estimate) when the depth limit is hit or the integrand is non-finite.
template <class F>
double integrate(const F& f, double a, double b, const QuadratureSpec& spec = {}) {
    const QuadratureResult r = integrate_result(f, a, b, spec);
    if (!r.converged) {
        throw QuadratureError("integrate: max subdivision depth exceeded on [" + std::to_string(a) +
                                  ", " + std::to_string(b) + "]",
                              r.value, r.error_estimate);
    }
    return r.value;
}

/// Root of a monotone function bracketed by [lo, hi].
///
/// Illinois-modified regula falsi; a plain bisection step is forced whenever
/// three consecutive steps fail to halve the bracket. Stops when the bracket
/// is no wider than `tol` or cannot be split further in double precision and
/// returns the bracket end with the smaller |g|.
template <class G>
double find_root_monotone(const G& g, double lo, double hi, double tol) {
    if (!(lo <= hi)) throw DomainError("find_root_monotone: require lo <= hi");
    if (!(tol >= 0.0)) throw DomainError("find_root_monotone: tolerance must be non-negative");
    auto eval = [&](double x) {
        const double y = static_cast<double>(g(x));
        if (!std::isfinite(y)) {
            throw RootFindError("find_root_monotone: non-finite value at x = " + std::to_string(x));
        }
        return y;
    };
    double a = lo;
    double b = hi;
    const double ga0 = eval(a);
    if (ga0 == 0.0) return a;
    const double gb0 = eval(b);
    if (gb0 == 0.0) return b;
    if ((ga0 < 0.0) == (gb0 < 0.0)) {
        throw RootFindError("find_root_monotone: no sign change on [" + std::to_string(lo) + ", " +
                            std::to_string(hi) + "]");
    }
    double ga = ga0, gb = gb0;  // true values at the bracket ends
    double wa = ga, wb = gb;    // Illinois-weighted values
    int retained = 0;           // -1: a kept last step, +1: b kept
    int stalls = 0;
    for (int iter = 0; iter < 400; ++iter) {
        const double width = b - a;
        const double mid = a + 0.5 * width;
        if (width <= tol || !(mid > a && mid < b)) break;
        double x = mid;
        if (stalls < 3) {
            const double secant = b - wb * width / (wb - wa);
            if (secant > a && secant < b) x = secant;
        }
        const bool bisected = x == mid;
        const double gx = eval(x);
        if (gx == 0.0) return x;
        if ((gx < 0.0) == (ga < 0.0)) {
            a = x;
            ga = wa = gx;
            if (retained == 1) wb *= 0.5;
            retained = 1;
        } else {
            b = x;
            gb = wb = gx;
            if (retained == -1) wa *= 0.5;
            retained = -1;
        }
        stalls = (bisected || (b - a) <= 0.5 * width) ? 0 : stalls + 1;
    }
    return std::fabs(ga) <= std::fabs(gb) ? a : b;
}

}  // namespace relcap
