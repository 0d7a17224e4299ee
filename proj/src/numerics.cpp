#include "relcap/numerics.hpp"

#include <algorithm>
#include <sstream>

namespace relcap {

void QuadratureSpec::validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
        throw DomainError("QuadratureSpec: tolerances must be positive");
    }
    if (max_depth < 1) throw DomainError("QuadratureSpec: max depth must be at least 1");
    if (!std::is_sorted(breakpoints.begin(), breakpoints.end())) {
        throw DomainError("QuadratureSpec: breakpoints must be sorted");
    }
}

namespace detail {

void throw_non_finite(double x, double value) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "integrate: integrand returned " << value << " at x = " << x;
    throw QuadratureError(msg.str(), std::numeric_limits<double>::quiet_NaN(),
                          std::numeric_limits<double>::infinity(), x);
}

std::vector<double> split_points(double a, double b, const std::vector<double>& breakpoints) {
    std::vector<double> cuts;
    cuts.reserve(breakpoints.size() + 2);
    cuts.push_back(a);
    for (double p : breakpoints) {
        if (p > cuts.back() && p < b) cuts.push_back(p);
    }
    cuts.push_back(b);
    return cuts;
}

}  // namespace detail
}  // namespace relcap
