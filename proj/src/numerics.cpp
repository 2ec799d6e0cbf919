#include "wn/numerics.hpp"

#include "wn/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/legendre.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace wn {

GaussRule gauss_legendre(unsigned n) {
    if (n == 0) throw DomainError("gauss_legendre: n must be positive");
    // Boost returns the nonnegative zeros in ascending order.
    std::vector<double> half = boost::math::legendre_p_zeros<double>(static_cast<int>(n));
    GaussRule rule;
    auto weight = [n](double x) {
        double dp = boost::math::legendre_p_prime<double>(static_cast<int>(n), x);
        return 2.0 / ((1.0 - x * x) * dp * dp);
    };
    for (auto it = half.rbegin(); it != half.rend(); ++it) {
        if (*it == 0.0) continue;
        rule.nodes.push_back(-*it);
        rule.weights.push_back(weight(*it));
    }
    for (double x : half) {
        rule.nodes.push_back(x);
        rule.weights.push_back(weight(x));
    }
    return rule;
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    if (a == b) return 0.0;
    // Kronrod reports a spurious 2^-30 error on intervals a few ulps wide.
    if (std::abs(b - a) <= 64 * std::numeric_limits<double>::epsilon() * std::max(std::abs(a), std::abs(b)))
        return (b - a) * f(0.5 * (a + b));
    double err = 0.0, l1 = 0.0;
    double val = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        f, a, b, 20, tol, &err, &l1);
    // The Kronrod estimate saturates near 1e-14 relative; tighter requests are best effort.
    if (!(err <= 1e3 * std::max(tol, 1e-14) * std::max(1.0, l1)) || !std::isfinite(val)) {
        std::ostringstream msg;
        msg << "integrate: error estimate " << err << " above tolerance " << tol;
        throw NumericalError(msg.str());
    }
    return val;
}

double smooth_step(double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    double a = std::exp(-1.0 / x);
    double b = std::exp(-1.0 / (1.0 - x));
    return a / (a + b);
}

double cutoff(double x, double r) {
    double ax = std::abs(x);
    if (ax <= r) return 1.0;
    if (ax >= 2.0 * r) return 0.0;
    return 1.0 - smooth_step((ax - r) / r);
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw DomainError("fit_line: need at least two paired samples");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) { sx += x[i]; sy += y[i]; }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0) throw DomainError("fit_line: abscissae are all equal");
    LineFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
    return fit;
}

}  // namespace wn
