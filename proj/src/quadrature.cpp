#include "cesaro/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "cesaro/errors.hpp"
#include "cesaro/summation.hpp"

namespace cesaro {

QuadratureResult integrate_log_spaced(const std::function<double(double)>& f, double a, double b, double rel_tol,
                                      std::span<const double> breakpoints) {
    if (!(a > 0.0) || !(b >= a)) {
        throw std::domain_error("integrate_log_spaced requires 0 < a <= b");
    }
    if (a == b) {
        return {};
    }
    const double ta = std::log(a);
    const double tb = std::log(b);
    std::vector<double> cuts{ta, tb};
    for (double t = std::floor(ta) + 1.0; t < tb; t += 1.0) {
        cuts.push_back(t);
    }
    for (double x : breakpoints) {
        if (x > a && x < b) {
            cuts.push_back(std::log(x));
        }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    auto integrand = [&f](double t) {
        const double x = std::exp(t);
        return f(x) * x;
    };

    CompensatedSum total;
    CompensatedSum total_error;
    std::vector<std::pair<double, double>> pieces;
    pieces.reserve(cuts.size());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        double err = 0.0;
        const double lo = cuts[i];
        const double hi = cuts[i + 1];
        const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, lo, hi, 15,
                                                                                        rel_tol * 1e-2, &err);
        if (!std::isfinite(v)) {
            std::ostringstream msg;
            msg << "quadrature produced a non-finite value on [" << std::exp(lo) << ", " << std::exp(hi) << "]";
            throw NumericError(msg.str());
        }
        total.add(v);
        total_error.add(err);
        pieces.emplace_back(v, err);
    }
    const double value = total.value();
    const double error = total_error.value();
    const double scale = std::max(std::fabs(value), std::numeric_limits<double>::min());
    if (error > rel_tol * scale && error > 1e-300) {
        std::size_t worst = 0;
        for (std::size_t i = 1; i < pieces.size(); ++i) {
            if (pieces[i].second > pieces[worst].second) {
                worst = i;
            }
        }
        std::ostringstream msg;
        msg << "quadrature missed relative tolerance " << rel_tol << " (estimated error " << error
            << ", value " << value << "); worst subinterval [" << std::exp(cuts[worst]) << ", "
            << std::exp(cuts[worst + 1]) << "]";
        throw NumericError(msg.str());
    }
    return {value, error};
}

}  // namespace cesaro
