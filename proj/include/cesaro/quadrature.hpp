#pragma once

#include <functional>
#include <span>

namespace cesaro {

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
};

/// Adaptive Gauss-Kronrod integration of f over [a, b], 0 < a < b, after the
/// substitution x = e^t. The t-range is split into pieces of width at most
/// one (so slowly varying integrands over many decades are resolved) and at
/// every breakpoint that falls inside (a, b).
///
/// Throws NumericError naming the offending subinterval if a piece misses
/// the relative tolerance.
QuadratureResult integrate_log_spaced(const std::function<double(double)>& f, double a, double b,
                                      double rel_tol = 1e-10, std::span<const double> breakpoints = {});

}  // namespace cesaro
