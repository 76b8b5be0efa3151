#include "cesaro/weights.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "cesaro/summation.hpp"

namespace cesaro {

namespace {

constexpr double kStirlingThreshold = 16.0;

void check_order(double alpha) {
    if (!(alpha >= -1.0) || !std::isfinite(alpha)) {
        throw std::domain_error("Cesaro order must satisfy alpha > -1 (or the convention alpha = -1), got " +
                                std::to_string(alpha));
    }
}

void check_index(std::uint64_t n) {
    if (n > kMaxIndex) {
        throw std::range_error("coefficient index " + std::to_string(n) + " exceeds 2^53");
    }
}

// Tail of the Stirling series for log Gamma(z), z >= 16.
double stirling_correction(double z) {
    const double r = 1.0 / z;
    const double r2 = r * r;
    return r * (1.0 / 12.0 +
                r2 * (-1.0 / 360.0 +
                      r2 * (1.0 / 1260.0 +
                            r2 * (-1.0 / 1680.0 + r2 * (1.0 / 1188.0 + r2 * (-691.0 / 360360.0))))));
}

// log Gamma(x + a) - log Gamma(x) for x > 0, x + a > 0.
double log_gamma_ratio(double x, double a) {
    CompensatedSum shift;
    while (x < kStirlingThreshold || x + a < kStirlingThreshold) {
        shift.add(-std::log1p(a / x));
        x += 1.0;
    }
    CompensatedSum d;
    d.add((x - 0.5) * std::log1p(a / x));
    d.add(a * std::log(x + a));
    d.add(-a);
    d.add(stirling_correction(x + a) - stirling_correction(x));
    d.merge(shift);
    return d.value();
}

}  // namespace

CesaroOrder CesaroOrder::one_dim(double alpha) {
    check_order(alpha);
    return CesaroOrder(alpha, std::nullopt);
}

CesaroOrder CesaroOrder::two_dim(double alpha, double beta) {
    require_theorem_range(alpha, beta);
    return CesaroOrder(alpha, beta);
}

void require_theorem_range(double alpha, double beta) {
    if (!(alpha > 0.0 && alpha <= beta && beta <= 1.0)) {
        throw std::domain_error("orders must satisfy 0 < alpha <= beta <= 1, got (" + std::to_string(alpha) +
                                ", " + std::to_string(beta) + ")");
    }
}

double log_weight_gamma(double alpha, std::uint64_t n) {
    check_order(alpha);
    check_index(n);
    if (n == 0 || alpha == 0.0) {
        return 0.0;
    }
    if (alpha == -1.0) {
        return -std::numeric_limits<double>::infinity();
    }
    const double x = static_cast<double>(n) + 1.0;
    return log_gamma_ratio(x, alpha) - std::lgamma(alpha + 1.0);
}

double log_weight_recurrence(double alpha, std::uint64_t n) {
    check_order(alpha);
    check_index(n);
    if (n == 0 || alpha == 0.0) {
        return 0.0;
    }
    if (alpha == -1.0) {
        return -std::numeric_limits<double>::infinity();
    }
    CompensatedSum acc;
    for (std::uint64_t k = 1; k <= n; ++k) {
        acc.add(std::log1p(alpha / static_cast<double>(k)));
    }
    return acc.value();
}

double log_weight(double alpha, std::uint64_t n) { return log_weight_gamma(alpha, n); }

double weight(double alpha, std::uint64_t n) {
    // Short products are exact for integer orders and within a few ulp
    // otherwise.
    if (n <= 64 && alpha >= -1.0) {
        double a = 1.0;
        for (std::uint64_t k = 1; k <= n; ++k) {
            a = a * (alpha + static_cast<double>(k)) / static_cast<double>(k);
        }
        return a;
    }
    return std::exp(log_weight(alpha, n));
}

double asymptotic_ratio(double alpha, std::uint64_t n) {
    if (n == 0) {
        throw std::domain_error("asymptotic_ratio requires n >= 1");
    }
    if (alpha == -1.0) {
        throw std::domain_error("asymptotic_ratio requires alpha > -1");
    }
    const double lw = log_weight(alpha, n);
    return std::exp(lw + std::lgamma(alpha + 1.0) - alpha * std::log(static_cast<double>(n)));
}

WeightTable::WeightTable(double order, std::size_t n_max, std::size_t budget) : order_(order) {
    check_order(order);
    if (n_max >= budget) {
        throw std::length_error("weight table of " + std::to_string(n_max + 1) + " entries exceeds budget of " +
                                std::to_string(budget));
    }
    log_weights_.resize(n_max + 1);
    log_weights_[0] = 0.0;
    if (order == -1.0) {
        for (std::size_t k = 1; k <= n_max; ++k) {
            log_weights_[k] = -std::numeric_limits<double>::infinity();
        }
        return;
    }
    CompensatedSum acc;
    for (std::size_t k = 1; k <= n_max; ++k) {
        acc.add(std::log1p(order / static_cast<double>(k)));
        log_weights_[k] = acc.value();
    }
}

double WeightTable::at(std::size_t k) const { return std::exp(log_at(k)); }

std::vector<double> WeightTable::weights() const {
    std::vector<double> out(log_weights_.size());
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] = std::exp(log_weights_[k]);
    }
    return out;
}

WeightTable weight_row(double alpha, std::size_t n_max, std::size_t budget) {
    return WeightTable(alpha, n_max, budget);
}

}  // namespace cesaro
