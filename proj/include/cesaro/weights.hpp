#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace cesaro {

/// Tolerances for the internal consistency checks of the coefficient tables.
inline constexpr double kRouteAgreementTol = 1e-12;
inline constexpr double kCumulativeIdentityTol = 1e-10;

/// Largest index accepted by weight(); beyond 2^53 the index is no longer
/// exactly representable in the floating-point arithmetic used internally.
inline constexpr std::uint64_t kMaxIndex = std::uint64_t{1} << 53;

/// Default entry budget for weight_row (64 MiB of doubles).
inline constexpr std::size_t kDefaultRowBudget = std::size_t{1} << 23;

/// Summation orders (alpha, beta). One-dimensional use leaves beta empty.
class CesaroOrder {
public:
    /// Any order accepted by the coefficient routines (alpha > -1, or the
    /// conventional alpha = -1).
    static CesaroOrder one_dim(double alpha);

    /// Orders for the two-dimensional limit theorems: 0 < alpha <= beta <= 1.
    static CesaroOrder two_dim(double alpha, double beta);

    double alpha() const noexcept { return alpha_; }
    double beta() const noexcept { return beta_.value_or(alpha_); }
    bool has_beta() const noexcept { return beta_.has_value(); }

    friend bool operator==(const CesaroOrder&, const CesaroOrder&) = default;

private:
    CesaroOrder(double a, std::optional<double> b) : alpha_(a), beta_(b) {}

    double alpha_;
    std::optional<double> beta_;
};

/// Throws std::domain_error unless 0 < alpha <= beta <= 1.
void require_theorem_range(double alpha, double beta);

/// log A_n^alpha. For alpha = -1 and n >= 1 the coefficient is zero and the
/// result is -infinity.
double log_weight(double alpha, std::uint64_t n);

/// A_n^alpha = (alpha+1)(alpha+2)...(alpha+n)/n!, A_0^alpha = 1.
double weight(double alpha, std::uint64_t n);

/// log A_n^alpha through a gamma-function ratio.
double log_weight_gamma(double alpha, std::uint64_t n);

/// log A_n^alpha through the product recurrence A_k = A_{k-1}(alpha+k)/k
/// accumulated in log space with compensated summation. O(n).
double log_weight_recurrence(double alpha, std::uint64_t n);

/// A_n^alpha * Gamma(alpha+1) / n^alpha; tends to 1.
double asymptotic_ratio(double alpha, std::uint64_t n);

/// Immutable table of log A_k^order for k = 0..n_max.
class WeightTable {
public:
    WeightTable(double order, std::size_t n_max,
                std::size_t budget = kDefaultRowBudget);

    double order() const noexcept { return order_; }
    std::size_t n_max() const noexcept { return log_weights_.size() - 1; }
    std::span<const double> log_weights() const noexcept { return log_weights_; }

    double log_at(std::size_t k) const { return log_weights_.at(k); }
    double at(std::size_t k) const;

    /// exp of every entry.
    std::vector<double> weights() const;

private:
    double order_;
    std::vector<double> log_weights_;
};

/// Table of log A_k^alpha, k = 0..n_max.
/// Throws std::length_error when n_max + 1 exceeds the entry budget.
WeightTable weight_row(double alpha, std::size_t n_max,
                       std::size_t budget = kDefaultRowBudget);

}  // namespace cesaro
