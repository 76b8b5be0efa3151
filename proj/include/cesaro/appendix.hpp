#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "cesaro/field.hpp"
#include "cesaro/lab.hpp"
#include "cesaro/weights.hpp"

namespace cesaro {

enum class Regime { below_half, half, above_half };

std::string_view to_string(Regime r);

/// Position of gamma relative to 1/2 and the leading-order form of
/// gamma_integral in that regime.
struct RegimeCase {
    double gamma = 0.5;
    Regime regime = Regime::half;
    std::string asymptotic_form;
};

/// Requires 0 < gamma < 1.
RegimeCase regime_case(double gamma);

/// Integral of x^{-gamma/(1-gamma)} over [y, y^{1/gamma}], in closed form.
double gamma_integral(double gamma, double y);

/// Leading-order growth of gamma_integral in y:
/// y^{(1-2g)/(g(1-g))} for g < 1/2, log y at g = 1/2, y^{(1-2g)/(1-g)} above.
double gamma_asymptotic(double gamma, double y);

/// gamma_integral / gamma_asymptotic.
double branch_ratio(double gamma, double y);

/// Integral of x^{r-1} (log^+ x)^s P(|X| > x) over [1, upper], to relative
/// accuracy 1e-8.
double moment_integral(const TailProfile& profile, double r, double s, double upper);

struct IntegralGrowth {
    std::vector<double> uppers;
    std::vector<double> values;
    Observation classification = Observation::inconclusive;
};

/// moment_integral at the given uppers (at least three, increasing); the last
/// three values are classified with classify_growth.
IntegralGrowth integral_growth(const TailProfile& profile, double r, double s,
                               std::vector<double> uppers = {1e2, 1e4, 1e6, 1e8}, const GrowthRule& rule = {});

struct EquivalenceReport {
    TailProfile profile;
    CesaroOrder order = CesaroOrder::two_dim(0.5, 0.5);
    MomentRequirement requirement;
    bool predicted = false;                 ///< moment_finite(profile, r, s)
    std::vector<SeriesGrowth> series;       ///< one per level
    IntegralGrowth integral;
    Observation sum_classification = Observation::inconclusive;
    bool concordant = false;
};

/// Compares the classification of the analytic term sum (last level) with
/// that of the moment integral for the requirement of the complete
/// convergence table. Term sums shared between levels are computed once.
EquivalenceReport equivalence_check(const TailProfile& profile, const CesaroOrder& order,
                                    const std::vector<std::size_t>& levels, const GrowthRule& rule = {},
                                    unsigned threads = 1);

}  // namespace cesaro
