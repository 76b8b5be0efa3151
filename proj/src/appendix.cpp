#include "cesaro/appendix.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "cesaro/parallel.hpp"
#include "cesaro/quadrature.hpp"

namespace cesaro {

namespace {

void check_gamma(double gamma) {
    if (!(gamma > 0.0 && gamma < 1.0)) {
        throw std::domain_error("gamma must lie in (0, 1)");
    }
}

}  // namespace

std::string_view to_string(Regime r) {
    switch (r) {
    case Regime::below_half:
        return "below_half";
    case Regime::half:
        return "half";
    case Regime::above_half:
        return "above_half";
    }
    return "unknown";
}

RegimeCase regime_case(double gamma) {
    check_gamma(gamma);
    if (gamma == 0.5) {
        return {gamma, Regime::half, "log y"};
    }
    if (gamma < 0.5) {
        return {gamma, Regime::below_half, "y^((1-2g)/(g(1-g)))"};
    }
    return {gamma, Regime::above_half, "y^((1-2g)/(1-g))"};
}

double gamma_integral(double gamma, double y) {
    check_gamma(gamma);
    if (!(y > 1.0)) {
        throw std::domain_error("gamma_integral requires y > 1");
    }
    if (gamma == 0.5) {
        return std::log(y);
    }
    // antiderivative x^e / e with e = 1 - g/(1-g) = (1-2g)/(1-g)
    const double e = (1.0 - 2.0 * gamma) / (1.0 - gamma);
    const double ly = std::log(y);
    return (std::exp(e * ly / gamma) - std::exp(e * ly)) / e;
}

double gamma_asymptotic(double gamma, double y) {
    const RegimeCase rc = regime_case(gamma);
    const double ly = std::log(y);
    switch (rc.regime) {
    case Regime::half:
        return ly;
    case Regime::below_half:
        return std::exp(ly * (1.0 - 2.0 * gamma) / (gamma * (1.0 - gamma)));
    case Regime::above_half:
        return std::exp(ly * (1.0 - 2.0 * gamma) / (1.0 - gamma));
    }
    return ly;
}

double branch_ratio(double gamma, double y) { return gamma_integral(gamma, y) / gamma_asymptotic(gamma, y); }

double moment_integral(const TailProfile& profile, double r, double s, double upper) {
    if (!(upper > 1.0)) {
        throw std::domain_error("moment_integral requires upper > 1");
    }
    auto integrand = [&](double x) {
        const double lp = std::max(std::log(x), 1.0);
        const double logs = s == 0.0 ? 1.0 : std::pow(lp, s);
        return std::pow(x, r - 1.0) * logs * abs_tail_prob(profile, x);
    };
    // kinks of the tail and of log^+
    std::vector<double> breaks{std::numbers::e};
    const double mu = std::fabs(profile.mu);
    switch (profile.family) {
    case Family::pareto_log:
        breaks.push_back(profile.x0 + mu);
        if (mu > 0.0 && profile.x0 > mu) {
            breaks.push_back(profile.x0 - mu);
        }
        break;
    case Family::rademacher:
    case Family::uniform_sym:
        breaks.push_back(1.0 + mu);
        if (mu > 1.0) {
            breaks.push_back(mu - 1.0);
        }
        break;
    case Family::gaussian:
        break;
    }
    return integrate_log_spaced(integrand, 1.0, upper, 1e-9, breaks).value;
}

IntegralGrowth integral_growth(const TailProfile& profile, double r, double s, std::vector<double> uppers,
                               const GrowthRule& rule) {
    if (uppers.size() < 3) {
        throw std::invalid_argument("integral_growth needs at least three uppers");
    }
    IntegralGrowth g;
    g.uppers = std::move(uppers);
    for (double u : g.uppers) {
        g.values.push_back(moment_integral(profile, r, s, u));
    }
    const std::size_t n = g.values.size();
    g.classification = classify_growth(g.values[n - 3], g.values[n - 2], g.values[n - 1], rule);
    return g;
}

EquivalenceReport equivalence_check(const TailProfile& profile, const CesaroOrder& order,
                                    const std::vector<std::size_t>& levels, const GrowthRule& rule,
                                    unsigned threads) {
    require_theorem_range(order.alpha(), order.beta());
    if (levels.empty()) {
        throw std::invalid_argument("equivalence_check needs at least one level");
    }
    EquivalenceReport rep;
    rep.profile = profile;
    rep.order = order;
    rep.requirement = classify_moment_case_2d(order.alpha(), order.beta()).complete;
    rep.predicted = moment_finite(profile, rep.requirement.r, rep.requirement.s);

    std::vector<std::size_t> sizes;
    for (std::size_t N : levels) {
        if (N < 16) {
            throw std::invalid_argument("equivalence_check levels must be >= 16");
        }
        for (std::size_t f : {std::size_t{1}, std::size_t{2}, std::size_t{4}}) {
            sizes.push_back(f * N);
        }
    }
    std::sort(sizes.begin(), sizes.end());
    sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
    std::vector<double> sums(sizes.size());
    parallel_for(sizes.size(), threads, [&](std::size_t i) {
        sums[i] = term_sum(profile, order.alpha(), order.beta(), sizes[i]);
    });
    std::map<std::size_t, double> by_size;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        by_size[sizes[i]] = sums[i];
    }
    for (std::size_t N : levels) {
        rep.series.push_back(make_series_growth(N, by_size[N], by_size[2 * N], by_size[4 * N], rule));
    }
    rep.sum_classification = rep.series.back().classification;
    rep.integral = integral_growth(profile, rep.requirement.r, rep.requirement.s, {1e2, 1e4, 1e6, 1e8}, rule);
    rep.concordant = rep.sum_classification != Observation::inconclusive &&
                     rep.sum_classification == rep.integral.classification;
    return rep;
}

}  // namespace cesaro
