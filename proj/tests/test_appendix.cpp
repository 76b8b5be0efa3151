#include <doctest.h>

#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

#include "cesaro/appendix.hpp"
#include "cesaro/quadrature.hpp"

using namespace cesaro;

namespace {

// Composite Simpson rule in t = log x for the integral of f(x) dx over [a, b].
double simpson_log(const std::function<double(double)>& f, double a, double b, int n = 200000) {
    const double ta = std::log(a);
    const double h = (std::log(b) - ta) / n;
    auto g = [&](double t) {
        const double x = std::exp(t);
        return f(x) * x;
    };
    double acc = g(ta) + g(std::log(b));
    for (int i = 1; i < n; ++i) {
        acc += (i % 2 ? 4.0 : 2.0) * g(ta + i * h);
    }
    return acc * h / 3.0;
}

}  // namespace

TEST_CASE("gamma integral against quadrature") {
    for (double g : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        for (double y : {2.0, 10.0, 1e3}) {
            const double e = -g / (1.0 - g);
            const double want = simpson_log([e](double x) { return std::pow(x, e); }, y, std::pow(y, 1.0 / g));
            CAPTURE(g);
            CAPTURE(y);
            CHECK(gamma_integral(g, y) == doctest::Approx(want).epsilon(1e-9));
        }
    }
    CHECK_THROWS_AS(gamma_integral(0.0, 10.0), std::domain_error);
    CHECK_THROWS_AS(gamma_integral(0.5, 1.0), std::domain_error);
}

TEST_CASE("regimes and branch ratios") {
    CHECK(regime_case(0.3).regime == Regime::below_half);
    CHECK(regime_case(0.5).regime == Regime::half);
    CHECK(regime_case(0.7).regime == Regime::above_half);
    CHECK(to_string(Regime::half) == "half");
    CHECK(branch_ratio(0.5, 1e6) == 1.0);
    // Limits 1/|e| with e = (1 - 2g)/(1 - g).
    for (double g : {0.1, 0.3, 0.7, 0.9}) {
        const double limit = (1.0 - g) / std::fabs(1.0 - 2.0 * g);
        CAPTURE(g);
        CHECK(branch_ratio(g, 1e12) == doctest::Approx(limit).epsilon(0.01));
    }
    CHECK_THROWS_AS(regime_case(1.0), std::domain_error);
}

TEST_CASE("moment integral against closed forms") {
    // pareto_log q = 0, x0 = e: P(|X| > x) = 1 below e and e^p x^{-p} above.
    for (auto [p, r] : {std::pair{3.0, 2.0}, {2.0, 2.0}, {2.5, 1.0}}) {
        const double U = 1e6;
        const double low = (std::pow(std::numbers::e, r) - 1.0) / r;
        const double high = p == r ? std::exp(p) * (std::log(U) - 1.0)
                                   : std::exp(p) * (std::pow(U, r - p) - std::exp(r - p)) / (r - p);
        CHECK(moment_integral(TailProfile::pareto_log(p), r, 0.0, U) == doctest::Approx(low + high).epsilon(1e-8));
    }
    // With log weights and a location shift: Simpson oracle on each smooth piece.
    const auto pr = TailProfile::pareto_log(2.0, 1.5, 0.5);
    auto f = [&](double x) { return x * std::pow(std::max(std::log(x), 1.0), 2.0) * abs_tail_prob(pr, x); };
    const double want = simpson_log(f, 1.0, 2.218281828459045) + simpson_log(f, 2.218281828459045, std::numbers::e) +
                        simpson_log(f, std::numbers::e, 3.218281828459045) + simpson_log(f, 3.218281828459045, 1e5);
    CHECK(moment_integral(pr, 2.0, 2.0, 1e5) == doctest::Approx(want).epsilon(1e-8));
    // Bounded law: the integral stops growing at the support edge.
    CHECK(moment_integral(TailProfile::rademacher(), 3.0, 1.0, 1e3) ==
          doctest::Approx(moment_integral(TailProfile::rademacher(), 3.0, 1.0, 1e6)));
    CHECK_THROWS_AS(moment_integral(pr, 2.0, 0.0, 1.0), std::domain_error);
}

TEST_CASE("integral growth") {
    CHECK(integral_growth(TailProfile::pareto_log(2.0, 5.0), 2.0, 1.0).classification == Observation::consistent);
    CHECK(integral_growth(TailProfile::pareto_log(2.0, 1.0), 2.0, 1.0).classification == Observation::divergent);
    CHECK(integral_growth(TailProfile::pareto_log(3.0), 2.0, 3.0).classification == Observation::consistent);
    CHECK(integral_growth(TailProfile::pareto_log(2.0), 2.5, 0.0).classification == Observation::divergent);
    CHECK_THROWS_AS(integral_growth(TailProfile::gaussian(), 2.0, 1.0, {10.0, 100.0}), std::invalid_argument);
}

TEST_CASE("equivalence report fields") {
    const auto o = CesaroOrder::two_dim(0.5, 0.8);
    const auto req = classify_moment_case_2d(0.5, 0.8).complete;
    const auto pr = TailProfile::pareto_log(req.r, req.s + 3.0);
    const EquivalenceReport rep = equivalence_check(pr, o, {16, 32}, {}, 2);
    CHECK(rep.requirement.r == 2.0);
    CHECK(rep.requirement.s == 2.0);
    CHECK(rep.predicted);
    REQUIRE(rep.series.size() == 2);
    CHECK(rep.series[0].S_2N == rep.series[1].S_N);
    CHECK(rep.series[1].S_N == doctest::Approx(term_sum(pr, 0.5, 0.8, 32)));
    CHECK(rep.integral.values.size() == 4);
    CHECK(rep.concordant == (rep.sum_classification == rep.integral.classification &&
                             rep.sum_classification != Observation::inconclusive));
    CHECK_THROWS_AS(equivalence_check(pr, o, {8}), std::invalid_argument);
}

TEST_CASE("log-spaced quadrature") {
    const auto res = integrate_log_spaced([](double x) { return 1.0 / (x * x); }, 1.0, 1e8);
    CHECK(res.value == doctest::Approx(1.0 - 1e-8).epsilon(1e-12));
    CHECK(res.error >= 0.0);
}
