#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "cesaro/field.hpp"
#include "cesaro/mean.hpp"

using namespace cesaro;

namespace {

// A_k^a for k = 0..n by the product recurrence in long double.
std::vector<long double> coeffs(double a, std::size_t n) {
    std::vector<long double> c(n + 1);
    c[0] = 1.0L;
    for (std::size_t k = 1; k <= n; ++k) {
        c[k] = c[k - 1] * (static_cast<long double>(a) + k) / k;
    }
    return c;
}

double oracle_mean_1d(const std::vector<double>& xs, double a, std::size_t n) {
    const auto lag = coeffs(a - 1.0, n);
    const auto norm = coeffs(a, n);
    long double s = 0.0L;
    for (std::size_t k = 0; k <= n; ++k) {
        s += lag[n - k] * xs[k];
    }
    return static_cast<double>(s / norm[n]);
}

double oracle_mean_2d(const Field& f, double a, double b, Checkpoint at) {
    const auto la = coeffs(a - 1.0, at.m);
    const auto lb = coeffs(b - 1.0, at.n);
    long double s = 0.0L;
    for (std::size_t k = 0; k <= at.m; ++k) {
        for (std::size_t l = 0; l <= at.n; ++l) {
            s += la[at.m - k] * lb[at.n - l] * f(k, l);
        }
    }
    return static_cast<double>(s / (coeffs(a, at.m)[at.m] * coeffs(b, at.n)[at.n]));
}

std::vector<CesaroOrder> orders() {
    std::vector<CesaroOrder> out;
    for (auto [a, b] : {std::pair{0.3, 0.7}, {0.3, 0.3}, {0.5, 0.5}, {0.5, 0.8}, {0.7, 0.9}, {0.4, 0.8},
                        {0.6, 0.6}, {0.75, 0.75}, {1.0, 1.0}}) {
        out.push_back(CesaroOrder::two_dim(a, b));
    }
    return out;
}

Field sampled(const TailProfile& pr, std::uint64_t seed, std::size_t rows, std::size_t cols) {
    return materialize(FieldSpec{pr, seed, {rows, cols}});
}

}  // namespace

TEST_CASE("one-dimensional means") {
    const Field f = sampled(TailProfile::gaussian(0.3), 1, 1, 1000);
    const std::vector<double> xs(f.data().begin(), f.data().end());

    const auto raw = cesaro_mean_1d(xs, 0.0);
    for (std::size_t n = 0; n < xs.size(); ++n) {
        CHECK(std::fabs(raw[n] - xs[n]) <= 1e-12 * std::max(1.0, std::fabs(xs[n])));
    }
    const auto arith = cesaro_mean_1d(xs, 1.0);
    long double s = 0.0L;
    for (std::size_t n = 0; n < xs.size(); ++n) {
        s += xs[n];
        CHECK(std::fabs(arith[n] - static_cast<double>(s / (n + 1))) <= 1e-12);
    }
    for (double a : {0.25, 0.5, 0.9}) {
        const auto m = cesaro_mean_1d(xs, a);
        for (std::size_t n : {0u, 1u, 17u, 512u, 999u}) {
            CHECK(m[n] == doctest::Approx(oracle_mean_1d(xs, a, n)).epsilon(1e-12));
        }
    }
    CHECK_THROWS_AS(cesaro_mean_1d(xs, 1.5), std::domain_error);
    CHECK_THROWS_AS(cesaro_mean_1d(xs, -0.5), std::domain_error);
}

TEST_CASE("two-dimensional arithmetic means") {
    const Field f = sampled(TailProfile::uniform_sym(), 3, 1000, 1000);
    const auto order = CesaroOrder::two_dim(1.0, 1.0);
    const std::vector<Checkpoint> cps{{0, 0}, {1, 999}, {999, 1}, {499, 700}, {999, 999}};
    const MeanGrid g = cesaro_mean_2d(f, order, cps);
    for (std::size_t i = 0; i < cps.size(); ++i) {
        long double s = 0.0L;
        for (std::size_t k = 0; k <= cps[i].m; ++k) {
            for (std::size_t l = 0; l <= cps[i].n; ++l) {
                s += f(k, l);
            }
        }
        const double want = static_cast<double>(s / ((cps[i].m + 1.0L) * (cps[i].n + 1.0L)));
        CHECK(std::fabs(g.values[i] - want) <= 1e-12);
    }
}

TEST_CASE("naive, separable and lattice means agree") {
    const Field f = sampled(TailProfile::pareto_log(2.5), 8, 33, 33);
    for (const auto& o : orders()) {
        const Field lattice = cesaro_mean_lattice(f, o);
        std::vector<Checkpoint> all;
        for (std::size_t m = 0; m <= 32; m += 4) {
            for (std::size_t n = 0; n <= 32; n += 4) {
                all.push_back({m, n});
            }
        }
        const MeanGrid g = cesaro_mean_2d(f, o, all);
        for (std::size_t i = 0; i < all.size(); ++i) {
            const double want = oracle_mean_2d(f, o.alpha(), o.beta(), all[i]);
            const double tol = 1e-9 * std::max(1.0, std::fabs(want));
            CAPTURE(o.alpha());
            CAPTURE(o.beta());
            CAPTURE(all[i].m);
            CAPTURE(all[i].n);
            CHECK(std::fabs(g.values[i] - want) <= tol);
            CHECK(std::fabs(cesaro_mean_2d_naive(f, o, all[i]) - want) <= tol);
            CHECK(std::fabs(lattice(all[i].m, all[i].n) - want) <= tol);
        }
    }
}

TEST_CASE("means are linear, fix constants and shift by constants") {
    const Field x = sampled(TailProfile::gaussian(), 1, 65, 65);
    const Field y = sampled(TailProfile::rademacher(), 2, 65, 65);
    Field combo(65, 65);
    Field constant(65, 65, -2.5);
    Field shifted(65, 65);
    for (std::size_t i = 0; i < combo.data().size(); ++i) {
        combo.data()[i] = 2.0 * x.data()[i] - 3.0 * y.data()[i];
        shifted.data()[i] = x.data()[i] + 7.0;
    }
    const auto o = CesaroOrder::two_dim(0.4, 0.8);
    const auto cps = dyadic_checkpoints({65, 65});
    const auto gx = cesaro_mean_2d(x, o, cps).values;
    const auto gy = cesaro_mean_2d(y, o, cps).values;
    const auto gc = cesaro_mean_2d(combo, o, cps).values;
    const auto gk = cesaro_mean_2d(constant, o, cps).values;
    const auto gs = cesaro_mean_2d(shifted, o, cps).values;
    const Field lk = cesaro_mean_lattice(constant, o);
    for (std::size_t i = 0; i < cps.size(); ++i) {
        CHECK(gc[i] == doctest::Approx(2.0 * gx[i] - 3.0 * gy[i]).epsilon(1e-12));
        CHECK(std::fabs(gk[i] + 2.5) <= 1e-12);
        CHECK(std::fabs(gs[i] - gx[i] - 7.0) <= 1e-12);
        CHECK(std::fabs(lk(cps[i].m, cps[i].n) + 2.5) <= 1e-11);
    }
}

TEST_CASE("dyadic checkpoints and FieldSpec overload") {
    const auto cps = dyadic_checkpoints({9, 5});
    CHECK(cps.size() == 4 * 3);
    CHECK(cps.front() == Checkpoint{1, 1});
    CHECK(cps.back() == Checkpoint{8, 4});
    const FieldSpec spec{TailProfile::gaussian(1.0), 4, {9, 5}};
    const MeanGrid g = cesaro_mean_2d(spec, CesaroOrder::two_dim(0.5, 0.5), cps);
    CHECK(g.mu_ref == 1.0);
    const Field f = materialize(spec);
    CHECK(g.values.back() == doctest::Approx(oracle_mean_2d(f, 0.5, 0.5, {8, 4})).epsilon(1e-12));
    const std::vector<Checkpoint> outside{{9, 1}};
    CHECK_THROWS_AS(cesaro_mean_2d(spec, CesaroOrder::two_dim(0.5, 0.5), outside), std::out_of_range);
}

TEST_CASE("truncated statistics") {
    const auto pr = TailProfile::pareto_log(1.5, 0.0, 0.0);
    const Field f = sampled(pr, 12, 33, 33);
    const auto o = CesaroOrder::two_dim(0.6, 0.9);
    const Checkpoint at{32, 16};
    const TruncatedStats st = truncated_stats(f, pr, o, at);
    const double scale = std::pow(32.0, 0.6) * std::pow(16.0, 0.9);
    CHECK(st.scale == doctest::Approx(scale).epsilon(1e-14));
    long double raw = 0.0L;
    long double trunc = 0.0L;
    for (std::size_t k = 1; k <= 32; ++k) {
        for (std::size_t l = 1; l <= 16; ++l) {
            const double y = std::pow(k, -0.4) * std::pow(l, -0.1) * f(k, l);
            raw += y;
            trunc += std::fabs(y) <= scale ? y : 0.0;
        }
    }
    CHECK(st.raw_sum == doctest::Approx(static_cast<double>(raw)).epsilon(1e-12));
    CHECK(st.s_prime == doctest::Approx(static_cast<double>(trunc)).epsilon(1e-12));
    CHECK(st.mu_mn == 0.0);
    CHECK(st.centered_normalized == doctest::Approx(st.raw_sum / scale).epsilon(1e-14));

    // Coefficient form: the untruncated sum is A_m^a A_n^b times the mean.
    const TruncatedStats cf = truncated_stats(f, pr, o, at, TruncationMode::coefficient_form);
    const double mean = cesaro_mean_2d_naive(f, o, at);
    CHECK(cf.raw_sum / cf.scale == doctest::Approx(mean).epsilon(1e-11));

    // A shifted law: mu_mn from the closed form against direct summation.
    const auto shifted = TailProfile::pareto_log(1.5, 0.0, 0.75);
    const double mu_mn = truncated_expectation(shifted, o, {4, 4});
    long double want = 0.0L;
    const double s4 = std::pow(4.0, 0.6) * std::pow(4.0, 0.9);
    for (int k = 1; k <= 4; ++k) {
        for (int l = 1; l <= 4; ++l) {
            const double w = std::pow(k, -0.4) * std::pow(l, -0.1);
            want += w * truncated_mean_expect(shifted, s4 / w);
        }
    }
    CHECK(mu_mn == doctest::Approx(static_cast<double>(want)).epsilon(1e-13));
    CHECK(truncated_expectation(pr, o, {64, 64}) == 0.0);
    CHECK_THROWS_AS(truncated_stats(f, pr, o, {33, 1}), std::out_of_range);
}
