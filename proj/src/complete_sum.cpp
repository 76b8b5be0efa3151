#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "cesaro/lab.hpp"
#include "cesaro/summation.hpp"

namespace cesaro {

namespace {

// Width of the log-space bins used by the fast pareto_log route.
constexpr double kLogBin = 0.01;

// {m^a k^{1-a} : 1 <= k <= m <= N}, sorted ascending.
std::vector<double> lattice_factors(double a, std::size_t N) {
    std::vector<double> out;
    out.reserve(N * (N + 1) / 2);
    for (std::size_t m = 1; m <= N; ++m) {
        const double lm = a * std::log(static_cast<double>(m));
        for (std::size_t k = 1; k <= m; ++k) {
            out.push_back(std::exp(lm + (1.0 - a) * std::log(static_cast<double>(k))));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Arguments above which the centred tail is identically zero or negligible.
double tail_cutoff(const TailProfile& pr) {
    switch (pr.family) {
    case Family::rademacher:
    case Family::uniform_sym:
        return 1.0;
    case Family::gaussian:
        return 40.0;
    case Family::pareto_log:
        break;
    }
    return std::numeric_limits<double>::infinity();
}

// Arguments at or below which the tail is exactly one.
double tail_one_limit(const TailProfile& pr) {
    switch (pr.family) {
    case Family::pareto_log:
        return pr.x0;
    case Family::rademacher:
        return std::nextafter(1.0, 0.0);
    case Family::uniform_sym:
    case Family::gaussian:
        break;
    }
    return 0.0;
}

struct Bin {
    std::size_t begin = 0;
    std::size_t end = 0;
    double center = 0.0;
    double m0 = 0.0;
    double m1 = 0.0;
    double m2 = 0.0;
};

double term_sum_pareto(const TailProfile& pr, const std::vector<double>& us, const std::vector<double>& vs) {
    const std::size_t nv = vs.size();
    std::vector<double> logv(nv);
    std::vector<double> wv(nv);
    for (std::size_t j = 0; j < nv; ++j) {
        logv[j] = std::log(vs[j]);
        wv[j] = std::exp(-pr.p * logv[j]);
    }
    const double t0 = std::log(pr.x0);
    CompensatedSum total;

    if (pr.q == 0.0) {
        std::vector<double> suffix(nv + 1, 0.0);
        CompensatedSum acc;
        for (std::size_t j = nv; j-- > 0;) {
            acc.add(wv[j]);
            suffix[j] = acc.value();
        }
        for (double u : us) {
            const auto split = std::partition_point(vs.begin(), vs.end(), [&](double v) { return u * v <= pr.x0; });
            const std::size_t i1 = static_cast<std::size_t>(split - vs.begin());
            total.add(static_cast<double>(i1));
            total.add(std::pow(u / pr.x0, -pr.p) * suffix[i1]);
        }
        return total.value();
    }

    std::vector<Bin> bins;
    std::vector<std::size_t> bin_of(nv);
    for (std::size_t j = 0; j < nv;) {
        const double b = std::floor(logv[j] / kLogBin);
        Bin bin;
        bin.begin = j;
        bin.center = (b + 0.5) * kLogBin;
        CompensatedSum s0;
        CompensatedSum s1;
        CompensatedSum s2;
        while (j < nv && std::floor(logv[j] / kLogBin) == b) {
            const double d = logv[j] - bin.center;
            s0.add(wv[j]);
            s1.add(wv[j] * d);
            s2.add(wv[j] * d * d);
            bin_of[j] = bins.size();
            ++j;
        }
        bin.end = j;
        bin.m0 = s0.value();
        bin.m1 = s1.value();
        bin.m2 = s2.value();
        bins.push_back(bin);
    }

    const double q = pr.q;
    for (double u : us) {
        const auto split = std::partition_point(vs.begin(), vs.end(), [&](double v) { return u * v <= pr.x0; });
        const std::size_t i1 = static_cast<std::size_t>(split - vs.begin());
        total.add(static_cast<double>(i1));
        if (i1 == nv) {
            continue;
        }
        const double x = std::log(u);
        CompensatedSum part;
        const std::size_t b1 = bin_of[i1];
        for (std::size_t j = i1; j < bins[b1].end; ++j) {
            part.add(wv[j] * std::exp(-q * std::log((x + logv[j]) / t0)));
        }
        for (std::size_t b = b1 + 1; b < bins.size(); ++b) {
            const Bin& bin = bins[b];
            const double t = x + bin.center;
            const double g = std::exp(-q * std::log(t / t0));
            const double g1 = -q / t * g;
            const double g2 = q * (q + 1.0) / (t * t) * g;
            part.add(g * bin.m0 + g1 * bin.m1 + 0.5 * g2 * bin.m2);
        }
        total.add(std::pow(u / pr.x0, -pr.p) * part.value());
    }
    return total.value();
}

}  // namespace

double term_sum_exact(const TailProfile& profile, double alpha, double beta, std::size_t N, double budget) {
    const double pairs = std::pow(static_cast<double>(N) * static_cast<double>(N + 1) / 2.0, 2.0);
    if (pairs > budget) {
        throw std::length_error("exact term sum at N=" + std::to_string(N) + " needs " + std::to_string(pairs) +
                                " tail evaluations, above the budget of " + std::to_string(budget));
    }
    const std::vector<double> us = lattice_factors(alpha, N);
    const std::vector<double> vs = lattice_factors(beta, N);
    const double cutoff = tail_cutoff(profile);
    const double one_limit = tail_one_limit(profile);
    CompensatedSum total;
    for (double u : us) {
        const auto ones = std::partition_point(vs.begin(), vs.end(), [&](double v) { return u * v <= one_limit; });
        const auto stop = std::partition_point(ones, vs.end(), [&](double v) { return u * v < cutoff; });
        total.add(static_cast<double>(ones - vs.begin()));
        CompensatedSum part;
        for (auto it = ones; it != stop; ++it) {
            part.add(tail_prob(profile, u * *it));
        }
        total.merge(part);
    }
    return total.value();
}

double term_sum(const TailProfile& profile, double alpha, double beta, std::size_t N) {
    if (profile.family != Family::pareto_log) {
        return term_sum_exact(profile, alpha, beta, N, std::numeric_limits<double>::infinity());
    }
    return term_sum_pareto(profile, lattice_factors(alpha, N), lattice_factors(beta, N));
}

Observation classify_growth(double s1, double s2, double s4, const GrowthRule& rule) {
    const double d1 = s2 - s1;
    const double d2 = s4 - s2;
    if (!(s4 > 0.0) || d2 <= rule.increment_tol * s4) {
        return Observation::consistent;
    }
    const double ratio = d1 > 0.0 ? d2 / d1 : std::numeric_limits<double>::infinity();
    if (ratio <= rule.decay_ratio) {
        return Observation::consistent;
    }
    return ratio >= rule.flat_ratio ? Observation::divergent : Observation::inconclusive;
}

SeriesGrowth make_series_growth(std::size_t N, double s1, double s2, double s4, const GrowthRule& rule) {
    SeriesGrowth g;
    g.N = N;
    g.S_N = s1;
    g.S_2N = s2;
    g.S_4N = s4;
    const double d1 = s2 - s1;
    const double d2 = s4 - s2;
    g.ratio = d1 > 0.0 ? d2 / d1 : (d2 > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    g.rel_increment = s4 > 0.0 ? d2 / s4 : 0.0;
    g.classification = classify_growth(s1, s2, s4, rule);
    return g;
}

SeriesGrowth complete_convergence_sum(const TailProfile& profile, const CesaroOrder& order, std::size_t N,
                                      const GrowthRule& rule) {
    require_theorem_range(order.alpha(), order.beta());
    if (N < 16) {
        throw std::invalid_argument("complete_convergence_sum needs N >= 16");
    }
    if (N > 4096) {
        throw std::length_error("complete_convergence_sum at N=" + std::to_string(N) + " exceeds the cost budget");
    }
    const double a = order.alpha();
    const double b = order.beta();
    return make_series_growth(N, term_sum(profile, a, b, N), term_sum(profile, a, b, 2 * N), term_sum(profile, a, b, 4 * N),
                       rule);
}

double term_sum_1d(const TailProfile& profile, double alpha, std::size_t N) {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw std::domain_error("one-dimensional order must lie in (0, 1]");
    }
    CompensatedSum total;
    for (double u : lattice_factors(alpha, N)) {
        total.add(tail_prob(profile, u));
    }
    return total.value();
}

SeriesGrowth complete_convergence_sum_1d(const TailProfile& profile, double alpha, std::size_t N,
                                         const GrowthRule& rule) {
    if (N < 16) {
        throw std::invalid_argument("complete_convergence_sum_1d needs N >= 16");
    }
    return make_series_growth(N, term_sum_1d(profile, alpha, N), term_sum_1d(profile, alpha, 2 * N),
                       term_sum_1d(profile, alpha, 4 * N), rule);
}

}  // namespace cesaro
