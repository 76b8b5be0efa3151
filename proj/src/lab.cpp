#include "cesaro/lab.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "cesaro/parallel.hpp"

namespace cesaro {

namespace {

constexpr double kCaseTol = 1e-12;

bool near(double a, double b) { return std::fabs(a - b) <= kCaseTol; }

double median(std::vector<double> v) {
    if (v.empty()) {
        return 0.0;
    }
    std::sort(v.begin(), v.end());
    const std::size_t h = v.size() / 2;
    return v.size() % 2 == 1 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

}  // namespace

MomentCase classify_moment_case_2d(double alpha, double beta) {
    require_theorem_range(alpha, beta);
    MomentCase out;
    const bool equal = near(alpha, beta);
    const bool half = near(alpha, 0.5);
    if (alpha < 0.5 && !half) {
        if (equal) {
            out.complete = {1.0 / alpha, 1.0, "0<alpha=beta<1/2"};
        } else {
            out.complete = {1.0 / alpha, 0.0, "0<alpha<1/2, alpha<beta<=1"};
        }
    } else if (half) {
        if (equal) {
            out.complete = {2.0, 3.0, "alpha=beta=1/2"};
        } else {
            out.complete = {2.0, 2.0, "alpha=1/2<beta<=1"};
        }
    } else {
        out.complete = {2.0, 1.0, "1/2<alpha<=beta<=1"};
    }
    if (equal) {
        out.almost_sure = {1.0 / alpha, 1.0, "0<alpha=beta<=1"};
    } else {
        out.almost_sure = {1.0 / alpha, 0.0, "0<alpha<beta<=1"};
    }
    return out;
}

MomentCase classify_moment_case_1d(double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw std::domain_error("one-dimensional order must lie in (0, 1]");
    }
    MomentCase out;
    if (near(alpha, 0.5)) {
        out.complete = {2.0, 1.0, "alpha=1/2"};
    } else if (alpha < 0.5) {
        out.complete = {1.0 / alpha, 0.0, "0<alpha<1/2"};
    } else {
        out.complete = {2.0, 0.0, "1/2<alpha<=1"};
    }
    out.almost_sure = {1.0 / alpha, 0.0, "0<alpha<=1"};
    return out;
}

std::string_view to_string(Mode m) {
    switch (m) {
    case Mode::in_probability:
        return "prob";
    case Mode::complete:
        return "complete";
    case Mode::almost_sure:
        return "as";
    }
    return "unknown";
}

std::string_view to_string(Observation o) {
    switch (o) {
    case Observation::consistent:
        return "consistent";
    case Observation::divergent:
        return "divergent";
    case Observation::inconclusive:
        return "inconclusive";
    }
    return "unknown";
}

Mode parse_mode(std::string_view name) {
    if (name == "prob" || name == "in_probability") {
        return Mode::in_probability;
    }
    if (name == "complete") {
        return Mode::complete;
    }
    if (name == "as" || name == "almost_sure") {
        return Mode::almost_sure;
    }
    throw std::invalid_argument("unknown mode '" + std::string(name) + "'");
}

bool predict(const TailProfile& profile, const CesaroOrder& order, Mode mode) {
    switch (mode) {
    case Mode::in_probability:
        require_theorem_range(order.alpha(), order.beta());
        return feller_check(profile);
    case Mode::complete: {
        const auto req = classify_moment_case_2d(order.alpha(), order.beta()).complete;
        return moment_finite(profile, req.r, req.s);
    }
    case Mode::almost_sure: {
        const auto req = classify_moment_case_2d(order.alpha(), order.beta()).almost_sure;
        return moment_finite(profile, req.r, req.s);
    }
    }
    return false;
}

ProbabilityResult in_probability_test(const ProbabilityConfig& cfg) {
    if (cfg.replicates < 100) {
        throw std::invalid_argument("in_probability_test needs at least 100 replicates");
    }
    if (!(cfg.eps > 0.0)) {
        throw std::invalid_argument("in_probability_test needs eps > 0");
    }
    if (cfg.checkpoints.empty()) {
        throw std::invalid_argument("in_probability_test needs at least one checkpoint");
    }
    require_theorem_range(cfg.order.alpha(), cfg.order.beta());
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> mu_mn;
    for (const auto& c : cfg.checkpoints) {
        rows = std::max(rows, c.m + 1);
        cols = std::max(cols, c.n + 1);
        mu_mn.push_back(truncated_expectation(cfg.profile, cfg.order, c, cfg.truncation));
    }
    const std::size_t npts = cfg.checkpoints.size();
    // per replicate: statistic and raw mean for every checkpoint
    std::vector<std::vector<double>> stat(cfg.replicates, std::vector<double>(npts));
    std::vector<std::vector<double>> raw(cfg.replicates, std::vector<double>(npts));
    parallel_for(cfg.replicates, cfg.threads, [&](std::size_t r) {
        const FieldSpec spec{cfg.profile, derive_seed(cfg.master_seed, cfg.stream, r), {rows, cols}};
        const Field field = materialize(spec);
        for (std::size_t i = 0; i < npts; ++i) {
            const Checkpoint at = cfg.checkpoints[i];
            stat[r][i] = truncated_stats(field, cfg.order, at, cfg.truncation, mu_mn[i]).centered_normalized;
            const Checkpoint one[] = {at};
            raw[r][i] = cesaro_mean_2d(field, cfg.order, one, cfg.profile.mu).values[0];
        }
    });

    ProbabilityResult out;
    const double reps = static_cast<double>(cfg.replicates);
    for (std::size_t i = 0; i < npts; ++i) {
        ProbabilityPoint pt;
        pt.at = cfg.checkpoints[i];
        pt.mu_mn = mu_mn[i];
        const Checkpoint at = cfg.checkpoints[i];
        const double scale = cfg.truncation == TruncationMode::power_form
                                 ? std::pow(static_cast<double>(at.m), cfg.order.alpha()) *
                                       std::pow(static_cast<double>(at.n), cfg.order.beta())
                                 : weight(cfg.order.alpha(), at.m) * weight(cfg.order.beta(), at.n);
        pt.mean_ratio = scale > 0.0 ? mu_mn[i] / scale : 0.0;
        std::size_t exceed = 0;
        std::size_t raw_exceed = 0;
        double sum = 0.0;
        double sumsq = 0.0;
        for (std::size_t r = 0; r < cfg.replicates; ++r) {
            const double s = stat[r][i];
            exceed += std::fabs(s) > cfg.eps ? 1 : 0;
            raw_exceed += std::fabs(raw[r][i] - cfg.profile.mu) > cfg.eps ? 1 : 0;
            sum += s;
            sumsq += s * s;
        }
        pt.exceedance = static_cast<double>(exceed) / reps;
        pt.raw_exceedance = static_cast<double>(raw_exceed) / reps;
        pt.statistic_mean = sum / reps;
        const double var = std::max(0.0, (sumsq - reps * pt.statistic_mean * pt.statistic_mean) / (reps - 1.0));
        pt.statistic_se = std::sqrt(var / reps);
        out.points.push_back(pt);
    }
    out.decreasing = true;
    for (std::size_t i = 1; i < out.points.size(); ++i) {
        if (!(out.points[i].exceedance < out.points[i - 1].exceedance)) {
            out.decreasing = false;
        }
    }
    return out;
}

TrajectoryResult trajectory_diagnostic(const TrajectoryConfig& cfg) {
    require_theorem_range(cfg.order.alpha(), cfg.order.beta());
    if (cfg.log2_extent < cfg.first_level + 3) {
        throw std::invalid_argument("trajectory_diagnostic needs at least three dyadic levels");
    }
    if (cfg.replicates < 20) {
        throw std::invalid_argument("trajectory_diagnostic needs at least 20 replicates");
    }
    if (cfg.log2_extent > 14) {
        throw std::length_error("trajectory_diagnostic extent above 2^14 x 2^14 exceeds the memory budget");
    }
    const unsigned L = cfg.log2_extent;
    const std::size_t side = std::size_t{1} << L;
    TrajectoryResult out;
    for (unsigned i = cfg.first_level; i < L; ++i) {
        out.levels.push_back(i);
    }
    out.tail_sup.assign(cfg.replicates, std::vector<double>(out.levels.size()));

    parallel_for(cfg.replicates, cfg.threads, [&](std::size_t r) {
        const FieldSpec spec{cfg.profile, derive_seed(cfg.master_seed, cfg.stream, r), {side, side}};
        const Field means = cesaro_mean_lattice(materialize(spec), cfg.order);
        // max deviation over points whose smaller coordinate has dyadic level j
        std::vector<double> level_max(L, 0.0);
        for (std::size_t m = 1; m < side; ++m) {
            const double* row = means.row(m);
            for (std::size_t n = 1; n < side; ++n) {
                const std::size_t lo = std::min(m, n);
                const unsigned j = static_cast<unsigned>(std::bit_width(lo) - 1);
                const double dev = std::fabs(row[n] - cfg.profile.mu);
                if (!(dev <= level_max[j])) {
                    level_max[j] = std::isnan(dev) ? std::numeric_limits<double>::infinity() : dev;
                }
            }
        }
        double running = 0.0;
        for (std::size_t idx = out.levels.size(); idx-- > 0;) {
            running = std::max(running, level_max[out.levels[idx]]);
            out.tail_sup[r][idx] = running;
        }
    });

    for (std::size_t i = 0; i < out.levels.size(); ++i) {
        std::vector<double> col;
        for (const auto& rep : out.tail_sup) {
            col.push_back(rep[i]);
        }
        out.median_by_level.push_back(median(col));
    }
    out.median_nonincreasing = true;
    for (std::size_t i = 1; i < out.median_by_level.size(); ++i) {
        if (out.median_by_level[i] > out.median_by_level[i - 1]) {
            out.median_nonincreasing = false;
        }
    }
    std::size_t exceed = 0;
    for (const auto& rep : out.tail_sup) {
        exceed += rep.back() >= cfg.eps ? 1 : 0;
    }
    out.last_level_exceedance = static_cast<double>(exceed) / static_cast<double>(cfg.replicates);
    if (1.0 - out.last_level_exceedance >= cfg.consistent_fraction && out.median_nonincreasing) {
        out.verdict = Observation::consistent;
    } else if (out.last_level_exceedance >= cfg.divergent_fraction) {
        out.verdict = Observation::divergent;
    } else {
        out.verdict = Observation::inconclusive;
    }
    return out;
}

EventSumResult empirical_complete_event_sum(const EventSumConfig& cfg) {
    require_theorem_range(cfg.order.alpha(), cfg.order.beta());
    if (cfg.N == 0 || cfg.N > 64) {
        throw std::invalid_argument("empirical_complete_event_sum is limited to 1 <= N <= 64");
    }
    if (cfg.replicates == 0) {
        throw std::invalid_argument("empirical_complete_event_sum needs replicates");
    }
    const std::size_t side = cfg.N + 1;
    std::vector<std::vector<unsigned char>> hit(cfg.replicates, std::vector<unsigned char>(side * side, 0));
    parallel_for(cfg.replicates, cfg.threads, [&](std::size_t r) {
        const FieldSpec spec{cfg.profile, derive_seed(cfg.master_seed, cfg.stream, r), {side, side}};
        const Field means = cesaro_mean_lattice(materialize(spec), cfg.order);
        for (std::size_t m = 1; m < side; ++m) {
            for (std::size_t n = 1; n < side; ++n) {
                hit[r][m * side + n] = std::fabs(means(m, n) - cfg.mu_ref) > cfg.eps ? 1 : 0;
            }
        }
    });
    EventSumResult out;
    for (std::size_t lvl : {cfg.N / 4, cfg.N / 2, cfg.N}) {
        if (lvl >= 1 && (out.levels.empty() || out.levels.back() != lvl)) {
            out.levels.push_back(lvl);
        }
    }
    const double reps = static_cast<double>(cfg.replicates);
    std::vector<double> freq(side * side, 0.0);
    double se = 0.0;
    for (std::size_t m = 1; m < side; ++m) {
        for (std::size_t n = 1; n < side; ++n) {
            std::size_t c = 0;
            for (std::size_t r = 0; r < cfg.replicates; ++r) {
                c += hit[r][m * side + n];
            }
            const double p = static_cast<double>(c) / reps;
            freq[m * side + n] = p;
            se += std::sqrt(p * (1.0 - p) / reps);
        }
    }
    for (std::size_t lvl : out.levels) {
        double s = 0.0;
        for (std::size_t m = 1; m <= lvl; ++m) {
            for (std::size_t n = 1; n <= lvl; ++n) {
                s += freq[m * side + n];
            }
        }
        out.partial_sums.push_back(s);
    }
    out.sum = out.partial_sums.empty() ? 0.0 : out.partial_sums.back();
    out.standard_error = se;
    return out;
}

}  // namespace cesaro
