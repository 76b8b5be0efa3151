#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cesaro/field.hpp"
#include "cesaro/mean.hpp"
#include "cesaro/weights.hpp"

namespace cesaro {

/// E|X|^r (log^+|X|)^s < infinity, labelled with the parameter regime.
struct MomentRequirement {
    double r = 1.0;
    double s = 0.0;
    std::string description;
};

struct MomentCase {
    MomentRequirement complete;
    MomentRequirement almost_sure;
};

/// Moment conditions for complete and almost sure (C, alpha, beta)
/// convergence of a field. Requires 0 < alpha <= beta <= 1.
MomentCase classify_moment_case_2d(double alpha, double beta);

/// Moment conditions for complete and almost sure (C, alpha) convergence of
/// a sequence. Requires 0 < alpha <= 1.
MomentCase classify_moment_case_1d(double alpha);

enum class Mode { in_probability, complete, almost_sure };
enum class Observation { consistent, divergent, inconclusive };

std::string_view to_string(Mode m);
std::string_view to_string(Observation o);
Mode parse_mode(std::string_view name);

/// Theory side: does the mode of convergence hold for this profile and order?
/// in_probability uses the Feller condition (every family here is symmetric,
/// so the centring condition holds); the other modes use the moment tables.
bool predict(const TailProfile& profile, const CesaroOrder& order, Mode mode);

// ---------------------------------------------------------------------------
// Weak law.

struct ProbabilityConfig {
    TailProfile profile;
    CesaroOrder order = CesaroOrder::two_dim(0.75, 0.75);
    std::vector<Checkpoint> checkpoints{{64, 64}, {256, 256}, {1024, 1024}};
    double eps = 0.1;
    std::size_t replicates = 400;
    std::uint64_t master_seed = 1;
    std::uint64_t stream = 0;
    TruncationMode truncation = TruncationMode::power_form;
    unsigned threads = 1;
};

struct ProbabilityPoint {
    Checkpoint at;
    double mu_mn = 0.0;
    double mean_ratio = 0.0;
    double exceedance = 0.0;       ///< fraction with |centred normalised statistic| > eps
    double statistic_mean = 0.0;   ///< mean of the centred normalised statistic
    double statistic_se = 0.0;     ///< its standard error
    double raw_exceedance = 0.0;   ///< fraction with |Cesaro mean - mu| > eps
};

struct ProbabilityResult {
    std::vector<ProbabilityPoint> points;
    bool decreasing = false;  ///< exceedance strictly decreasing along the checkpoints
};

/// Requires replicates >= 100 and eps > 0.
ProbabilityResult in_probability_test(const ProbabilityConfig& config);

// ---------------------------------------------------------------------------
// Almost sure convergence proxy.

struct TrajectoryConfig {
    TailProfile profile;
    CesaroOrder order = CesaroOrder::two_dim(0.75, 0.75);
    unsigned log2_extent = 11;  ///< field is 2^L x 2^L
    unsigned first_level = 1;
    std::size_t replicates = 20;
    double eps = 0.1;
    double consistent_fraction = 0.9;
    double divergent_fraction = 0.5;
    std::uint64_t master_seed = 1;
    std::uint64_t stream = 0;
    unsigned threads = 1;
};

struct TrajectoryResult {
    std::vector<unsigned> levels;
    /// tail_sup[r][i] = max |mean(m,n) - mu| over 2^levels[i] <= m, n < 2^L
    std::vector<std::vector<double>> tail_sup;
    std::vector<double> median_by_level;
    double last_level_exceedance = 0.0;
    bool median_nonincreasing = false;
    Observation verdict = Observation::inconclusive;
};

/// Requires at least three levels and 20 replicates.
TrajectoryResult trajectory_diagnostic(const TrajectoryConfig& config);

// ---------------------------------------------------------------------------
// Complete convergence: the analytic term sum
//   S(N) = sum_{m,n<=N} sum_{k<=m, l<=n} P(|X - mu| > m^a n^b k^{1-a} l^{1-b}).

/// Doubling-ratio rule. With increments d1 = S(2N) - S(N), d2 = S(4N) - S(2N):
/// convergent if d2 < increment_tol * S(4N) or d2 / d1 <= decay_ratio;
/// divergent if d2 / d1 >= flat_ratio; inconclusive in between.
struct GrowthRule {
    double increment_tol = 0.01;
    double decay_ratio = 0.8;
    double flat_ratio = 0.85;
};

/// Three-point growth classification of an increasing sequence of partial
/// sums or integrals.
Observation classify_growth(double s1, double s2, double s4, const GrowthRule& rule = {});

struct SeriesGrowth {
    std::size_t N = 0;
    double S_N = 0.0;
    double S_2N = 0.0;
    double S_4N = 0.0;
    double ratio = 0.0;         ///< (S_4N - S_2N) / (S_2N - S_N)
    double rel_increment = 0.0; ///< (S_4N - S_2N) / S_4N
    Observation classification = Observation::inconclusive;
};

/// Growth summary for S(N), S(2N), S(4N).
SeriesGrowth make_series_growth(std::size_t N, double s1, double s2, double s4, const GrowthRule& rule = {});

/// Exact pairwise evaluation. Inner sums are restricted by bisection on the
/// sorted (n, l) factors to the range where the tail is neither 1 nor
/// negligible. Throws std::length_error when the pair count exceeds `budget`.
double term_sum_exact(const TailProfile& profile, double alpha, double beta, std::size_t N,
                      double budget = 2e9);

/// Fast evaluation. pareto_log tails use suffix sums (q = 0) or log-binned
/// moments with a second order expansion of the log factor (q > 0); other
/// families fall back to term_sum_exact.
double term_sum(const TailProfile& profile, double alpha, double beta, std::size_t N);

/// S(N), S(2N), S(4N) and their classification. Requires N >= 16.
SeriesGrowth complete_convergence_sum(const TailProfile& profile, const CesaroOrder& order, std::size_t N,
                                      const GrowthRule& rule = {});

/// One-dimensional analogue: sum_{n<=N} sum_{k<=n} P(|X - mu| > n^a k^{1-a}).
double term_sum_1d(const TailProfile& profile, double alpha, std::size_t N);
SeriesGrowth complete_convergence_sum_1d(const TailProfile& profile, double alpha, std::size_t N,
                                         const GrowthRule& rule = {});

// ---------------------------------------------------------------------------
// Complete convergence: simulated event probabilities.

struct EventSumConfig {
    TailProfile profile;
    CesaroOrder order = CesaroOrder::two_dim(0.75, 0.75);
    std::size_t N = 32;
    double eps = 0.5;
    double mu_ref = 0.0;
    std::size_t replicates = 200;
    std::uint64_t master_seed = 1;
    std::uint64_t stream = 0;
    unsigned threads = 1;
};

struct EventSumResult {
    double sum = 0.0;
    double standard_error = 0.0;
    std::vector<std::size_t> levels;       ///< N' = N/4, N/2, N (those >= 1)
    std::vector<double> partial_sums;      ///< estimated sum over m, n <= N'
};

/// Estimates sum_{1<=m,n<=N} P(|mean(m,n) - mu_ref| > eps) by replicate
/// frequencies. Requires N <= 64.
EventSumResult empirical_complete_event_sum(const EventSumConfig& config);

}  // namespace cesaro
