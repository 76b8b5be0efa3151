#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cesaro/field.hpp"
#include "cesaro/weights.hpp"

namespace cesaro {

struct Checkpoint {
    std::size_t m = 0;
    std::size_t n = 0;

    friend auto operator<=>(const Checkpoint&, const Checkpoint&) = default;
};

/// (C, alpha, beta) means of one field realisation at a set of checkpoints.
struct MeanGrid {
    CesaroOrder order = CesaroOrder::one_dim(1.0);
    std::vector<Checkpoint> checkpoints;
    std::vector<double> values;
    double mu_ref = 0.0;
};

/// T_n = (1/A_n^alpha) sum_{k<=n} A_{n-k}^{alpha-1} x_k for every n, by direct
/// O(N^2) evaluation. alpha must lie in [0, 1]; alpha = 0 uses A^{-1}.
std::vector<double> cesaro_mean_1d(std::span<const double> xs, double alpha);

/// Dyadic checkpoints (2^i, 2^j) inside the extent, sorted.
std::vector<Checkpoint> dyadic_checkpoints(Extent extent);

/// Double weighted sum at one checkpoint by the direct double loop.
double cesaro_mean_2d_naive(const Field& field, const CesaroOrder& order, Checkpoint at);

/// Separable evaluation: weighted row sums over l, then the weighted sum over
/// k. O(m n) per checkpoint; checkpoints are evaluated independently.
MeanGrid cesaro_mean_2d(const Field& field, const CesaroOrder& order, std::span<const Checkpoint> checkpoints,
                        double mu_ref = 0.0, unsigned threads = 1);

/// Same, sampling the field from its spec. Throws std::out_of_range if a
/// checkpoint lies outside the extent.
MeanGrid cesaro_mean_2d(const FieldSpec& spec, const CesaroOrder& order, std::span<const Checkpoint> checkpoints,
                        unsigned threads = 1);

/// Means at every lattice point (m, n) of the field, through FFT convolution
/// of the coefficient kernels along both axes. Agrees with the separable
/// route to about 1e-12 of the scale of the summands.
Field cesaro_mean_lattice(const Field& field, const CesaroOrder& order, unsigned threads = 1);

enum class TruncationMode {
    /// Y = k^{a-1} l^{b-1} X 1{k^{a-1} l^{b-1} |X| <= m^a n^b}, k, l >= 1.
    power_form,
    /// Y = A_{m-k}^{a-1} A_{n-l}^{b-1} X 1{|X| <= A_m^a A_n^b}, k, l >= 0.
    coefficient_form,
};

struct TruncatedStats {
    std::size_t m = 0;
    std::size_t n = 0;
    double scale = 0.0;                ///< m^a n^b, or A_m^a A_n^b in coefficient form.
    double raw_sum = 0.0;              ///< untruncated weighted sum
    double s_prime = 0.0;              ///< truncated weighted sum S'_{m,n}
    double mu_mn = 0.0;                ///< E S'_{m,n}
    double centered_normalized = 0.0;  ///< (raw_sum - mu_mn) / scale
    double mean_ratio = 0.0;           ///< mu_mn / scale
};

TruncatedStats truncated_stats(const Field& field, const TailProfile& profile, const CesaroOrder& order,
                               Checkpoint at, TruncationMode mode = TruncationMode::power_form);

/// Same, with mu_mn supplied by the caller (it depends only on the profile,
/// so replicate loops compute it once).
TruncatedStats truncated_stats(const Field& field, const CesaroOrder& order, Checkpoint at, TruncationMode mode,
                               double mu_mn);

TruncatedStats truncated_stats(const FieldSpec& spec, const CesaroOrder& order, Checkpoint at,
                               TruncationMode mode = TruncationMode::power_form);

/// mu_mn alone; depends only on the profile.
double truncated_expectation(const TailProfile& profile, const CesaroOrder& order, Checkpoint at,
                             TruncationMode mode = TruncationMode::power_form);

}  // namespace cesaro
