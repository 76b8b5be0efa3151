#include "cesaro/mean.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "cesaro/parallel.hpp"
#include "cesaro/summation.hpp"

namespace cesaro {

namespace {

void check_checkpoint(const Field& field, Checkpoint at) {
    if (at.m >= field.rows() || at.n >= field.cols()) {
        throw std::out_of_range("checkpoint (" + std::to_string(at.m) + ", " + std::to_string(at.n) +
                                ") outside a " + std::to_string(field.rows()) + "x" +
                                std::to_string(field.cols()) + " field");
    }
}

// exp(log A_j^{order-1} - log A_top^{order}) for j = 0..top.
std::vector<double> normalised_kernel(const WeightTable& lag, const WeightTable& norm, std::size_t top) {
    const double log_norm = norm.log_at(top);
    std::vector<double> w(top + 1);
    for (std::size_t j = 0; j <= top; ++j) {
        w[j] = std::exp(lag.log_at(j) - log_norm);
    }
    return w;
}

}  // namespace

std::vector<double> cesaro_mean_1d(std::span<const double> xs, double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw std::domain_error("cesaro_mean_1d requires alpha in [0, 1]");
    }
    if (xs.empty()) {
        return {};
    }
    const std::size_t top = xs.size() - 1;
    const WeightTable lag = weight_row(alpha - 1.0, top);
    const WeightTable norm = weight_row(alpha, top);
    std::vector<double> out(xs.size());
    for (std::size_t n = 0; n <= top; ++n) {
        const double log_norm = norm.log_at(n);
        CompensatedSum acc;
        for (std::size_t k = 0; k <= n; ++k) {
            acc.add(std::exp(lag.log_at(n - k) - log_norm) * xs[k]);
        }
        out[n] = acc.value();
    }
    return out;
}

std::vector<Checkpoint> dyadic_checkpoints(Extent extent) {
    std::vector<Checkpoint> out;
    for (std::size_t m = 1; m < extent.rows; m *= 2) {
        for (std::size_t n = 1; n < extent.cols; n *= 2) {
            out.push_back({m, n});
        }
    }
    return out;
}

double cesaro_mean_2d_naive(const Field& field, const CesaroOrder& order, Checkpoint at) {
    check_checkpoint(field, at);
    const double a = order.alpha();
    const double b = order.beta();
    const double log_norm = log_weight(a, at.m) + log_weight(b, at.n);
    CompensatedSum acc;
    for (std::size_t k = 0; k <= at.m; ++k) {
        const double lk = log_weight(a - 1.0, at.m - k);
        for (std::size_t l = 0; l <= at.n; ++l) {
            const double w = std::exp(lk + log_weight(b - 1.0, at.n - l) - log_norm);
            acc.add(w * field(k, l));
        }
    }
    return acc.value();
}

MeanGrid cesaro_mean_2d(const Field& field, const CesaroOrder& order, std::span<const Checkpoint> checkpoints,
                        double mu_ref, unsigned threads) {
    require_theorem_range(order.alpha(), order.beta());
    std::size_t max_m = 0;
    std::size_t max_n = 0;
    for (const auto& c : checkpoints) {
        check_checkpoint(field, c);
        max_m = std::max(max_m, c.m);
        max_n = std::max(max_n, c.n);
    }
    const WeightTable lag_a = weight_row(order.alpha() - 1.0, max_m);
    const WeightTable norm_a = weight_row(order.alpha(), max_m);
    const WeightTable lag_b = weight_row(order.beta() - 1.0, max_n);
    const WeightTable norm_b = weight_row(order.beta(), max_n);

    MeanGrid grid{order, {checkpoints.begin(), checkpoints.end()}, std::vector<double>(checkpoints.size()), mu_ref};
    parallel_for(checkpoints.size(), threads, [&](std::size_t i) {
        const Checkpoint at = checkpoints[i];
        const std::vector<double> wk = normalised_kernel(lag_a, norm_a, at.m);
        const std::vector<double> wl = normalised_kernel(lag_b, norm_b, at.n);
        CompensatedSum outer;
        for (std::size_t k = 0; k <= at.m; ++k) {
            const double* row = field.row(k);
            CompensatedSum inner;
            for (std::size_t l = 0; l <= at.n; ++l) {
                inner.add(wl[at.n - l] * row[l]);
            }
            outer.add(wk[at.m - k] * inner.value());
        }
        grid.values[i] = outer.value();
    });
    return grid;
}

MeanGrid cesaro_mean_2d(const FieldSpec& spec, const CesaroOrder& order, std::span<const Checkpoint> checkpoints,
                        unsigned threads) {
    std::size_t rows = 0;
    std::size_t cols = 0;
    for (const auto& c : checkpoints) {
        if (c.m >= spec.extent.rows || c.n >= spec.extent.cols) {
            throw std::out_of_range("checkpoint (" + std::to_string(c.m) + ", " + std::to_string(c.n) +
                                    ") outside the field extent");
        }
        rows = std::max(rows, c.m + 1);
        cols = std::max(cols, c.n + 1);
    }
    const Field field = materialize(spec, rows, cols, threads);
    return cesaro_mean_2d(field, order, checkpoints, spec.profile.mu, threads);
}

double truncated_expectation(const TailProfile& profile, const CesaroOrder& order, Checkpoint at,
                             TruncationMode mode) {
    require_theorem_range(order.alpha(), order.beta());
    if (profile.mu == 0.0) {
        return 0.0;
    }
    const double a = order.alpha();
    const double b = order.beta();
    if (mode == TruncationMode::coefficient_form) {
        // sum_{k,l} A_{m-k}^{a-1} A_{n-l}^{b-1} = A_m^a A_n^b
        const double scale = weight(a, at.m) * weight(b, at.n);
        return scale * truncated_mean_expect(profile, scale);
    }
    if (at.m == 0 || at.n == 0) {
        return 0.0;
    }
    const double scale = std::pow(static_cast<double>(at.m), a) * std::pow(static_cast<double>(at.n), b);
    CompensatedSum acc;
    for (std::size_t k = 1; k <= at.m; ++k) {
        const double wk = std::pow(static_cast<double>(k), a - 1.0);
        for (std::size_t l = 1; l <= at.n; ++l) {
            const double w = wk * std::pow(static_cast<double>(l), b - 1.0);
            acc.add(w * truncated_mean_expect(profile, scale / w));
        }
    }
    return acc.value();
}

TruncatedStats truncated_stats(const Field& field, const CesaroOrder& order, Checkpoint at, TruncationMode mode,
                               double mu_mn) {
    require_theorem_range(order.alpha(), order.beta());
    check_checkpoint(field, at);
    const double a = order.alpha();
    const double b = order.beta();
    TruncatedStats st;
    st.m = at.m;
    st.n = at.n;
    CompensatedSum raw;
    CompensatedSum trunc;
    if (mode == TruncationMode::power_form) {
        st.scale = std::pow(static_cast<double>(at.m), a) * std::pow(static_cast<double>(at.n), b);
        std::vector<double> wl(at.n + 1, 0.0);
        for (std::size_t l = 1; l <= at.n; ++l) {
            wl[l] = std::pow(static_cast<double>(l), b - 1.0);
        }
        for (std::size_t k = 1; k <= at.m; ++k) {
            const double wk = std::pow(static_cast<double>(k), a - 1.0);
            const double* row = field.row(k);
            for (std::size_t l = 1; l <= at.n; ++l) {
                const double y = wk * wl[l] * row[l];
                raw.add(y);
                if (std::fabs(y) <= st.scale) {
                    trunc.add(y);
                }
            }
        }
    } else {
        const WeightTable lag_a = weight_row(a - 1.0, at.m);
        const WeightTable lag_b = weight_row(b - 1.0, at.n);
        st.scale = weight(a, at.m) * weight(b, at.n);
        for (std::size_t k = 0; k <= at.m; ++k) {
            const double wk = lag_a.at(at.m - k);
            const double* row = field.row(k);
            for (std::size_t l = 0; l <= at.n; ++l) {
                const double y = wk * lag_b.at(at.n - l) * row[l];
                raw.add(y);
                if (std::fabs(row[l]) <= st.scale) {
                    trunc.add(y);
                }
            }
        }
    }
    st.raw_sum = raw.value();
    st.s_prime = trunc.value();
    st.mu_mn = mu_mn;
    st.centered_normalized = st.scale > 0.0 ? (st.raw_sum - st.mu_mn) / st.scale : 0.0;
    st.mean_ratio = st.scale > 0.0 ? st.mu_mn / st.scale : 0.0;
    return st;
}

TruncatedStats truncated_stats(const Field& field, const TailProfile& profile, const CesaroOrder& order,
                               Checkpoint at, TruncationMode mode) {
    check_checkpoint(field, at);
    return truncated_stats(field, order, at, mode, truncated_expectation(profile, order, at, mode));
}

TruncatedStats truncated_stats(const FieldSpec& spec, const CesaroOrder& order, Checkpoint at,
                               TruncationMode mode) {
    if (at.m >= spec.extent.rows || at.n >= spec.extent.cols) {
        throw std::out_of_range("checkpoint outside the field extent");
    }
    const Field field = materialize(spec, at.m + 1, at.n + 1);
    return truncated_stats(field, spec.profile, order, at, mode);
}

}  // namespace cesaro
