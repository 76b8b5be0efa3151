#pragma once

#include <cstddef>
#include <cstdint>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

namespace cesaro {

enum class Family { pareto_log, rademacher, uniform_sym, gaussian };

std::string_view to_string(Family f);
/// Throws std::invalid_argument on an unknown name.
Family parse_family(std::string_view name);

/// Law of the generic summand X. Every family is symmetric about `mu`.
///
/// pareto_log: P(|X - mu| > x) = (x/x0)^{-p} (log x / log x0)^{-q} for x >= x0,
///             and 1 below x0.
/// rademacher: X - mu = +-1.
/// uniform_sym: X - mu uniform on [-1, 1].
/// gaussian: X - mu standard normal.
struct TailProfile {
    Family family = Family::rademacher;
    double p = 2.0;
    double q = 0.0;
    double mu = 0.0;
    double x0 = std::numbers::e;

    static TailProfile pareto_log(double p, double q = 0.0, double mu = 0.0, double x0 = std::numbers::e);
    static TailProfile rademacher(double mu = 0.0);
    static TailProfile uniform_sym(double mu = 0.0);
    static TailProfile gaussian(double mu = 0.0);

    /// Throws std::domain_error if the parameters are out of range.
    void validate() const;

    bool bounded() const noexcept { return family == Family::rademacher || family == Family::uniform_sym; }

    friend bool operator==(const TailProfile&, const TailProfile&) = default;
};

/// Lattice bounds; valid indices are 0 <= k < rows, 0 <= l < cols.
struct Extent {
    std::size_t rows = 0;
    std::size_t cols = 0;

    friend bool operator==(const Extent&, const Extent&) = default;
};

struct FieldSpec {
    TailProfile profile;
    std::uint64_t seed = 0;
    Extent extent;
};

/// Dense row-major realisation of part of a field.
class Field {
public:
    Field() = default;
    Field(std::size_t rows, std::size_t cols, double fill = 0.0) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double& operator()(std::size_t k, std::size_t l) noexcept { return data_[k * cols_ + l]; }
    double operator()(std::size_t k, std::size_t l) const noexcept { return data_[k * cols_ + l]; }

    const double* row(std::size_t k) const noexcept { return data_.data() + k * cols_; }
    double* row(std::size_t k) noexcept { return data_.data() + k * cols_; }

    std::vector<double>& data() noexcept { return data_; }
    const std::vector<double>& data() const noexcept { return data_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// SplitMix64 finaliser.
std::uint64_t mix64(std::uint64_t z) noexcept;

/// Seed for replicate `index` of stream `stream` under a master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index) noexcept;

/// Value at (k, l): a pure function of (profile, seed, k, l).
double sample_at(const TailProfile& profile, std::uint64_t seed, std::uint64_t k, std::uint64_t l);

/// Bounds-checked sample; throws std::out_of_range outside the extent.
double sample(const FieldSpec& spec, std::size_t k, std::size_t l);

/// Realises the block [0, rows) x [0, cols) (default: the whole extent).
Field materialize(const FieldSpec& spec, std::size_t rows, std::size_t cols, unsigned threads = 1);
Field materialize(const FieldSpec& spec, unsigned threads = 1);

/// Inverse of the centred survival function: the value z >= 0 with
/// P(|X - mu| > z) = u, for u in (0, 1].
double survival_inverse(const TailProfile& profile, double u);

/// P(|X - mu| > x), x >= 0.
double tail_prob(const TailProfile& profile, double x);

/// P(|X| > x), x >= 0.
double abs_tail_prob(const TailProfile& profile, double x);

/// P(X <= x) and P(X < x).
double cdf(const TailProfile& profile, double x);
double cdf_left(const TailProfile& profile, double x);

/// True iff E|X|^r (log^+ |X|)^s < infinity, with log^+ x = max(log x, 1).
bool moment_finite(const TailProfile& profile, double r, double s);

/// True iff n P(|X| > n) -> 0.
bool feller_check(const TailProfile& profile);

/// E[X 1{|X| <= c}], c > 0. Exactly zero for mu = 0.
double truncated_mean_expect(const TailProfile& profile, double c);

}  // namespace cesaro
