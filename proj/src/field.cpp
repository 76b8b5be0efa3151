#include "cesaro/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <boost/math/special_functions/erf.hpp>

#include "cesaro/errors.hpp"
#include "cesaro/parallel.hpp"
#include "cesaro/quadrature.hpp"

namespace cesaro {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kRowKey = 0xD1B54A32D192ED03ULL;
constexpr std::uint64_t kColKey = 0xAEF17502108EF2D9ULL;
constexpr std::uint64_t kSignKey = 0x8CB92BA72F3D8DD7ULL;

bool same_exponent(double a, double b) { return std::fabs(a - b) <= 1e-12 * std::max(1.0, std::fabs(b)); }

// Uniform on (0, 1] from the top 53 bits.
double to_unit_open_closed(std::uint64_t bits) {
    return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}

// P(|Z| > z) for the centred variable Z = X - mu.
double centred_survival(const TailProfile& pr, double z) {
    if (z < 0.0) {
        return 1.0;
    }
    switch (pr.family) {
    case Family::rademacher:
        return z < 1.0 ? 1.0 : 0.0;
    case Family::uniform_sym:
        return z < 1.0 ? 1.0 - z : 0.0;
    case Family::gaussian:
        return std::erfc(z / std::numbers::sqrt2);
    case Family::pareto_log: {
        if (z <= pr.x0) {
            return 1.0;
        }
        double g = std::pow(z / pr.x0, -pr.p);
        if (pr.q != 0.0) {
            g *= std::pow(std::log(z) / std::log(pr.x0), -pr.q);
        }
        return g;
    }
    }
    return 1.0;
}

// P(|Z| >= z); differs from the strict version only at atoms.
double centred_survival_ge(const TailProfile& pr, double z) {
    if (pr.family == Family::rademacher) {
        return z <= 1.0 ? 1.0 : 0.0;
    }
    return centred_survival(pr, z);
}

// P(Z > a) for symmetric Z.
double upper(const TailProfile& pr, double a) {
    if (a >= 0.0) {
        return 0.5 * centred_survival(pr, a);
    }
    return 1.0 - 0.5 * centred_survival_ge(pr, -a);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

// Integral of the pareto_log survival function over [a, b], x0 <= a <= b.
double pareto_survival_integral(const TailProfile& pr, double a, double b) {
    if (b <= a) {
        return 0.0;
    }
    if (pr.q == 0.0) {
        if (same_exponent(pr.p, 1.0)) {
            return pr.x0 * std::log(b / a);
        }
        const double e = 1.0 - pr.p;
        return pr.x0 * (std::pow(b / pr.x0, e) - std::pow(a / pr.x0, e)) / e;
    }
    if (same_exponent(pr.p, 1.0)) {
        // Substitute u = log y / log x0.
        const double l0 = std::log(pr.x0);
        const double ua = std::log(a) / l0;
        const double ub = std::log(b) / l0;
        if (same_exponent(pr.q, 1.0)) {
            return pr.x0 * l0 * std::log(ub / ua);
        }
        const double e = 1.0 - pr.q;
        return pr.x0 * l0 * (std::pow(ub, e) - std::pow(ua, e)) / e;
    }
    auto g = [&pr](double y) { return centred_survival(pr, y); };
    return integrate_log_spaced(g, a, b, 1e-10).value;
}

}  // namespace

std::string_view to_string(Family f) {
    switch (f) {
    case Family::pareto_log:
        return "pareto_log";
    case Family::rademacher:
        return "rademacher";
    case Family::uniform_sym:
        return "uniform_sym";
    case Family::gaussian:
        return "gaussian";
    }
    return "unknown";
}

Family parse_family(std::string_view name) {
    if (name == "pareto_log" || name == "pareto") {
        return Family::pareto_log;
    }
    if (name == "rademacher") {
        return Family::rademacher;
    }
    if (name == "uniform_sym" || name == "uniform") {
        return Family::uniform_sym;
    }
    if (name == "gaussian" || name == "normal") {
        return Family::gaussian;
    }
    throw std::invalid_argument("unknown family '" + std::string(name) + "'");
}

TailProfile TailProfile::pareto_log(double p, double q, double mu, double x0) {
    TailProfile t{Family::pareto_log, p, q, mu, x0};
    t.validate();
    return t;
}

TailProfile TailProfile::rademacher(double mu) { return {Family::rademacher, 0.0, 0.0, mu, std::numbers::e}; }

TailProfile TailProfile::uniform_sym(double mu) { return {Family::uniform_sym, 0.0, 0.0, mu, std::numbers::e}; }

TailProfile TailProfile::gaussian(double mu) { return {Family::gaussian, 0.0, 0.0, mu, std::numbers::e}; }

void TailProfile::validate() const {
    if (!std::isfinite(mu)) {
        throw std::domain_error("profile location mu must be finite");
    }
    if (family != Family::pareto_log) {
        return;
    }
    if (!(p > 0.0) || !std::isfinite(p)) {
        throw std::domain_error("pareto_log tail exponent p must be positive");
    }
    if (!(q >= 0.0) || !std::isfinite(q)) {
        throw std::domain_error("pareto_log log exponent q must be non-negative");
    }
    if (!(x0 >= std::numbers::e) || !std::isfinite(x0)) {
        throw std::domain_error("pareto_log threshold x0 must be at least e");
    }
}

std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index) noexcept {
    std::uint64_t h = mix64(master + kGolden);
    h = mix64(h ^ (stream * kRowKey + kGolden));
    return mix64(h ^ (index * kColKey + kGolden));
}

double survival_inverse(const TailProfile& pr, double u) {
    if (!(u > 0.0 && u <= 1.0)) {
        throw std::domain_error("survival_inverse requires u in (0, 1]");
    }
    switch (pr.family) {
    case Family::rademacher:
        return 1.0;
    case Family::uniform_sym:
        return 1.0 - u;
    case Family::gaussian:
        return std::numbers::sqrt2 * boost::math::erfc_inv(u);
    case Family::pareto_log:
        break;
    }
    const double target = -std::log(u);
    if (pr.q == 0.0) {
        return pr.x0 * std::exp(target / pr.p);
    }
    // Solve p (t - t0) + q log(t / t0) = target for t = log z. Newton
    // converges quadratically, so once a step falls below 1e-9 relative one
    // more step reaches rounding.
    const double t0 = std::log(pr.x0);
    double t = std::max(t0, t0 + (target - pr.q * std::log1p(target / (pr.p * t0))) / pr.p);
    for (int iter = 0; iter < 100; ++iter) {
        const double f = pr.p * (t - t0) + pr.q * std::log(t / t0) - target;
        const double step = f / (pr.p + pr.q / t);
        t = std::max(t0, t - step);
        if (std::fabs(step) <= 1e-9 * t) {
            if (step != 0.0) {
                t -= (pr.p * (t - t0) + pr.q * std::log(t / t0) - target) / (pr.p + pr.q / t);
            }
            return std::exp(t);
        }
    }
    throw NumericError("pareto_log inverse did not converge for u = " + std::to_string(u));
}

double sample_at(const TailProfile& profile, std::uint64_t seed, std::uint64_t k, std::uint64_t l) {
    std::uint64_t h = mix64(seed + kGolden);
    h = mix64(h ^ (k * kRowKey + kGolden));
    h = mix64(h ^ (l * kColKey + kGolden));
    const double magnitude = survival_inverse(profile, to_unit_open_closed(h));
    const bool negative = (mix64(h ^ kSignKey) >> 63) != 0;
    return profile.mu + (negative ? -magnitude : magnitude);
}

double sample(const FieldSpec& spec, std::size_t k, std::size_t l) {
    if (k >= spec.extent.rows || l >= spec.extent.cols) {
        throw std::out_of_range("lattice index (" + std::to_string(k) + ", " + std::to_string(l) +
                                ") outside extent " + std::to_string(spec.extent.rows) + "x" +
                                std::to_string(spec.extent.cols));
    }
    return sample_at(spec.profile, spec.seed, k, l);
}

Field materialize(const FieldSpec& spec, std::size_t rows, std::size_t cols, unsigned threads) {
    if (rows > spec.extent.rows || cols > spec.extent.cols) {
        throw std::out_of_range("requested block exceeds the field extent");
    }
    Field field(rows, cols);
    parallel_for(rows, threads, [&](std::size_t k) {
        double* out = field.row(k);
        for (std::size_t l = 0; l < cols; ++l) {
            out[l] = sample_at(spec.profile, spec.seed, k, l);
        }
    });
    return field;
}

Field materialize(const FieldSpec& spec, unsigned threads) {
    return materialize(spec, spec.extent.rows, spec.extent.cols, threads);
}

double tail_prob(const TailProfile& profile, double x) {
    if (!(x >= 0.0)) {
        throw std::domain_error("tail_prob requires x >= 0");
    }
    return centred_survival(profile, x);
}

double abs_tail_prob(const TailProfile& profile, double x) {
    if (!(x >= 0.0)) {
        throw std::domain_error("abs_tail_prob requires x >= 0");
    }
    if (profile.mu == 0.0) {
        return centred_survival(profile, x);
    }
    return upper(profile, x - profile.mu) + upper(profile, x + profile.mu);
}

double cdf(const TailProfile& profile, double x) { return 1.0 - upper(profile, x - profile.mu); }

double cdf_left(const TailProfile& profile, double x) { return upper(profile, profile.mu - x); }

bool moment_finite(const TailProfile& profile, double r, double s) {
    if (!(r > 0.0)) {
        throw std::domain_error("moment_finite requires r > 0");
    }
    if (!(s >= 0.0)) {
        throw std::domain_error("moment_finite requires s >= 0");
    }
    if (profile.family != Family::pareto_log) {
        return true;
    }
    if (same_exponent(profile.p, r)) {
        return profile.q > s + 1.0;
    }
    return profile.p > r;
}

bool feller_check(const TailProfile& profile) {
    if (profile.family != Family::pareto_log) {
        return true;
    }
    if (same_exponent(profile.p, 1.0)) {
        return profile.q > 0.0;
    }
    return profile.p > 1.0;
}

double truncated_mean_expect(const TailProfile& pr, double c) {
    if (!(c > 0.0)) {
        throw std::domain_error("truncated_mean_expect requires c > 0");
    }
    const double mu = pr.mu;
    if (mu == 0.0) {
        return 0.0;
    }
    switch (pr.family) {
    case Family::rademacher: {
        double v = 0.0;
        if (std::fabs(mu + 1.0) <= c) {
            v += 0.5 * (mu + 1.0);
        }
        if (std::fabs(mu - 1.0) <= c) {
            v += 0.5 * (mu - 1.0);
        }
        return v;
    }
    case Family::uniform_sym: {
        const double lo = std::max(mu - 1.0, -c);
        const double hi = std::min(mu + 1.0, c);
        return hi > lo ? 0.25 * (hi * hi - lo * lo) : 0.0;
    }
    case Family::gaussian:
        return mu * (normal_cdf(c - mu) - normal_cdf(-c - mu)) + normal_pdf(-c - mu) - normal_pdf(c - mu);
    case Family::pareto_log:
        break;
    }
    // X = mu + S Y with Y >= x0 and an independent symmetric sign S.
    struct Piece {
        double prob = 0.0;
        double first_moment = 0.0;
    };
    auto piece = [&pr](double a, double b) {
        a = std::max(a, pr.x0);
        if (b <= a) {
            return Piece{};
        }
        const double ga = centred_survival(pr, a);
        const double gb = centred_survival(pr, b);
        return Piece{ga - gb, a * ga - b * gb + pareto_survival_integral(pr, a, b)};
    };
    const Piece plus = piece(-c - mu, c - mu);
    const Piece minus = piece(mu - c, mu + c);
    return 0.5 * (mu * plus.prob + plus.first_moment) + 0.5 * (mu * minus.prob - minus.first_moment);
}

}  // namespace cesaro
