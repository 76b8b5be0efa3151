#include "cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cesaro/appendix.hpp"
#include "cesaro/errors.hpp"
#include "cesaro/field.hpp"
#include "cesaro/lab.hpp"
#include "cesaro/mean.hpp"
#include "cesaro/parallel.hpp"
#include "cesaro/report.hpp"
#include "cesaro/weights.hpp"

namespace cesaro::cli {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

struct ProfileOptions {
    std::string family = "rademacher";
    double p = 2.0;
    double q = 0.0;
    double mu = 0.0;
    double x0 = std::numbers::e;

    TailProfile make() const {
        switch (parse_family(family)) {
        case Family::pareto_log:
            return TailProfile::pareto_log(p, q, mu, x0);
        case Family::rademacher:
            return TailProfile::rademacher(mu);
        case Family::uniform_sym:
            return TailProfile::uniform_sym(mu);
        case Family::gaussian:
            return TailProfile::gaussian(mu);
        }
        throw UsageError("unknown family");
    }
};

void add_profile(CLI::App* sub, ProfileOptions& o) {
    sub->add_option("--family", o.family, "pareto_log | rademacher | uniform_sym | gaussian")->capture_default_str();
    sub->add_option("--p", o.p, "pareto_log tail exponent")->capture_default_str();
    sub->add_option("--q", o.q, "pareto_log log exponent")->capture_default_str();
    sub->add_option("--mu", o.mu, "centre of symmetry")->capture_default_str();
    sub->add_option("--x0", o.x0, "pareto_log scale")->capture_default_str();
}

Extent parse_extent(const std::string& s) {
    const auto x = s.find_first_of("xX");
    if (x == std::string::npos) {
        throw UsageError("extent must look like MxN, got '" + s + "'");
    }
    try {
        std::size_t used = 0;
        const auto rows = std::stoull(s.substr(0, x), &used);
        if (used != x) {
            throw UsageError("bad extent '" + s + "'");
        }
        const auto cols = std::stoull(s.substr(x + 1), &used);
        if (used != s.size() - x - 1 || rows == 0 || cols == 0) {
            throw UsageError("bad extent '" + s + "'");
        }
        return {rows, cols};
    } catch (const std::logic_error&) {
        throw UsageError("bad extent '" + s + "'");
    }
}

/// "dyadic", or a comma separated list of m:n pairs.
std::vector<Checkpoint> parse_checkpoints(const std::string& s, Extent extent) {
    if (s == "dyadic") {
        return dyadic_checkpoints(extent);
    }
    std::vector<Checkpoint> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto c = item.find(':');
        if (c == std::string::npos) {
            throw UsageError("checkpoint must look like m:n, got '" + item + "'");
        }
        try {
            out.push_back({std::stoull(item.substr(0, c)), std::stoull(item.substr(c + 1))});
        } catch (const std::logic_error&) {
            throw UsageError("bad checkpoint '" + item + "'");
        }
    }
    if (out.empty()) {
        throw UsageError("no checkpoints given");
    }
    return out;
}

std::filesystem::path resolve_out(const std::string& path) {
    std::filesystem::path p(path);
    if (p.is_relative()) {
        if (const char* dir = std::getenv(kOutDirEnv); dir != nullptr && *dir != '\0') {
            p = std::filesystem::path(dir) / p;
        }
    }
    return p;
}

/// Writes through `fn` to stdout ("-" or empty path) or to a file.
void emit(const std::string& path, std::ostream& out, const std::function<void(std::ostream&)>& fn) {
    if (path.empty() || path == "-") {
        fn(out);
        out.flush();
        return;
    }
    const auto p = resolve_out(path);
    if (p.has_parent_path()) {
        std::filesystem::create_directories(p.parent_path());
    }
    std::ofstream f(p, std::ios::binary);
    if (!f) {
        throw UsageError("cannot open output file " + p.string());
    }
    fn(f);
    if (!f) {
        throw UsageError("write failed for " + p.string());
    }
}

void emit_json(const std::string& path, std::ostream& out, const Json& j) {
    emit(path, out, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
}

int verdict_exit(const ConvergenceVerdict& v) {
    if (v.observed == Observation::inconclusive) {
        return kExitInconclusive;
    }
    return v.concordant() ? kExitOk : kExitDiscordant;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Cesaro summability of random fields: weights, sampling, means and convergence diagnostics",
                 "cesaro"};
    app.require_subcommand(1);
    app.set_config("--config", "", "TOML/INI file of option values; command-line flags take precedence");
    unsigned threads_flag = 0;
    app.add_option("--threads", threads_flag, "worker threads (0 = all cores)");

    std::function<int()> action;

    // weights
    double w_alpha = 1.0;
    std::uint64_t w_n = 0;
    bool w_table = false;
    std::string w_out;
    auto* weights = app.add_subcommand("weights", "Cesaro coefficients A_k^alpha as CSV k,log_weight,weight");
    weights->configurable();
    weights->add_option("--alpha", w_alpha, "order, alpha >= -1")->required();
    weights->add_option("--n", w_n, "index")->required();
    weights->add_flag("--table", w_table, "print every k = 0..n instead of k = n only");
    weights->add_option("--out", w_out, "output path (default stdout)");
    weights->callback([&] {
        action = [&] {
            std::vector<std::uint64_t> ks;
            if (w_table) {
                if (w_n >= kDefaultRowBudget) {
                    throw UsageError("--table is limited to n < " + std::to_string(kDefaultRowBudget));
                }
                for (std::uint64_t k = 0; k <= w_n; ++k) {
                    ks.push_back(k);
                }
            } else {
                ks.push_back(w_n);
            }
            std::vector<double> logs(ks.size());
            for (std::size_t i = 0; i < ks.size(); ++i) {
                logs[i] = log_weight(w_alpha, ks[i]);
            }
            emit(w_out, out, [&](std::ostream& os) {
                os << "k,log_weight,weight\n";
                for (std::size_t i = 0; i < ks.size(); ++i) {
                    os << ks[i] << ',' << num(logs[i]) << ',' << num(weight(w_alpha, ks[i])) << '\n';
                }
            });
            return kExitOk;
        };
    });

    // sample
    ProfileOptions s_prof;
    std::uint64_t s_seed = 0;
    std::string s_extent;
    std::string s_out;
    auto* samp = app.add_subcommand("sample", "Realise a field block as CSV k,l,value");
    samp->configurable();
    add_profile(samp, s_prof);
    samp->add_option("--seed", s_seed, "field seed")->capture_default_str();
    samp->add_option("--extent", s_extent, "MxN")->required();
    samp->add_option("--out", s_out, "output path (default stdout)");
    samp->callback([&] {
        action = [&] {
            const FieldSpec spec{s_prof.make(), s_seed, parse_extent(s_extent)};
            const Field f = materialize(spec, resolve_threads(threads_flag));
            emit(s_out, out, [&](std::ostream& os) {
                os << "k,l,value\n";
                for (std::size_t k = 0; k < f.rows(); ++k) {
                    for (std::size_t l = 0; l < f.cols(); ++l) {
                        os << k << ',' << l << ',' << num(f(k, l)) << '\n';
                    }
                }
            });
            return kExitOk;
        };
    });

    // mean1d
    ProfileOptions m1_prof;
    double m1_alpha = 1.0;
    std::uint64_t m1_seed = 0;
    std::size_t m1_n = 0;
    std::string m1_input;
    std::string m1_out;
    auto* mean1d = app.add_subcommand(
        "mean1d", "(C,alpha) means of row 0 of a field, or of a file of values, as CSV n,mean,abs_dev_from_mu");
    mean1d->configurable();
    add_profile(mean1d, m1_prof);
    mean1d->add_option("--alpha", m1_alpha, "order in [0, 1]")->required();
    mean1d->add_option("--seed", m1_seed, "field seed")->capture_default_str();
    mean1d->add_option("--n", m1_n, "sequence length when sampling");
    mean1d->add_option("--input", m1_input, "file with one value per line (replaces sampling)");
    mean1d->add_option("--out", m1_out, "output path (default stdout)");
    mean1d->callback([&] {
        action = [&] {
            std::vector<double> xs;
            if (!m1_input.empty()) {
                std::ifstream in(m1_input);
                if (!in) {
                    throw UsageError("cannot read " + m1_input);
                }
                std::string line;
                while (std::getline(in, line)) {
                    if (line.empty()) {
                        continue;
                    }
                    try {
                        xs.push_back(std::stod(line));
                    } catch (const std::logic_error&) {
                        throw UsageError("not a number: '" + line + "'");
                    }
                }
            } else {
                if (m1_n == 0) {
                    throw UsageError("mean1d needs --n or --input");
                }
                const TailProfile prof = m1_prof.make();
                xs.resize(m1_n);
                for (std::size_t k = 0; k < m1_n; ++k) {
                    xs[k] = sample_at(prof, m1_seed, 0, k);
                }
            }
            const std::vector<double> means = cesaro_mean_1d(xs, m1_alpha);
            emit(m1_out, out, [&](std::ostream& os) {
                os << "n,mean,abs_dev_from_mu\n";
                for (std::size_t n = 0; n < means.size(); ++n) {
                    os << n << ',' << num(means[n]) << ',' << num(std::fabs(means[n] - m1_prof.mu)) << '\n';
                }
            });
            return kExitOk;
        };
    });

    // mean2d
    ProfileOptions m2_prof;
    double m2_alpha = 1.0;
    double m2_beta = -1.0;
    std::uint64_t m2_seed = 0;
    std::string m2_extent;
    std::string m2_checkpoints = "dyadic";
    std::string m2_out;
    auto* mean2d = app.add_subcommand("mean2d", "(C,alpha,beta) field means as CSV m,n,mean,abs_dev_from_mu");
    mean2d->configurable();
    add_profile(mean2d, m2_prof);
    mean2d->add_option("--alpha", m2_alpha, "first order")->required();
    mean2d->add_option("--beta", m2_beta, "second order (default alpha)");
    mean2d->add_option("--seed", m2_seed, "field seed")->capture_default_str();
    mean2d->add_option("--extent", m2_extent, "MxN")->required();
    mean2d->add_option("--checkpoints", m2_checkpoints, "dyadic, or m:n,m:n,...")->capture_default_str();
    mean2d->add_option("--out", m2_out, "output path (default stdout)");
    mean2d->callback([&] {
        action = [&] {
            const FieldSpec spec{m2_prof.make(), m2_seed, parse_extent(m2_extent)};
            const CesaroOrder order = CesaroOrder::two_dim(m2_alpha, m2_beta < 0.0 ? m2_alpha : m2_beta);
            const auto cps = parse_checkpoints(m2_checkpoints, spec.extent);
            const MeanGrid g = cesaro_mean_2d(spec, order, cps, resolve_threads(threads_flag));
            emit(m2_out, out, [&](std::ostream& os) {
                os << "m,n,mean,abs_dev_from_mu\n";
                for (std::size_t i = 0; i < g.checkpoints.size(); ++i) {
                    os << g.checkpoints[i].m << ',' << g.checkpoints[i].n << ',' << num(g.values[i]) << ','
                       << num(std::fabs(g.values[i] - g.mu_ref)) << '\n';
                }
            });
            return kExitOk;
        };
    });

    // verdict
    ProfileOptions v_prof;
    VerdictConfig vc;
    std::string v_mode = "as";
    double v_alpha = 0.75;
    double v_beta = -1.0;
    std::string v_checkpoints;
    double v_eps = -1.0;
    std::size_t v_replicates = 0;
    std::string v_out;
    auto* verdict = app.add_subcommand("verdict", "Predicted versus observed convergence as JSON");
    verdict->configurable();
    add_profile(verdict, v_prof);
    verdict->add_option("--mode", v_mode, "prob | complete | as")->capture_default_str();
    verdict->add_option("--alpha", v_alpha, "first order")->capture_default_str();
    verdict->add_option("--beta", v_beta, "second order (default alpha)");
    verdict->add_option("--master-seed", vc.master_seed, "master seed")->capture_default_str();
    verdict->add_option("--stream", vc.stream, "seed stream")->capture_default_str();
    verdict->add_option("--eps", v_eps, "deviation threshold (prob default 0.25, as default 0.1)");
    verdict->add_option("--replicates", v_replicates, "replicates (prob default 400, as default 20)");
    verdict->add_option("--checkpoints", v_checkpoints, "prob checkpoints m:n,... (default 64:64,256:256,1024:1024)");
    verdict->add_option("--log2-extent", vc.log2_extent, "as: field side 2^L")->capture_default_str();
    verdict->add_option("--N", vc.N, "complete: base level N")->capture_default_str();
    verdict->add_option("--out", v_out, "output path (default stdout)");
    verdict->callback([&] {
        action = [&] {
            vc.mode = parse_mode(v_mode);
            vc.profile = v_prof.make();
            vc.order = CesaroOrder::two_dim(v_alpha, v_beta < 0.0 ? v_alpha : v_beta);
            vc.threads = resolve_threads(threads_flag);
            if (!v_checkpoints.empty()) {
                vc.checkpoints = parse_checkpoints(v_checkpoints, {});
            }
            if (v_eps > 0.0) {
                vc.prob_eps = v_eps;
                vc.as_eps = v_eps;
            }
            if (v_replicates > 0) {
                vc.prob_replicates = v_replicates;
                vc.as_replicates = v_replicates;
            }
            const ConvergenceVerdict v = run_verdict(vc);
            Json j = to_json(v);
            Json head;
            head["profile"] = to_json(vc.profile);
            head["order"] = to_json(vc.order);
            head["master_seed"] = vc.master_seed;
            head.update(j);
            emit_json(v_out, out, head);
            return verdict_exit(v);
        };
    });

    // complete-sum
    ProfileOptions c_prof;
    double c_alpha = 0.5;
    double c_beta = -1.0;
    std::size_t c_N = 128;
    std::string c_format = "json";
    std::string c_out;
    auto* csum = app.add_subcommand("complete-sum", "Analytic complete-convergence term sums S(N), S(2N), S(4N)");
    csum->configurable();
    add_profile(csum, c_prof);
    csum->add_option("--alpha", c_alpha, "first order")->capture_default_str();
    csum->add_option("--beta", c_beta, "second order (default alpha)");
    csum->add_option("--N", c_N, "base level, 16 <= N <= 4096")->capture_default_str();
    csum->add_option("--format", c_format, "json | csv")->capture_default_str();
    csum->add_option("--out", c_out, "output path (default stdout)");
    csum->callback([&] {
        action = [&] {
            if (c_format != "json" && c_format != "csv") {
                throw UsageError("--format must be json or csv");
            }
            const TailProfile prof = c_prof.make();
            const CesaroOrder order = CesaroOrder::two_dim(c_alpha, c_beta < 0.0 ? c_alpha : c_beta);
            const MomentRequirement req = classify_moment_case_2d(order.alpha(), order.beta()).complete;
            const bool predicted = moment_finite(prof, req.r, req.s);
            const SeriesGrowth g = complete_convergence_sum(prof, order, c_N);
            if (c_format == "csv") {
                emit(c_out, out, [&](std::ostream& os) {
                    os << "N,S\n";
                    os << g.N << ',' << num(g.S_N) << '\n';
                    os << 2 * g.N << ',' << num(g.S_2N) << '\n';
                    os << 4 * g.N << ',' << num(g.S_4N) << '\n';
                });
            } else {
                Json j;
                j["profile"] = to_json(prof);
                j["order"] = to_json(order);
                j["requirement"] = to_json(req);
                j["predicted"] = predicted;
                j["series"] = to_json(g);
                emit_json(c_out, out, j);
            }
            if (g.classification == Observation::inconclusive) {
                return kExitInconclusive;
            }
            return predicted == (g.classification == Observation::consistent) ? kExitOk : kExitDiscordant;
        };
    });

    // appendix-verify
    std::vector<double> a_gammas{0.1, 0.3, 0.5, 0.7, 0.9};
    std::vector<std::size_t> a_levels{32, 64, 128};
    std::string a_matrix = "default";
    std::string a_out;
    auto* appx = app.add_subcommand("appendix-verify", "Branch-ratio stability and sum/integral equivalence as JSON");
    appx->configurable();
    appx->add_option("--gamma-grid", a_gammas, "gamma values in (0, 1)")->delimiter(',');
    appx->add_option("--levels", a_levels, "term-sum base levels")->delimiter(',');
    appx->add_option("--matrix", a_matrix, "profile matrix (default)")->capture_default_str();
    appx->add_option("--out", a_out, "output path (default stdout)");
    appx->callback([&] {
        action = [&] {
            if (a_matrix != "default") {
                throw UsageError("only --matrix default is available");
            }
            Json gammas = Json::array();
            bool stable = true;
            for (double g : a_gammas) {
                const double r4 = branch_ratio(g, 1e4);
                const double r6 = branch_ratio(g, 1e6);
                const double change = std::fabs(r6 - r4) / std::fabs(r6);
                Json e;
                e["gamma"] = g;
                e["regime"] = std::string(to_string(regime_case(g).regime));
                e["ratio_1e4"] = r4;
                e["ratio_1e6"] = r6;
                e["relative_change"] = change;
                e["stable"] = change <= 0.02;
                stable = stable && change <= 0.02;
                gammas.push_back(std::move(e));
            }
            Json cases = Json::array();
            std::size_t concordant = 0;
            bool any_inconclusive = false;
            for (const auto& o : complete_regimes()) {
                const MomentRequirement req = classify_moment_case_2d(o.alpha(), o.beta()).complete;
                for (const TailProfile& prof : {just_finite(req), just_infinite(req)}) {
                    const EquivalenceReport r =
                        equivalence_check(prof, o, a_levels, {}, resolve_threads(threads_flag));
                    concordant += r.concordant ? 1 : 0;
                    any_inconclusive = any_inconclusive || r.sum_classification == Observation::inconclusive ||
                                       r.integral.classification == Observation::inconclusive;
                    cases.push_back(to_json(r));
                }
            }
            Json j;
            j["branch_ratios"] = std::move(gammas);
            j["equivalence"] = cases;
            j["concordant"] = concordant;
            j["total"] = cases.size();
            emit_json(a_out, out, j);
            if (concordant == cases.size() && stable) {
                return kExitOk;
            }
            return any_inconclusive ? kExitInconclusive : kExitDiscordant;
        };
    });

    // matrix
    MatrixConfig mc;
    std::string mx_scale = "full";
    std::string mx_out;
    auto* matrix = app.add_subcommand("matrix", "Full theory-versus-experiment grid as one JSON report");
    matrix->configurable();
    matrix->add_option("--master-seed", mc.master_seed, "master seed")->capture_default_str();
    matrix->add_option("--scale", mx_scale, "full | quick")->capture_default_str();
    matrix->add_option("--out", mx_out, "output path (default stdout)");
    matrix->callback([&] {
        action = [&] {
            mc.scale = parse_scale(mx_scale);
            mc.threads = resolve_threads(threads_flag);
            const Json report = run_matrix(mc, [&](std::string_view section, double seconds) {
                err << "matrix: " << section << " done in " << num(seconds) << " s\n";
            });
            emit_json(mx_out, out, report);
            return report.at("summary").at("all_concordant").get<bool>() ? kExitOk : kExitDiscordant;
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::Error& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        return action ? action() : kExitUsage;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const NumericError& e) {
        err << "numeric failure: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const std::logic_error& e) {
        // domain_error, invalid_argument, out_of_range, length_error: bad input values
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::range_error& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "numeric failure: " << e.what() << '\n';
        return kExitNumeric;
    }
}

}  // namespace cesaro::cli
