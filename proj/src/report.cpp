#include "cesaro/report.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <stdexcept>

#include "cesaro/mean.hpp"
#include "cesaro/parallel.hpp"

namespace cesaro {

namespace {

Json checkpoint_json(Checkpoint c) { return Json::array({c.m, c.n}); }

Json observed_flag(Observation o) {
    switch (o) {
    case Observation::consistent:
        return true;
    case Observation::divergent:
        return false;
    case Observation::inconclusive:
        break;
    }
    return nullptr;
}

double binomial_var(double p, std::size_t n) { return p * (1.0 - p) / static_cast<double>(n); }

struct ScaleParams {
    std::vector<Checkpoint> weak_checkpoints;
    std::size_t weak_replicates;
    unsigned log2_extent;
    std::size_t as_replicates;
    std::size_t complete_N;
    std::vector<std::size_t> equivalence_levels;
};

ScaleParams scale_params(MatrixScale s) {
    if (s == MatrixScale::quick) {
        return {{{16, 16}, {32, 32}, {64, 64}}, 100, 7, 20, 16, {16}};
    }
    return {{{64, 64}, {256, 256}, {1024, 1024}}, 400, 11, 20, 128, {32, 64, 128}};
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::size_t count_true(const Json& arr, const char* key) {
    std::size_t n = 0;
    for (const auto& e : arr) {
        n += e.at(key).get<bool>() ? 1 : 0;
    }
    return n;
}

}  // namespace

// ---------------------------------------------------------------------------
// Serialization.

Json to_json(const TailProfile& profile) {
    Json j;
    j["family"] = std::string(to_string(profile.family));
    if (profile.family == Family::pareto_log) {
        j["p"] = profile.p;
        j["q"] = profile.q;
        j["x0"] = profile.x0;
    }
    j["mu"] = profile.mu;
    return j;
}

TailProfile profile_from_json(const Json& j) {
    const Family family = parse_family(j.at("family").get<std::string>());
    const double mu = j.value("mu", 0.0);
    TailProfile profile;
    switch (family) {
    case Family::pareto_log:
        profile = TailProfile::pareto_log(j.value("p", 2.0), j.value("q", 0.0), mu, j.value("x0", std::numbers::e));
        break;
    case Family::rademacher:
        profile = TailProfile::rademacher(mu);
        break;
    case Family::uniform_sym:
        profile = TailProfile::uniform_sym(mu);
        break;
    case Family::gaussian:
        profile = TailProfile::gaussian(mu);
        break;
    }
    return profile;
}

Json to_json(const CesaroOrder& order) {
    Json j;
    j["alpha"] = order.alpha();
    if (order.has_beta()) {
        j["beta"] = order.beta();
    }
    return j;
}

Json to_json(const MomentRequirement& req) {
    Json j;
    j["r"] = req.r;
    j["s"] = req.s;
    j["case"] = req.description;
    return j;
}

Json to_json(const SeriesGrowth& g) {
    Json j;
    j["N"] = g.N;
    j["S_N"] = g.S_N;
    j["S_2N"] = g.S_2N;
    j["S_4N"] = g.S_4N;
    j["ratio"] = g.ratio;
    j["rel_increment"] = g.rel_increment;
    j["classification"] = std::string(to_string(g.classification));
    return j;
}

Json to_json(const ProbabilityResult& result) {
    Json points = Json::array();
    for (const auto& p : result.points) {
        Json e;
        e["checkpoint"] = checkpoint_json(p.at);
        e["mu_mn"] = p.mu_mn;
        e["mean_ratio"] = p.mean_ratio;
        e["exceedance"] = p.exceedance;
        e["raw_exceedance"] = p.raw_exceedance;
        e["statistic_mean"] = p.statistic_mean;
        e["statistic_se"] = p.statistic_se;
        points.push_back(std::move(e));
    }
    Json j;
    j["points"] = std::move(points);
    j["decreasing"] = result.decreasing;
    return j;
}

Json to_json(const TrajectoryResult& result) {
    Json j;
    j["levels"] = result.levels;
    j["median_by_level"] = result.median_by_level;
    j["last_level_exceedance"] = result.last_level_exceedance;
    j["median_nonincreasing"] = result.median_nonincreasing;
    j["verdict"] = std::string(to_string(result.verdict));
    return j;
}

Json to_json(const IntegralGrowth& g) {
    Json j;
    j["uppers"] = g.uppers;
    j["values"] = g.values;
    j["classification"] = std::string(to_string(g.classification));
    return j;
}

Json to_json(const EquivalenceReport& r) {
    Json j;
    j["profile"] = to_json(r.profile);
    j["order"] = to_json(r.order);
    j["requirement"] = to_json(r.requirement);
    j["predicted"] = r.predicted;
    Json series = Json::array();
    for (const auto& s : r.series) {
        series.push_back(to_json(s));
    }
    j["series"] = std::move(series);
    j["integral"] = to_json(r.integral);
    j["sum_classification"] = std::string(to_string(r.sum_classification));
    j["concordant"] = r.concordant;
    return j;
}

// ---------------------------------------------------------------------------
// Verdicts.

bool ConvergenceVerdict::concordant() const noexcept {
    if (observed == Observation::inconclusive) {
        return false;
    }
    return predicted == (observed == Observation::consistent);
}

Observation observe_probability(const ProbabilityResult& result, std::size_t replicates, double small_exceedance) {
    if (result.points.empty()) {
        throw std::invalid_argument("observe_probability needs at least one checkpoint");
    }
    const double first = result.points.front().exceedance;
    const double last = result.points.back().exceedance;
    if (last <= small_exceedance) {
        return Observation::consistent;
    }
    const double drop = first - last;
    const double se = std::sqrt(binomial_var(first, replicates) + binomial_var(last, replicates));
    if (result.decreasing && drop > 3.0 * se) {
        return Observation::consistent;
    }
    if (drop < se) {
        return Observation::divergent;
    }
    return Observation::inconclusive;
}

ConvergenceVerdict run_verdict(const VerdictConfig& cfg) {
    ConvergenceVerdict v;
    v.mode = cfg.mode;
    v.predicted = predict(cfg.profile, cfg.order, cfg.mode);
    Json stats;
    switch (cfg.mode) {
    case Mode::in_probability: {
        ProbabilityConfig pc;
        pc.profile = cfg.profile;
        pc.order = cfg.order;
        pc.checkpoints = cfg.checkpoints;
        pc.eps = cfg.prob_eps;
        pc.replicates = cfg.prob_replicates;
        pc.master_seed = cfg.master_seed;
        pc.stream = cfg.stream;
        pc.threads = cfg.threads;
        const ProbabilityResult r = in_probability_test(pc);
        v.observed = observe_probability(r, cfg.prob_replicates, cfg.small_exceedance);
        Json levels = Json::array();
        Json deviations = Json::array();
        for (const auto& p : r.points) {
            levels.push_back(checkpoint_json(p.at));
            deviations.push_back(p.exceedance);
        }
        stats["levels"] = std::move(levels);
        stats["deviations"] = std::move(deviations);
        stats["eps"] = cfg.prob_eps;
        stats["replicates"] = cfg.prob_replicates;
        stats["feller"] = feller_check(cfg.profile);
        stats["detail"] = to_json(r);
        break;
    }
    case Mode::almost_sure: {
        TrajectoryConfig tc;
        tc.profile = cfg.profile;
        tc.order = cfg.order;
        tc.log2_extent = cfg.log2_extent;
        tc.replicates = cfg.as_replicates;
        tc.eps = cfg.as_eps;
        tc.master_seed = cfg.master_seed;
        tc.stream = cfg.stream;
        tc.threads = cfg.threads;
        const TrajectoryResult r = trajectory_diagnostic(tc);
        v.observed = r.verdict;
        stats["levels"] = r.levels;
        stats["deviations"] = r.median_by_level;
        stats["eps"] = cfg.as_eps;
        stats["replicates"] = cfg.as_replicates;
        stats["log2_extent"] = cfg.log2_extent;
        stats["last_level_exceedance"] = r.last_level_exceedance;
        stats["median_nonincreasing"] = r.median_nonincreasing;
        stats["requirement"] = to_json(classify_moment_case_2d(cfg.order.alpha(), cfg.order.beta()).almost_sure);
        break;
    }
    case Mode::complete: {
        const SeriesGrowth g = complete_convergence_sum(cfg.profile, cfg.order, cfg.N, cfg.rule);
        v.observed = g.classification;
        stats["levels"] = Json::array({g.N, 2 * g.N, 4 * g.N});
        stats["deviations"] = Json::array({g.S_N, g.S_2N, g.S_4N});
        Json series;
        series["S_N"] = g.S_N;
        series["S_2N"] = g.S_2N;
        series["S_4N"] = g.S_4N;
        series["ratio"] = g.ratio;
        series["rel_increment"] = g.rel_increment;
        stats["series"] = std::move(series);
        stats["requirement"] = to_json(classify_moment_case_2d(cfg.order.alpha(), cfg.order.beta()).complete);
        break;
    }
    }
    v.statistics = std::move(stats);
    return v;
}

Json to_json(const ConvergenceVerdict& v) {
    Json j;
    j["mode"] = std::string(to_string(v.mode));
    j["predicted"] = v.predicted;
    j["observed"] = observed_flag(v.observed);
    j["observation"] = std::string(to_string(v.observed));
    j["concordant"] = v.concordant();
    j["statistics"] = v.statistics;
    return j;
}

// ---------------------------------------------------------------------------
// Matrix.

std::string_view to_string(MatrixScale s) { return s == MatrixScale::quick ? "quick" : "full"; }

MatrixScale parse_scale(std::string_view name) {
    if (name == "full") {
        return MatrixScale::full;
    }
    if (name == "quick") {
        return MatrixScale::quick;
    }
    throw std::invalid_argument("unknown scale '" + std::string(name) + "' (expected full or quick)");
}

std::vector<CesaroOrder> complete_regimes() {
    return {CesaroOrder::two_dim(0.3, 0.7), CesaroOrder::two_dim(0.3, 0.3), CesaroOrder::two_dim(0.5, 0.5),
            CesaroOrder::two_dim(0.5, 0.8), CesaroOrder::two_dim(0.7, 0.9)};
}

std::vector<CesaroOrder> order_matrix() {
    std::vector<CesaroOrder> orders = complete_regimes();
    for (auto [a, b] : {std::pair{0.4, 0.8}, {0.6, 0.6}, {0.75, 0.75}, {1.0, 1.0}}) {
        orders.push_back(CesaroOrder::two_dim(a, b));
    }
    return orders;
}

TailProfile just_finite(const MomentRequirement& req) { return TailProfile::pareto_log(req.r, req.s + 3.0); }

TailProfile just_infinite(const MomentRequirement& req) { return TailProfile::pareto_log(req.r, req.s); }

std::vector<StrongLawScenario> strong_law_scenarios() {
    std::vector<StrongLawScenario> out;
    for (const auto& o : order_matrix()) {
        char name[64];
        std::snprintf(name, sizeof name, "rademacher a=%g b=%g", o.alpha(), o.beta());
        out.push_back({name, TailProfile::rademacher(), o});
    }
    out.push_back({"gaussian a=0.5 b=0.5", TailProfile::gaussian(), CesaroOrder::two_dim(0.5, 0.5)});
    out.push_back({"pareto p=4 a=0.4 b=0.8", TailProfile::pareto_log(4.0), CesaroOrder::two_dim(0.4, 0.8)});
    out.push_back({"pareto p=2 a=0.4 b=0.8", TailProfile::pareto_log(2.0), CesaroOrder::two_dim(0.4, 0.8)});
    out.push_back(
        {"pareto p=1/0.6 q=0.5 a=b=0.6", TailProfile::pareto_log(1.0 / 0.6, 0.5), CesaroOrder::two_dim(0.6, 0.6)});
    return out;
}

Json run_weak_law_section(const MatrixConfig& config) {
    const ScaleParams sp = scale_params(config.scale);
    VerdictConfig vc;
    vc.mode = Mode::in_probability;
    vc.profile = TailProfile::pareto_log(1.0, 2.0);
    vc.order = CesaroOrder::two_dim(0.75, 0.75);
    vc.master_seed = config.master_seed;
    vc.stream = 1;
    vc.threads = config.threads;
    vc.checkpoints = sp.weak_checkpoints;
    vc.prob_eps = 0.25;
    vc.prob_replicates = sp.weak_replicates;
    const ConvergenceVerdict v = run_verdict(vc);

    Json j;
    j["profile"] = to_json(vc.profile);
    j["order"] = to_json(vc.order);
    j["mean_finite"] = moment_finite(vc.profile, 1.0, 0.0);
    j["verdict"] = to_json(v);

    // Truncated means of symmetric laws.
    Json centering = Json::array();
    bool all_zero = true;
    for (const TailProfile& prof : {TailProfile::pareto_log(1.0, 2.0), TailProfile::rademacher(),
                                    TailProfile::uniform_sym(), TailProfile::gaussian()}) {
        for (Checkpoint at : sp.weak_checkpoints) {
            const double mu_mn = truncated_expectation(prof, vc.order, at, TruncationMode::power_form);
            all_zero = all_zero && mu_mn == 0.0;
            Json e;
            e["profile"] = to_json(prof);
            e["checkpoint"] = checkpoint_json(at);
            e["mu_mn"] = mu_mn;
            centering.push_back(std::move(e));
        }
    }
    j["symmetric_centering"] = std::move(centering);
    j["mu_mn_all_zero"] = all_zero;
    j["decreasing"] = v.statistics.at("detail").at("decreasing");
    j["concordant"] = v.concordant();
    return j;
}

Json run_strong_law_section(const MatrixConfig& config) {
    const ScaleParams sp = scale_params(config.scale);
    const auto scenarios = strong_law_scenarios();
    Json out = Json::array();
    for (std::size_t i = 0; i < scenarios.size(); ++i) {
        VerdictConfig vc;
        vc.mode = Mode::almost_sure;
        vc.profile = scenarios[i].profile;
        vc.order = scenarios[i].order;
        vc.master_seed = config.master_seed;
        vc.stream = 100 + i;
        vc.threads = config.threads;
        vc.log2_extent = sp.log2_extent;
        vc.as_replicates = sp.as_replicates;
        const ConvergenceVerdict v = run_verdict(vc);
        Json e;
        e["name"] = scenarios[i].name;
        e["profile"] = to_json(vc.profile);
        e["order"] = to_json(vc.order);
        e["verdict"] = to_json(v);
        e["concordant"] = v.concordant();
        out.push_back(std::move(e));
    }
    return out;
}

Json run_complete_section(const MatrixConfig& config) {
    const ScaleParams sp = scale_params(config.scale);
    struct Cell {
        CesaroOrder order;
        MomentRequirement req;
        TailProfile profile;
        std::string side;
    };
    std::vector<Cell> cells;
    for (const auto& o : complete_regimes()) {
        const MomentRequirement req = classify_moment_case_2d(o.alpha(), o.beta()).complete;
        cells.push_back({o, req, just_finite(req), "just_finite"});
        cells.push_back({o, req, just_infinite(req), "just_infinite"});
    }
    std::vector<SeriesGrowth> growth(cells.size());
    parallel_for(cells.size(), config.threads, [&](std::size_t i) {
        growth[i] = complete_convergence_sum(cells[i].profile, cells[i].order, sp.complete_N);
    });
    Json out = Json::array();
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const bool predicted = moment_finite(cells[i].profile, cells[i].req.r, cells[i].req.s);
        Json e;
        e["order"] = to_json(cells[i].order);
        e["requirement"] = to_json(cells[i].req);
        e["side"] = cells[i].side;
        e["profile"] = to_json(cells[i].profile);
        e["predicted"] = predicted;
        e["series"] = to_json(growth[i]);
        e["concordant"] = growth[i].classification != Observation::inconclusive &&
                          predicted == (growth[i].classification == Observation::consistent);
        out.push_back(std::move(e));
    }
    return out;
}

Json run_appendix_section(const MatrixConfig& config) {
    const ScaleParams sp = scale_params(config.scale);
    Json gammas = Json::array();
    for (double g : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        const RegimeCase rc = regime_case(g);
        const double r4 = branch_ratio(g, 1e4);
        const double r6 = branch_ratio(g, 1e6);
        const double change = std::fabs(r6 - r4) / std::fabs(r6);
        Json e;
        e["gamma"] = g;
        e["regime"] = std::string(to_string(rc.regime));
        e["asymptotic_form"] = rc.asymptotic_form;
        e["ratio_1e4"] = r4;
        e["ratio_1e6"] = r6;
        e["relative_change"] = change;
        e["stable"] = change <= 0.02;
        gammas.push_back(std::move(e));
    }
    Json cases = Json::array();
    for (const auto& o : complete_regimes()) {
        const MomentRequirement req = classify_moment_case_2d(o.alpha(), o.beta()).complete;
        for (const TailProfile& prof : {just_finite(req), just_infinite(req)}) {
            cases.push_back(to_json(equivalence_check(prof, o, sp.equivalence_levels, {}, config.threads)));
        }
    }
    Json j;
    j["branch_ratios"] = std::move(gammas);
    j["equivalence"] = std::move(cases);
    return j;
}

Json run_matrix(const MatrixConfig& config, const SectionTimer& timer) {
    using Clock = std::chrono::steady_clock;
    Json report;
    report["generated_at"] = utc_timestamp();
    report["master_seed"] = config.master_seed;
    report["scale"] = std::string(to_string(config.scale));

    auto timed = [&](const char* name, auto&& fn) {
        const auto t0 = Clock::now();
        report[name] = fn(config);
        if (timer) {
            timer(name, std::chrono::duration<double>(Clock::now() - t0).count());
        }
    };
    timed("weak_law", run_weak_law_section);
    timed("strong_law", run_strong_law_section);
    timed("complete", run_complete_section);
    timed("appendix", run_appendix_section);

    const Json& weak = report["weak_law"];
    const Json& strong = report["strong_law"];
    const Json& complete = report["complete"];
    const Json& appendix = report["appendix"];
    Json summary;
    summary["weak_law_concordant"] = weak.at("concordant").get<bool>() && weak.at("mu_mn_all_zero").get<bool>();
    summary["strong_law_concordant"] = count_true(strong, "concordant");
    summary["strong_law_total"] = strong.size();
    summary["complete_concordant"] = count_true(complete, "concordant");
    summary["complete_total"] = complete.size();
    summary["branch_ratios_stable"] = count_true(appendix.at("branch_ratios"), "stable");
    summary["branch_ratios_total"] = appendix.at("branch_ratios").size();
    summary["equivalence_concordant"] = count_true(appendix.at("equivalence"), "concordant");
    summary["equivalence_total"] = appendix.at("equivalence").size();
    summary["all_concordant"] =
        summary["weak_law_concordant"].get<bool>() && count_true(strong, "concordant") == strong.size() &&
        count_true(complete, "concordant") == complete.size() &&
        count_true(appendix.at("branch_ratios"), "stable") == appendix.at("branch_ratios").size() &&
        count_true(appendix.at("equivalence"), "concordant") == appendix.at("equivalence").size();
    report["summary"] = std::move(summary);
    return report;
}

std::string canonical_dump(Json report) {
    report.erase("generated_at");
    return report.dump(2);
}

}  // namespace cesaro
