#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cesaro/report.hpp"
#include "cli.hpp"

using namespace cesaro;

namespace {

struct Result {
    int code = 0;
    std::string out;
    std::string err;
};

Result run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "cesaro");
    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("cesaro_cli_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) {
            cells.push_back(cell);
        }
        rows.push_back(cells);
    }
    return rows;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("weights table") {
    const auto r = run_cli({"weights", "--alpha", "1", "--n", "4", "--table"});
    CHECK(r.code == cli::kExitOk);
    const auto rows = csv_rows(r.out);
    REQUIRE(rows.size() == 6);
    CHECK(rows[0] == std::vector<std::string>{"k", "log_weight", "weight"});
    for (int k = 0; k <= 4; ++k) {
        CHECK(rows[k + 1][0] == std::to_string(k));
        CHECK(std::stod(rows[k + 1][1]) == doctest::Approx(std::log(k + 1.0)).epsilon(1e-15));
        CHECK(rows[k + 1][2] == std::to_string(k + 1));
    }
}

TEST_CASE("usage errors exit with 64") {
    CHECK(run_cli({}).code == cli::kExitUsage);
    CHECK(run_cli({"frobnicate"}).code == cli::kExitUsage);
    CHECK(run_cli({"weights", "--alpha", "1"}).code == cli::kExitUsage);
    CHECK(run_cli({"weights", "--alpha", "-3", "--n", "2"}).code == cli::kExitUsage);
    CHECK(run_cli({"sample", "--extent", "4by4"}).code == cli::kExitUsage);
    CHECK(run_cli({"sample", "--extent", "4x4", "--family", "cauchy"}).code == cli::kExitUsage);
    CHECK(run_cli({"mean2d", "--alpha", "0.9", "--beta", "0.5", "--extent", "8x8"}).code == cli::kExitUsage);
    CHECK(run_cli({"verdict", "--mode", "weak"}).code == cli::kExitUsage);
    CHECK(run_cli({"complete-sum", "--N", "8"}).code == cli::kExitUsage);
    CHECK(run_cli({"matrix", "--scale", "huge"}).code == cli::kExitUsage);
    const auto help = run_cli({"--help"});
    CHECK(help.code == cli::kExitOk);
    CHECK(help.out.find("appendix-verify") != std::string::npos);
}

TEST_CASE("sample and mean CSV outputs") {
    const auto s = run_cli({"sample", "--family", "gaussian", "--seed", "9", "--extent", "3x2"});
    CHECK(s.code == 0);
    std::istringstream lines(s.out);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "k,l,value");
    int rows = 0;
    while (std::getline(lines, line)) {
        ++rows;
    }
    CHECK(rows == 6);
    CHECK(run_cli({"sample", "--family", "gaussian", "--seed", "9", "--extent", "3x2"}).out == s.out);

    const auto m = run_cli({"mean2d", "--alpha", "0.5", "--beta", "0.8", "--extent", "9x9", "--checkpoints",
                            "8:8,4:2", "--family", "pareto_log", "--p", "3", "--mu", "1"});
    CHECK(m.code == 0);
    CHECK(m.out.rfind("m,n,mean,abs_dev_from_mu\n8,8,", 0) == 0);

    const auto one = run_cli({"mean1d", "--alpha", "1", "--n", "5", "--family", "uniform_sym"});
    CHECK(one.code == 0);
    CHECK(one.out.rfind("n,mean,abs_dev_from_mu\n0,", 0) == 0);
}

TEST_CASE("mean1d from a file") {
    const auto dir = scratch_dir("mean1d");
    {
        std::ofstream f(dir / "xs.txt");
        f << "1\n2\n3\n6\n";
    }
    const auto r = run_cli({"mean1d", "--alpha", "1", "--input", (dir / "xs.txt").string()});
    CHECK(r.code == 0);
    CHECK(r.out == "n,mean,abs_dev_from_mu\n0,1,1\n1,1.5,1.5\n2,2,2\n3,3,3\n");
}

TEST_CASE("config file values with flag override") {
    const auto dir = scratch_dir("config");
    {
        std::ofstream f(dir / "run.toml");
        f << "[weights]\nalpha = 2\nn = 3\ntable = true\n";
    }
    const auto from_file = run_cli({"--config", (dir / "run.toml").string(), "weights"});
    CHECK(from_file.code == 0);
    const auto rows = csv_rows(from_file.out);
    REQUIRE(rows.size() == 5);
    CHECK(rows[4][0] == "3");
    CHECK(rows[4][2] == "10");
    const auto overridden = run_cli({"--config", (dir / "run.toml").string(), "weights", "--n", "1"});
    CHECK(overridden.code == 0);
    const auto orows = csv_rows(overridden.out);
    REQUIRE(orows.size() == 3);
    CHECK(orows[2][2] == "3");
}

TEST_CASE("relative output paths use the output directory variable") {
    const auto dir = scratch_dir("outdir");
    ::setenv(cli::kOutDirEnv, dir.c_str(), 1);
    const auto r = run_cli({"weights", "--alpha", "0.5", "--n", "3", "--out", "sub/w.csv"});
    ::unsetenv(cli::kOutDirEnv);
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    CHECK(slurp(dir / "sub" / "w.csv").rfind("k,log_weight,weight\n3,", 0) == 0);
}

TEST_CASE("verdict JSON and exit codes") {
    const auto c = run_cli({"verdict", "--mode", "complete", "--alpha", "0.4", "--beta", "0.8", "--family",
                            "pareto_log", "--p", "4", "--N", "32"});
    CHECK(c.code == cli::kExitOk);
    const Json j = Json::parse(c.out);
    CHECK(j.at("predicted") == true);
    CHECK(j.at("observed") == true);
    CHECK(j.at("statistics").at("series").contains("S_N"));
    CHECK(j.at("statistics").at("series").contains("S_2N"));
    CHECK(j.at("statistics").at("series").contains("ratio"));
    CHECK(j.at("statistics").at("levels").size() == 3);

    const auto as = run_cli({"--threads", "2", "verdict", "--mode", "as", "--alpha", "0.75", "--beta", "0.75",
                             "--family", "rademacher", "--log2-extent", "8", "--master-seed", "3"});
    CHECK(as.code == cli::kExitOk);
    const Json ja = Json::parse(as.out);
    CHECK(ja.at("predicted") == true);
    CHECK(ja.at("observation") == "consistent");
    CHECK(ja.at("statistics").at("deviations").size() == ja.at("statistics").at("levels").size());
}

TEST_CASE("complete-sum CSV") {
    const auto r = run_cli({"complete-sum", "--alpha", "0.5", "--family", "pareto_log", "--p", "2", "--q", "0",
                            "--N", "16", "--format", "csv"});
    CHECK(r.code == cli::kExitOk);
    CHECK(r.out.rfind("N,S\n16,", 0) == 0);
}

TEST_CASE("quick matrix is reproducible across thread counts") {
    const auto one = run_cli({"--threads", "1", "matrix", "--scale", "quick", "--master-seed", "11"});
    const auto four = run_cli({"--threads", "4", "matrix", "--scale", "quick", "--master-seed", "11"});
    REQUIRE(one.out.size() > 100);
    const Json a = Json::parse(one.out);
    const Json b = Json::parse(four.out);
    CHECK(a.contains("generated_at"));
    CHECK(canonical_dump(a) == canonical_dump(b));
    CHECK(canonical_dump(a).find("generated_at") == std::string::npos);
    CHECK(a.at("strong_law").size() == 13);
    CHECK(a.at("complete").size() == 10);
    CHECK(a.at("appendix").at("equivalence").size() == 10);
}

TEST_CASE("profile serialization") {
    for (const auto& pr : {TailProfile::pareto_log(1.5, 2.0, -0.5, 4.0), TailProfile::gaussian(2.0),
                           TailProfile::rademacher(), TailProfile::uniform_sym(1.0)}) {
        CHECK(profile_from_json(Json::parse(to_json(pr).dump())) == pr);
    }
    CHECK(profile_from_json(Json::parse(R"({"family": "pareto_log", "p": 3})")) == TailProfile::pareto_log(3.0));
    CHECK_THROWS(profile_from_json(Json::parse(R"({"family": "cauchy"})")));
}

TEST_CASE("weak-law observation rule") {
    ProbabilityResult r;
    r.points.resize(3);
    r.points[0].exceedance = 0.5;
    r.points[1].exceedance = 0.3;
    r.points[2].exceedance = 0.2;
    r.decreasing = true;
    CHECK(observe_probability(r, 400, 0.05) == Observation::consistent);
    r.points[2].exceedance = 0.04;
    r.decreasing = false;
    CHECK(observe_probability(r, 400, 0.05) == Observation::consistent);
    r.points[2].exceedance = 0.52;
    CHECK(observe_probability(r, 400, 0.05) == Observation::divergent);
    r.points[2].exceedance = 0.45;
    CHECK(observe_probability(r, 400, 0.05) == Observation::inconclusive);

    ConvergenceVerdict v;
    v.predicted = true;
    v.observed = Observation::consistent;
    CHECK(v.concordant());
    v.observed = Observation::divergent;
    CHECK_FALSE(v.concordant());
    v.observed = Observation::inconclusive;
    CHECK_FALSE(v.concordant());
    CHECK(to_json(v).at("observed").is_null());
}
