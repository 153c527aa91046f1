#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "frqd/experiment.hpp"

using namespace frqd;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

ExperimentConfig short_config() {
    ExperimentConfig c;
    c.graph_construct = {{10, 7}};
    c.attack_strategies = {"extreme-value", "falsified-relay"};
    c.attack_f = 1;
    c.horizon = 300;
    c.seeds.master = 12345;
    c.parallel = false;
    return c;
}

}  // namespace

TEST_CASE("config defaults and round trip") {
    const auto c = ExperimentConfig::from_json_text("{}");
    CHECK(c.mdp_n == 10);
    CHECK(c.graph_construct == std::make_pair(10, 7));
    CHECK(c.algorithm == Algorithm::frqd);
    CHECK(c.attack_f == 0);
    CHECK(c.horizon == 10000);
    CHECK(c.restart == RestartRule::exploring_starts);
    CHECK(c.seeds.master == 1);
    CHECK(c.assert_corruption_bound);
    CHECK(c.assert_soundness);
    CHECK(!c.assert_equivalence);

    const auto echoed = ExperimentConfig::from_json_text(c.to_json());
    CHECK(echoed.to_json() == c.to_json());

    const auto full = short_config();
    CHECK(ExperimentConfig::from_json_text(full.to_json()).to_json() == full.to_json());
}

TEST_CASE("config field errors carry the field path") {
    CHECK_THROWS_AS(ExperimentConfig::from_json_text("{not json"), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_json_text(R"({"algorithm":"nope"})"), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_json_text(R"({"horizon":0})"), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_json_text(R"({"restart":"sometimes"})"),
                    ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_json_text(R"({"attack":{"f":-1}})"), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_json_text(
                        R"({"graph":{"construct":{"n":10,"r":7},"path":"x"}})"),
                    ConfigError);
    CHECK_THROWS_AS(
        ExperimentConfig::from_json_text(R"({"attack":{"strategies":["martian"]}})"),
        ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_json_text(R"({"schedule":{"tau1":0.3}})"),
                    ConfigError);

    try {
        ExperimentConfig::from_json_text(R"({"algorithm":"nope"})");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("algorithm") != std::string::npos);
    }
}

TEST_CASE("config file loading with dotted overrides") {
    const fs::path dir = fs::path("test_experiment_work") / "cfg";
    fs::create_directories(dir);
    spit(dir / "c.json", R"({"attack":{"strategies":["extreme-value"],"f":1},"horizon":42})");

    auto c = ExperimentConfig::load((dir / "c.json").string());
    CHECK(c.horizon == 42);
    CHECK(c.attack_f == 1);

    c = ExperimentConfig::load((dir / "c.json").string(),
                               {"attack.strategy=none", "horizon=7", "seeds.master=99",
                                "algorithm=trim_baseline"});
    CHECK(c.attack_strategies == std::vector<std::string>{"none"});
    CHECK(c.horizon == 7);
    CHECK(c.seeds.master == 99);
    CHECK(c.algorithm == Algorithm::trim_baseline);

    CHECK_THROWS_AS(ExperimentConfig::load("no_such_file.json"), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::load((dir / "c.json").string(), {"horizon"}),
                    ConfigError);
}

TEST_CASE("short run produces a coherent report") {
    auto c = short_config();
    c.assert_equivalence = true;
    const auto r = run_experiment(c);
    CHECK(r.algorithm == "frqd");
    CHECK(r.steps == 300);
    CHECK(r.corruption_bound_violations == 0);
    CHECK(r.soundness_violations == 0);
    CHECK(r.equivalence_max_diff <= 1e-12);
    CHECK(r.final_q.size() == 10);
    CHECK(r.error_curve.back().t == 300);
    // log-spaced sampling grid is strictly increasing
    for (std::size_t i = 1; i < r.error_curve.size(); ++i)
        CHECK(r.error_curve[i].t > r.error_curve[i - 1].t);
    CHECK(r.traces.size() == 2);
    CHECK(r.traces[0].times.size() == r.traces[0].per_agent.size());

    // full JSON round trip
    const auto copy = RunReport::from_json(r.to_json());
    CHECK(copy.to_json() == r.to_json());
}

TEST_CASE("min visit target extends the run deterministically") {
    auto c = short_config();
    c.horizon = 100;
    c.min_visit_target = 2;
    c.max_horizon = 100000;
    const auto r = run_experiment(c);
    CHECK(r.min_visits >= 2);
    CHECK(r.steps >= 100);
    const auto r2 = run_experiment(c);
    CHECK(r2.steps == r.steps);
    CHECK(r2.final_q == r.final_q);
}

TEST_CASE("artifacts are byte identical across executions") {
    auto c = short_config();
    c.emit_trajectory_csv = true;
    c.emit_svg = true;

    const fs::path base = "test_experiment_work";
    c.output_dir = (base / "run").string();
    const char* names[] = {"report.json", "trajectory.csv", "error_curve.svg", "traces.svg"};

    run_experiment(c);
    std::vector<std::string> first;
    for (const char* name : names) first.push_back(slurp(base / "run" / name));
    run_experiment(c);
    for (std::size_t i = 0; i < std::size(names); ++i)
        CHECK(slurp(base / "run" / names[i]) == first[i]);

    const std::string csv = slurp(base / "run" / "trajectory.csv");
    CHECK(csv.rfind("t,x,u_i,u_j,agent,q_value,p_size\n", 0) == 0);
    // 300 steps x 10 agents + header
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3001);
}

TEST_CASE("comparison table") {
    auto c = short_config();
    c.horizon = 150;
    const auto frqd_report = run_experiment(c);
    c.algorithm = Algorithm::trim_baseline;
    const auto trim_report = run_experiment(c);

    const auto table = compare_reports({frqd_report, trim_report});
    CHECK(table.algorithms == std::vector<std::string>{"frqd", "trim_baseline"});
    // terminal state 7 has a full tie set and is excluded
    CHECK(table.states == std::vector<int>{1, 2, 3, 4, 5, 6});
    CHECK(table.to_csv().rfind("algorithm,", 0) == 0);
    CHECK(table.to_text().find("oracle") != std::string::npos);

    auto other = trim_report;
    other.mdp_fingerprint ^= 1;
    CHECK_THROWS_AS(compare_reports({frqd_report, other}), ConfigError);
}

TEST_CASE("graph and mdp size mismatch is a config error") {
    auto c = short_config();
    c.mdp_n = 9;
    CHECK_THROWS_AS(run_experiment(c), ConfigError);
}
