#include "frqd/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

namespace frqd {

using nlohmann::json;
using nlohmann::ordered_json;

Algorithm parse_algorithm(const std::string& name) {
    if (name == "frqd") return Algorithm::frqd;
    if (name == "qd") return Algorithm::qd;
    if (name == "trim_baseline") return Algorithm::trim_baseline;
    if (name == "laplacian_reference") return Algorithm::laplacian_reference;
    throw ConfigError("algorithm: unknown value '" + name + "'");
}

std::string algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::frqd: return "frqd";
        case Algorithm::qd: return "qd";
        case Algorithm::trim_baseline: return "trim_baseline";
        case Algorithm::laplacian_reference: return "laplacian_reference";
    }
    return "frqd";
}

std::uint64_t SeedSet::costs_seed() const {
    return costs ? *costs : derive_stream_seed(master, "costs");
}
std::uint64_t SeedSet::attack_seed() const {
    return attack ? *attack : derive_stream_seed(master, "attack");
}
std::uint64_t SeedSet::init_seed() const {
    return init ? *init : derive_stream_seed(master, "init");
}
std::uint64_t SeedSet::trajectory_seed() const {
    return trajectory ? *trajectory : derive_stream_seed(master, "trajectory");
}

ScheduleParams ExperimentConfig::schedule_params() const {
    if (sched_tau2) {
        ScheduleParams p;
        p.a = sched_a;
        p.b = sched_b;
        p.tau1 = sched_tau1;
        p.tau2 = *sched_tau2;
        p.eps1 = sched_eps1;
        p.validate();
        return p;
    }
    return ScheduleParams::from_epsilons(sched_a, sched_b, sched_tau1, sched_eps1, sched_eps2);
}

namespace {

template <typename F>
auto config_field(const char* path, F&& f) {
    try {
        return f();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config field '") + path + "': " + e.what());
    }
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    ExperimentConfig c;

    if (j.contains("mdp")) {
        const auto& m = j["mdp"];
        if (m.contains("path")) {
            c.mdp_kind = "file";
            c.mdp_path = m["path"].get<std::string>();
        } else {
            c.mdp_kind = m.value("kind", std::string("task_assignment"));
            if (c.mdp_kind != "task_assignment")
                throw ConfigError("mdp.kind: unknown value '" + c.mdp_kind + "'");
            c.mdp_n = m.value("n", 10);
            if (c.mdp_n < 2) throw ConfigError("mdp.n: must be >= 2");
        }
    }

    if (j.contains("graph")) {
        const auto& g = j["graph"];
        int sources = 0;
        if (g.contains("construct")) {
            ++sources;
            c.graph_construct = {g["construct"].at("n").get<int>(),
                                 g["construct"].at("r").get<int>()};
        }
        if (g.contains("path")) {
            ++sources;
            c.graph_path = g["path"].get<std::string>();
        }
        if (g.contains("schedule")) {
            ++sources;
            c.graph_schedule = g["schedule"].get<std::vector<std::string>>();
            if (c.graph_schedule.empty()) throw ConfigError("graph.schedule: empty list");
        }
        if (sources != 1)
            throw ConfigError("graph: give exactly one of construct / path / schedule");
    } else {
        c.graph_construct = {10, 7};
    }

    c.algorithm = config_field("algorithm", [&] {
        return parse_algorithm(j.value("algorithm", std::string("frqd")));
    });

    if (j.contains("attack")) {
        const auto& a = j["attack"];
        // "strategy" (the documented --set knob) wins over a base-config
        // "strategies" list, so overrides replace rather than coexist.
        if (a.contains("strategy")) {
            if (a["strategy"].is_array())
                c.attack_strategies = a["strategy"].get<std::vector<std::string>>();
            else
                c.attack_strategies = {a["strategy"].get<std::string>()};
        } else if (a.contains("strategies")) {
            c.attack_strategies = a["strategies"].get<std::vector<std::string>>();
        }
        c.attack_f = a.value("f", 0);
        if (c.attack_f < 0) throw ConfigError("attack.f: must be >= 0");
        config_field("attack.strategies", [&] {
            for (const auto& s : c.attack_strategies) parse_strategy(s);
            return 0;
        });
    }

    if (j.contains("schedule")) {
        const auto& s = j["schedule"];
        c.sched_a = s.value("a", c.sched_a);
        c.sched_b = s.value("b", c.sched_b);
        c.sched_tau1 = s.value("tau1", c.sched_tau1);
        c.sched_eps1 = s.value("eps1", c.sched_eps1);
        c.sched_eps2 = s.value("eps2", c.sched_eps2);
        if (s.contains("tau2")) c.sched_tau2 = s["tau2"].get<double>();
    }
    config_field("schedule", [&] {
        c.schedule_params();
        return 0;
    });

    c.horizon = j.value("horizon", c.horizon);
    if (c.horizon < 1) throw ConfigError("horizon: must be >= 1");
    c.min_visit_target = j.value("min_visit_target", c.min_visit_target);
    c.max_horizon = j.value("max_horizon", c.max_horizon);

    const std::string restart = j.value("restart", std::string("exploring"));
    if (restart == "exploring")
        c.restart = RestartRule::exploring_starts;
    else if (restart == "initial")
        c.restart = RestartRule::initial_state;
    else
        throw ConfigError("restart: expected 'exploring' or 'initial'");

    if (j.contains("seeds")) {
        const auto& s = j["seeds"];
        c.seeds.master = s.value("master", c.seeds.master);
        if (s.contains("costs")) c.seeds.costs = s["costs"].get<std::uint64_t>();
        if (s.contains("attack")) c.seeds.attack = s["attack"].get<std::uint64_t>();
        if (s.contains("init")) c.seeds.init = s["init"].get<std::uint64_t>();
        if (s.contains("trajectory")) c.seeds.trajectory = s["trajectory"].get<std::uint64_t>();
    }

    if (j.contains("outputs")) {
        const auto& o = j["outputs"];
        c.output_dir = o.value("dir", std::string());
        c.emit_report = o.value("report", true);
        c.emit_trajectory_csv = o.value("trajectory_csv", false);
        c.emit_svg = o.value("svg", false);
    }

    if (j.contains("assertions")) {
        c.assert_corruption_bound = c.assert_soundness = c.assert_symmetry = c.assert_equivalence = false;
        for (const auto& name : j["assertions"]) {
            const std::string s = name.get<std::string>();
            if (s == "corruption_bound")
                c.assert_corruption_bound = true;
            else if (s == "filter_soundness")
                c.assert_soundness = true;
            else if (s == "filter_symmetry")
                c.assert_symmetry = true;
            else if (s == "equivalence_check")
                c.assert_equivalence = true;
            else
                throw ConfigError("assertions: unknown assertion '" + s + "'");
        }
    }
    c.abort_on_violation = j.value("abort_on_violation", true);
    c.parallel = j.value("parallel", true);

    if (j.contains("trace_pairs")) {
        c.trace_pairs.clear();
        for (const auto& p : j["trace_pairs"])
            c.trace_pairs.push_back({p.at(0).get<int>(), p.at(1).get<int>(), p.at(2).get<int>()});
    }

    return c;
}

std::string ExperimentConfig::to_json() const {
    ordered_json j;
    if (mdp_kind == "file")
        j["mdp"] = {{"path", mdp_path}};
    else
        j["mdp"] = {{"kind", mdp_kind}, {"n", mdp_n}};
    if (graph_construct)
        j["graph"] = {{"construct", {{"n", graph_construct->first}, {"r", graph_construct->second}}}};
    else if (!graph_schedule.empty())
        j["graph"] = {{"schedule", graph_schedule}};
    else
        j["graph"] = {{"path", graph_path}};
    j["algorithm"] = algorithm_name(algorithm);
    j["attack"] = {{"strategies", attack_strategies}, {"f", attack_f}};
    ordered_json sched = {{"a", sched_a}, {"b", sched_b}, {"tau1", sched_tau1},
                          {"eps1", sched_eps1}, {"eps2", sched_eps2}};
    if (sched_tau2) sched["tau2"] = *sched_tau2;
    j["schedule"] = std::move(sched);
    j["horizon"] = horizon;
    j["min_visit_target"] = min_visit_target;
    j["max_horizon"] = max_horizon;
    j["restart"] = restart == RestartRule::exploring_starts ? "exploring" : "initial";
    ordered_json seeds = {{"master", this->seeds.master}};
    if (this->seeds.costs) seeds["costs"] = *this->seeds.costs;
    if (this->seeds.attack) seeds["attack"] = *this->seeds.attack;
    if (this->seeds.init) seeds["init"] = *this->seeds.init;
    if (this->seeds.trajectory) seeds["trajectory"] = *this->seeds.trajectory;
    j["seeds"] = std::move(seeds);
    j["outputs"] = {{"dir", output_dir},
                    {"report", emit_report},
                    {"trajectory_csv", emit_trajectory_csv},
                    {"svg", emit_svg}};
    std::vector<std::string> asserts;
    if (assert_corruption_bound) asserts.push_back("corruption_bound");
    if (assert_soundness) asserts.push_back("filter_soundness");
    if (assert_symmetry) asserts.push_back("filter_symmetry");
    if (assert_equivalence) asserts.push_back("equivalence_check");
    j["assertions"] = asserts;
    j["abort_on_violation"] = abort_on_violation;
    j["parallel"] = parallel;
    auto pairs = ordered_json::array();
    for (const auto& p : trace_pairs) pairs.push_back({p.state, p.ui, p.uj});
    j["trace_pairs"] = std::move(pairs);
    return j.dump(2);
}

ExperimentConfig ExperimentConfig::load(const std::string& path,
                                        const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    json j;
    try {
        j = json::parse(buf.str());
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    for (const auto& ov : overrides) {
        auto eq = ov.find('=');
        if (eq == std::string::npos)
            throw ConfigError("override '" + ov + "': expected key=value");
        std::string key = ov.substr(0, eq), value = ov.substr(eq + 1);
        std::string pointer = "/";
        for (char ch : key) pointer += ch == '.' ? '/' : ch;
        json parsed;
        try {
            parsed = json::parse(value);
        } catch (...) {
            parsed = value;  // bare strings allowed
        }
        j[json::json_pointer(pointer)] = parsed;
    }
    return from_json_text(j.dump());
}

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct GraphSchedule {
    std::vector<Graph> graphs;
    const Graph& at(long t) const { return graphs[t % graphs.size()]; }
};

GraphSchedule build_graphs(const ExperimentConfig& c) {
    GraphSchedule gs;
    if (c.graph_construct) {
        gs.graphs.push_back(construct_redundant(c.graph_construct->first,
                                                c.graph_construct->second));
    } else if (!c.graph_schedule.empty()) {
        for (const auto& p : c.graph_schedule) gs.graphs.push_back(load_edge_list(p));
    } else {
        gs.graphs.push_back(load_edge_list(c.graph_path));
    }
    return gs;
}

MdpModel build_model(const ExperimentConfig& c) {
    if (c.mdp_kind == "file") {
        std::ifstream in(c.mdp_path);
        if (!in) throw ConfigError("cannot open mdp file: " + c.mdp_path);
        std::stringstream buf;
        buf << in.rdbuf();
        return MdpModel::from_json(buf.str());
    }
    return build_task_assignment_mdp(c.mdp_n, c.seeds.costs_seed());
}

std::unique_ptr<AgentEngine> make_engine(Algorithm a, const MdpModel* model,
                                         const ScheduleParams& params, int f,
                                         const EngineOptions& opts) {
    switch (a) {
        case Algorithm::frqd: return std::make_unique<FrqdEngine>(model, params, f, opts);
        case Algorithm::qd: return std::make_unique<PlainQdEngine>(model, params, opts);
        case Algorithm::trim_baseline:
            return std::make_unique<TrimBaselineEngine>(model, params, f, opts);
        case Algorithm::laplacian_reference:
            return std::make_unique<LaplacianReferenceEngine>(model, params, f, opts);
    }
    throw ConfigError("algorithm: unreachable");
}

double error_to_oracle(const AgentEngine& engine, const MdpModel& model,
                       const OptimalSolution& oracle) {
    double worst = 0.0;
    for (int i = 0; i < engine.num_agents(); ++i)
        for (int s = 0; s < model.num_states(); ++s) {
            if (model.is_terminal(s)) continue;
            for (int u = 0; u < model.num_actions(); ++u)
                worst = std::max(worst,
                                 std::abs(engine.q_value(i, s, u) - oracle.q_star[s][u]));
        }
    return worst;
}

std::vector<std::vector<double>> tables_by_state(const AgentEngine& engine,
                                                 const MdpModel& model, int agent) {
    std::vector out(model.num_states(), std::vector<double>(model.num_actions()));
    for (int s = 0; s < model.num_states(); ++s)
        for (int u = 0; u < model.num_actions(); ++u) out[s][u] = engine.q_value(agent, s, u);
    return out;
}

constexpr long kVisitCheckpoints[] = {30, 100, 300};

}  // namespace

RunReport run_experiment(const ExperimentConfig& config) {
    const auto t_start = std::chrono::steady_clock::now();

    const MdpModel model = build_model(config);
    const GraphSchedule graphs = build_graphs(config);
    for (const auto& g : graphs.graphs)
        if (g.n() != model.num_agents())
            throw ConfigError("graph: node count does not match the MDP agent count");

    const ScheduleParams params = config.schedule_params();
    const OptimalSolution oracle = value_iteration(model, 1e-10);

    std::vector<AttackStrategy> strategies;
    for (const auto& s : config.attack_strategies) strategies.push_back(parse_strategy(s));
    const AttackPlan plan(strategies, config.attack_f, config.seeds.attack_seed());

    EngineOptions opts;
    opts.parallel = config.parallel;
    opts.track_symmetry = config.assert_symmetry;
    auto engine = make_engine(config.algorithm, &model, params, config.attack_f, opts);

    Rng init_rng(config.seeds.init_seed());
    engine->init_q_random(model.num_agents(), init_rng);

    // Lockstep matrix-form reference for the equivalence check.
    std::unique_ptr<AgentEngine> reference;
    if (config.assert_equivalence && config.algorithm == Algorithm::frqd) {
        EngineOptions ref_opts;
        ref_opts.parallel = false;  // serial reference
        reference = std::make_unique<LaplacianReferenceEngine>(&model, params,
                                                               config.attack_f, ref_opts);
        std::vector<std::vector<double>> q0;
        for (int i = 0; i < model.num_agents(); ++i) q0.push_back(engine->q_table(i));
        reference->init_q_copy(q0);
    }

    Rng traj_rng(config.seeds.trajectory_seed());
    TrajectoryState traj;
    if (config.restart == RestartRule::exploring_starts) {
        // First episode also starts exploring, from the same stream.
        std::vector<int> starts;
        for (int s = 0; s < model.num_states(); ++s)
            if (!model.is_terminal(s)) starts.push_back(s);
        traj.current_state = starts[traj_rng.uniform_index(starts.size())];
    }

    RunReport report;
    report.algorithm = algorithm_name(config.algorithm);
    report.mdp_fingerprint = model.fingerprint();
    report.oracle = oracle;
    report.actions = model.actions();
    report.config_json = config.to_json();

    for (const auto& tp : config.trace_pairs) {
        TraceSeries series;
        series.state = tp.state;
        series.ui = tp.ui;
        series.uj = tp.uj;
        report.traces.push_back(series);
    }
    auto action_index = [&](int ui, int uj) {
        for (int u = 0; u < model.num_actions(); ++u)
            if (model.action(u) == std::make_pair(ui, uj)) return u;
        throw ConfigError("trace_pairs: action pair not in the action set");
    };

    std::ofstream csv;
    if (!config.output_dir.empty()) std::filesystem::create_directories(config.output_dir);
    if (config.emit_trajectory_csv && !config.output_dir.empty()) {
        csv.open(config.output_dir + "/trajectory.csv");
        csv << "t,x,u_i,u_j,agent,q_value,p_size\n";
    }

    const long cap = config.min_visit_target > 0
                         ? (config.max_horizon > 0 ? config.max_horizon : 20 * config.horizon)
                         : config.horizon;

    long next_curve_sample = 1;
    std::size_t checkpoint_idx = 0;
    StepDiagnostics diag;
    const bool need_diag = config.assert_corruption_bound || config.assert_soundness ||
                           config.assert_symmetry || csv.is_open();

    long t = 0;
    for (; t < cap; ++t) {
        const Graph& g = graphs.at(t);
        const EnvSample sample = step(model, traj, config.restart, traj_rng);

        diag = StepDiagnostics{};
        engine->step(g, plan, sample, t, need_diag ? &diag : nullptr);
        report.corruption_bound_violations += diag.corruption_bound_violations;
        report.soundness_violations += diag.soundness_violations;
        report.symmetry_violations += diag.symmetry_violations;
        report.multi_value_violations += diag.multi_value_violations;
        report.baseline_skipped_agents += diag.baseline_skipped_agents;

        if (config.abort_on_violation &&
            (diag.corruption_bound_violations || diag.soundness_violations || diag.symmetry_violations ||
             diag.multi_value_violations)) {
            throw InvariantViolation("runtime invariant violated at step " + std::to_string(t) +
                                     " (corrupted=" + std::to_string(diag.corruption_bound_violations) +
                                     " soundness=" + std::to_string(diag.soundness_violations) +
                                     " symmetry=" + std::to_string(diag.symmetry_violations) +
                                     ")");
        }

        if (reference) {
            reference->step(g, plan, sample, t, nullptr);
            double diff = 0.0;
            for (int i = 0; i < model.num_agents(); ++i)
                diff = std::max(diff, std::abs(engine->q_value(i, sample.x, sample.u) -
                                               reference->q_value(i, sample.x, sample.u)));
            report.equivalence_max_diff = std::max(report.equivalence_max_diff, diff);
        }

        if (csv.is_open()) {
            for (int i = 0; i < model.num_agents(); ++i) {
                const auto [ui, uj] = model.action(sample.u);
                csv << t << ',' << sample.x + 1 << ',' << ui << ',' << uj << ',' << i << ','
                    << fmt_double(engine->q_value(i, sample.x, sample.u)) << ','
                    << (i < static_cast<int>(diag.validated_sizes.size())
                            ? diag.validated_sizes[i]
                            : 0)
                    << '\n';
            }
        }

        const long now = t + 1;
        const long min_visits = engine->min_nonterminal_visits();
        if (now == next_curve_sample || now == cap) {
            report.error_curve.push_back({now, min_visits, error_to_oracle(*engine, model, oracle)});
            for (std::size_t p = 0; p < report.traces.size(); ++p) {
                auto& series = report.traces[p];
                const int s = config.trace_pairs[p].state - 1;
                const int u = action_index(config.trace_pairs[p].ui, config.trace_pairs[p].uj);
                series.times.push_back(now);
                std::vector<double> vals(model.num_agents());
                for (int i = 0; i < model.num_agents(); ++i)
                    vals[i] = engine->q_value(i, s, u);
                series.per_agent.push_back(std::move(vals));
            }
            while (next_curve_sample <= now)
                next_curve_sample = std::max(next_curve_sample + 1, next_curve_sample * 5 / 4);
        }
        while (checkpoint_idx < std::size(kVisitCheckpoints) &&
               min_visits >= kVisitCheckpoints[checkpoint_idx]) {
            report.visit_checkpoints.emplace_back(kVisitCheckpoints[checkpoint_idx],
                                                  error_to_oracle(*engine, model, oracle));
            ++checkpoint_idx;
        }

        if (config.min_visit_target > 0 && now >= config.horizon &&
            min_visits >= config.min_visit_target)
            break;
        if (config.min_visit_target == 0 && now >= config.horizon) break;
    }
    report.steps = std::min(t + 1, cap);
    report.min_visits = engine->min_nonterminal_visits();

    for (std::size_t p = 0; p < report.traces.size(); ++p) {
        const int s = config.trace_pairs[p].state - 1;
        const int u = action_index(config.trace_pairs[p].ui, config.trace_pairs[p].uj);
        report.traces[p].oracle_value.push_back(oracle.q_star[s][u]);
    }

    for (int i = 0; i < model.num_agents(); ++i) {
        report.final_q.push_back(engine->q_table(i));
        report.greedy.push_back(greedy_policy(model, tables_by_state(*engine, model, i)));
    }

    report.policy_match.assign(model.num_states(), true);
    for (int s = 0; s < model.num_states(); ++s) {
        if (model.is_terminal(s)) continue;
        for (int i = 0; i < model.num_agents() && report.policy_match[s]; ++i) {
            bool hit = false;
            for (int u : oracle.pi_star[s])
                if (std::find(report.greedy[i][s].begin(), report.greedy[i][s].end(), u) !=
                    report.greedy[i][s].end()) {
                    hit = true;
                    break;
                }
            if (!hit) report.policy_match[s] = false;
        }
    }

    const auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                                       t_start).count();
    // Timing goes to the console only; artifacts stay byte-reproducible.
    std::cerr << "[" << report.algorithm << "] " << report.steps << " steps in "
              << elapsed << " s, min visits " << report.min_visits << "\n";

    if (!config.output_dir.empty()) {
        if (config.emit_report) {
            std::ofstream out(config.output_dir + "/report.json");
            out << report.to_json() << "\n";
        }
        if (config.emit_svg) {
            write_error_curve_svg(report, config.output_dir + "/error_curve.svg");
            write_traces_svg(report, config.output_dir + "/traces.svg");
        }
    }
    return report;
}

std::string RunReport::to_json() const {
    ordered_json j;
    j["algorithm"] = algorithm;
    j["mdp_fingerprint"] = mdp_fingerprint;
    j["steps"] = steps;
    j["min_visits"] = min_visits;
    auto acts = ordered_json::array();
    for (auto [a, b] : actions) acts.push_back({a, b});
    j["actions"] = std::move(acts);
    j["oracle"] = {{"q_star", oracle.q_star}, {"v_star", oracle.v_star},
                   {"pi_star", oracle.pi_star}};
    j["final_q"] = final_q;
    j["greedy"] = greedy;
    j["policy_match"] = policy_match;
    auto curve = ordered_json::array();
    for (const auto& c : error_curve)
        curve.push_back({{"t", c.t}, {"min_visits", c.min_visits}, {"max_err", c.max_err}});
    j["error_curve"] = std::move(curve);
    auto cps = ordered_json::array();
    for (const auto& [v, e] : visit_checkpoints)
        cps.push_back({{"visits", v}, {"max_err", e}});
    j["visit_checkpoints"] = std::move(cps);
    auto traces_j = ordered_json::array();
    for (const auto& tr : traces) {
        ordered_json entry = {{"state", tr.state}, {"u_i", tr.ui}, {"u_j", tr.uj},
                              {"times", tr.times}, {"per_agent", tr.per_agent},
                              {"oracle_value", tr.oracle_value}};
        traces_j.push_back(std::move(entry));
    }
    j["traces"] = std::move(traces_j);
    j["violations"] = {{"corruption_bound", corruption_bound_violations},
                       {"filter_soundness", soundness_violations},
                       {"filter_symmetry", symmetry_violations},
                       {"multi_value", multi_value_violations}};
    j["baseline_skipped_agents"] = baseline_skipped_agents;
    j["equivalence_max_diff"] = equivalence_max_diff;
    j["config"] = json::parse(config_json);
    return j.dump(2);
}

RunReport RunReport::from_json(const std::string& text) {
    const auto j = json::parse(text);
    RunReport r;
    r.algorithm = j.at("algorithm");
    r.mdp_fingerprint = j.at("mdp_fingerprint");
    r.steps = j.at("steps");
    r.min_visits = j.at("min_visits");
    for (const auto& a : j.at("actions")) r.actions.emplace_back(a.at(0), a.at(1));
    r.oracle.q_star = j.at("oracle").at("q_star").get<std::vector<std::vector<double>>>();
    r.oracle.v_star = j.at("oracle").at("v_star").get<std::vector<double>>();
    r.oracle.pi_star = j.at("oracle").at("pi_star").get<std::vector<std::vector<int>>>();
    r.final_q = j.at("final_q").get<std::vector<std::vector<double>>>();
    r.greedy = j.at("greedy").get<std::vector<std::vector<std::vector<int>>>>();
    r.policy_match = j.at("policy_match").get<std::vector<bool>>();
    for (const auto& c : j.at("error_curve"))
        r.error_curve.push_back({c.at("t"), c.at("min_visits"), c.at("max_err")});
    for (const auto& c : j.at("visit_checkpoints"))
        r.visit_checkpoints.emplace_back(c.at("visits"), c.at("max_err"));
    for (const auto& tr : j.at("traces")) {
        TraceSeries series;
        series.state = tr.at("state");
        series.ui = tr.at("u_i");
        series.uj = tr.at("u_j");
        series.times = tr.at("times").get<std::vector<long>>();
        series.per_agent = tr.at("per_agent").get<std::vector<std::vector<double>>>();
        series.oracle_value = tr.at("oracle_value").get<std::vector<double>>();
        r.traces.push_back(std::move(series));
    }
    r.corruption_bound_violations = j.at("violations").at("corruption_bound");
    r.soundness_violations = j.at("violations").at("filter_soundness");
    r.symmetry_violations = j.at("violations").at("filter_symmetry");
    r.multi_value_violations = j.at("violations").at("multi_value");
    r.baseline_skipped_agents = j.at("baseline_skipped_agents");
    r.equivalence_max_diff = j.at("equivalence_max_diff");
    r.config_json = j.at("config").dump();
    return r;
}

ComparisonTable compare_reports(const std::vector<RunReport>& reports) {
    if (reports.empty()) throw ConfigError("compare: no reports given");
    for (const auto& r : reports)
        if (r.mdp_fingerprint != reports.front().mdp_fingerprint)
            throw ConfigError("compare: reports come from different MDP instances "
                              "(mismatched fingerprints); refusing to merge");

    const auto& base = reports.front();
    ComparisonTable table;
    const int num_states = static_cast<int>(base.oracle.pi_star.size());

    auto pair_name = [&](const RunReport& r, int u) {
        const auto [a, b] = r.actions[u];
        return "(" + std::to_string(a) + "," + std::to_string(b) + ")";
    };

    // States whose oracle value is nonzero or that have a nonempty policy;
    // terminal states (everything optimal, full tie set) are skipped.
    for (int s = 0; s < num_states; ++s)
        if (static_cast<int>(base.oracle.pi_star[s].size()) <
            static_cast<int>(base.actions.size()))
            table.states.push_back(s + 1);

    for (int s : table.states)
        table.oracle_cells.push_back(pair_name(base, base.oracle.pi_star[s - 1].front()));

    for (const auto& r : reports) {
        table.algorithms.push_back(r.algorithm);
        std::vector<std::string> row;
        std::vector<bool> agree_row;
        for (int s : table.states) {
            const int s0 = s - 1;
            // Representative: each agent's first greedy action.
            bool all_same = true;
            int rep = r.greedy.at(0)[s0].empty() ? -1 : r.greedy[0][s0].front();
            bool all_agree = true;
            for (const auto& agent_policy : r.greedy) {
                const auto& set = agent_policy[s0];
                if (set.empty() || set.front() != rep) all_same = false;
                bool hit = false;
                for (int u : r.oracle.pi_star[s0])
                    if (std::find(set.begin(), set.end(), u) != set.end()) hit = true;
                if (!hit) all_agree = false;
            }
            row.push_back(all_same && rep >= 0 ? pair_name(r, rep) : std::string("mixed"));
            agree_row.push_back(all_agree);
        }
        table.cells.push_back(std::move(row));
        table.agrees.push_back(std::move(agree_row));
    }
    return table;
}

std::string ComparisonTable::to_text() const {
    std::ostringstream os;
    os << "state      ";
    for (int s : states) os << "x=" << s << "      ";
    os << "\noracle     ";
    for (const auto& c : oracle_cells) os << c << "    ";
    os << "\n";
    for (std::size_t a = 0; a < algorithms.size(); ++a) {
        os << algorithms[a];
        for (std::size_t pad = algorithms[a].size(); pad < 11; ++pad) os << ' ';
        for (std::size_t s = 0; s < states.size(); ++s)
            os << cells[a][s] << (agrees[a][s] ? "*" : " ") << "   ";
        os << "\n";
    }
    os << "(* = every agent's greedy set contains an oracle-optimal action)\n";
    return os.str();
}

std::string ComparisonTable::to_csv() const {
    std::ostringstream os;
    os << "algorithm";
    for (int s : states) os << ",x=" << s << ",agrees_x=" << s;
    os << "\noracle";
    for (std::size_t s = 0; s < states.size(); ++s) os << "," << oracle_cells[s] << ",1";
    os << "\n";
    for (std::size_t a = 0; a < algorithms.size(); ++a) {
        os << algorithms[a];
        for (std::size_t s = 0; s < states.size(); ++s)
            os << "," << cells[a][s] << "," << (agrees[a][s] ? 1 : 0);
        os << "\n";
    }
    return os.str();
}

namespace {

struct SvgCanvas {
    std::ostringstream body;
    double width = 760, height = 460;
    double ml = 70, mr = 20, mt = 20, mb = 50;

    double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    bool log_x = false;

    double px(double x) const {
        const double lo = log_x ? std::log10(std::max(x0, 1.0)) : x0;
        const double hi = log_x ? std::log10(std::max(x1, 10.0)) : x1;
        const double v = log_x ? std::log10(std::max(x, 1.0)) : x;
        return ml + (v - lo) / (hi - lo) * (width - ml - mr);
    }
    double py(double y) const {
        return height - mb - (y - y0) / (y1 - y0) * (height - mt - mb);
    }

    void polyline(const std::vector<double>& xs, const std::vector<double>& ys,
                  const std::string& color, const std::string& dash = "") {
        body << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.2\"";
        if (!dash.empty()) body << " stroke-dasharray=\"" << dash << "\"";
        body << " points=\"";
        for (std::size_t i = 0; i < xs.size(); ++i)
            body << px(xs[i]) << "," << py(ys[i]) << " ";
        body << "\"/>\n";
    }

    void text(double x, double y, const std::string& s, int size = 12) {
        body << "<text x=\"" << x << "\" y=\"" << y << "\" font-size=\"" << size
             << "\" font-family=\"sans-serif\">" << s << "</text>\n";
    }

    void axes(const std::string& xlabel, const std::string& ylabel) {
        body << "<line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\"" << width - mr
             << "\" y2=\"" << height - mb << "\" stroke=\"black\"/>\n";
        body << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
             << height - mb << "\" stroke=\"black\"/>\n";
        text(width / 2 - 20, height - 12, xlabel);
        text(8, mt + 10, ylabel);
        text(ml - 45, py(y0) + 4, fmt_double(y0).substr(0, 8));
        text(ml - 45, py(y1) + 4, fmt_double(y1).substr(0, 8));
        text(px(x0) - 5, height - mb + 16, fmt_double(x0).substr(0, 8));
        text(px(x1) - 30, height - mb + 16, fmt_double(x1).substr(0, 8));
    }

    void save(const std::string& path) {
        std::ofstream out(path);
        out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
            << "\" height=\"" << height << "\">\n"
            << body.str() << "</svg>\n";
    }
};

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                          "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

}  // namespace

void write_error_curve_svg(const RunReport& report, const std::string& path) {
    if (report.error_curve.empty()) return;
    SvgCanvas c;
    c.log_x = true;
    c.x0 = 1;
    c.x1 = static_cast<double>(report.error_curve.back().t);
    double ymax = 0;
    for (const auto& s : report.error_curve) ymax = std::max(ymax, s.max_err);
    c.y0 = 0;
    c.y1 = ymax * 1.05 + 1e-12;
    std::vector<double> xs, ys;
    for (const auto& s : report.error_curve) {
        xs.push_back(static_cast<double>(s.t));
        ys.push_back(s.max_err);
    }
    c.axes("t (log scale)", "max sup-norm error");
    c.polyline(xs, ys, kPalette[0]);
    c.save(path);
}

void write_traces_svg(const RunReport& report, const std::string& path) {
    if (report.traces.empty() || report.traces.front().times.empty()) return;
    SvgCanvas c;
    c.log_x = true;
    c.x0 = 1;
    double ymin = 1e300, ymax = -1e300;
    for (const auto& tr : report.traces) {
        c.x1 = std::max(c.x1, static_cast<double>(tr.times.back()));
        for (const auto& row : tr.per_agent)
            for (double v : row) {
                ymin = std::min(ymin, v);
                ymax = std::max(ymax, v);
            }
        for (double v : tr.oracle_value) {
            ymin = std::min(ymin, v);
            ymax = std::max(ymax, v);
        }
    }
    c.y0 = ymin - 1;
    c.y1 = ymax + 1;
    c.axes("t (log scale)", "Q value");
    int color = 0;
    for (const auto& tr : report.traces) {
        std::vector<double> xs;
        for (long t : tr.times) xs.push_back(static_cast<double>(t));
        const int agents = tr.per_agent.empty() ? 0 : static_cast<int>(tr.per_agent[0].size());
        for (int i = 0; i < agents; ++i) {
            std::vector<double> ys;
            for (const auto& row : tr.per_agent) ys.push_back(row[i]);
            c.polyline(xs, ys, kPalette[color % 10], i % 2 ? "4,3" : "");
        }
        if (!tr.oracle_value.empty())
            c.polyline({c.x0, c.x1}, {tr.oracle_value[0], tr.oracle_value[0]}, "#000000");
        ++color;
    }
    c.save(path);
}

}  // namespace frqd
