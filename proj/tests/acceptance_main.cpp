// End-to-end acceptance suite. Each numbered criterion prints exactly one
// PASS/FAIL line; the process exits with the number of failed criteria.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "frqd/experiment.hpp"

using namespace frqd;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int num, const std::string& name, bool ok, const std::string& detail = "") {
    std::printf("criterion %d [%s]: %s%s%s\n", num, name.c_str(), ok ? "PASS" : "FAIL",
                detail.empty() ? "" : " — ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

// The bundled default scenario: 10 agents on the (7,0)-redundant clique-core
// graph, one compromised edge per round, both attack strategies, run until
// every non-terminal pair has been sampled at least 300 times.
ExperimentConfig default_scenario() {
    ExperimentConfig c;
    c.mdp_n = 10;
    c.graph_construct = {{10, 7}};
    c.algorithm = Algorithm::frqd;
    c.attack_strategies = {"extreme-value", "falsified-relay"};
    c.attack_f = 1;
    c.horizon = 200000;
    c.min_visit_target = 300;
    c.max_horizon = 2000000;
    c.seeds.master = 20240901;
    return c;
}

// --- independent re-evaluations used as ground truth ---------------------

// Redundancy straight from its definition: per-pair shared-neighbor sets,
// threshold edges, connectivity by transitive closure.
bool redundant_by_definition(const Graph& g, int r, int r_prime) {
    const int n = g.n();
    auto shared = [&](int i, int j) {
        int c = 0;
        for (int k = 0; k < n; ++k)
            if ((g.has_edge(i, k) || k == i) && g.has_edge(j, k)) ++c;
        return c;
    };
    std::vector reach(n, std::vector<char>(n, 0));
    for (int i = 0; i < n; ++i) {
        reach[i][i] = 1;
        for (int j = 0; j < n; ++j)
            if (i != j && shared(i, j) >= r) reach[i][j] = 1;
    }
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (reach[i][k] && reach[k][j]) reach[i][j] = 1;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (!reach[i][j]) return false;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const int c = shared(i, j);
            if (c < r && c > r_prime) return false;
        }
    return true;
}

Graph random_graph(int n, double density, Rng& rng) {
    Graph g(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng.uniform01() < density) g.add_edge(i, j);
    return g;
}

Graph star(int n) {
    Graph g(n);
    for (int i = 1; i < n; ++i) g.add_edge(0, i);
    return g;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) return "<missing:" + p.string() + ">";
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

double sup_norm_nonterminal(const MdpModel& m, const std::vector<std::vector<double>>& q) {
    double worst = 0.0;
    for (int s = 0; s < m.num_states(); ++s) {
        if (m.is_terminal(s)) continue;
        for (int u = 0; u < m.num_actions(); ++u) worst = std::max(worst, std::abs(q[s][u]));
    }
    return worst;
}

// --- criteria -------------------------------------------------------------

long g_total_corruption = 0, g_total_soundness = 0;

void criterion_1_equivalence() {
    auto c = default_scenario();
    c.horizon = 10000;
    c.min_visit_target = 0;
    c.assert_equivalence = true;
    c.assert_symmetry = true;
    bool ok = false;
    std::string detail;
    try {
        const auto r = run_experiment(c);
        g_total_corruption += r.corruption_bound_violations;
        g_total_soundness += r.soundness_violations;
        ok = r.equivalence_max_diff <= 1e-12 && r.steps == 10000;
        detail = "max per-step deviation from the matrix-form reference: " +
                 fmt(r.equivalence_max_diff) + " (bound 1e-12, 10000 steps)";
    } catch (const std::exception& e) {
        detail = e.what();
    }
    report(1, "filtered update matches matrix-form reference", ok, detail);
}

RunReport g_default_report;  // reused by criteria 3 and 4
bool g_default_ran = false;

void criterion_2_convergence() {
    bool ok = false;
    std::string detail;
    try {
        const auto r = run_experiment(default_scenario());
        g_default_report = r;
        g_default_ran = true;
        g_total_corruption += r.corruption_bound_violations;
        g_total_soundness += r.soundness_violations;

        const auto model = build_task_assignment_mdp(
            10, default_scenario().seeds.costs_seed());
        const double qnorm = sup_norm_nonterminal(model, r.oracle.q_star);
        const double rel_err = r.error_curve.back().max_err / qnorm;

        bool policy_ok = true;
        for (int s = 0; s < 6; ++s) policy_ok = policy_ok && r.policy_match[s];

        bool decreasing = r.visit_checkpoints.size() == 3;
        for (std::size_t i = 1; decreasing && i < r.visit_checkpoints.size(); ++i)
            decreasing = r.visit_checkpoints[i].second < r.visit_checkpoints[i - 1].second;

        ok = r.min_visits >= 300 && rel_err <= 0.05 && policy_ok && decreasing;
        detail = "min visits " + std::to_string(r.min_visits) + ", relative error " +
                 fmt(rel_err) + " (bound 0.05), greedy policies " +
                 (policy_ok ? "optimal on all six transient states"
                            : "NOT optimal everywhere") +
                 ", error at visit checkpoints 30/100/300 " +
                 (decreasing ? "strictly decreasing" : "NOT strictly decreasing");
        if (!ok && decreasing && r.min_visits >= 300) {
            // Known limitation, kept honestly red: with the pinned gain
            // schedule alpha_k = 0.1/(k+1), the random initial table retains
            // weight ~ (k+1)^{-0.1} (about 0.5 after 300 visits), so the 5%
            // error bound is unreachable at any feasible horizon. See the
            // "Acceptance status" section of README.md for the analysis.
            detail += " [known limitation: initial-condition decay (k+1)^-0.1 "
                      "makes the 5% bound unreachable under the pinned schedule]";
        }
    } catch (const std::exception& e) {
        detail = e.what();
    }
    report(2, "convergence to the oracle solution under attack", ok, detail);
}

void criterion_3_baseline_failure() {
    bool ok = false;
    std::string detail;
    try {
        auto c = default_scenario();
        c.algorithm = Algorithm::trim_baseline;
        const auto r = run_experiment(c);
        int disagreeing = 0;
        for (int s = 0; s < 6; ++s) disagreeing += !r.policy_match[s];
        ok = disagreeing >= 1;
        detail = std::to_string(disagreeing) +
                 " of 6 transient states where some agent's trimmed-filter greedy policy "
                 "misses every optimal action";
        if (g_default_ran) {
            const auto table = compare_reports({g_default_report, r});
            std::printf("%s", table.to_text().c_str());
        }
    } catch (const std::exception& e) {
        detail = e.what();
    }
    report(3, "trimmed-filter baseline learns a wrong policy", ok, detail);
}

void criterion_4_runtime_bounds() {
    report(4, "corruption bound and filter soundness never violated",
           g_total_corruption == 0 && g_total_soundness == 0,
           "violations across criterion 1-2 runs: bound=" + std::to_string(g_total_corruption) +
               " soundness=" + std::to_string(g_total_soundness));
}

void criterion_5_verifier_vs_definition() {
    Rng rng(987654321);
    const std::pair<int, int> cases[] = {{1, 0}, {3, 1}, {7, 0}};
    long graphs = 0, mismatches = 0;
    for (int rep = 0; rep < 3; ++rep)
        for (int n = 2; n <= 25; ++n)
            for (int d = 1; d <= 9; ++d) {
                const Graph g = random_graph(n, d / 10.0, rng);
                ++graphs;
                for (auto [r, rp] : cases)
                    if (is_rr_redundant(g, r, rp).redundant !=
                        redundant_by_definition(g, r, rp))
                        ++mismatches;
            }
    report(5, "redundancy verifier agrees with the definition",
           graphs >= 500 && mismatches == 0,
           std::to_string(graphs) + " random graphs (n<=25, densities 0.1-0.9), " +
               std::to_string(mismatches) + " mismatches");
}

void criterion_6_construction_soundness() {
    long checked = 0, failures = 0;
    for (int r = 1; r <= 7; ++r)
        for (int n = r + 1; n <= r + 8; ++n) {
            const Graph g = construct_redundant(n, r);
            for (int rp = 0; rp < r; ++rp) {
                ++checked;
                if (!is_rr_redundant(g, r, rp).redundant) ++failures;
            }
        }
    report(6, "constructed graphs verify as redundant", failures == 0,
           std::to_string(checked) + " (n,r,r') combinations, " + std::to_string(failures) +
               " failures");
}

void criterion_7_robustness_bound() {
    long checked = 0, failures = 0;
    for (int r = 1; r <= 5; ++r)
        for (int n = r + 1; n <= 12; ++n) {
            ++checked;
            const int bound = (r + 2) / 2;  // ceil((r+1)/2)
            if (!is_r_robust_bruteforce(construct_redundant(n, r), bound)) ++failures;
        }
    ++checked;
    if (!is_r_robust_bruteforce(construct_redundant(10, 7), 4)) ++failures;
    report(7, "constructed graphs meet the robustness bound", failures == 0,
           std::to_string(checked) + " graphs brute-force checked, " +
               std::to_string(failures) + " failures");
}

void criterion_8_degenerate_honesty() {
    const auto m = build_task_assignment_mdp(6, 11);
    const Graph g = star(6);
    const Graph hop = two_hop_graph(g, 1);
    const auto params = ScheduleParams::from_epsilons(0.1, 0.1, 1.0, 1e-4, 1e-4);
    FrqdEngine frqd(&m, params, 0, {});
    PlainQdEngine qd(&m, params, {});
    Rng init(13);
    frqd.init_q_random(6, init);
    std::vector<std::vector<double>> q0;
    for (int i = 0; i < 6; ++i) q0.push_back(frqd.q_table(i));
    qd.init_q_copy(q0);

    Rng traj(29);
    TrajectoryState ts;
    double worst = 0.0;
    bool connected = is_connected(hop);
    for (long t = 0; t < 1000; ++t) {
        const auto s = step(m, ts, RestartRule::exploring_starts, traj);
        frqd.step(g, AttackPlan(), s, t, nullptr);
        qd.step(hop, AttackPlan(), s, t, nullptr);
        for (int i = 0; i < 6; ++i)
            worst = std::max(worst,
                             std::abs(frqd.q_value(i, s.x, s.u) - qd.q_value(i, s.x, s.u)));
    }
    report(8, "honest network reduces to plain consensus learning",
           connected && worst <= 1e-12,
           "1-2-hop graph connected, max per-step deviation " + fmt(worst) +
               " over 1000 steps (bound 1e-12)");
}

void criterion_9_determinism() {
    auto c = default_scenario();
    c.horizon = 5000;
    c.min_visit_target = 0;
    c.emit_trajectory_csv = true;
    c.emit_svg = true;

    const fs::path base = "acceptance_work";
    bool ok = true;
    std::string detail = "report.json, trajectory.csv and both SVG plots byte-identical "
                         "across two executions";
    try {
        c.output_dir = (base / "run").string();
        const char* names[] = {"report.json", "trajectory.csv", "error_curve.svg",
                               "traces.svg"};
        run_experiment(c);
        std::vector<std::string> first;
        for (const char* name : names) first.push_back(slurp(base / "run" / name));
        run_experiment(c);
        for (std::size_t i = 0; i < std::size(names); ++i) {
            if (slurp(base / "run" / names[i]) != first[i]) {
                ok = false;
                detail = std::string("artifact differs between executions: ") + names[i];
            }
        }
    } catch (const std::exception& e) {
        ok = false;
        detail = e.what();
    }
    report(9, "artifacts are byte-identical across executions", ok, detail);
}

}  // namespace

int main() {
    criterion_1_equivalence();
    criterion_2_convergence();
    criterion_3_baseline_failure();
    criterion_4_runtime_bounds();
    criterion_5_verifier_vs_definition();
    criterion_6_construction_soundness();
    criterion_7_robustness_bound();
    criterion_8_degenerate_honesty();
    criterion_9_determinism();
    std::printf("%d of 9 criteria passed\n", 9 - g_failures);
    return g_failures;
}
