#ifndef FRQD_EXPERIMENT_HPP
#define FRQD_EXPERIMENT_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "frqd/comms.hpp"
#include "frqd/graph.hpp"
#include "frqd/learning.hpp"
#include "frqd/mdp.hpp"
#include "frqd/oracle.hpp"

namespace frqd {

enum class Algorithm { frqd, qd, trim_baseline, laplacian_reference };
Algorithm parse_algorithm(const std::string& name);
std::string algorithm_name(Algorithm a);

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvariantViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Named RNG streams split deterministically from one master seed; any
// stream may be pinned explicitly to ablate a single randomness source.
struct SeedSet {
    std::uint64_t master = 1;
    std::optional<std::uint64_t> costs, attack, init, trajectory;

    std::uint64_t costs_seed() const;
    std::uint64_t attack_seed() const;
    std::uint64_t init_seed() const;
    std::uint64_t trajectory_seed() const;
};

// Complete declarative run specification. Parsed from JSON; every field is
// addressable through `--set` dotted paths.
struct ExperimentConfig {
    // mdp
    std::string mdp_kind = "task_assignment";  // or "file"
    int mdp_n = 10;
    std::string mdp_path;

    // graph: exactly one of construct / path / schedule paths
    std::optional<std::pair<int, int>> graph_construct;  // (n, r)
    std::string graph_path;
    std::vector<std::string> graph_schedule;  // cycled over t

    Algorithm algorithm = Algorithm::frqd;

    std::vector<std::string> attack_strategies{"none"};
    int attack_f = 0;

    // schedule constants; tau2 derived from eps2 unless given explicitly
    double sched_a = 0.1, sched_b = 0.1, sched_tau1 = 1.0;
    double sched_eps1 = 1e-4, sched_eps2 = 1e-4;
    std::optional<double> sched_tau2;

    long horizon = 10000;
    long min_visit_target = 0;  // 0 disables; else run until reached (capped)
    long max_horizon = 0;       // cap when min_visit_target set; 0 = 20x horizon

    RestartRule restart = RestartRule::exploring_starts;
    SeedSet seeds;

    std::string output_dir;  // empty = no artifacts
    bool emit_report = true;
    bool emit_trajectory_csv = false;
    bool emit_svg = false;

    bool assert_corruption_bound = true;
    bool assert_soundness = true;
    bool assert_symmetry = false;
    bool assert_equivalence = false;
    bool abort_on_violation = true;

    bool parallel = true;

    // Q-value traces: (1-based state, agent pair) entries to sample per step.
    struct TracePair {
        int state;
        int ui, uj;
    };
    std::vector<TracePair> trace_pairs{{1, 0, 1}, {1, 0, 2}};

    ScheduleParams schedule_params() const;

    static ExperimentConfig from_json_text(const std::string& text);
    static ExperimentConfig load(const std::string& path,
                                 const std::vector<std::string>& overrides = {});
    std::string to_json() const;
};

struct CurveSample {
    long t;
    long min_visits;
    double max_err;  // max_i sup-norm distance to Q* over non-terminal pairs
};

struct TraceSeries {
    int state, ui, uj;
    std::vector<long> times;
    std::vector<std::vector<double>> per_agent;  // [sample][agent]
    std::vector<double> oracle_value;            // Q* at this pair, constant
};

struct RunReport {
    std::string algorithm;
    std::uint64_t mdp_fingerprint = 0;
    long steps = 0;
    long min_visits = 0;

    std::vector<std::vector<double>> final_q;        // [agent][s*U+u]
    std::vector<std::vector<std::vector<int>>> greedy;  // [agent][state] -> actions
    OptimalSolution oracle;
    std::vector<std::pair<int, int>> actions;

    std::vector<CurveSample> error_curve;
    std::vector<std::pair<long, double>> visit_checkpoints;  // (visit count, err)
    std::vector<TraceSeries> traces;

    long corruption_bound_violations = 0;
    long soundness_violations = 0;
    long symmetry_violations = 0;
    long multi_value_violations = 0;
    long baseline_skipped_agents = 0;
    double equivalence_max_diff = 0.0;  // only when the lockstep check ran

    // Per state: does every agent's greedy set contain some oracle-optimal
    // action?
    std::vector<bool> policy_match;

    std::string config_json;

    std::string to_json() const;
    static RunReport from_json(const std::string& text);
};

RunReport run_experiment(const ExperimentConfig& config);

// Merge reports into a per-state policy table (text + CSV). Throws
// ConfigError when the reports' MDP fingerprints differ.
struct ComparisonTable {
    std::vector<std::string> algorithms;
    std::vector<int> states;                         // 1-based
    std::vector<std::string> oracle_cells;           // per state
    std::vector<std::vector<std::string>> cells;     // [algorithm][state]
    std::vector<std::vector<bool>> agrees;           // [algorithm][state]

    std::string to_text() const;
    std::string to_csv() const;
};
ComparisonTable compare_reports(const std::vector<RunReport>& reports);

// Minimal self-contained SVG line plot.
void write_error_curve_svg(const RunReport& report, const std::string& path);
void write_traces_svg(const RunReport& report, const std::string& path);

}  // namespace frqd

#endif
