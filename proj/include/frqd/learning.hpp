#ifndef FRQD_LEARNING_HPP
#define FRQD_LEARNING_HPP

#include <cstdint>
#include <vector>

#include "frqd/comms.hpp"
#include "frqd/graph.hpp"
#include "frqd/mdp.hpp"

namespace frqd {

// Decaying weight schedules: alpha = a/(k+1)^tau1, beta = b/(k+1)^tau2,
// applied only at sampling instants of the pair being updated.
struct ScheduleParams {
    double a = 0.1;
    double b = 0.1;
    double tau1 = 1.0;
    double tau2 = 0.0;
    double eps1 = 1e-4;

    void validate() const;

    // tau2 = tau1 - 1/(2+eps1) - eps2
    static ScheduleParams from_epsilons(double a, double b, double tau1, double eps1,
                                        double eps2);
};

double alpha_weight(const ScheduleParams& p, long k);
double beta_weight(const ScheduleParams& p, long k);

// Lines 4-6: keep tuples whose index is not self and appears exactly once
// in the round-1 inbox. A duplicated index discards every copy.
std::vector<ValueTuple> first_filter(const std::vector<Round1Msg>& inbox, int self_id);

// Line 7, receiver side: a relayed set with any duplicated index is
// discarded wholesale; accepted sets are pooled together with the agent's
// own first-filter output.
std::vector<ValueTuple> accept_relays(const std::vector<Round2Msg>& inbox,
                                      const std::vector<ValueTuple>& own_k);

// Lines 8-12: per index k, every distinct value with count >= 3F+1 enters
// the validated multiset once per qualifying (k, value).
std::vector<ValueTuple> second_filter(const std::vector<ValueTuple>& c_multiset, int f, int n);

// Consensus + innovation update for one table entry.
double qd_update(double q_current, const std::vector<double>& validated, double cost,
                 double min_next, double gamma, double alpha, double beta);

// Per-step diagnostics and runtime invariant counters. Violation counters
// must stay zero on redundant topologies.
struct StepDiagnostics {
    std::vector<int> validated_sizes;     // |P^i| per agent
    long corruption_bound_violations = 0;           // corrupted copies per (i,k) exceeded 3F
    long soundness_violations = 0;        // a corrupted value entered some P^i
    long symmetry_violations = 0;         // validation asymmetry vs the 2-hop graph
    long multi_value_violations = 0;      // two distinct values validated for one index
    long baseline_skipped_agents = 0;     // trim baseline: < 2F+1 received values
};

struct EngineOptions {
    bool parallel = true;  // OpenMP over agents inside each barrier phase
    bool track_symmetry = false;
};

// Shared driver state for the agent-side algorithms: per-agent Q tables and
// the global per-pair visit counters (all agents sample the same (x,u)).
class AgentEngine {
public:
    AgentEngine(const MdpModel* model, ScheduleParams params, EngineOptions options);
    virtual ~AgentEngine() = default;

    // Uniform [0,50] init on non-terminal entries from the init stream;
    // terminal-state entries start (and stay) at zero.
    void init_q_random(int num_agents, Rng& init_rng);
    void init_q_copy(const std::vector<std::vector<double>>& q);

    virtual void step(const Graph& g, const AttackPlan& plan, const EnvSample& sample,
                      long t, StepDiagnostics* diag) = 0;

    int num_agents() const { return static_cast<int>(q_.size()); }
    const std::vector<double>& q_table(int agent) const { return q_[agent]; }
    double q_value(int agent, int s, int u) const { return q_[agent][idx(s, u)]; }
    long visit_count(int s, int u) const { return visits_[idx(s, u)]; }
    long min_nonterminal_visits() const;

    const MdpModel& model() const { return *model_; }
    const ScheduleParams& schedule() const { return params_; }

protected:
    std::size_t idx(int s, int u) const {
        return static_cast<std::size_t>(s) * model_->num_actions() + u;
    }
    double min_next(int agent, int s) const;
    void bump_visit(int s, int u) { ++visits_[idx(s, u)]; }
    std::pair<double, double> weights(int s, int u) const;

    const MdpModel* model_;
    ScheduleParams params_;
    EngineOptions options_;
    std::vector<std::vector<double>> q_;  // [agent][s*U+u]
    std::vector<long> visits_;
};

// Two-round filtered update (first filter, relay, second filter, consensus
// + innovation). The primary algorithm.
class FrqdEngine : public AgentEngine {
public:
    FrqdEngine(const MdpModel* model, ScheduleParams params, int f, EngineOptions options);

    void step(const Graph& g, const AttackPlan& plan, const EnvSample& sample, long t,
              StepDiagnostics* diag) override;

    int f() const { return f_; }

private:
    int f_;
    // cached 2-hop adjacency for the symmetry check, keyed by the graph
    std::vector<char> hop_adj_;
    Graph hop_cache_key_{1};
    bool hop_cached_ = false;
};

// Plain consensus + innovation update over the given graph's one-hop
// neighbors, no filtering. Degenerate reference for honest networks.
class PlainQdEngine : public AgentEngine {
public:
    using AgentEngine::AgentEngine;
    void step(const Graph& g, const AttackPlan& plan, const EnvSample& sample, long t,
              StepDiagnostics* diag) override;
};

// Single-round trimmed filter: discard the F largest and F smallest
// received values, use the rest as the consensus set. Approximation of the
// comparison method; outputs are labelled as such in reports.
class TrimBaselineEngine : public AgentEngine {
public:
    TrimBaselineEngine(const MdpModel* model, ScheduleParams params, int f,
                       EngineOptions options);
    void step(const Graph& g, const AttackPlan& plan, const EnvSample& sample, long t,
              StepDiagnostics* diag) override;

private:
    int f_;
};

// Matrix-form reference dynamics on the (6F+1)-2-hop graph:
//   Q_{x,u}(t+1) = ((1-alpha) I - beta L) Q_{x,u}(t) + alpha nu.
// Serial oracle used to cross-check the message-passing pipeline.
class LaplacianReferenceEngine : public AgentEngine {
public:
    LaplacianReferenceEngine(const MdpModel* model, ScheduleParams params, int f,
                             EngineOptions options);
    void step(const Graph& g, const AttackPlan& plan, const EnvSample& sample, long t,
              StepDiagnostics* diag) override;

private:
    int f_;
    std::vector<double> lap_;  // cached Laplacian of the cached 2-hop graph
    Graph cache_key_{1};
    bool cached_ = false;
};

}  // namespace frqd

#endif
