#include "frqd/learning.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace frqd {

void ScheduleParams::validate() const {
    if (a <= 0.0 || b <= 0.0) throw std::invalid_argument("schedule: a, b must be positive");
    if (!(tau1 > 0.5 && tau1 <= 1.0))
        throw std::invalid_argument("schedule: tau1 must lie in (1/2, 1]");
    if (eps1 <= 0.0) throw std::invalid_argument("schedule: eps1 must be positive");
    if (!(tau2 > 0.0 && tau2 < tau1 - 1.0 / (2.0 + eps1)))
        throw std::invalid_argument("schedule: requires 0 < tau2 < tau1 - 1/(2+eps1)");
}

ScheduleParams ScheduleParams::from_epsilons(double a, double b, double tau1, double eps1,
                                             double eps2) {
    ScheduleParams p;
    p.a = a;
    p.b = b;
    p.tau1 = tau1;
    p.eps1 = eps1;
    p.tau2 = tau1 - 1.0 / (2.0 + eps1) - eps2;
    p.validate();
    return p;
}

double alpha_weight(const ScheduleParams& p, long k) {
    return p.a / std::pow(static_cast<double>(k) + 1.0, p.tau1);
}

double beta_weight(const ScheduleParams& p, long k) {
    return p.b / std::pow(static_cast<double>(k) + 1.0, p.tau2);
}

std::vector<ValueTuple> first_filter(const std::vector<Round1Msg>& inbox, int self_id) {
    std::vector<ValueTuple> kept;
    kept.reserve(inbox.size());
    for (std::size_t i = 0; i < inbox.size(); ++i) {
        const auto& tup = inbox[i].v;
        if (tup.idx == self_id) continue;
        bool unique = true;
        for (std::size_t j = 0; j < inbox.size(); ++j) {
            if (j != i && inbox[j].v.idx == tup.idx) {
                unique = false;
                break;
            }
        }
        if (unique) kept.push_back(tup);
    }
    return kept;
}

std::vector<ValueTuple> accept_relays(const std::vector<Round2Msg>& inbox,
                                      const std::vector<ValueTuple>& own_k) {
    std::vector<ValueTuple> pooled = own_k;
    for (const auto& msg : inbox) {
        bool duplicate = false;
        for (std::size_t i = 0; i < msg.set.size() && !duplicate; ++i)
            for (std::size_t j = i + 1; j < msg.set.size(); ++j)
                if (msg.set[i].idx == msg.set[j].idx) {
                    duplicate = true;
                    break;
                }
        if (duplicate) continue;
        pooled.insert(pooled.end(), msg.set.begin(), msg.set.end());
    }
    return pooled;
}

std::vector<ValueTuple> second_filter(const std::vector<ValueTuple>& c_multiset, int f, int n) {
    const int threshold = 3 * f + 1;
    std::vector<ValueTuple> validated;
    std::vector<double> values;
    for (int k = 0; k < n; ++k) {
        values.clear();
        for (const auto& tup : c_multiset)
            if (tup.idx == k) values.push_back(tup.q);
        for (std::size_t i = 0; i < values.size(); ++i) {
            bool seen = false;
            for (std::size_t j = 0; j < i; ++j)
                if (values[j] == values[i]) {
                    seen = true;
                    break;
                }
            if (seen) continue;
            int count = 0;
            for (double v : values) count += v == values[i];
            if (count >= threshold) validated.push_back({values[i], k});
        }
    }
    return validated;
}

double qd_update(double q_current, const std::vector<double>& validated, double cost,
                 double min_next, double gamma, double alpha, double beta) {
    double consensus = 0.0;
    for (double q : validated) consensus += q_current - q;
    return q_current - beta * consensus + alpha * (cost + gamma * min_next - q_current);
}

AgentEngine::AgentEngine(const MdpModel* model, ScheduleParams params, EngineOptions options)
    : model_(model), params_(params), options_(options) {
    params_.validate();
    visits_.assign(static_cast<std::size_t>(model_->num_states()) * model_->num_actions(), 0);
}

void AgentEngine::init_q_random(int num_agents, Rng& init_rng) {
    q_.assign(num_agents, std::vector<double>(visits_.size(), 0.0));
    for (auto& table : q_)
        for (int s = 0; s < model_->num_states(); ++s) {
            if (model_->is_terminal(s)) continue;  // terminal values are known: zero
            for (int u = 0; u < model_->num_actions(); ++u)
                table[idx(s, u)] = init_rng.uniform(0.0, 50.0);
        }
}

void AgentEngine::init_q_copy(const std::vector<std::vector<double>>& q) {
    q_ = q;
}

long AgentEngine::min_nonterminal_visits() const {
    long best = -1;
    for (int s = 0; s < model_->num_states(); ++s) {
        if (model_->is_terminal(s)) continue;
        for (int u = 0; u < model_->num_actions(); ++u) {
            long v = visits_[idx(s, u)];
            if (best < 0 || v < best) best = v;
        }
    }
    return best;
}

double AgentEngine::min_next(int agent, int s) const {
    const auto& table = q_[agent];
    double best = table[idx(s, 0)];
    for (int u = 1; u < model_->num_actions(); ++u)
        best = std::min(best, table[idx(s, u)]);
    return best;
}

std::pair<double, double> AgentEngine::weights(int s, int u) const {
    const long k = visits_[idx(s, u)];
    return {alpha_weight(params_, k), beta_weight(params_, k)};
}

FrqdEngine::FrqdEngine(const MdpModel* model, ScheduleParams params, int f,
                       EngineOptions options)
    : AgentEngine(model, params, options), f_(f) {
    if (f_ < 0) throw std::invalid_argument("FrqdEngine: F must be non-negative");
}

void FrqdEngine::step(const Graph& g, const AttackPlan& plan, const EnvSample& sample,
                      long t, StepDiagnostics* diag) {
    const int n = num_agents();
    if (g.n() != n) throw std::invalid_argument("FrqdEngine: graph/agent-count mismatch");
    const auto su = idx(sample.x, sample.u);
    const auto [alpha, beta] = weights(sample.x, sample.u);
    const double gamma = model_->discount();

    // Round 1: broadcast own value for the sampled pair.
    std::vector<ValueTuple> outbox1(n);
    for (int i = 0; i < n; ++i) outbox1[i] = {q_[i][su], i};
    const auto inbox1 = deliver_round1(g, outbox1, plan, t);

    std::vector<std::vector<ValueTuple>> k_sets(n);
#pragma omp parallel for schedule(static) if (options_.parallel)
    for (int i = 0; i < n; ++i) k_sets[i] = first_filter(inbox1[i], i);

    // Round 2: relay the accepted tuples.
    const auto inbox2 = deliver_round2(g, k_sets, plan, t);

    std::vector<std::vector<ValueTuple>> pooled(n), validated(n);
    std::vector<double> next_q(n);
#pragma omp parallel for schedule(static) if (options_.parallel)
    for (int i = 0; i < n; ++i) {
        pooled[i] = accept_relays(inbox2[i], k_sets[i]);
        validated[i] = second_filter(pooled[i], f_, n);
        // Neighbors relay the agent's own value back; consensus with self is
        // a no-op, and the validated set should list 2-hop peers only.
        std::erase_if(validated[i], [i](const ValueTuple& t) { return t.idx == i; });
        double consensus = 0.0;
        const double qi = q_[i][su];
        for (const auto& tup : validated[i]) consensus += qi - tup.q;
        const double nu = sample.costs[i] + gamma * min_next(i, sample.x_next);
        next_q[i] = qi - beta * consensus + alpha * (nu - qi);
    }

    if (diag) {
        diag->validated_sizes.assign(n, 0);
        for (int i = 0; i < n; ++i)
            diag->validated_sizes[i] = static_cast<int>(validated[i].size());

        // Corruption bound: per (i, k) at most 3F pooled copies differ from
        // the true value; and nothing corrupted may validate.
        for (int i = 0; i < n; ++i) {
            for (int k = 0; k < n; ++k) {
                if (k == i) continue;
                long corrupted = 0;
                for (const auto& tup : pooled[i])
                    if (tup.idx == k && tup.q != q_[k][su]) ++corrupted;
                if (corrupted > 3L * f_) ++diag->corruption_bound_violations;
            }
            for (const auto& tup : validated[i])
                if (tup.q != q_[tup.idx][su]) ++diag->soundness_violations;
            for (std::size_t a = 0; a < validated[i].size(); ++a)
                for (std::size_t b = a + 1; b < validated[i].size(); ++b)
                    if (validated[i][a].idx == validated[i][b].idx)
                        ++diag->multi_value_violations;
        }

        if (options_.track_symmetry) {
            if (!hop_cached_ || !(hop_cache_key_ == g)) {
                const Graph hop = two_hop_graph(g, 6 * f_ + 1);
                hop_adj_.assign(static_cast<std::size_t>(n) * n, 0);
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j)
                        hop_adj_[static_cast<std::size_t>(i) * n + j] = hop.has_edge(i, j);
                hop_cache_key_ = g;
                hop_cached_ = true;
            }
            auto contains_idx = [&](int agent, int which) {
                for (const auto& tup : validated[agent])
                    if (tup.idx == which) return true;
                return false;
            };
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) {
                    const bool edge = hop_adj_[static_cast<std::size_t>(i) * n + j];
                    if (contains_idx(i, j) != edge || contains_idx(j, i) != edge)
                        ++diag->symmetry_violations;
                }
        }
    }

    for (int i = 0; i < n; ++i) q_[i][su] = next_q[i];
    bump_visit(sample.x, sample.u);
}

void PlainQdEngine::step(const Graph& g, const AttackPlan& plan, const EnvSample& sample,
                         long t, StepDiagnostics* diag) {
    const int n = num_agents();
    if (g.n() != n) throw std::invalid_argument("PlainQdEngine: graph/agent-count mismatch");
    const auto su = idx(sample.x, sample.u);
    const auto [alpha, beta] = weights(sample.x, sample.u);
    const double gamma = model_->discount();

    std::vector<ValueTuple> outbox(n);
    for (int i = 0; i < n; ++i) outbox[i] = {q_[i][su], i};
    const auto inbox = deliver_round1(g, outbox, plan, t);

    std::vector<double> next_q(n);
#pragma omp parallel for schedule(static) if (options_.parallel)
    for (int i = 0; i < n; ++i) {
        double consensus = 0.0;
        const double qi = q_[i][su];
        for (const auto& msg : inbox[i]) consensus += qi - msg.v.q;
        const double nu = sample.costs[i] + gamma * min_next(i, sample.x_next);
        next_q[i] = qi - beta * consensus + alpha * (nu - qi);
    }
    if (diag) {
        diag->validated_sizes.assign(n, 0);
        for (int i = 0; i < n; ++i)
            diag->validated_sizes[i] = static_cast<int>(inbox[i].size());
    }
    for (int i = 0; i < n; ++i) q_[i][su] = next_q[i];
    bump_visit(sample.x, sample.u);
}

TrimBaselineEngine::TrimBaselineEngine(const MdpModel* model, ScheduleParams params, int f,
                                       EngineOptions options)
    : AgentEngine(model, params, options), f_(f) {
    if (f_ < 0) throw std::invalid_argument("TrimBaselineEngine: F must be non-negative");
}

void TrimBaselineEngine::step(const Graph& g, const AttackPlan& plan, const EnvSample& sample,
                              long t, StepDiagnostics* diag) {
    const int n = num_agents();
    if (g.n() != n)
        throw std::invalid_argument("TrimBaselineEngine: graph/agent-count mismatch");
    const auto su = idx(sample.x, sample.u);
    const auto [alpha, beta] = weights(sample.x, sample.u);
    const double gamma = model_->discount();

    std::vector<ValueTuple> outbox(n);
    for (int i = 0; i < n; ++i) outbox[i] = {q_[i][su], i};
    const auto inbox = deliver_round1(g, outbox, plan, t);

    std::vector<double> next_q(n);
    std::vector<long> skipped(n, 0);
#pragma omp parallel for schedule(static) if (options_.parallel)
    for (int i = 0; i < n; ++i) {
        std::vector<double> received;
        received.reserve(inbox[i].size());
        for (const auto& msg : inbox[i]) received.push_back(msg.v.q);
        const double qi = q_[i][su];
        double consensus = 0.0;
        if (static_cast<int>(received.size()) >= 2 * f_ + 1) {
            std::sort(received.begin(), received.end());
            for (std::size_t k = static_cast<std::size_t>(f_);
                 k + static_cast<std::size_t>(f_) < received.size(); ++k)
                consensus += qi - received[k];
        } else if (f_ > 0) {
            skipped[i] = 1;  // too few values to trim safely; innovation only
        } else {
            for (double v : received) consensus += qi - v;
        }
        const double nu = sample.costs[i] + gamma * min_next(i, sample.x_next);
        next_q[i] = qi - beta * consensus + alpha * (nu - qi);
    }
    if (diag)
        for (int i = 0; i < n; ++i) diag->baseline_skipped_agents += skipped[i];
    for (int i = 0; i < n; ++i) q_[i][su] = next_q[i];
    bump_visit(sample.x, sample.u);
}

LaplacianReferenceEngine::LaplacianReferenceEngine(const MdpModel* model,
                                                   ScheduleParams params, int f,
                                                   EngineOptions options)
    : AgentEngine(model, params, options), f_(f) {
    if (f_ < 0)
        throw std::invalid_argument("LaplacianReferenceEngine: F must be non-negative");
}

void LaplacianReferenceEngine::step(const Graph& g, const AttackPlan& /*plan*/,
                                    const EnvSample& sample, long /*t*/,
                                    StepDiagnostics* diag) {
    const int n = num_agents();
    if (g.n() != n)
        throw std::invalid_argument("LaplacianReferenceEngine: graph/agent-count mismatch");
    if (!cached_ || !(cache_key_ == g)) {
        lap_ = laplacian(two_hop_graph(g, 6 * f_ + 1));
        cache_key_ = g;
        cached_ = true;
    }
    const auto su = idx(sample.x, sample.u);
    const auto [alpha, beta] = weights(sample.x, sample.u);
    const double gamma = model_->discount();

    std::vector<double> col(n), next_q(n);
    for (int i = 0; i < n; ++i) col[i] = q_[i][su];

#pragma omp parallel for schedule(static) if (options_.parallel)
    for (int i = 0; i < n; ++i) {
        double lq = 0.0;
        const double* row = &lap_[static_cast<std::size_t>(i) * n];
        for (int j = 0; j < n; ++j) lq += row[j] * col[j];
        const double nu = sample.costs[i] + gamma * min_next(i, sample.x_next);
        next_q[i] = (1.0 - alpha) * col[i] - beta * lq + alpha * nu;
    }
    if (diag) diag->validated_sizes.assign(n, 0);
    for (int i = 0; i < n; ++i) q_[i][su] = next_q[i];
    bump_visit(sample.x, sample.u);
}

}  // namespace frqd
