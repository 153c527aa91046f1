#ifndef FRQD_COMMS_HPP
#define FRQD_COMMS_HPP

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "frqd/graph.hpp"

namespace frqd {

struct ValueTuple {
    double q;
    int idx;
    bool operator==(const ValueTuple&) const = default;
};

// One received round-1 message: a single value tuple. `tampered` is
// simulator bookkeeping, invisible to agent logic.
struct Round1Msg {
    int sender;
    ValueTuple v;
    bool tampered = false;
};

// One received round-2 message: a relayed tuple set.
struct Round2Msg {
    int sender;
    std::vector<ValueTuple> set;
    bool tampered = false;
};

enum class AttackStrategy {
    none,
    extreme_value,          // round 1: replace tuple with (10000, 0)
    falsified_relay,        // round 2: replace set with {(10000, i)}_{i in V}
    drop,                   // both rounds: message removed
    duplicate_index_spoof,  // round 1: append forged duplicate of sender's index
};

AttackStrategy parse_strategy(const std::string& name);
std::string strategy_name(AttackStrategy s);
bool strategy_acts_in_round(AttackStrategy s, int round);

// Per-(t, round) edge selection plus the corruption actions to apply.
// Selections are derived lazily from the attack seed (counter-based, so
// queries are random-access), unless explicit per-step lists are given.
class AttackPlan {
public:
    // No-attack plan.
    AttackPlan();

    // Random plan: at each (t, round) exactly min(F, |E(t)|) distinct edges,
    // drawn independently per round. `strategies` may hold at most one
    // strategy acting per round.
    AttackPlan(std::vector<AttackStrategy> strategies, int f_budget, std::uint64_t attack_seed);

    // Replayable plan with explicit selections: edges_per_round[t][round-1].
    AttackPlan(std::vector<AttackStrategy> strategies, int f_budget,
               std::vector<std::array<std::vector<std::pair<int, int>>, 2>> explicit_edges);

    int f_budget() const { return f_; }
    const std::vector<AttackStrategy>& strategies() const { return strategies_; }

    // Strategy acting in `round` (1 or 2), or none.
    AttackStrategy round_strategy(int round) const;

    // Selected undirected edges at (t, round).
    std::vector<std::pair<int, int>> edges_at(long t, int round, const Graph& g) const;

    std::string to_json() const;
    static AttackPlan from_json(const std::string& text);

private:
    std::vector<AttackStrategy> strategies_;
    int f_ = 0;
    std::uint64_t seed_ = 0;
    bool explicit_ = false;
    std::vector<std::array<std::vector<std::pair<int, int>>, 2>> explicit_edges_;
};

// Deliver one round of messages across every directed edge, applying the
// plan's corruption per direction on selected edges. Pure in (outbox, plan).
//
// Round 1: outbox1[i] is agent i's broadcast tuple (same to all neighbors).
// Returns inbox per receiver.
std::vector<std::vector<Round1Msg>> deliver_round1(const Graph& g,
                                                   const std::vector<ValueTuple>& outbox,
                                                   const AttackPlan& plan, long t);

// Round 2: outbox2[i] is agent i's relay set (same to all neighbors).
std::vector<std::vector<Round2Msg>> deliver_round2(
    const Graph& g, const std::vector<std::vector<ValueTuple>>& outbox,
    const AttackPlan& plan, long t);

}  // namespace frqd

#endif
