#include "frqd/comms.hpp"

#include <algorithm>
#include <stdexcept>

#include <json.hpp>

#include "frqd/rng.hpp"

namespace frqd {

namespace {
constexpr double kExtremeValue = 10000.0;
}

AttackStrategy parse_strategy(const std::string& name) {
    if (name == "none") return AttackStrategy::none;
    if (name == "extreme-value") return AttackStrategy::extreme_value;
    if (name == "falsified-relay") return AttackStrategy::falsified_relay;
    if (name == "drop") return AttackStrategy::drop;
    if (name == "duplicate-index-spoof") return AttackStrategy::duplicate_index_spoof;
    throw std::invalid_argument("unknown attack strategy: " + name);
}

std::string strategy_name(AttackStrategy s) {
    switch (s) {
        case AttackStrategy::none: return "none";
        case AttackStrategy::extreme_value: return "extreme-value";
        case AttackStrategy::falsified_relay: return "falsified-relay";
        case AttackStrategy::drop: return "drop";
        case AttackStrategy::duplicate_index_spoof: return "duplicate-index-spoof";
    }
    return "none";
}

bool strategy_acts_in_round(AttackStrategy s, int round) {
    switch (s) {
        case AttackStrategy::none: return false;
        case AttackStrategy::extreme_value: return round == 1;
        case AttackStrategy::falsified_relay: return round == 2;
        case AttackStrategy::drop: return true;
        case AttackStrategy::duplicate_index_spoof: return round == 1;
    }
    return false;
}

namespace {

void validate_strategies(const std::vector<AttackStrategy>& strategies) {
    for (int round = 1; round <= 2; ++round) {
        int acting = 0;
        for (auto s : strategies)
            if (strategy_acts_in_round(s, round)) ++acting;
        if (acting > 1)
            throw std::invalid_argument(
                "attack plan: at most one strategy may act per communication round");
    }
}

}  // namespace

AttackPlan::AttackPlan() : strategies_{AttackStrategy::none} {}

AttackPlan::AttackPlan(std::vector<AttackStrategy> strategies, int f_budget,
                       std::uint64_t attack_seed)
    : strategies_(std::move(strategies)), f_(f_budget), seed_(attack_seed) {
    if (f_ < 0) throw std::invalid_argument("attack plan: F must be non-negative");
    validate_strategies(strategies_);
}

AttackPlan::AttackPlan(std::vector<AttackStrategy> strategies, int f_budget,
                       std::vector<std::array<std::vector<std::pair<int, int>>, 2>> edges)
    : strategies_(std::move(strategies)),
      f_(f_budget),
      explicit_(true),
      explicit_edges_(std::move(edges)) {
    if (f_ < 0) throw std::invalid_argument("attack plan: F must be non-negative");
    validate_strategies(strategies_);
    for (const auto& per_round : explicit_edges_)
        for (const auto& sel : per_round)
            if (static_cast<int>(sel.size()) > f_)
                throw std::invalid_argument("attack plan: explicit selection exceeds F");
}

AttackStrategy AttackPlan::round_strategy(int round) const {
    for (auto s : strategies_)
        if (strategy_acts_in_round(s, round)) return s;
    return AttackStrategy::none;
}

std::vector<std::pair<int, int>> AttackPlan::edges_at(long t, int round, const Graph& g) const {
    if (round != 1 && round != 2) throw std::invalid_argument("round must be 1 or 2");
    if (explicit_) {
        if (t < 0 || static_cast<std::size_t>(t) >= explicit_edges_.size()) return {};
        return explicit_edges_[t][round - 1];
    }
    if (f_ == 0) return {};
    auto all = g.edges();
    const int take = std::min<int>(f_, static_cast<int>(all.size()));
    CounterRng rng(seed_, static_cast<std::uint64_t>(t), static_cast<std::uint64_t>(round));
    // Partial Fisher-Yates: first `take` entries become the selection.
    for (int i = 0; i < take; ++i) {
        auto j = i + static_cast<int>(rng.uniform_index(all.size() - i));
        std::swap(all[i], all[j]);
    }
    all.resize(take);
    return all;
}

std::string AttackPlan::to_json() const {
    nlohmann::ordered_json j;
    auto names = nlohmann::ordered_json::array();
    for (auto s : strategies_) names.push_back(strategy_name(s));
    j["strategies"] = std::move(names);
    j["f"] = f_;
    if (explicit_) {
        auto steps = nlohmann::ordered_json::array();
        for (const auto& per_round : explicit_edges_) {
            nlohmann::ordered_json step;
            for (int r = 0; r < 2; ++r) {
                auto arr = nlohmann::ordered_json::array();
                for (auto [a, b] : per_round[r]) arr.push_back({a, b});
                step[r == 0 ? "round1" : "round2"] = std::move(arr);
            }
            steps.push_back(std::move(step));
        }
        j["edges"] = std::move(steps);
    } else {
        j["seed"] = seed_;
    }
    return j.dump(2);
}

AttackPlan AttackPlan::from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    std::vector<AttackStrategy> strategies;
    for (const auto& s : j.at("strategies")) strategies.push_back(parse_strategy(s));
    const int f = j.at("f");
    if (j.contains("edges")) {
        std::vector<std::array<std::vector<std::pair<int, int>>, 2>> edges;
        for (const auto& step : j.at("edges")) {
            std::array<std::vector<std::pair<int, int>>, 2> per_round;
            for (int r = 0; r < 2; ++r) {
                for (const auto& e : step.at(r == 0 ? "round1" : "round2"))
                    per_round[r].emplace_back(e.at(0), e.at(1));
            }
            edges.push_back(std::move(per_round));
        }
        return AttackPlan(std::move(strategies), f, std::move(edges));
    }
    return AttackPlan(std::move(strategies), f, j.value("seed", std::uint64_t{0}));
}

namespace {

// Directed corruption lookup: marks[i][j] true when the message i -> j is
// intercepted this round.
std::vector<std::vector<char>> corruption_marks(const Graph& g, const AttackPlan& plan,
                                                long t, int round) {
    std::vector marks(g.n(), std::vector<char>(g.n(), 0));
    if (plan.round_strategy(round) == AttackStrategy::none) return marks;
    for (auto [a, b] : plan.edges_at(t, round, g)) {
        // Default strategies corrupt both directions (worst case).
        marks[a][b] = 1;
        marks[b][a] = 1;
    }
    return marks;
}

}  // namespace

std::vector<std::vector<Round1Msg>> deliver_round1(const Graph& g,
                                                   const std::vector<ValueTuple>& outbox,
                                                   const AttackPlan& plan, long t) {
    if (static_cast<int>(outbox.size()) != g.n())
        throw std::logic_error("deliver_round1: outbox size mismatch");
    const auto strategy = plan.round_strategy(1);
    const auto marks = corruption_marks(g, plan, t, 1);

    std::vector<std::vector<Round1Msg>> inbox(g.n());
    for (int recv = 0; recv < g.n(); ++recv) {
        for (int send = 0; send < g.n(); ++send) {
            if (!g.has_edge(send, recv)) continue;
            if (marks[send][recv]) {
                switch (strategy) {
                    case AttackStrategy::extreme_value:
                        inbox[recv].push_back({send, {kExtremeValue, 0}, true});
                        break;
                    case AttackStrategy::drop:
                        break;
                    case AttackStrategy::duplicate_index_spoof:
                        // Original plus a forged copy of the sender's index,
                        // exercising the exactly-once filter.
                        inbox[recv].push_back({send, outbox[send], false});
                        inbox[recv].push_back({send, {kExtremeValue, outbox[send].idx}, true});
                        break;
                    default:
                        inbox[recv].push_back({send, outbox[send], false});
                        break;
                }
            } else {
                inbox[recv].push_back({send, outbox[send], false});
            }
        }
    }
    return inbox;
}

std::vector<std::vector<Round2Msg>> deliver_round2(
    const Graph& g, const std::vector<std::vector<ValueTuple>>& outbox,
    const AttackPlan& plan, long t) {
    if (static_cast<int>(outbox.size()) != g.n())
        throw std::logic_error("deliver_round2: outbox size mismatch");
    const auto strategy = plan.round_strategy(2);
    const auto marks = corruption_marks(g, plan, t, 2);

    std::vector<std::vector<Round2Msg>> inbox(g.n());
    for (int recv = 0; recv < g.n(); ++recv) {
        for (int send = 0; send < g.n(); ++send) {
            if (!g.has_edge(send, recv)) continue;
            if (marks[send][recv]) {
                switch (strategy) {
                    case AttackStrategy::falsified_relay: {
                        Round2Msg msg{send, {}, true};
                        msg.set.reserve(g.n());
                        for (int i = 0; i < g.n(); ++i)
                            msg.set.push_back({kExtremeValue, i});
                        inbox[recv].push_back(std::move(msg));
                        break;
                    }
                    case AttackStrategy::drop:
                        break;
                    default:
                        inbox[recv].push_back({send, outbox[send], false});
                        break;
                }
            } else {
                inbox[recv].push_back({send, outbox[send], false});
            }
        }
    }
    return inbox;
}

}  // namespace frqd
