#include "frqd/mdp.hpp"

#include <bit>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include <json.hpp>

namespace frqd {

namespace {
constexpr double kRowSumTol = 1e-12;
}

MdpModel::MdpModel(int num_states, std::vector<std::pair<int, int>> actions,
                   std::vector<std::vector<std::vector<double>>> transition,
                   std::vector<std::vector<std::vector<double>>> local_costs,
                   double discount, std::vector<int> terminal_states)
    : num_states_(num_states),
      actions_(std::move(actions)),
      transition_(std::move(transition)),
      local_costs_(std::move(local_costs)),
      discount_(discount),
      terminal_list_(std::move(terminal_states)) {
    if (num_states_ < 1) throw std::invalid_argument("MdpModel: empty state space");
    if (actions_.empty()) throw std::invalid_argument("MdpModel: empty action space");
    if (!(discount_ > 0.0 && discount_ < 1.0))
        throw std::invalid_argument("MdpModel: discount must lie strictly in (0,1)");
    terminal_.assign(num_states_, 0);
    for (int s : terminal_list_) {
        if (s < 0 || s >= num_states_)
            throw std::invalid_argument("MdpModel: terminal state out of range");
        terminal_[s] = 1;
    }
    for (int s = 0; s < num_states_; ++s) {
        for (int u = 0; u < num_actions(); ++u) {
            double sum = 0.0;
            for (double p : transition_[s][u]) sum += p;
            if (std::abs(sum - 1.0) > kRowSumTol)
                throw std::invalid_argument("MdpModel: transition row does not sum to 1");
        }
    }
    for (const auto& table : local_costs_) {
        for (int s : terminal_list_)
            for (int u = 0; u < num_actions(); ++u)
                if (table[s][u] != 0.0)
                    throw std::invalid_argument("MdpModel: terminal states must be cost-free");
    }
}

double MdpModel::global_cost(int s, int u) const {
    double sum = 0.0;
    for (const auto& table : local_costs_) sum += table[s][u];
    return sum / static_cast<double>(num_agents());
}

std::uint64_t MdpModel::fingerprint() const {
    std::uint64_t h = 0x6d6470u;
    auto mix = [&h](double v) { h = hash_combine(h, std::bit_cast<std::uint64_t>(v)); };
    h = hash_combine(h, static_cast<std::uint64_t>(num_states_));
    h = hash_combine(h, static_cast<std::uint64_t>(actions_.size()));
    mix(discount_);
    for (const auto& per_state : transition_)
        for (const auto& row : per_state)
            for (double p : row) mix(p);
    for (const auto& table : local_costs_)
        for (const auto& row : table)
            for (double c : row) mix(c);
    return h;
}

std::string MdpModel::to_json() const {
    nlohmann::ordered_json j;
    j["num_states"] = num_states_;
    j["discount"] = discount_;
    j["terminal_states"] = terminal_list_;
    auto acts = nlohmann::ordered_json::array();
    for (auto [a, b] : actions_) acts.push_back({a, b});
    j["actions"] = std::move(acts);
    j["transition"] = transition_;
    j["local_costs"] = local_costs_;
    return j.dump(2);
}

MdpModel MdpModel::from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    std::vector<std::pair<int, int>> actions;
    for (const auto& a : j.at("actions")) actions.emplace_back(a.at(0), a.at(1));
    return MdpModel(j.at("num_states"), std::move(actions),
                    j.at("transition").get<std::vector<std::vector<std::vector<double>>>>(),
                    j.at("local_costs").get<std::vector<std::vector<std::vector<double>>>>(),
                    j.at("discount"), j.at("terminal_states").get<std::vector<int>>());
}

MdpModel build_task_assignment_mdp(int n, std::uint64_t cost_seed) {
    if (n < 2) throw std::invalid_argument("build_task_assignment_mdp: need n >= 2");
    constexpr int kStates = 7;  // tasks 1..6 plus completion state 7
    const int terminal = kStates - 1;

    std::vector<std::pair<int, int>> actions;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) actions.emplace_back(i, j);
    const int num_actions = static_cast<int>(actions.size());

    std::vector transition(kStates, std::vector(num_actions, std::vector(kStates, 0.0)));
    for (int s = 0; s < kStates; ++s) {
        const int x = s + 1;  // 1-based task id
        for (int u = 0; u < num_actions; ++u) {
            if (s == terminal) {
                transition[s][u][terminal] = 1.0;
                continue;
            }
            const double d = std::abs(actions[u].first - actions[u].second);
            transition[s][u][s + 1] = d / (d + x);
            transition[s][u][s] = x / (d + x);
        }
    }

    // delta_ij(x) ~ U[0,50], drawn once and frozen; only agent i pays under
    // action (i,j). Draw order is (action, state), fixed by construction.
    Rng rng(cost_seed);
    std::vector local_costs(n, std::vector(kStates, std::vector(num_actions, 0.0)));
    for (int u = 0; u < num_actions; ++u) {
        const int payer = actions[u].first;
        for (int s = 0; s < terminal; ++s)
            local_costs[payer][s][u] = rng.uniform(0.0, 50.0);
    }

    return MdpModel(kStates, std::move(actions), std::move(transition),
                    std::move(local_costs), 0.9, {terminal});
}

EnvSample step(const MdpModel& model, TrajectoryState& traj, RestartRule restart, Rng& rng) {
    const int x = traj.current_state;
    const int u = static_cast<int>(rng.uniform_index(model.num_actions()));

    const auto& row = model.transition_row(x, u);
    double roll = rng.uniform01();
    int x_next = model.num_states() - 1;
    double acc = 0.0;
    for (int s = 0; s < model.num_states(); ++s) {
        acc += row[s];
        if (roll < acc) {
            x_next = s;
            break;
        }
    }

    EnvSample sample;
    sample.x = x;
    sample.u = u;
    sample.x_next = x_next;
    sample.costs.resize(model.num_agents());
    for (int i = 0; i < model.num_agents(); ++i) sample.costs[i] = model.local_cost(i, x, u);

    ++traj.step_index;
    if (model.is_terminal(x_next)) {
        ++traj.episode_index;
        if (restart == RestartRule::exploring_starts) {
            // Uniform over non-terminal states.
            std::vector<int> starts;
            for (int s = 0; s < model.num_states(); ++s)
                if (!model.is_terminal(s)) starts.push_back(s);
            traj.current_state = starts[rng.uniform_index(starts.size())];
        } else {
            traj.current_state = 0;
        }
    } else {
        traj.current_state = x_next;
    }
    return sample;
}

std::vector<std::vector<long>> visit_counts(const MdpModel& model,
                                            const std::vector<EnvSample>& log) {
    std::vector counts(model.num_states(), std::vector<long>(model.num_actions(), 0));
    for (const auto& s : log) ++counts[s.x][s.u];
    return counts;
}

}  // namespace frqd
