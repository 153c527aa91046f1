#ifndef FRQD_MDP_HPP
#define FRQD_MDP_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "frqd/rng.hpp"

namespace frqd {

// Networked multi-agent MDP. States are 1-based ids {1..M} to match the
// task-assignment instance; internally everything is indexed 0-based.
class MdpModel {
public:
    MdpModel(int num_states, std::vector<std::pair<int, int>> actions,
             std::vector<std::vector<std::vector<double>>> transition,
             std::vector<std::vector<std::vector<double>>> local_costs, double discount,
             std::vector<int> terminal_states);

    int num_states() const { return num_states_; }
    int num_actions() const { return static_cast<int>(actions_.size()); }
    int num_agents() const { return static_cast<int>(local_costs_.size()); }
    double discount() const { return discount_; }

    const std::vector<std::pair<int, int>>& actions() const { return actions_; }
    std::pair<int, int> action(int u) const { return actions_[u]; }

    // Transition probability row for 0-based state s, action index u.
    const std::vector<double>& transition_row(int s, int u) const {
        return transition_[s][u];
    }

    double local_cost(int agent, int s, int u) const { return local_costs_[agent][s][u]; }

    // c(x,u) = (1/n) sum_i c^i(x,u)
    double global_cost(int s, int u) const;

    bool is_terminal(int s) const { return terminal_[s]; }
    const std::vector<int>& terminal_states() const { return terminal_list_; }

    // Content fingerprint (costs + transitions); used to refuse comparing
    // reports from different MDP instances.
    std::uint64_t fingerprint() const;

    std::string to_json() const;
    static MdpModel from_json(const std::string& text);

private:
    int num_states_;
    std::vector<std::pair<int, int>> actions_;
    // transition_[s][u][s'] over 0-based states
    std::vector<std::vector<std::vector<double>>> transition_;
    // local_costs_[agent][s][u]
    std::vector<std::vector<std::vector<double>>> local_costs_;
    double discount_;
    std::vector<char> terminal_;
    std::vector<int> terminal_list_;
};

// The sequential task-assignment instance: states {1..7} with 7 absorbing,
// actions all ordered agent pairs, advance probability |i-j|/(|i-j|+x),
// per-agent costs delta_ij(x) ~ U[0,50] drawn once from `seed` and frozen.
MdpModel build_task_assignment_mdp(int n, std::uint64_t cost_seed);

enum class RestartRule { exploring_starts, initial_state };

struct TrajectoryState {
    int current_state = 0;  // 0-based
    long step_index = 0;
    long episode_index = 0;
};

struct EnvSample {
    int x;                      // 0-based state at t
    int u;                      // action index
    std::vector<double> costs;  // per-agent c^i(x,u)
    int x_next;                 // 0-based successor
};

// One environment step under uniform-random action selection. When the
// successor is terminal the next episode restarts per `restart` before the
// following call; the returned sample always reports the MDP successor.
EnvSample step(const MdpModel& model, TrajectoryState& traj, RestartRule restart, Rng& rng);

// Per-pair visit counts recovered from a sample log.
std::vector<std::vector<long>> visit_counts(const MdpModel& model,
                                            const std::vector<EnvSample>& log);

}  // namespace frqd

#endif
