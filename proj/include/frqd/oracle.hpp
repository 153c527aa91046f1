#ifndef FRQD_ORACLE_HPP
#define FRQD_ORACLE_HPP

#include <string>
#include <vector>

#include "frqd/mdp.hpp"

namespace frqd {

// Exact solution of the global-average-cost MDP, computed by value
// iteration. Serves as ground truth for convergence and policy checks.
struct OptimalSolution {
    std::vector<std::vector<double>> q_star;  // [s][u]
    std::vector<double> v_star;               // [s]
    std::vector<std::vector<int>> pi_star;    // per state, all minimizing actions

    std::string to_json() const;
};

inline constexpr double kTieTolerance = 1e-9;

// Synchronous Bellman sweeps from the zero initializer. The stopping rule
// uses the contraction-corrected threshold tol*(1-gamma)/gamma, so the
// returned tables are within sup-norm `tol` of the fixed point.
OptimalSolution value_iteration(const MdpModel& model, double tol);

// max_{(x,u)} |q(x,u) - (c(x,u) + gamma * sum_x' p * min_v q(x',v))|
double bellman_residual(const MdpModel& model, const std::vector<std::vector<double>>& q);

// Per state, all actions within kTieTolerance of the minimum.
std::vector<std::vector<int>> greedy_policy(const MdpModel& model,
                                            const std::vector<std::vector<double>>& q);

}  // namespace frqd

#endif
