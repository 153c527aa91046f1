#include "frqd/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace frqd {

namespace {

std::vector<double> state_values(const MdpModel& model,
                                 const std::vector<std::vector<double>>& q) {
    std::vector<double> v(model.num_states());
    for (int s = 0; s < model.num_states(); ++s)
        v[s] = *std::min_element(q[s].begin(), q[s].end());
    return v;
}

std::vector<std::vector<double>> bellman_sweep(const MdpModel& model,
                                               const std::vector<std::vector<double>>& q) {
    const auto v = state_values(model, q);
    std::vector next(model.num_states(), std::vector<double>(model.num_actions()));
#pragma omp parallel for schedule(static)
    for (int s = 0; s < model.num_states(); ++s) {
        for (int u = 0; u < model.num_actions(); ++u) {
            const auto& row = model.transition_row(s, u);
            double future = 0.0;
            for (int sp = 0; sp < model.num_states(); ++sp) future += row[sp] * v[sp];
            next[s][u] = model.global_cost(s, u) + model.discount() * future;
        }
    }
    return next;
}

}  // namespace

OptimalSolution value_iteration(const MdpModel& model, double tol) {
    if (tol <= 0.0) throw std::invalid_argument("value_iteration: tol must be positive");
    const double gamma = model.discount();
    const double stop = tol * (1.0 - gamma) / gamma;

    std::vector q(model.num_states(), std::vector<double>(model.num_actions(), 0.0));
    for (;;) {
        auto next = bellman_sweep(model, q);
        double change = 0.0;
        for (int s = 0; s < model.num_states(); ++s)
            for (int u = 0; u < model.num_actions(); ++u)
                change = std::max(change, std::abs(next[s][u] - q[s][u]));
        q = std::move(next);
        if (change < stop) break;
    }

    OptimalSolution sol;
    sol.q_star = std::move(q);
    sol.v_star = state_values(model, sol.q_star);
    sol.pi_star = greedy_policy(model, sol.q_star);
    return sol;
}

double bellman_residual(const MdpModel& model, const std::vector<std::vector<double>>& q) {
    const auto image = bellman_sweep(model, q);
    double worst = 0.0;
    for (int s = 0; s < model.num_states(); ++s)
        for (int u = 0; u < model.num_actions(); ++u)
            worst = std::max(worst, std::abs(q[s][u] - image[s][u]));
    return worst;
}

std::vector<std::vector<int>> greedy_policy(const MdpModel& model,
                                            const std::vector<std::vector<double>>& q) {
    std::vector<std::vector<int>> pi(model.num_states());
    for (int s = 0; s < model.num_states(); ++s) {
        const double best = *std::min_element(q[s].begin(), q[s].end());
        for (int u = 0; u < model.num_actions(); ++u)
            if (q[s][u] <= best + kTieTolerance) pi[s].push_back(u);
    }
    return pi;
}

std::string OptimalSolution::to_json() const {
    nlohmann::ordered_json j;
    j["q_star"] = q_star;
    j["v_star"] = v_star;
    j["pi_star"] = pi_star;
    return j.dump(2);
}

}  // namespace frqd
