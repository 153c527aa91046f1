#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "frqd/mdp.hpp"

using namespace frqd;

namespace {
int action_index(const MdpModel& m, int i, int j) {
    for (int u = 0; u < m.num_actions(); ++u)
        if (m.action(u) == std::make_pair(i, j)) return u;
    REQUIRE(false);
    return -1;
}
}  // namespace

TEST_CASE("task assignment construction") {
    const auto m = build_task_assignment_mdp(10, 99);
    CHECK(m.num_states() == 7);
    CHECK(m.num_actions() == 90);
    CHECK(m.num_agents() == 10);
    CHECK(m.discount() == 0.9);
    CHECK(m.is_terminal(6));

    // p advance at x=1, u=(0,1) is 1/2; at x=3, u=(2,9) is 0.7
    CHECK(m.transition_row(0, action_index(m, 0, 1))[1] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(m.transition_row(2, action_index(m, 2, 9))[3] == doctest::Approx(0.7).epsilon(1e-15));
    // terminal state absorbing under every action
    for (int u = 0; u < m.num_actions(); ++u) CHECK(m.transition_row(6, u)[6] == 1.0);

    CHECK_THROWS_AS(build_task_assignment_mdp(1, 0), std::invalid_argument);
}

TEST_CASE("transition rows are stochastic") {
    const auto m = build_task_assignment_mdp(10, 7);
    for (int s = 0; s < m.num_states(); ++s)
        for (int u = 0; u < m.num_actions(); ++u) {
            double sum = 0;
            for (double p : m.transition_row(s, u)) sum += p;
            CHECK(std::abs(sum - 1.0) <= 1e-12);
        }
}

TEST_CASE("cost support and global cost identity") {
    const auto m = build_task_assignment_mdp(10, 123);
    for (int u = 0; u < m.num_actions(); ++u) {
        const auto [i, j] = m.action(u);
        for (int s = 0; s < m.num_states() - 1; ++s) {
            int nonzero = 0;
            double delta = 0;
            for (int agent = 0; agent < 10; ++agent) {
                const double c = m.local_cost(agent, s, u);
                if (agent == i) {
                    delta = c;
                    CHECK(c >= 0.0);
                    CHECK(c <= 50.0);
                } else {
                    CHECK(c == 0.0);
                }
                nonzero += c != 0.0;
            }
            CHECK(nonzero <= 1);
            CHECK(m.global_cost(s, u) == doctest::Approx(delta / 10.0).epsilon(1e-15));
        }
        // terminal costs all zero
        for (int agent = 0; agent < 10; ++agent) CHECK(m.local_cost(agent, 6, u) == 0.0);
    }
}

TEST_CASE("costs depend on the cost seed only") {
    const auto a = build_task_assignment_mdp(10, 5);
    const auto b = build_task_assignment_mdp(10, 5);
    const auto c = build_task_assignment_mdp(10, 6);
    CHECK(a.fingerprint() == b.fingerprint());
    CHECK(a.fingerprint() != c.fingerprint());
}

TEST_CASE("trajectory sampling is deterministic and terminal is absorbing") {
    const auto m = build_task_assignment_mdp(10, 1);

    Rng r1(77), r2(77);
    TrajectoryState t1, t2;
    for (int step_i = 0; step_i < 500; ++step_i) {
        const auto s1 = step(m, t1, RestartRule::exploring_starts, r1);
        const auto s2 = step(m, t2, RestartRule::exploring_starts, r2);
        CHECK(s1.x == s2.x);
        CHECK(s1.u == s2.u);
        CHECK(s1.x_next == s2.x_next);
        CHECK(!m.is_terminal(s1.x));  // restarts happen before the next sample
        CHECK(s1.costs == s2.costs);
    }
}

TEST_CASE("initial-state restart returns to state 1") {
    const auto m = build_task_assignment_mdp(4, 1);
    Rng rng(3);
    TrajectoryState traj;
    bool saw_restart = false;
    for (int i = 0; i < 2000; ++i) {
        const auto s = step(m, traj, RestartRule::initial_state, rng);
        if (m.is_terminal(s.x_next)) {
            CHECK(traj.current_state == 0);
            saw_restart = true;
        }
    }
    CHECK(saw_restart);
}

TEST_CASE("visit counts") {
    const auto m = build_task_assignment_mdp(10, 2);
    CHECK(visit_counts(m, {}) == std::vector(7, std::vector<long>(90, 0)));

    std::vector<EnvSample> log(1);
    log[0].x = 2;
    log[0].u = 5;
    const auto counts = visit_counts(m, log);
    CHECK(counts[2][5] == 1);

    // Long uniform-exploration run touches every non-terminal pair.
    Rng rng(11);
    TrajectoryState traj;
    std::vector<EnvSample> big;
    big.reserve(100000);
    for (int i = 0; i < 100000; ++i)
        big.push_back(step(m, traj, RestartRule::exploring_starts, rng));
    const auto big_counts = visit_counts(m, big);
    for (int s = 0; s < 6; ++s)
        for (int u = 0; u < 90; ++u) CHECK(big_counts[s][u] >= 1);
}

TEST_CASE("mdp json round trip") {
    const auto m = build_task_assignment_mdp(4, 31);
    const auto copy = MdpModel::from_json(m.to_json());
    CHECK(copy.fingerprint() == m.fingerprint());
    CHECK(copy.num_actions() == m.num_actions());
    CHECK(copy.discount() == m.discount());
}
