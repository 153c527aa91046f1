// Benchmark: OpenMP-parallel filtered-update engine vs the serial build of
// the same engine, on a larger agent population than the bundled scenario.
// Verifies bit-identical results before reporting timings.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "frqd/comms.hpp"
#include "frqd/graph.hpp"
#include "frqd/learning.hpp"
#include "frqd/mdp.hpp"

using namespace frqd;

namespace {

double run(FrqdEngine& engine, const Graph& g, const AttackPlan& plan, const MdpModel& model,
           long steps, std::uint64_t traj_seed) {
    Rng traj(traj_seed);
    TrajectoryState ts;
    const auto start = std::chrono::steady_clock::now();
    for (long t = 0; t < steps; ++t)
        engine.step(g, plan, step(model, ts, RestartRule::exploring_starts, traj), t, nullptr);
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

int main(int argc, char** argv) {
    int n = 61;         // agents
    long steps = 2000;  // environment steps per engine
    int f = 2;
    if (argc > 1) n = std::atoi(argv[1]);
    if (argc > 2) steps = std::atol(argv[2]);
    if (argc > 3) f = std::atoi(argv[3]);
    const int r = 6 * f + 1;
    if (n <= r) {
        std::fprintf(stderr, "need n > 6F+1 (n=%d, F=%d)\n", n, f);
        return 2;
    }

    const auto model = build_task_assignment_mdp(n, 1);
    const Graph g = construct_redundant(n, r);
    const AttackPlan plan({AttackStrategy::extreme_value, AttackStrategy::falsified_relay}, f,
                          7);
    const auto params = ScheduleParams::from_epsilons(0.1, 0.1, 1.0, 1e-4, 1e-4);

    std::printf("agents=%d actions=%d edges=%d F=%d steps=%ld\n", n, model.num_actions(),
                g.edge_count(), f, steps);
#ifdef _OPENMP
    std::printf("openmp threads=%d\n", omp_get_max_threads());
#else
    std::printf("openmp not enabled in this build\n");
#endif

    FrqdEngine serial(&model, params, f, {.parallel = false});
    FrqdEngine parallel(&model, params, f, {.parallel = true});
    Rng i1(3), i2(3);
    serial.init_q_random(n, i1);
    parallel.init_q_random(n, i2);

    const double t_serial = run(serial, g, plan, model, steps, 5);
    const double t_parallel = run(parallel, g, plan, model, steps, 5);

    for (int i = 0; i < n; ++i)
        if (serial.q_table(i) != parallel.q_table(i)) {
            std::fprintf(stderr, "FAIL: serial and parallel results differ (agent %d)\n", i);
            return 1;
        }

    std::printf("serial:   %8.3f s  (%.1f us/step)\n", t_serial, 1e6 * t_serial / steps);
    std::printf("parallel: %8.3f s  (%.1f us/step)\n", t_parallel, 1e6 * t_parallel / steps);
    std::printf("speedup:  %.2fx (results bit-identical)\n", t_serial / t_parallel);
    return 0;
}
