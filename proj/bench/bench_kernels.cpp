// Times the two hot kernels (backward recursion, Monte Carlo replication)
// on a four-sensor exponential bank, serial against OpenMP, and confirms
// the paths agree bit for bit while it is at it.

#ifdef _OPENMP
#include <omp.h>
#endif

#include <chrono>
#include <cstdio>
#include <functional>

#include "seqsel/design.hpp"
#include "seqsel/simulate.hpp"

using namespace seqsel;

namespace {

double time_s(const std::function<void()>& fn) {
    auto t0 = std::chrono::steady_clock::now();
    fn();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void report(const char* kernel, double serial_s, double parallel_s, bool identical) {
    std::printf("%-22s %10.3f s %10.3f s %8.2fx   %s\n", kernel, serial_s, parallel_s,
                serial_s / parallel_s, identical ? "bit-identical" : "MISMATCH");
}

}  // namespace

int main() {
    std::vector<SensorModel> bank {SensorModel::exponential(1, 0.5, 1.0),
                                   SensorModel::exponential(2, 1.0, 0.5),
                                   SensorModel::exponential(3, 0.52, 1.0),
                                   SensorModel::exponential(4, 1.0, 0.52)};
    int grid = 4001, quad = 64, horizon = 100;
    long reps = 50000;

#ifdef _OPENMP
    std::printf("threads: %d (set OMP_NUM_THREADS to change)\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (built without OpenMP)\n");
#endif
    std::printf("backward recursion: grid %d, %d quadrature nodes, horizon %d\n", grid, quad,
                horizon);
    std::printf("monte carlo: %ld replications\n\n", reps);
    std::printf("%-22s %12s %12s %9s\n", "kernel", "serial", "parallel", "speedup");

    DesignContext ctx(bank, grid, quad);
    CostParams costs;
    costs.mu0 = costs.mu1 = 100.0;

    DesignResult rs, rp;
    double ts = time_s([&] { rs = ctx.solve(costs, horizon, ExecMode::serial); });
    double tp = time_s([&] { rp = ctx.solve(costs, horizon, ExecMode::parallel); });
    report("backward recursion", ts, tp, rs.values.rows == rp.values.rows);

    Policy policy = stationary_policy(rp, ctx, costs, Priors {0.5}).first;
    SimulationReport ms, mp;
    ts = time_s([&] { ms = monte_carlo(policy, reps, 1, Condition::mixed, ExecMode::serial); });
    tp = time_s(
        [&] { mp = monte_carlo(policy, reps, 1, Condition::mixed, ExecMode::parallel); });
    report("monte carlo", ts, tp,
           ms.et == mp.et && ms.alpha_hat == mp.alpha_hat && ms.usage == mp.usage);
    return 0;
}
