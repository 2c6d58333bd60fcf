#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "seqsel/design.hpp"
#include "seqsel/rng.hpp"

namespace seqsel {

enum class Condition { h0, h1, mixed };

struct TrialOutcome {
    int hypothesis = 0;
    int decision = 0;
    long steps = 0;
    bool truncated = false;  // stopped by an empty continuation stage
    std::vector<long> usage;  // samples taken per bank position; sums to steps
};

struct SimulationReport {
    Condition condition = Condition::mixed;
    long reps = 0;
    std::uint64_t seed = 0;
    long n0 = 0, n1 = 0;  // trials run under each hypothesis

    // error estimates are conditional rates; NaN when no trials of that
    // hypothesis were run
    double alpha_hat = 0.0, se_alpha = 0.0;
    double beta_hat = 0.0, se_beta = 0.0;

    double et = 0.0, se_et = 0.0;    // mean steps over the whole run
    double e0t = 0.0, se_e0t = 0.0;  // conditional means (NaN when absent)
    double e1t = 0.0, se_e1t = 0.0;

    std::vector<double> usage, se_usage;      // per bank position, whole run
    std::vector<double> usage_h0, se_usage_h0;
    std::vector<double> usage_h1, se_usage_h1;

    long truncated = 0;
};

// Runs one sequential trial of the policy under the given hypothesis.
// Trials of stationary policies are capped at 10^6 steps (runaway guard).
TrialOutcome run_trial(const Policy& policy, int hypothesis, RandomStream& rng);

// Independent replications with per-replication random streams derived from
// (seed, replication index): results do not depend on scheduling, and the
// parallel path is bit-identical to the serial one. Under Condition::mixed
// each replication first draws its hypothesis from the policy's prior.
SimulationReport monte_carlo(const Policy& policy, long reps, std::uint64_t seed,
                             Condition condition, ExecMode exec = ExecMode::parallel);

// Data-independent baseline: every step picks sensor l with probability q[l],
// stops on the fixed Wald boundaries.
struct OfflinePolicy {
    std::vector<double> q;  // per bank position, sums to 1
    double A = 0.0, B = 0.0;
};

TrialOutcome run_offline(const OfflinePolicy& policy, const std::vector<SensorModel>& bank,
                         int hypothesis, RandomStream& rng);

SimulationReport monte_carlo_offline(const OfflinePolicy& policy,
                                     const std::vector<SensorModel>& bank, const Priors& priors,
                                     long reps, std::uint64_t seed, Condition condition,
                                     ExecMode exec = ExecMode::parallel);

struct OfflineDesign {
    OfflinePolicy policy;
    bool feasible = false;
    double predicted_e0t = 0.0, predicted_e1t = 0.0, predicted_et = 0.0;
};

// Grid search over the probability simplex (lattice with the given step)
// minimizing the Wald-approximate mean sample size subject to the usage
// limits q[l] * E[T] <= T^l. feasible=false when no lattice point qualifies.
OfflineDesign optimize_offline(const std::vector<SensorModel>& bank, double alpha, double beta,
                               const Priors& priors, const std::map<int, double>& usage_limits,
                               double step = 0.025);

}  // namespace seqsel
