#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "seqsel/belief.hpp"
#include "seqsel/quadrature.hpp"
#include "seqsel/sensors.hpp"

namespace seqsel {

// Lagrangian cost parameters: terminal error weights mu0/mu1 and optional
// per-sensor sampling surcharges lambda (indexed by bank position, missing
// entries mean zero). Each sample costs 1 + lambda[s].
struct CostParams {
    double mu0 = 0.0;
    double mu1 = 0.0;
    std::vector<double> lambda;

    double sampling_cost(int s) const {
        return 1.0 + (s < static_cast<int>(lambda.size()) ? lambda[s] : 0.0);
    }
    void validate(int bank_size) const;
};

// Expected terminal cost of stopping at posterior nu and deciding optimally:
// phi(nu) = min(mu1 nu, mu0 (1 - nu)).
inline double phi(double nu, const CostParams& costs) {
    return std::min(costs.mu1 * nu, costs.mu0 * (1.0 - nu));
}

enum class ExecMode { serial, parallel };

// Precomputed one-step transition of a single sensor on the belief grid:
// for grid point k and node i, the updated posterior lands between grid
// cells idx and idx+1 with fraction frac, carrying posterior-predictive
// weight wgt. Flattened as [k * nodes + i]. Depends only on the sensor,
// the grid, and the quadrature rule, never on the costs, so one table
// serves every solve during multiplier tuning.
struct TransitionTable {
    int nodes = 0;
    std::vector<std::int32_t> idx;
    std::vector<double> frac;
    std::vector<double> wgt;
};

TransitionTable build_transitions(const SensorModel& sensor, const BeliefGrid& grid,
                                  const QuadratureRule& rule);

// Value rows G[t][k] for t = 0..horizon; row `horizon` is the stopping cost.
struct ValueTable {
    int horizon = 0;
    int grid_size = 0;
    std::vector<std::vector<double>> rows;
};

// sel[t][k]: bank index of the sensor to use for sample t+1 at grid point k,
// or -1 where stopping is optimal. Continuation wins ties with stopping;
// among sensors, the lowest bank index wins ties.
struct DesignResult {
    ValueTable values;
    std::vector<std::vector<std::int8_t>> sel;
};

// One backward step: out[k] = min(phi_row[k], min_s C_s + E[interp(next, nu')]).
// Grid points are independent, so the parallel path is bit-identical to the
// serial one at any thread count.
void dp_step(const std::vector<TransitionTable>& tables, const CostParams& costs,
             const std::vector<double>& phi_row, const std::vector<double>& next,
             std::vector<double>& out, std::vector<std::int8_t>& out_sel, ExecMode exec);

// Shared precomputed state for repeated solves over one bank/grid/rule.
class DesignContext {
public:
    DesignContext(std::vector<SensorModel> bank, int grid_size, int quad_nodes);

    const std::vector<SensorModel>& bank() const { return bank_; }
    const BeliefGrid& grid() const { return grid_; }
    const QuadratureRule& quad() const { return quad_; }
    const std::vector<TransitionTable>& tables() const { return tables_; }

    DesignResult solve(const CostParams& costs, int horizon, ExecMode exec) const;

    // Max |T(row) - row| over interior grid points, where T is one backward
    // step; small values certify an (approximately) stationary fixed point.
    double bellman_residual(const std::vector<double>& row, const CostParams& costs,
                            ExecMode exec) const;

private:
    std::vector<SensorModel> bank_;
    BeliefGrid grid_;
    QuadratureRule quad_;
    std::vector<TransitionTable> tables_;
};

DesignResult backward_recursion(const DesignContext& ctx, const CostParams& costs, int horizon,
                                ExecMode exec = ExecMode::parallel);

// Contiguous block of grid points assigned to one sensor.
struct SelectionRun {
    double nu_lo = 0.0;
    double nu_hi = 0.0;
    int sensor_id = -1;
};

// Per-stage stopping boundaries. Continuation holds on posteriors in
// [a, b], equivalently cumulative LLR in (-A, B); cont=false marks an
// empty continuation set (always the case at the final stage).
struct PolicyStage {
    bool cont = false;
    double a = 0.0, b = 0.0;
    double A = 0.0, B = 0.0;
    std::vector<SelectionRun> runs;
};

struct Policy {
    bool stationary = false;
    int horizon = 0;
    int grid_size = 0;
    Priors priors;
    CostParams costs;
    std::vector<SensorModel> sensors;
    std::vector<PolicyStage> stages;  // finite: horizon+1 entries; stationary: 1

    const PolicyStage& stage(int t) const {
        return stationary ? stages.front() : stages[static_cast<std::size_t>(t)];
    }

    // Bank index of the sensor for the next sample, by nearest grid point.
    // Only meaningful when the stage has a nonempty continuation set.
    int select(int t, double nu) const;

    // Position of a sensor id within `sensors`.
    int bank_index(int sensor_id) const;

    // Stopping with an empty continuation set decides D = 1 iff the
    // cumulative LLR is >= this value (mu0 pi0 <= mu1 pi1 at the posterior).
    double decision_llr() const;
};

Policy extract_thresholds(const DesignResult& result, const DesignContext& ctx,
                          const CostParams& costs, const Priors& priors);

struct StationaryDiag {
    int max_drift_cells = 0;  // boundary movement over early stages, in grid cells
    bool converged = true;    // max_drift_cells within tolerance
};

// Freeze stage 0 of a long-horizon design into a time-invariant policy.
// The drift diagnostic compares boundary cells over t in [0, horizon/4].
std::pair<Policy, StationaryDiag> stationary_policy(const DesignResult& result,
                                                    const DesignContext& ctx,
                                                    const CostParams& costs, const Priors& priors,
                                                    int drift_tol_cells = 2);

// Minimal expected Bayes cost when starting from prior pi1: interp(G[0], pi1).
double bayes_risk(const DesignResult& result, const DesignContext& ctx, double pi1);

}  // namespace seqsel
