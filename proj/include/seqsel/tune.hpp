#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "seqsel/design.hpp"
#include "seqsel/simulate.hpp"

namespace seqsel {

// Operating-point targets: conditional error probabilities plus mean usage
// limits for the sensors that have one (keyed by sensor id).
struct DesignTargets {
    double alpha = 0.01;
    double beta = 0.01;
    std::map<int, double> usage_limits;

    void validate() const;
};

enum class DesignMode { finite, infinite };

struct TunerConfig {
    std::array<double, 2> mu_init {100.0, 100.0};
    double lambda_init = 0.1;      // starting surcharge for a newly added sensor
    double delta_mu = 1.0;         // forward-difference steps
    double delta_lambda = 1e-3;
    double eps_error = 0.0;        // mu-gradient tolerance; 0 picks 2% of the
                                   // weighted error-target scale
    double eps_usage = 0.0;        // lambda-gradient tolerance; 0 picks 2% of
                                   // the usage-limit scale
    double rho = 0.5;              // backtracking contraction
    double armijo_c = 1e-4;
    double init_step = 0.5;        // first trial moves about this fraction of |x|
    int max_iterations = 60;
    int max_backtracks = 25;
    int max_passes = 8;            // effective-set growth rounds
    double positivity_floor = 1e-9;
    long mc_reps = 20000;
    std::uint64_t mc_seed = 20260822ULL;
    double violation_tol = 0.05;   // usage beyond (1 + tol) * limit counts as violated
    int drift_tol_cells = 2;
    ExecMode exec = ExecMode::parallel;
};

// stalled: backtracking could not find an uphill step in any block before
// the tolerances were met, typically because the finite-difference gradient
// is at the grid quantization noise floor. The returned multipliers are
// still the best iterate found.
enum class TuneStatus { converged, stalled, iteration_cap };

struct TraceRow {
    int pass = 0;
    int iteration = 0;
    double objective = 0.0;
    double grad_mu_norm = 0.0;
    double grad_lambda_norm = 0.0;
    std::array<double, 2> mu {0.0, 0.0};
    std::vector<double> lambda;  // aligned with the constrained set
};

struct TunerState {
    std::array<double, 2> mu {0.0, 0.0};
    std::vector<double> lambda;    // aligned with omega
    std::vector<int> omega;        // bank positions of constrained sensors
    TuneStatus status = TuneStatus::iteration_cap;
    int iterations = 0;
    long dp_solves = 0;
    double grad_mu_norm = 0.0;
    double grad_lambda_norm = 0.0;
    double objective = 0.0;
};

// Monte Carlo check of a tuned policy against its targets. Usage means are
// prior-weighted combinations of the per-hypothesis runs.
struct ConstraintReport {
    double alpha_hat = 0.0, se_alpha = 0.0;
    double beta_hat = 0.0, se_beta = 0.0;
    double e0t = 0.0, se_e0t = 0.0;
    double e1t = 0.0, se_e1t = 0.0;
    double et = 0.0, se_et = 0.0;
    std::vector<double> usage, se_usage;
    std::vector<double> usage_h0, usage_h1;
    std::vector<int> violated;  // bank positions with usage > (1 + tol) * limit
};

// Lagrangian dual evaluated by one full backward recursion:
//   min-cost value at the prior
//   - sum_l lambda_l T^l  -  mu0 pi0 alpha  -  mu1 pi1 beta.
// Concave and piecewise linear in (mu, lambda). `solves` (optional)
// accumulates the number of recursions spent.
double dual_objective(const DesignContext& ctx, const DesignTargets& targets,
                      const Priors& priors, int horizon, const std::array<double, 2>& mu,
                      const std::vector<double>& lambda, const std::vector<int>& omega,
                      ExecMode exec, long* solves = nullptr);

// Forward differences (f(x + delta e_i) - f_at_x) / delta.
std::vector<double> fd_gradient(const std::function<double(const std::vector<double>&)>& f,
                                const std::vector<double>& x, double delta, double f_at_x);

// Projected gradient ascent on the dual over a fixed constrained set,
// alternating a mu block and a lambda block with Armijo backtracking.
TunerState tune_multipliers(const DesignContext& ctx, const DesignTargets& targets,
                            const Priors& priors, int horizon, const std::vector<int>& omega,
                            const TunerConfig& cfg, std::array<double, 2> mu_start,
                            std::vector<double> lambda_start, int pass,
                            std::vector<TraceRow>* trace = nullptr);

ConstraintReport evaluate_constraints(const Policy& policy, const DesignTargets& targets,
                                      long reps, std::uint64_t seed, double violation_tol,
                                      ExecMode exec);

struct TuneResult {
    Policy policy;
    TunerState state;
    ConstraintReport constraints;
    StationaryDiag diag;  // meaningful when mode == infinite
    std::vector<TraceRow> trace;
    int passes = 0;
    bool feasible = false;     // final Monte Carlo check found no violation
    bool oscillation = false;  // constrained-set growth revisited an earlier set
};

// Outer loop: tune with the current constrained set, check usages by
// simulation, add violating sensors, repeat. Warm-starts each pass from the
// previous multipliers.
TuneResult effective_set_loop(const DesignContext& ctx, const DesignTargets& targets,
                              const Priors& priors, int horizon, DesignMode mode,
                              const TunerConfig& cfg);

}  // namespace seqsel
