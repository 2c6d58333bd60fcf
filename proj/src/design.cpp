#include "seqsel/design.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace seqsel {

void CostParams::validate(int bank_size) const {
    if (!(mu0 >= 0.0) || !(mu1 >= 0.0))
        throw std::invalid_argument("error weights mu0, mu1 must be nonnegative");
    if (!(mu0 + mu1 > 0.0))
        throw std::invalid_argument("at least one of mu0, mu1 must be positive");
    if (static_cast<int>(lambda.size()) > bank_size)
        throw std::invalid_argument("more lambda entries than sensors");
    for (double l : lambda)
        if (!(l >= 0.0)) throw std::invalid_argument("sampling surcharges must be nonnegative");
}

TransitionTable build_transitions(const SensorModel& sensor, const BeliefGrid& grid,
                                  const QuadratureRule& rule) {
    const int G = grid.size();
    TransitionTable table;

    if (sensor.kind() == SensorKind::tabular) {
        const auto& f0 = sensor.mass0();
        const auto& f1 = sensor.mass1();
        const int J = sensor.support();
        table.nodes = J;
        table.idx.resize(static_cast<std::size_t>(G) * J);
        table.frac.resize(static_cast<std::size_t>(G) * J);
        table.wgt.resize(static_cast<std::size_t>(G) * J);
        for (int k = 0; k < G; ++k) {
            double nu = grid.point(k);
            for (int j = 0; j < J; ++j) {
                double m = (1.0 - nu) * f0[j] + nu * f1[j];
                double nup = m > 0.0 ? nu * f1[j] / m : nu;
                double pos = nup * (G - 1);
                int lo = std::min(static_cast<int>(pos), G - 2);
                std::size_t at = static_cast<std::size_t>(k) * J + j;
                table.idx[at] = lo;
                table.frac[at] = pos - lo;
                table.wgt[at] = m;
            }
        }
        return table;
    }

    // Exponential sensor: nodes are quadrature points of the substitution
    // u = 1 - exp(-eta x), eta = min(eta0, eta1). The transformed density of
    // f_h is r_h (1-u)^{r_h - 1} with r_h = eta_h / eta >= 1, bounded on [0,1).
    const int n = rule.size();
    const double eta = std::min(sensor.eta0(), sensor.eta1());
    const double r0 = sensor.eta0() / eta, r1 = sensor.eta1() / eta;
    table.nodes = n;
    table.idx.resize(static_cast<std::size_t>(G) * n);
    table.frac.resize(static_cast<std::size_t>(G) * n);
    table.wgt.resize(static_cast<std::size_t>(G) * n);

    std::vector<double> llr(n), d0(n), d1(n);
    for (int i = 0; i < n; ++i) {
        double lg = std::log1p(-rule.x[i]);
        llr[i] = sensor.llr_value(-lg / eta);
        d0[i] = r0 * std::exp((r0 - 1.0) * lg);
        d1[i] = r1 * std::exp((r1 - 1.0) * lg);
    }
    for (int k = 0; k < G; ++k) {
        double nu = grid.point(k);
        for (int i = 0; i < n; ++i) {
            double nup = update_posterior(nu, llr[i]);
            double pos = nup * (G - 1);
            int lo = std::min(static_cast<int>(pos), G - 2);
            std::size_t at = static_cast<std::size_t>(k) * n + i;
            table.idx[at] = lo;
            table.frac[at] = pos - lo;
            table.wgt[at] = rule.w[i] * ((1.0 - nu) * d0[i] + nu * d1[i]);
        }
    }
    return table;
}

namespace {

inline void dp_step_point(int k, const std::vector<TransitionTable>& tables,
                          const CostParams& costs, const double* phi_row, const double* next,
                          double* out, std::int8_t* out_sel) {
    double best = std::numeric_limits<double>::infinity();
    std::int8_t best_s = -1;
    for (std::size_t s = 0; s < tables.size(); ++s) {
        const TransitionTable& tt = tables[s];
        const std::size_t base = static_cast<std::size_t>(k) * tt.nodes;
        const std::int32_t* idx = tt.idx.data() + base;
        const double* frac = tt.frac.data() + base;
        const double* wgt = tt.wgt.data() + base;
        double acc = 0.0;
        for (int i = 0; i < tt.nodes; ++i) {
            const double* cell = next + idx[i];
            acc += wgt[i] * ((1.0 - frac[i]) * cell[0] + frac[i] * cell[1]);
        }
        double v = costs.sampling_cost(static_cast<int>(s)) + acc;
        if (v < best) {
            best = v;
            best_s = static_cast<std::int8_t>(s);
        }
    }
    // stopping loses ties, matching the continuation region phi >= G~
    if (phi_row[k] >= best) {
        out[k] = best;
        out_sel[k] = best_s;
    } else {
        out[k] = phi_row[k];
        out_sel[k] = -1;
    }
}

}  // namespace

void dp_step(const std::vector<TransitionTable>& tables, const CostParams& costs,
             const std::vector<double>& phi_row, const std::vector<double>& next,
             std::vector<double>& out, std::vector<std::int8_t>& out_sel, ExecMode exec) {
    const int G = static_cast<int>(phi_row.size());
    out.resize(phi_row.size());
    out_sel.resize(phi_row.size());
    const double* phi_p = phi_row.data();
    const double* next_p = next.data();
    double* out_p = out.data();
    std::int8_t* sel_p = out_sel.data();
    if (exec == ExecMode::parallel) {
#pragma omp parallel for schedule(static)
        for (int k = 0; k < G; ++k)
            dp_step_point(k, tables, costs, phi_p, next_p, out_p, sel_p);
    } else {
        for (int k = 0; k < G; ++k)
            dp_step_point(k, tables, costs, phi_p, next_p, out_p, sel_p);
    }
}

DesignContext::DesignContext(std::vector<SensorModel> bank, int grid_size, int quad_nodes)
    : bank_(std::move(bank)), grid_(grid_size), quad_(gauss_legendre_01(quad_nodes)) {
    if (bank_.empty()) throw std::invalid_argument("sensor bank must not be empty");
    if (bank_.size() > 127) throw std::invalid_argument("sensor bank too large");
    tables_.reserve(bank_.size());
    for (const auto& s : bank_) tables_.push_back(build_transitions(s, grid_, quad_));
}

DesignResult DesignContext::solve(const CostParams& costs, int horizon, ExecMode exec) const {
    costs.validate(static_cast<int>(bank_.size()));
    if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
    const int G = grid_.size();

    std::vector<double> phi_row(G);
    for (int k = 0; k < G; ++k) phi_row[k] = phi(grid_.point(k), costs);

    DesignResult result;
    result.values.horizon = horizon;
    result.values.grid_size = G;
    result.values.rows.assign(static_cast<std::size_t>(horizon) + 1, {});
    result.sel.assign(static_cast<std::size_t>(horizon), {});
    result.values.rows[static_cast<std::size_t>(horizon)] = phi_row;

    for (int t = horizon - 1; t >= 0; --t) {
        dp_step(tables_, costs, phi_row, result.values.rows[static_cast<std::size_t>(t) + 1],
                result.values.rows[static_cast<std::size_t>(t)],
                result.sel[static_cast<std::size_t>(t)], exec);
    }
    return result;
}

double DesignContext::bellman_residual(const std::vector<double>& row, const CostParams& costs,
                                       ExecMode exec) const {
    const int G = grid_.size();
    if (static_cast<int>(row.size()) != G)
        throw std::invalid_argument("bellman_residual: row size does not match grid");
    std::vector<double> phi_row(G), mapped;
    std::vector<std::int8_t> sel;
    for (int k = 0; k < G; ++k) phi_row[k] = phi(grid_.point(k), costs);
    dp_step(tables_, costs, phi_row, row, mapped, sel, exec);
    double worst = 0.0;
    for (int k = 1; k + 1 < G; ++k) worst = std::max(worst, std::abs(mapped[k] - row[k]));
    return worst;
}

DesignResult backward_recursion(const DesignContext& ctx, const CostParams& costs, int horizon,
                                ExecMode exec) {
    return ctx.solve(costs, horizon, exec);
}

int Policy::bank_index(int sensor_id) const {
    for (std::size_t s = 0; s < sensors.size(); ++s)
        if (sensors[s].id() == sensor_id) return static_cast<int>(s);
    throw std::invalid_argument("sensor id not present in policy bank");
}

int Policy::select(int t, double nu) const {
    const PolicyStage& st = stage(t);
    if (!st.cont || st.runs.empty())
        throw std::logic_error("select called on a stage with empty continuation set");
    double point = std::round(nu * (grid_size - 1)) / (grid_size - 1);
    std::size_t lo = 0, hi = st.runs.size() - 1;
    if (point <= st.runs.front().nu_hi) return bank_index(st.runs.front().sensor_id);
    if (point >= st.runs.back().nu_lo) return bank_index(st.runs.back().sensor_id);
    while (lo < hi) {
        std::size_t mid = (lo + hi) / 2;
        if (st.runs[mid].nu_hi < point)
            lo = mid + 1;
        else
            hi = mid;
    }
    return bank_index(st.runs[lo].sensor_id);
}

double Policy::decision_llr() const {
    return std::log(costs.mu0 * priors.pi0()) - std::log(costs.mu1 * priors.pi1);
}

namespace {

PolicyStage make_stage(const std::vector<std::int8_t>& sel_row, const DesignContext& ctx,
                       const CostParams& costs, const Priors& priors) {
    const BeliefGrid& grid = ctx.grid();
    const int G = grid.size();
    PolicyStage st;
    int first = -1, last = -1;
    for (int k = 0; k < G; ++k) {
        if (sel_row[k] >= 0) {
            if (first < 0) first = k;
            last = k;
        }
    }
    if (first < 0) {
        st.cont = false;
        st.a = st.b = costs.mu0 / (costs.mu0 + costs.mu1);
        st.A = -posterior_to_llr(st.a, priors);
        st.B = posterior_to_llr(st.b, priors);
        return st;
    }
    st.cont = true;
    st.a = grid.point(first);
    st.b = grid.point(last);
    st.A = -posterior_to_llr(st.a, priors);
    st.B = posterior_to_llr(st.b, priors);
    int run_start = first;
    for (int k = first + 1; k <= last + 1; ++k) {
        if (k > last || sel_row[k] != sel_row[run_start]) {
            SelectionRun run;
            run.nu_lo = grid.point(run_start);
            run.nu_hi = grid.point(k - 1);
            run.sensor_id = ctx.bank()[static_cast<std::size_t>(sel_row[run_start])].id();
            st.runs.push_back(run);
            run_start = k;
        }
    }
    return st;
}

}  // namespace

Policy extract_thresholds(const DesignResult& result, const DesignContext& ctx,
                          const CostParams& costs, const Priors& priors) {
    priors.validate();
    Policy policy;
    policy.stationary = false;
    policy.horizon = result.values.horizon;
    policy.grid_size = ctx.grid().size();
    policy.priors = priors;
    policy.costs = costs;
    policy.sensors = ctx.bank();
    policy.stages.reserve(static_cast<std::size_t>(policy.horizon) + 1);
    for (const auto& sel_row : result.sel)
        policy.stages.push_back(make_stage(sel_row, ctx, costs, priors));
    // final stage: stopping is forced
    PolicyStage last;
    last.cont = false;
    last.a = last.b = costs.mu0 / (costs.mu0 + costs.mu1);
    last.A = -posterior_to_llr(last.a, priors);
    last.B = posterior_to_llr(last.b, priors);
    policy.stages.push_back(last);
    return policy;
}

std::pair<Policy, StationaryDiag> stationary_policy(const DesignResult& result,
                                                    const DesignContext& ctx,
                                                    const CostParams& costs, const Priors& priors,
                                                    int drift_tol_cells) {
    Policy finite = extract_thresholds(result, ctx, costs, priors);
    if (!finite.stages.front().cont)
        throw std::invalid_argument(
            "stationary_policy: continuation set empty at stage 0; nothing to freeze");

    StationaryDiag diag;
    const int G = ctx.grid().size();
    auto edge_cells = [&](int t) {
        const auto& row = result.sel[static_cast<std::size_t>(t)];
        int first = -1, last = -1;
        for (int k = 0; k < G; ++k)
            if (row[k] >= 0) {
                if (first < 0) first = k;
                last = k;
            }
        return std::pair<int, int>{first, last};
    };
    auto [a0, b0] = edge_cells(0);
    int upto = std::min(result.values.horizon / 4, result.values.horizon - 1);
    for (int t = 0; t <= upto; ++t) {
        auto [at, bt] = edge_cells(t);
        if (at < 0) continue;
        diag.max_drift_cells =
            std::max({diag.max_drift_cells, std::abs(at - a0), std::abs(bt - b0)});
    }
    diag.converged = diag.max_drift_cells <= drift_tol_cells;

    Policy policy;
    policy.stationary = true;
    policy.horizon = finite.horizon;
    policy.grid_size = finite.grid_size;
    policy.priors = priors;
    policy.costs = costs;
    policy.sensors = ctx.bank();
    policy.stages.push_back(finite.stages.front());
    return {std::move(policy), diag};
}

double bayes_risk(const DesignResult& result, const DesignContext& ctx, double pi1) {
    return interp(ctx.grid(), result.values.rows.front(), pi1);
}

}  // namespace seqsel
