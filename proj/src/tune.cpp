#include "seqsel/tune.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "seqsel/errors.hpp"

namespace seqsel {

namespace {

double norm2(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

std::vector<double> scatter_lambda(const std::vector<int>& omega, const std::vector<double>& lam,
                                   std::size_t bank_size) {
    std::vector<double> full(bank_size, 0.0);
    for (std::size_t i = 0; i < omega.size(); ++i)
        full[std::size_t(omega[i])] = lam[i];
    return full;
}

double limit_at(const DesignContext& ctx, const DesignTargets& targets, int bank_pos) {
    return targets.usage_limits.at(ctx.bank()[std::size_t(bank_pos)].id());
}

struct BlockResult {
    bool within_tol = false;
    bool moved = false;
    double grad_norm = 0.0;
};

// One projected-ascent step on a coordinate block of the dual. rel_floor
// keeps the first trial step sensible when the block sits near zero.
BlockResult ascend_block(const std::function<double(const std::vector<double>&)>& f,
                         std::vector<double>& x, double& f_cur, double delta, double eps,
                         double rel_floor, const TunerConfig& cfg) {
    BlockResult out;
    std::vector<double> g = fd_gradient(f, x, delta, f_cur);
    out.grad_norm = norm2(g);
    if (out.grad_norm <= eps) {
        out.within_tol = true;
        return out;
    }
    double step = cfg.init_step * (norm2(x) + rel_floor) / out.grad_norm;
    for (int bt = 0; bt < cfg.max_backtracks; ++bt) {
        std::vector<double> xn(x.size());
        double ascent = 0.0;  // g . (xn - x), projection-aware
        for (std::size_t i = 0; i < x.size(); ++i) {
            xn[i] = std::max(x[i] + step * g[i], cfg.positivity_floor);
            ascent += g[i] * (xn[i] - x[i]);
        }
        double fn = f(xn);
        if (fn >= f_cur + cfg.armijo_c * ascent) {
            x = std::move(xn);
            f_cur = fn;
            out.moved = true;
            break;
        }
        step *= cfg.rho;
    }
    return out;
}

}  // namespace

void DesignTargets::validate() const {
    if (!(alpha > 0.0) || !(alpha < 1.0) || !(beta > 0.0) || !(beta < 1.0))
        throw SchemaError("error targets must lie strictly inside (0, 1)");
    if (!(alpha + beta < 1.0))
        throw SchemaError("error targets must satisfy alpha + beta < 1");
    for (const auto& [id, cap] : usage_limits)
        if (!(cap > 0.0))
            throw SchemaError("usage limit for sensor " + std::to_string(id) +
                              " must be positive");
}

double dual_objective(const DesignContext& ctx, const DesignTargets& targets,
                      const Priors& priors, int horizon, const std::array<double, 2>& mu,
                      const std::vector<double>& lambda, const std::vector<int>& omega,
                      ExecMode exec, long* solves) {
    CostParams costs;
    costs.mu0 = mu[0];
    costs.mu1 = mu[1];
    costs.lambda = scatter_lambda(omega, lambda, ctx.bank().size());
    DesignResult result = ctx.solve(costs, horizon, exec);
    if (solves) ++*solves;
    double value = bayes_risk(result, ctx, priors.pi1);
    for (std::size_t i = 0; i < omega.size(); ++i)
        value -= lambda[i] * limit_at(ctx, targets, omega[i]);
    value -= mu[0] * priors.pi0() * targets.alpha;
    value -= mu[1] * priors.pi1 * targets.beta;
    return value;
}

std::vector<double> fd_gradient(const std::function<double(const std::vector<double>&)>& f,
                                const std::vector<double>& x, double delta, double f_at_x) {
    if (!(delta > 0.0)) throw std::invalid_argument("fd_gradient: delta must be positive");
    std::vector<double> g(x.size());
    std::vector<double> xp = x;
    for (std::size_t i = 0; i < x.size(); ++i) {
        xp[i] = x[i] + delta;
        g[i] = (f(xp) - f_at_x) / delta;
        xp[i] = x[i];
    }
    return g;
}

TunerState tune_multipliers(const DesignContext& ctx, const DesignTargets& targets,
                            const Priors& priors, int horizon, const std::vector<int>& omega,
                            const TunerConfig& cfg, std::array<double, 2> mu_start,
                            std::vector<double> lambda_start, int pass,
                            std::vector<TraceRow>* trace) {
    targets.validate();
    priors.validate();
    if (lambda_start.size() != omega.size())
        throw std::invalid_argument("lambda_start size does not match the constrained set");
    for (int pos : omega) {
        if (pos < 0 || pos >= int(ctx.bank().size()))
            throw std::invalid_argument("constrained set names an invalid bank position");
        limit_at(ctx, targets, pos);  // throws if the sensor has no limit
    }

    TunerState st;
    st.omega = omega;

    std::vector<double> xm {mu_start[0], mu_start[1]};
    std::vector<double> xl = std::move(lambda_start);
    long solves = 0;

    auto f_mu = [&](const std::vector<double>& m) {
        return dual_objective(ctx, targets, priors, horizon, {m[0], m[1]}, xl, omega, cfg.exec,
                              &solves);
    };
    auto f_lam = [&](const std::vector<double>& l) {
        return dual_objective(ctx, targets, priors, horizon, {xm[0], xm[1]}, l, omega, cfg.exec,
                              &solves);
    };

    double eps_mu = cfg.eps_error > 0.0
                        ? cfg.eps_error
                        : 0.02 * std::hypot(priors.pi0() * targets.alpha,
                                            priors.pi1 * targets.beta);
    double eps_lam = cfg.eps_usage;
    if (!(eps_lam > 0.0) && !omega.empty()) {
        double s = 0.0;
        for (int pos : omega) {
            double cap = limit_at(ctx, targets, pos);
            s += cap * cap;
        }
        eps_lam = 0.02 * std::sqrt(s);
    }

    double f_cur = f_mu(xm);
    for (int it = 1; it <= cfg.max_iterations; ++it) {
        st.iterations = it;
        BlockResult bm = ascend_block(f_mu, xm, f_cur, cfg.delta_mu, eps_mu, 1.0, cfg);
        BlockResult bl;
        bl.within_tol = true;
        if (!omega.empty())
            bl = ascend_block(f_lam, xl, f_cur, cfg.delta_lambda, eps_lam, 0.02, cfg);
        st.grad_mu_norm = bm.grad_norm;
        st.grad_lambda_norm = bl.grad_norm;
        if (trace)
            trace->push_back({pass, it, f_cur, bm.grad_norm, bl.grad_norm, {xm[0], xm[1]}, xl});
        if (bm.within_tol && bl.within_tol) {
            st.status = TuneStatus::converged;
            break;
        }
        if (!bm.moved && !bl.moved) {
            st.status = TuneStatus::stalled;
            break;
        }
    }
    st.mu = {xm[0], xm[1]};
    st.lambda = std::move(xl);
    st.dp_solves = solves;
    st.objective = f_cur;
    return st;
}

ConstraintReport evaluate_constraints(const Policy& policy, const DesignTargets& targets,
                                      long reps, std::uint64_t seed, double violation_tol,
                                      ExecMode exec) {
    SimulationReport r0 = monte_carlo(policy, reps, seed, Condition::h0, exec);
    SimulationReport r1 = monte_carlo(policy, reps, seed + 1, Condition::h1, exec);
    const double pi0 = policy.priors.pi0();
    const double pi1 = policy.priors.pi1;

    ConstraintReport rep;
    rep.alpha_hat = r0.alpha_hat;
    rep.se_alpha = r0.se_alpha;
    rep.beta_hat = r1.beta_hat;
    rep.se_beta = r1.se_beta;
    rep.e0t = r0.e0t;
    rep.se_e0t = r0.se_e0t;
    rep.e1t = r1.e1t;
    rep.se_e1t = r1.se_e1t;
    rep.et = pi0 * rep.e0t + pi1 * rep.e1t;
    rep.se_et = std::hypot(pi0 * rep.se_e0t, pi1 * rep.se_e1t);

    const std::size_t n = policy.sensors.size();
    rep.usage.resize(n);
    rep.se_usage.resize(n);
    rep.usage_h0 = r0.usage_h0;
    rep.usage_h1 = r1.usage_h1;
    for (std::size_t s = 0; s < n; ++s) {
        rep.usage[s] = pi0 * r0.usage_h0[s] + pi1 * r1.usage_h1[s];
        rep.se_usage[s] = std::hypot(pi0 * r0.se_usage_h0[s], pi1 * r1.se_usage_h1[s]);
    }
    for (std::size_t s = 0; s < n; ++s) {
        auto it = targets.usage_limits.find(policy.sensors[s].id());
        if (it != targets.usage_limits.end() &&
            rep.usage[s] > (1.0 + violation_tol) * it->second)
            rep.violated.push_back(int(s));
    }
    return rep;
}

TuneResult effective_set_loop(const DesignContext& ctx, const DesignTargets& targets,
                              const Priors& priors, int horizon, DesignMode mode,
                              const TunerConfig& cfg) {
    targets.validate();
    priors.validate();
    for (const auto& [id, cap] : targets.usage_limits) {
        (void)cap;
        bool found = false;
        for (const auto& s : ctx.bank())
            if (s.id() == id) found = true;
        if (!found)
            throw SchemaError("usage limit names sensor id " + std::to_string(id) +
                              " which is not in the bank");
    }

    TuneResult out;
    std::vector<int> omega;
    std::vector<double> lambda;
    std::array<double, 2> mu = cfg.mu_init;
    std::set<std::vector<int>> seen;
    seen.insert(omega);

    for (int pass = 1; pass <= cfg.max_passes; ++pass) {
        out.passes = pass;
        out.state = tune_multipliers(ctx, targets, priors, horizon, omega, cfg, mu, lambda,
                                     pass, &out.trace);
        mu = out.state.mu;
        lambda = out.state.lambda;

        CostParams costs;
        costs.mu0 = mu[0];
        costs.mu1 = mu[1];
        costs.lambda = scatter_lambda(omega, lambda, ctx.bank().size());
        DesignResult result = ctx.solve(costs, horizon, cfg.exec);
        if (mode == DesignMode::infinite) {
            auto [pol, diag] = stationary_policy(result, ctx, costs, priors, cfg.drift_tol_cells);
            out.policy = std::move(pol);
            out.diag = diag;
        } else {
            out.policy = extract_thresholds(result, ctx, costs, priors);
            out.diag = StationaryDiag {};
        }
        out.constraints = evaluate_constraints(out.policy, targets, cfg.mc_reps, cfg.mc_seed,
                                               cfg.violation_tol, cfg.exec);

        if (out.constraints.violated.empty()) {
            out.feasible = true;
            break;
        }
        std::vector<int> added;
        for (int s : out.constraints.violated)
            if (std::find(omega.begin(), omega.end(), s) == omega.end()) added.push_back(s);
        if (added.empty()) break;  // violations persist inside the set; growth cannot help

        std::vector<int> next = omega;
        next.insert(next.end(), added.begin(), added.end());
        std::sort(next.begin(), next.end());
        if (seen.count(next)) {
            out.oscillation = true;
            break;
        }
        seen.insert(next);

        std::vector<double> next_lambda(next.size(), cfg.lambda_init);
        for (std::size_t i = 0; i < next.size(); ++i) {
            auto it = std::find(omega.begin(), omega.end(), next[i]);
            if (it != omega.end()) next_lambda[i] = lambda[std::size_t(it - omega.begin())];
        }
        omega = std::move(next);
        lambda = std::move(next_lambda);
    }
    return out;
}

}  // namespace seqsel
