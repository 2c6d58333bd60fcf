#include "seqsel/simulate.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "seqsel/belief.hpp"
#include "seqsel/bounds.hpp"
#include "seqsel/errors.hpp"

namespace seqsel {

namespace {

constexpr long kStepCap = 1000000;  // runaway guard for untruncated policies

double nan_value() { return std::numeric_limits<double>::quiet_NaN(); }

// Mean and standard error of the mean (sample sd, n-1 denominator).
struct Accumulator {
    double sum = 0.0, sumsq = 0.0;
    long n = 0;
    void add(double x) {
        sum += x;
        sumsq += x * x;
        ++n;
    }
    double mean() const { return n > 0 ? sum / double(n) : nan_value(); }
    double se() const {
        if (n < 2) return n == 1 ? 0.0 : nan_value();
        double m = mean();
        double var = (sumsq - double(n) * m * m) / double(n - 1);
        return std::sqrt(std::max(var, 0.0) / double(n));
    }
};

double rate_se(double p, long n) {
    if (n <= 0) return nan_value();
    return std::sqrt(std::max(p * (1.0 - p), 0.0) / double(n));
}

SimulationReport aggregate(const std::vector<TrialOutcome>& outcomes, std::size_t bank_size,
                           Condition condition, std::uint64_t seed) {
    SimulationReport rep;
    rep.condition = condition;
    rep.reps = long(outcomes.size());
    rep.seed = seed;

    Accumulator steps_all, steps_h0, steps_h1;
    std::vector<Accumulator> use_all(bank_size), use_h0(bank_size), use_h1(bank_size);
    long err0 = 0, err1 = 0;

    for (const TrialOutcome& out : outcomes) {
        steps_all.add(double(out.steps));
        if (out.truncated) ++rep.truncated;
        if (out.hypothesis == 0) {
            ++rep.n0;
            steps_h0.add(double(out.steps));
            if (out.decision == 1) ++err0;
        } else {
            ++rep.n1;
            steps_h1.add(double(out.steps));
            if (out.decision == 0) ++err1;
        }
        for (std::size_t s = 0; s < bank_size; ++s) {
            double u = double(out.usage[s]);
            use_all[s].add(u);
            (out.hypothesis == 0 ? use_h0[s] : use_h1[s]).add(u);
        }
    }

    rep.alpha_hat = rep.n0 > 0 ? double(err0) / double(rep.n0) : nan_value();
    rep.se_alpha = rate_se(rep.alpha_hat, rep.n0);
    rep.beta_hat = rep.n1 > 0 ? double(err1) / double(rep.n1) : nan_value();
    rep.se_beta = rate_se(rep.beta_hat, rep.n1);

    rep.et = steps_all.mean();
    rep.se_et = steps_all.se();
    rep.e0t = steps_h0.mean();
    rep.se_e0t = steps_h0.se();
    rep.e1t = steps_h1.mean();
    rep.se_e1t = steps_h1.se();

    rep.usage.resize(bank_size);
    rep.se_usage.resize(bank_size);
    rep.usage_h0.resize(bank_size);
    rep.se_usage_h0.resize(bank_size);
    rep.usage_h1.resize(bank_size);
    rep.se_usage_h1.resize(bank_size);
    for (std::size_t s = 0; s < bank_size; ++s) {
        rep.usage[s] = use_all[s].mean();
        rep.se_usage[s] = use_all[s].se();
        rep.usage_h0[s] = use_h0[s].mean();
        rep.se_usage_h0[s] = use_h0[s].se();
        rep.usage_h1[s] = use_h1[s].mean();
        rep.se_usage_h1[s] = use_h1[s].se();
    }
    return rep;
}

// Shared parallel driver: fills outcomes[r] from an independent stream
// (seed, r), then aggregates in index order so scheduling never shows.
template <typename Trial>
SimulationReport replicate(std::size_t bank_size, long reps, std::uint64_t seed,
                           Condition condition, ExecMode exec, const Trial& trial) {
    if (reps <= 0) throw std::invalid_argument("replication count must be positive");
    std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(reps));
    bool failed = false;
    std::string failure;

    if (exec == ExecMode::parallel) {
#pragma omp parallel for schedule(dynamic, 64) shared(failed, failure)
        for (long r = 0; r < reps; ++r) {
            if (failed) continue;
            try {
                RandomStream rng(seed, std::uint64_t(r));
                outcomes[std::size_t(r)] = trial(rng);
            } catch (const std::exception& e) {
#pragma omp critical
                {
                    failed = true;
                    failure = e.what();
                }
            }
        }
    } else {
        for (long r = 0; r < reps; ++r) {
            RandomStream rng(seed, std::uint64_t(r));
            outcomes[std::size_t(r)] = trial(rng);
        }
    }
    if (failed) throw ConvergenceError(failure);
    return aggregate(outcomes, bank_size, condition, seed);
}

int draw_hypothesis(Condition condition, const Priors& priors, RandomStream& rng) {
    switch (condition) {
        case Condition::h0: return 0;
        case Condition::h1: return 1;
        case Condition::mixed: return rng.bernoulli(priors.pi1) ? 1 : 0;
    }
    throw std::invalid_argument("unknown condition");
}

}  // namespace

TrialOutcome run_trial(const Policy& policy, int hypothesis, RandomStream& rng) {
    TrialOutcome out;
    out.hypothesis = hypothesis;
    out.usage.assign(policy.sensors.size(), 0);

    const double dec_llr = policy.decision_llr();
    double llr = 0.0;
    long t = 0;
    for (;;) {
        const PolicyStage& stage = policy.stage(policy.stationary ? 0 : int(t));
        if (!stage.cont) {
            out.decision = llr >= dec_llr ? 1 : 0;
            out.truncated = true;
            break;
        }
        if (llr <= -stage.A || llr >= stage.B) {
            out.decision = llr >= stage.B ? 1 : 0;
            break;
        }
        double nu = llr_to_posterior(llr, policy.priors);
        int s = policy.select(policy.stationary ? 0 : int(t), nu);
        Observation obs = policy.sensors[std::size_t(s)].sample(hypothesis, rng);
        llr += policy.sensors[std::size_t(s)].llr(obs);
        ++out.usage[std::size_t(s)];
        ++t;
        if (policy.stationary && t >= kStepCap)
            throw ConvergenceError("trial exceeded " + std::to_string(kStepCap) +
                                   " steps without stopping");
    }
    out.steps = t;
    return out;
}

SimulationReport monte_carlo(const Policy& policy, long reps, std::uint64_t seed,
                             Condition condition, ExecMode exec) {
    return replicate(policy.sensors.size(), reps, seed, condition, exec,
                     [&](RandomStream& rng) {
                         int h = draw_hypothesis(condition, policy.priors, rng);
                         return run_trial(policy, h, rng);
                     });
}

TrialOutcome run_offline(const OfflinePolicy& policy, const std::vector<SensorModel>& bank,
                         int hypothesis, RandomStream& rng) {
    if (policy.q.size() != bank.size())
        throw std::invalid_argument("mixture size does not match sensor bank");
    if (!(policy.A > 0.0) || !(policy.B > 0.0))
        throw std::invalid_argument("offline thresholds must be positive");

    TrialOutcome out;
    out.hypothesis = hypothesis;
    out.usage.assign(bank.size(), 0);

    double llr = 0.0;
    long t = 0;
    while (llr > -policy.A && llr < policy.B) {
        int s = rng.discrete(policy.q);
        Observation obs = bank[std::size_t(s)].sample(hypothesis, rng);
        llr += bank[std::size_t(s)].llr(obs);
        ++out.usage[std::size_t(s)];
        ++t;
        if (t >= kStepCap)
            throw ConvergenceError("offline trial exceeded " + std::to_string(kStepCap) +
                                   " steps without stopping");
    }
    out.decision = llr >= policy.B ? 1 : 0;
    out.steps = t;
    return out;
}

SimulationReport monte_carlo_offline(const OfflinePolicy& policy,
                                     const std::vector<SensorModel>& bank, const Priors& priors,
                                     long reps, std::uint64_t seed, Condition condition,
                                     ExecMode exec) {
    return replicate(bank.size(), reps, seed, condition, exec, [&](RandomStream& rng) {
        int h = draw_hypothesis(condition, priors, rng);
        return run_offline(policy, bank, h, rng);
    });
}

OfflineDesign optimize_offline(const std::vector<SensorModel>& bank, double alpha, double beta,
                               const Priors& priors, const std::map<int, double>& usage_limits,
                               double step) {
    if (bank.empty()) throw std::invalid_argument("sensor bank is empty");
    if (!(step > 0.0) || step > 1.0) throw std::invalid_argument("lattice step must be in (0,1]");
    priors.validate();

    const std::size_t n = bank.size();
    const int ticks = std::max(1, int(std::lround(1.0 / step)));

    std::vector<double> d0(n), d1(n);
    for (std::size_t s = 0; s < n; ++s) {
        d0[s] = bank[s].kld(0);
        d1[s] = bank[s].kld(1);
    }
    std::vector<double> limit(n, std::numeric_limits<double>::infinity());
    for (const auto& [id, cap] : usage_limits) {
        bool found = false;
        for (std::size_t s = 0; s < n; ++s)
            if (bank[s].id() == id) {
                limit[s] = cap;
                found = true;
            }
        if (!found) throw std::invalid_argument("usage limit names an unknown sensor id");
    }

    OfflineDesign best;
    best.predicted_et = std::numeric_limits<double>::infinity();
    WaldThresholds wald = wald_thresholds(alpha, beta);

    // Enumerate all compositions of `ticks` into n parts.
    std::vector<int> counts(n, 0);
    auto consider = [&]() {
        double mix0 = 0.0, mix1 = 0.0;
        std::vector<double> q(n);
        for (std::size_t s = 0; s < n; ++s) {
            q[s] = double(counts[s]) / double(ticks);
            mix0 += q[s] * d0[s];
            mix1 += q[s] * d1[s];
        }
        if (!(mix0 > 0.0) || !(mix1 > 0.0)) return;
        WaldSampleSizes sizes = wald_sprt_et(alpha, beta, mix0, mix1, priors);
        for (std::size_t s = 0; s < n; ++s)
            if (q[s] * sizes.et > limit[s] * (1.0 + 1e-12)) return;
        if (sizes.et < best.predicted_et) {
            best.policy.q = q;
            best.policy.A = wald.A;
            best.policy.B = wald.B;
            best.feasible = true;
            best.predicted_e0t = sizes.e0t;
            best.predicted_e1t = sizes.e1t;
            best.predicted_et = sizes.et;
        }
    };
    auto walk = [&](auto&& self, std::size_t pos, int remaining) -> void {
        if (pos == n - 1) {
            counts[pos] = remaining;
            consider();
            return;
        }
        for (int c = 0; c <= remaining; ++c) {
            counts[pos] = c;
            self(self, pos + 1, remaining - c);
        }
    };
    walk(walk, 0, ticks);
    if (!best.feasible) best.predicted_et = nan_value();
    return best;
}

}  // namespace seqsel
