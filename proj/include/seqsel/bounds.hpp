#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "seqsel/belief.hpp"
#include "seqsel/sensors.hpp"

namespace seqsel {

// D(p || q) between Bernoulli(p) and Bernoulli(q), with the 0 log 0 = 0
// convention at p in {0, 1}. q at an endpoint makes the divergence infinite
// and is rejected.
inline double binary_kld(double p, double q) {
    if (!(p >= 0.0) || !(p <= 1.0)) throw std::domain_error("binary_kld: p outside [0, 1]");
    if (!(q > 0.0) || !(q < 1.0)) throw std::domain_error("binary_kld: q outside (0, 1)");
    double d = 0.0;
    if (p > 0.0) d += p * std::log(p / q);
    if (p < 1.0) d += (1.0 - p) * std::log((1.0 - p) / (1.0 - q));
    return d;
}

struct WaldThresholds {
    double A;  // lower boundary magnitude: stop and decide 0 when L <= -A
    double B;  // upper boundary: stop and decide 1 when L >= B
};

inline WaldThresholds wald_thresholds(double alpha, double beta) {
    if (!(alpha > 0.0) || !(alpha < 1.0) || !(beta > 0.0) || !(beta < 1.0))
        throw std::domain_error("wald_thresholds: error targets must lie in (0, 1)");
    return {std::log((1.0 - alpha) / beta), std::log((1.0 - beta) / alpha)};
}

namespace detail {

// Largest per-hypothesis KLDs among sensors outside the constrained set.
inline std::pair<double, double> max_free_klds(const std::vector<SensorModel>& bank,
                                               const std::map<int, double>& usage_limits) {
    double d0 = 0.0, d1 = 0.0;
    bool any = false;
    for (const auto& s : bank) {
        if (usage_limits.count(s.id())) continue;
        d0 = std::max(d0, s.kld(0));
        d1 = std::max(d1, s.kld(1));
        any = true;
    }
    if (!any)
        throw std::invalid_argument("sample size bounds need at least one unconstrained sensor");
    return {d0, d1};
}

}  // namespace detail

// Lower bound on the mean sample size of any test meeting error targets
// (alpha, beta) and per-sensor usage limits, in terms of the sensor bank's
// KLDs alone. Clamped at zero.
inline double sample_size_lower_bound(double alpha, double beta, const Priors& priors,
                                      const std::vector<SensorModel>& bank,
                                      const std::map<int, double>& usage_limits) {
    auto [d0max, d1max] = detail::max_free_klds(bank, usage_limits);
    double value = priors.pi0() * binary_kld(alpha, 1.0 - beta) / d0max +
                   priors.pi1 * binary_kld(1.0 - beta, alpha) / d1max;
    for (const auto& s : bank) {
        auto it = usage_limits.find(s.id());
        if (it == usage_limits.end()) continue;
        // A cap on a sensor no more informative than the best free one is
        // vacuous: the adversarial usage split simply avoids that sensor.
        double ratio = std::max(s.kld(1) / d1max, s.kld(0) / d0max);
        value -= std::max(ratio - 1.0, 0.0) * it->second;
    }
    return std::max(value, 0.0);
}

// Sharper variant using measured conditional usages of the capped sensors:
// usage_h0/usage_h1 map sensor id -> mean use count under each hypothesis.
// Per hypothesis, E_h[T] >= D_h / dmax_h + sum_c t_h (1 - d_h / dmax_h)
// holds exactly at the measured t, so the bound credits the usage actually
// spent rather than the worst-case cap; it stays valid when caps are slack
// and coincides with sample_size_lower_bound when combined usage sits at
// the limit with the mass on the larger KLD ratio.
inline double tight_lower_bound(double alpha, double beta, const Priors& priors,
                                const std::vector<SensorModel>& bank,
                                const std::map<int, double>& usage_limits,
                                const std::map<int, double>& usage_h0,
                                const std::map<int, double>& usage_h1) {
    auto [d0max, d1max] = detail::max_free_klds(bank, usage_limits);
    double value = priors.pi0() * binary_kld(alpha, 1.0 - beta) / d0max +
                   priors.pi1 * binary_kld(1.0 - beta, alpha) / d1max;
    for (const auto& s : bank) {
        if (!usage_limits.count(s.id())) continue;
        double t0 = usage_h0.at(s.id());
        double t1 = usage_h1.at(s.id());
        value += priors.pi0() * t0 * (1.0 - s.kld(0) / d0max) +
                 priors.pi1 * t1 * (1.0 - s.kld(1) / d1max);
    }
    return std::max(value, 0.0);
}

struct WaldSampleSizes {
    double e0t;
    double e1t;
    double et;
};

// Wald-approximate mean sample sizes of an SPRT driven by per-step KLDs
// (d0, d1): E_0[T] = D(alpha || 1-beta) / d0, E_1[T] = D(1-beta || alpha) / d1.
inline WaldSampleSizes wald_sprt_et(double alpha, double beta, double d0, double d1,
                                    const Priors& priors) {
    if (!(d0 > 0.0) || !(d1 > 0.0))
        throw std::domain_error("wald_sprt_et: per-step KLDs must be positive");
    WaldSampleSizes out;
    out.e0t = binary_kld(alpha, 1.0 - beta) / d0;
    out.e1t = binary_kld(1.0 - beta, alpha) / d1;
    out.et = priors.pi0() * out.e0t + priors.pi1 * out.e1t;
    return out;
}

}  // namespace seqsel
