#pragma once

#include <functional>
#include <string>
#include <vector>

#include "seqsel/quadrature.hpp"
#include "seqsel/rng.hpp"

namespace seqsel {

enum class SensorKind { exponential, tabular };

// One measurement. `value` is meaningful for exponential sensors,
// `index` (a support index) for tabular ones; `kind` says which.
struct Observation {
    SensorKind kind = SensorKind::exponential;
    double value = 0.0;
    int index = -1;
};

// A binary-hypothesis observation channel: either an exponential family
// member with rate eta0 under H0 and eta1 under H1, or a finite-support
// pmf pair (f0, f1). Parameters are validated at construction.
class SensorModel {
public:
    static SensorModel exponential(int id, double eta0, double eta1);
    static SensorModel tabular(int id, std::vector<double> f0, std::vector<double> f1);

    int id() const { return id_; }
    SensorKind kind() const { return kind_; }

    double eta0() const { return eta0_; }
    double eta1() const { return eta1_; }
    const std::vector<double>& mass0() const { return f0_; }
    const std::vector<double>& mass1() const { return f1_; }
    int support() const { return static_cast<int>(f0_.size()); }

    // log f1 / f0 at an observation of this sensor.
    double llr(const Observation& obs) const;
    double llr_value(double x) const;   // exponential path
    double llr_symbol(int j) const;     // tabular path

    // kld(0) = D(f0 || f1), kld(1) = D(f1 || f0); closed form / exact sum.
    double kld(int hypothesis) const;

    Observation sample(int hypothesis, RandomStream& rng) const;

    // E[g(update_posterior(nu, llr(X)))] with X drawn from the posterior
    // predictive (1 - nu) f0 + nu f1. Exact sum for tabular sensors; for
    // exponential ones the integral over [0, inf) is mapped to (0, 1) by
    // u = 1 - exp(-eta x) with eta = min(eta0, eta1), which keeps the
    // transformed mixture density bounded, and evaluated with the rule.
    double predictive_expectation(double nu, const std::function<double(double)>& g,
                                  const QuadratureRule& rule) const;

private:
    SensorModel() = default;

    int id_ = 0;
    SensorKind kind_ = SensorKind::exponential;
    double eta0_ = 0.0, eta1_ = 0.0;
    double log_eta_ratio_ = 0.0;  // log(eta1 / eta0)
    std::vector<double> f0_, f1_, llr_sym_;
};

}  // namespace seqsel
