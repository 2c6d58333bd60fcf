#include "seqsel/sensors.hpp"

#include <cmath>
#include <stdexcept>

#include "seqsel/belief.hpp"

namespace seqsel {

SensorModel SensorModel::exponential(int id, double eta0, double eta1) {
    if (!(eta0 > 0.0) || !(eta1 > 0.0))
        throw std::invalid_argument("exponential sensor rates must be positive");
    SensorModel s;
    s.id_ = id;
    s.kind_ = SensorKind::exponential;
    s.eta0_ = eta0;
    s.eta1_ = eta1;
    s.log_eta_ratio_ = std::log(eta1 / eta0);
    return s;
}

SensorModel SensorModel::tabular(int id, std::vector<double> f0, std::vector<double> f1) {
    if (f0.size() != f1.size())
        throw std::invalid_argument("tabular sensor needs equal support sizes");
    if (f0.size() < 2) throw std::invalid_argument("tabular sensor needs at least 2 symbols");
    double s0 = 0.0, s1 = 0.0;
    for (std::size_t j = 0; j < f0.size(); ++j) {
        if (!(f0[j] > 0.0) || !(f1[j] > 0.0))
            throw std::invalid_argument("tabular masses must be strictly positive");
        s0 += f0[j];
        s1 += f1[j];
    }
    if (std::abs(s0 - 1.0) > 1e-12 || std::abs(s1 - 1.0) > 1e-12)
        throw std::invalid_argument("tabular masses must sum to 1 (tolerance 1e-12)");
    SensorModel s;
    s.id_ = id;
    s.kind_ = SensorKind::tabular;
    s.f0_ = std::move(f0);
    s.f1_ = std::move(f1);
    s.llr_sym_.resize(s.f0_.size());
    for (std::size_t j = 0; j < s.f0_.size(); ++j)
        s.llr_sym_[j] = std::log(s.f1_[j] / s.f0_[j]);
    return s;
}

double SensorModel::llr_value(double x) const {
    return x * (eta0_ - eta1_) + log_eta_ratio_;
}

double SensorModel::llr_symbol(int j) const {
    if (j < 0 || j >= support()) throw std::out_of_range("tabular symbol out of range");
    return llr_sym_[static_cast<std::size_t>(j)];
}

double SensorModel::llr(const Observation& obs) const {
    if (obs.kind != kind_) throw std::invalid_argument("observation kind does not match sensor");
    return kind_ == SensorKind::exponential ? llr_value(obs.value) : llr_symbol(obs.index);
}

double SensorModel::kld(int hypothesis) const {
    if (hypothesis != 0 && hypothesis != 1)
        throw std::invalid_argument("hypothesis must be 0 or 1");
    if (kind_ == SensorKind::exponential) {
        // D(f_i || f_j) = log(eta_i/eta_j) + eta_j/eta_i - 1 for exponentials
        double ei = hypothesis == 0 ? eta0_ : eta1_;
        double ej = hypothesis == 0 ? eta1_ : eta0_;
        return std::log(ei / ej) + ej / ei - 1.0;
    }
    const auto& p = hypothesis == 0 ? f0_ : f1_;
    const auto& q = hypothesis == 0 ? f1_ : f0_;
    double d = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) d += p[j] * std::log(p[j] / q[j]);
    return d;
}

Observation SensorModel::sample(int hypothesis, RandomStream& rng) const {
    if (hypothesis != 0 && hypothesis != 1)
        throw std::invalid_argument("hypothesis must be 0 or 1");
    Observation obs;
    obs.kind = kind_;
    if (kind_ == SensorKind::exponential) {
        obs.value = rng.exponential(hypothesis == 0 ? eta0_ : eta1_);
    } else {
        obs.index = rng.discrete(hypothesis == 0 ? f0_ : f1_);
    }
    return obs;
}

double SensorModel::predictive_expectation(double nu, const std::function<double(double)>& g,
                                           const QuadratureRule& rule) const {
    if (kind_ == SensorKind::tabular) {
        double acc = 0.0;
        for (int j = 0; j < support(); ++j) {
            double m = (1.0 - nu) * f0_[j] + nu * f1_[j];
            if (m <= 0.0) continue;
            acc += m * g(update_posterior(nu, llr_sym_[j]));
        }
        return acc;
    }
    double eta = std::min(eta0_, eta1_);
    double r0 = eta0_ / eta, r1 = eta1_ / eta;
    double acc = 0.0;
    for (int i = 0; i < rule.size(); ++i) {
        double u = rule.x[i];
        double lg = std::log1p(-u);          // log(1 - u) < 0
        double x = -lg / eta;
        // densities times dx/du: f_h(x(u)) / (eta (1 - u)) = r_h (1-u)^{r_h - 1}
        double d0 = r0 * std::exp((r0 - 1.0) * lg);
        double d1 = r1 * std::exp((r1 - 1.0) * lg);
        double wgt = rule.w[i] * ((1.0 - nu) * d0 + nu * d1);
        acc += wgt * g(update_posterior(nu, llr_value(x)));
    }
    return acc;
}

}  // namespace seqsel
