#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace seqsel {

struct Priors {
    double pi1 = 0.5;

    double pi0() const { return 1.0 - pi1; }

    void validate() const {
        if (!(pi1 > 0.0) || !(pi1 < 1.0))
            throw std::invalid_argument("prior pi1 must lie strictly inside (0, 1)");
    }
};

// Uniform grid over [0, 1] with points k / (size - 1).
class BeliefGrid {
public:
    explicit BeliefGrid(int size) : size_(size) {
        if (size < 3) throw std::invalid_argument("belief grid needs at least 3 points");
    }

    int size() const { return size_; }
    double step() const { return 1.0 / (size_ - 1); }
    double point(int k) const { return static_cast<double>(k) / (size_ - 1); }

    std::vector<double> points() const {
        std::vector<double> p(size_);
        for (int k = 0; k < size_; ++k) p[k] = point(k);
        return p;
    }

private:
    int size_;
};

// Posterior after one observation with log-likelihood ratio l.
// Evaluated on the side that keeps exp() bounded, so it stays stable for
// |l| up to several hundred; the endpoints 0 and 1 are absorbing.
inline double update_posterior(double nu, double l) {
    if (nu <= 0.0) return 0.0;
    if (nu >= 1.0) return 1.0;
    if (l >= 0.0) return nu / (nu + (1.0 - nu) * std::exp(-l));
    double e = nu * std::exp(l);
    return e / ((1.0 - nu) + e);
}

// Cumulative LLR consistent with the posterior: L = log(pi0 nu / (pi1 (1 - nu))).
// Infinite at the absorbing endpoints.
inline double posterior_to_llr(double nu, const Priors& priors) {
    if (nu <= 0.0) return -HUGE_VAL;
    if (nu >= 1.0) return HUGE_VAL;
    return std::log(priors.pi0() * nu) - std::log(priors.pi1 * (1.0 - nu));
}

inline double llr_to_posterior(double L, const Priors& priors) {
    double z = L + std::log(priors.pi1 / priors.pi0());
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    double e = std::exp(z);
    return e / (1.0 + e);
}

// Linear interpolation of values sampled on the grid; clamps to [0, 1].
inline double interp(const BeliefGrid& grid, const std::vector<double>& values, double nu) {
    if (static_cast<int>(values.size()) != grid.size())
        throw std::invalid_argument("interp: values size does not match grid");
    if (nu <= 0.0) return values.front();
    if (nu >= 1.0) return values.back();
    double pos = nu * (grid.size() - 1);
    int k = static_cast<int>(pos);
    if (k >= grid.size() - 1) k = grid.size() - 2;
    double frac = pos - k;
    return (1.0 - frac) * values[k] + frac * values[k + 1];
}

}  // namespace seqsel
