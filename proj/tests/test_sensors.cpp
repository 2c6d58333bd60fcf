#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "seqsel/belief.hpp"
#include "seqsel/sensors.hpp"

using namespace seqsel;

TEST_CASE("sensor construction validates parameters") {
    CHECK_THROWS_AS(SensorModel::exponential(1, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(SensorModel::exponential(1, 1.0, -2.0), std::invalid_argument);
    CHECK_THROWS_AS(SensorModel::tabular(1, {0.5, 0.5}, {0.3, 0.3, 0.4}),
                    std::invalid_argument);
    CHECK_THROWS_AS(SensorModel::tabular(1, {1.0}, {1.0}), std::invalid_argument);
    CHECK_THROWS_AS(SensorModel::tabular(1, {0.0, 1.0}, {0.5, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(SensorModel::tabular(1, {0.6, 0.5}, {0.5, 0.5}), std::invalid_argument);
    CHECK_NOTHROW(SensorModel::tabular(1, {0.7, 0.3}, {0.3, 0.7}));
}

TEST_CASE("exponential llr is affine with the right intercept and zero crossing") {
    SensorModel s = SensorModel::exponential(1, 0.5, 1.0);
    CHECK(s.llr_value(0.0) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    // crossing: x (eta0 - eta1) = -log(eta1/eta0)
    CHECK(s.llr_value(2.0 * std::log(2.0)) == doctest::Approx(0.0).epsilon(1e-12));
    SensorModel m = SensorModel::exponential(2, 1.0, 0.5);
    CHECK(m.llr_value(0.0) == doctest::Approx(-std::log(2.0)).epsilon(1e-12));
    Observation obs {SensorKind::exponential, 1.0, -1};
    CHECK(s.llr(obs) == doctest::Approx(s.llr_value(1.0)));
    Observation wrong {SensorKind::tabular, 0.0, 0};
    CHECK_THROWS_AS(s.llr(wrong), std::invalid_argument);
}

TEST_CASE("tabular llr per symbol") {
    SensorModel s = SensorModel::tabular(3, {0.7, 0.3}, {0.3, 0.7});
    CHECK(s.llr_symbol(0) == doctest::Approx(std::log(3.0 / 7.0)).epsilon(1e-12));
    CHECK(s.llr_symbol(1) == doctest::Approx(std::log(7.0 / 3.0)).epsilon(1e-12));
    CHECK_THROWS_AS(s.llr_symbol(2), std::out_of_range);
}

TEST_CASE("exponential KLDs match the closed form") {
    SensorModel s = SensorModel::exponential(1, 0.5, 1.0);
    CHECK(s.kld(0) == doctest::Approx(1.0 - std::log(2.0)).epsilon(1e-12));
    CHECK(s.kld(1) == doctest::Approx(std::log(2.0) - 0.5).epsilon(1e-12));
    CHECK(s.kld(0) == doctest::Approx(0.3068528194400547).epsilon(1e-10));
    CHECK(s.kld(1) == doctest::Approx(0.1931471805599453).epsilon(1e-10));
    // mirrored rates swap the two divergences
    SensorModel m = SensorModel::exponential(2, 1.0, 0.5);
    CHECK(m.kld(0) == doctest::Approx(s.kld(1)).epsilon(1e-12));
    CHECK(m.kld(1) == doctest::Approx(s.kld(0)).epsilon(1e-12));
    CHECK_THROWS_AS(s.kld(2), std::invalid_argument);
}

TEST_CASE("tabular KLDs are exact sums") {
    SensorModel s = SensorModel::tabular(3, {0.7, 0.3}, {0.3, 0.7});
    // 0.7 log(7/3) + 0.3 log(3/7) = 0.4 log(7/3)
    CHECK(s.kld(0) == doctest::Approx(0.4 * std::log(7.0 / 3.0)).epsilon(1e-14));
    CHECK(s.kld(0) == doctest::Approx(0.33891914415488147).epsilon(1e-12));
    CHECK(s.kld(1) == doctest::Approx(s.kld(0)).epsilon(1e-14));  // symmetric pair
}

TEST_CASE("exponential KLD agrees with direct quadrature of the llr") {
    // E0[-llr] under the same substitution the transition tables use. The
    // integrand is unbounded (log tail near u = 1), so the rule converges
    // only algebraically here; bounded integrands, the only kind the
    // recursion uses, are covered at much tighter tolerance below.
    SensorModel s = SensorModel::exponential(1, 0.52, 1.0);
    QuadratureRule rule = gauss_legendre_01(96);
    double eta = std::min(s.eta0(), s.eta1());
    double r0 = s.eta0() / eta;
    double acc = 0.0;
    for (int i = 0; i < rule.size(); ++i) {
        double lg = std::log1p(-rule.x[i]);
        double x = -lg / eta;
        acc += rule.w[i] * r0 * std::exp((r0 - 1.0) * lg) * (-s.llr_value(x));
    }
    CHECK(acc == doctest::Approx(s.kld(0)).epsilon(5e-4));
}

TEST_CASE("posterior predictive expectation preserves mass and the martingale property") {
    QuadratureRule rule = gauss_legendre_01(96);
    auto one = [](double) { return 1.0; };
    auto identity = [](double nup) { return nup; };
    SensorModel exp_s = SensorModel::exponential(1, 0.5, 1.0);
    SensorModel tab_s = SensorModel::tabular(2, {0.7, 0.3}, {0.3, 0.7});
    for (double nu : {0.05, 0.3, 0.5, 0.8, 0.95}) {
        CHECK(exp_s.predictive_expectation(nu, one, rule) == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(tab_s.predictive_expectation(nu, one, rule) == doctest::Approx(1.0).epsilon(1e-14));
        // E[nu(t+1) | nu(t)] = nu(t) under the predictive mixture
        CHECK(exp_s.predictive_expectation(nu, identity, rule) ==
              doctest::Approx(nu).epsilon(1e-8));
        CHECK(tab_s.predictive_expectation(nu, identity, rule) ==
              doctest::Approx(nu).epsilon(1e-14));
    }
}

TEST_CASE("sampling is deterministic per stream and matches the model") {
    SensorModel s = SensorModel::exponential(1, 2.0, 1.0);
    RandomStream a(7, 0), b(7, 0);
    for (int i = 0; i < 5; ++i)
        CHECK(s.sample(0, a).value == s.sample(0, b).value);

    RandomStream rng(11, 3);
    const int n = 20000;
    double mean = 0.0;
    for (int i = 0; i < n; ++i) mean += s.sample(0, rng).value;
    mean /= n;
    CHECK(mean == doctest::Approx(0.5).epsilon(0.03));  // exp rate 2 under H0

    SensorModel tab = SensorModel::tabular(2, {0.7, 0.3}, {0.3, 0.7});
    int count1 = 0;
    for (int i = 0; i < n; ++i) count1 += tab.sample(1, rng).index;
    CHECK(double(count1) / n == doctest::Approx(0.7).epsilon(0.03));  // f1 mass on symbol 1
    CHECK_THROWS_AS(s.sample(2, rng), std::invalid_argument);
}
