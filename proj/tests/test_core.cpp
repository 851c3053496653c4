#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pandora/distribution.hpp"
#include "pandora/params.hpp"
#include "pandora/strategy.hpp"

using namespace pandora;

TEST_CASE("validate fills derived bounds") {
  const MarketParams p = validate(2, 0.5, 0.1);
  CHECK(p.u_low == doctest::Approx(0.4).epsilon(1e-14));
  CHECK(p.u_high == doctest::Approx(0.8).epsilon(1e-14));
}

TEST_CASE("validate rejects c at the boundary of [0, mu)") {
  CHECK_THROWS_WITH_AS(validate(2, 0.5, 0.5), doctest::Contains("c"), MarketError);
  try {
    validate(2, 0.5, 0.5);
  } catch (const MarketError& e) {
    CHECK(e.code() == ErrorCode::OutOfRange);
  }
}

TEST_CASE("validate rejects a single-firm market") {
  try {
    validate(1, 0.5, 0.1);
    FAIL("expected DegenerateN");
  } catch (const MarketError& e) {
    CHECK(e.code() == ErrorCode::DegenerateN);
  }
}

TEST_CASE("validate rejects out-of-range mu and negative c") {
  CHECK_THROWS_AS(validate(2, 0.0, 0.0), MarketError);
  CHECK_THROWS_AS(validate(2, 1.0, 0.1), MarketError);
  CHECK_THROWS_AS(validate(2, 0.5, -0.01), MarketError);
}

TEST_CASE("binary posterior weights solve the two-atom mean constraint") {
  const auto full = make_binary_posterior(0.0, 1.0, 0.5);
  CHECK(full.values() == std::vector<double>{0.0, 1.0});
  CHECK(full.weights()[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(full.weights()[1] == doctest::Approx(0.5).epsilon(1e-15));

  const auto mid = make_binary_posterior(0.2, 0.8, 0.5);
  CHECK(mid.weights()[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(mid.weights()[1] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(mid.mean() == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("binary posterior rejects supports that cannot average to mu") {
  try {
    make_binary_posterior(0.6, 0.8, 0.5);
    FAIL("expected InvalidSupport");
  } catch (const MarketError& e) {
    CHECK(e.code() == ErrorCode::InvalidSupport);
  }
  CHECK_THROWS_AS(make_binary_posterior(-0.1, 0.8, 0.5), MarketError);
  CHECK_THROWS_AS(make_binary_posterior(0.1, 1.2, 0.5), MarketError);
}

TEST_CASE("full-info signal mean is exactly mu across a grid") {
  for (int i = 1; i < 100; ++i) {
    const double mu = static_cast<double>(i) / 100.0;
    const auto sig = make_binary_posterior(0.0, 1.0, mu);
    CHECK(sig.mean() == mu);  // 0*(1-mu) + 1*mu carries no rounding
  }
}

TEST_CASE("cdf is right-continuous and nondecreasing; quantile inverts it") {
  const DiscreteDistribution d({0.1, 0.4, 0.9}, {0.25, 0.5, 0.25});
  CHECK(d.cdf(0.05) == 0.0);
  CHECK(d.cdf(0.1) == doctest::Approx(0.25));
  CHECK(d.cdf(0.4 - 1e-9) == doctest::Approx(0.25));
  CHECK(d.cdf(0.4) == doctest::Approx(0.75));
  CHECK(d.cdf(2.0) == doctest::Approx(1.0));
  double prev = -1.0;
  for (int i = 0; i <= 100; ++i) {
    const double x = -0.1 + 1.2 * i / 100.0;
    const double f = d.cdf(x);
    CHECK(f >= prev);
    prev = f;
  }
  for (double x : {0.1, 0.4, 0.9, 0.25, 0.6}) {
    const double q = d.quantile(d.cdf(x));
    const bool is_atom = q == 0.1 || q == 0.4 || q == 0.9;
    CHECK(is_atom);
  }
}

TEST_CASE("atoms closer than the merge tolerance collapse") {
  const DiscreteDistribution d({0.3, 0.3 + 1e-13, 0.7}, {0.25, 0.25, 0.5});
  CHECK(d.size() == 2);
  CHECK(d.weights()[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(d.mean() == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("constructor rejects bad weights") {
  CHECK_THROWS_AS(DiscreteDistribution({0.5}, {0.9}), MarketError);
  CHECK_THROWS_AS(DiscreteDistribution({0.2, 0.8}, {0.6, -0.1}), MarketError);
  CHECK_THROWS_AS(DiscreteDistribution({}, {}), MarketError);
}

TEST_CASE("bayes plausibility checks support range and mean") {
  CHECK(is_bayes_plausible(full_info_signal(0.3), 0.3));
  CHECK(is_bayes_plausible(no_info_signal(0.3), 0.3));
  CHECK_FALSE(is_bayes_plausible(no_info_signal(0.3), 0.4));
  CHECK_FALSE(is_bayes_plausible(DiscreteDistribution({-0.2, 0.8}, {0.5, 0.5}), 0.3));
}

TEST_CASE("strategy factories enforce their invariants") {
  const Signal s = Signal::full_info(0.5);
  CHECK(s.kind == SignalKind::FullInfo);
  CHECK_THROWS_AS(
      Signal::explicit_signal(DiscreteDistribution({0.6, 0.8}, {0.5, 0.5}), 0.5),
      MarketError);
  CHECK_THROWS_AS(PricePolicy::degenerate(-0.1), MarketError);
  const PricePolicy dispersed = PricePolicy::dispersed_cdf(0.4, 0.8);
  CHECK(dispersed.dispersed);
  CHECK(dispersed.support_low == 0.4);
}
