#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pandora/equilibrium.hpp"
#include "pandora/verify.hpp"

using namespace pandora;

namespace {

// Direct evaluation of the posted-regime welfare at extended precision, as
// an independent route for the threshold tests.
long double posted_welfare_direct(double mu, double c, int n) {
  const long double m = mu;
  const long double q = 1.0L - m;
  const long double gap = n * m * std::pow(q, n - 1) + std::pow(q, n);
  return (static_cast<long double>(mu) - c) / m * (1.0L - gap);
}

}  // namespace

TEST_CASE("hidden equilibrium: marginal-cost pricing, n-independent welfare") {
  const auto eq2 = hidden_equilibrium(validate(2, 0.5, 0.1));
  CHECK(eq2.firm_profit == 0.0);
  CHECK(eq2.consumer_welfare == doctest::Approx(0.4).epsilon(1e-14));
  CHECK(eq2.strategy.price_policy.dispersed == false);
  CHECK(eq2.strategy.price_policy.price == 0.0);
  CHECK(eq2.strategy.signal_policy.kind == SignalKind::NoInfo);

  const auto eq10 = hidden_equilibrium(validate(10, 0.5, 0.1));
  CHECK(eq10.firm_profit == eq2.firm_profit);
  CHECK(eq10.consumer_welfare == eq2.consumer_welfare);

  const auto eq0 = hidden_equilibrium(validate(2, 0.5, 0.0));
  CHECK(eq0.consumer_welfare == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("price CDF endpoints and interior value") {
  const auto p = validate(2, 0.5, 0.1);
  CHECK(posted_price_cdf(p, 0.4) == 0.0);
  CHECK(posted_price_cdf(p, 0.8) == 1.0);
  CHECK(posted_price_cdf(p, 0.5) == doctest::Approx(0.4).epsilon(1e-13));
  try {
    posted_price_cdf(p, 0.0);
    FAIL("expected NonpositivePrice");
  } catch (const MarketError& e) {
    CHECK(e.code() == ErrorCode::NonpositivePrice);
  }
}

TEST_CASE("price CDF is a valid, atomless CDF on its support") {
  for (const auto& [n, mu, c] : {std::tuple{2, 0.5, 0.1}, {5, 0.2, 0.05},
                                 {10, 0.8, 0.2}}) {
    const auto p = validate(n, mu, c);
    const auto support = posted_price_support(p);
    double prev_phi = -1.0;
    for (int i = 0; i <= 2000; ++i) {
      const double price =
          support.low + (support.high - support.low) * i / 2000.0;
      const double phi = posted_price_cdf(p, price);
      CHECK(phi >= prev_phi);  // nondecreasing
      prev_phi = phi;
    }
    CHECK(posted_price_cdf(p, support.low) == 0.0);
    CHECK(posted_price_cdf(p, support.high) == 1.0);
    // An atom of the price distribution would flatten the quantile over a
    // u-interval; strict increase across a fine u-grid rules that out.
    double prev_q = posted_price_quantile(p, 0.0);
    for (int i = 1; i <= 10000; ++i) {
      const double q = posted_price_quantile(p, i / 10000.0);
      CHECK(q > prev_q);
      prev_q = q;
    }
  }
}

TEST_CASE("quantile endpoints and interior value") {
  const auto p = validate(2, 0.5, 0.1);
  CHECK(posted_price_quantile(p, 0.0) == doctest::Approx(0.4).epsilon(1e-14));
  CHECK(posted_price_quantile(p, 1.0) == doctest::Approx(0.8).epsilon(1e-14));
  CHECK(posted_price_quantile(p, 0.4) == doctest::Approx(0.5).epsilon(1e-13));
  try {
    posted_price_quantile(p, 1.5);
    FAIL("expected OutOfRange");
  } catch (const MarketError& e) {
    CHECK(e.code() == ErrorCode::OutOfRange);
  }
}

TEST_CASE("quantile inverts the CDF across parameter sets") {
  for (const auto& [n, mu, c] : {std::tuple{2, 0.5, 0.1}, {3, 0.2, 0.0},
                                 {5, 0.8, 0.4}, {10, 0.5, 0.25}}) {
    const auto p = validate(n, mu, c);
    for (int i = 0; i <= 1000; ++i) {
      const double u = static_cast<double>(i) / 1000.0;
      const double price = posted_price_quantile(p, u);
      CHECK(posted_price_cdf(p, price) == doctest::Approx(u).epsilon(1e-12));
      CHECK(posted_price_quantile(p, posted_price_cdf(p, price)) ==
            doctest::Approx(price).epsilon(1e-12));
    }
  }
}

TEST_CASE("posted equilibrium profit") {
  CHECK(posted_equilibrium_profit(validate(2, 0.5, 0.1)) ==
        doctest::Approx(0.2).epsilon(1e-14));
  CHECK(posted_equilibrium_profit(validate(2, 0.5, 0.4999999)) ==
        doctest::Approx(0.0).epsilon(1e-6));
  double prev = 1.0;
  for (int n = 2; n <= 64; ++n) {
    const double profit = posted_equilibrium_profit(validate(n, 0.5, 0.1));
    CHECK(profit < prev);
    prev = profit;
  }
}

TEST_CASE("consumer welfare closed forms") {
  const auto p = validate(2, 0.5, 0.1);
  CHECK(consumer_welfare(p, Regime::Posted) == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(consumer_welfare(p, Regime::Hidden) == doctest::Approx(0.4).epsilon(1e-14));
  const auto p400 = validate(400, 0.5, 0.1);
  CHECK(consumer_welfare(p400, Regime::Posted) ==
        doctest::Approx(0.8).epsilon(1e-9));
}

TEST_CASE("posted welfare rises in n and is sandwiched by the hidden level") {
  for (double mu : {0.2, 0.5, 0.8}) {
    for (double c : {0.0, mu / 2}) {
      const double hidden = mu - c;
      // u^PI(2) = mu * (mu - c) < mu - c
      const double at2 = consumer_welfare(validate(2, mu, c), Regime::Posted);
      CHECK(at2 == doctest::Approx(mu * (mu - c)).epsilon(1e-13));
      CHECK(at2 < hidden);
      // strict increase via the log-gap route (the welfare level itself
      // saturates at u_high in double precision for large n)
      double prev_gap = posted_welfare_gap_log(mu, 2);
      for (int n = 3; n <= 1000; ++n) {
        const double gap = posted_welfare_gap_log(mu, n);
        CHECK(gap < prev_gap);
        prev_gap = gap;
      }
      // limit (mu - c)/mu
      const double at_large =
          consumer_welfare(validate(400, mu, c), Regime::Posted);
      CHECK(std::abs(at_large - (mu - c) / mu) < 1e-6);
    }
  }
}

TEST_CASE("posting threshold at mu = 1/2 is four firms") {
  CHECK(posting_threshold(0.5) == 4);
  // Reduced form at mu = 1/2: benefit iff 2^(n-1) > n + 1.
  for (int n = 2; n <= 12; ++n) {
    const bool reduced = std::pow(2.0, n - 1) > n + 1;
    const bool computed = posting_threshold(0.5) <= n;
    CHECK(reduced == computed);
  }
}

TEST_CASE("posting threshold is independent of c") {
  for (double mu : {0.2, 0.5, 0.8}) {
    const int n_star = posting_threshold(mu);
    for (double c : {0.0, mu / 4, mu / 2, 0.9 * mu}) {
      // c-independence: the direct welfare comparison flips at the same n.
      int direct = -1;
      for (int n = 2; n <= 4 * n_star + 8; ++n) {
        if (posted_welfare_direct(mu, c, n) >
            static_cast<long double>(mu) - c) {
          direct = n;
          break;
        }
      }
      CHECK(direct == n_star);
    }
  }
}

TEST_CASE("posting threshold is finite across the prior range") {
  // Thin priors need many firms (benefit scales like sqrt(2/mu)); priors
  // near one settle at the minimum interesting size of three.
  CHECK(posting_threshold(0.01) >= 10);
  CHECK(posting_threshold(0.01) < 100);
  CHECK(posting_threshold(0.99) == 3);
  for (double mu = 0.05; mu < 1.0; mu += 0.05) {
    const int n_star = posting_threshold(mu);
    CHECK(n_star >= 3);
    CHECK(n_star < 1000);
  }
}

TEST_CASE("equal-profit indifference across the price support") {
  for (const auto& [n, mu] : {std::tuple{2, 0.5}, {3, 0.2}, {5, 0.8}}) {
    const auto p = validate(n, mu, 0.1 * mu);
    const DemandCurve demand(p);
    const auto support = posted_price_support(p);
    const double eq_profit = posted_equilibrium_profit(p);
    for (int i = 0; i <= 1000; ++i) {
      const double price =
          support.low + (support.high - support.low) * i / 1000.0;
      const double profit = price * p.mu * demand(p.u_high - price);
      CHECK(profit == doctest::Approx(eq_profit).epsilon(1e-10));
    }
  }
}

TEST_CASE("posted equilibrium profile bundles the pieces") {
  const auto eq = posted_equilibrium(validate(2, 0.5, 0.1));
  CHECK(eq.strategy.signal_policy.kind == SignalKind::FullInfo);
  CHECK(eq.strategy.price_policy.dispersed);
  CHECK(eq.strategy.price_policy.support_low == doctest::Approx(0.4));
  CHECK(eq.strategy.price_policy.support_high == doctest::Approx(0.8));
  CHECK(eq.firm_profit == doctest::Approx(0.2));
  CHECK(eq.consumer_welfare == doctest::Approx(0.2));
}
