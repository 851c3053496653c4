#include "pandora/equilibrium.hpp"

#include <cmath>
#include <string>

namespace pandora {

EquilibriumProfile hidden_equilibrium(const MarketParams& params) {
  const MarketParams p = validate(params);
  return EquilibriumProfile{
      Regime::Hidden,
      FirmStrategy{Regime::Hidden, PricePolicy::degenerate(0.0),
                   Signal::no_info(p.mu)},
      0.0, p.mu - p.c};
}

EquilibriumProfile posted_equilibrium(const MarketParams& params) {
  const MarketParams p = validate(params);
  const PriceSupport support = posted_price_support(p);
  return EquilibriumProfile{
      Regime::Posted,
      FirmStrategy{Regime::Posted,
                   PricePolicy::dispersed_cdf(support.low, support.high),
                   Signal::full_info(p.mu)},
      posted_equilibrium_profit(p), consumer_welfare(p, Regime::Posted)};
}

PriceSupport posted_price_support(const MarketParams& params) {
  const double low =
      std::pow(1.0 - params.mu, params.n - 1) * params.u_high;
  return PriceSupport{low, params.u_high};
}

double posted_price_cdf(const MarketParams& params, double p) {
  if (!(p > 0.0)) {
    throw_error(ErrorCode::NonpositivePrice,
                "price CDF is defined for p > 0, got " + std::to_string(p));
  }
  const PriceSupport support = posted_price_support(params);
  if (p <= support.low) return 0.0;
  if (p >= support.high) return 1.0;
  const double mu = params.mu;
  const double root =
      std::pow(params.u_high / p, 1.0 / static_cast<double>(params.n - 1));
  return 1.0 / mu - (1.0 - mu) / mu * root;
}

double posted_price_quantile(const MarketParams& params, double u) {
  if (!(u >= 0.0 && u <= 1.0)) {
    throw_error(ErrorCode::OutOfRange, "quantile argument outside [0, 1]");
  }
  const double mu = params.mu;
  const double base = (1.0 - mu) / (1.0 - mu * u);
  return params.u_high * std::pow(base, static_cast<double>(params.n - 1));
}

double posted_equilibrium_profit(const MarketParams& params) {
  return (params.mu - params.c) * std::pow(1.0 - params.mu, params.n - 1);
}

double posted_welfare_gap_log(double mu, int n) {
  if (!(mu > 0.0 && mu < 1.0)) {
    throw_error(ErrorCode::OutOfRange, "mu must lie in (0, 1)");
  }
  if (n < 2) throw_error(ErrorCode::DegenerateN, "welfare gap needs n >= 2");
  // g(n) = (1-mu)^(n-1) * (1 + (n-1) mu)
  return static_cast<double>(n - 1) * std::log1p(-mu) +
         std::log1p(static_cast<double>(n - 1) * mu);
}

double consumer_welfare(const MarketParams& params, Regime regime) {
  if (regime == Regime::Hidden) return params.mu - params.c;
  const double gap_log = posted_welfare_gap_log(params.mu, params.n);
  return -params.u_high * std::expm1(gap_log);
}

int posting_threshold(double mu) {
  if (!(mu > 0.0 && mu < 1.0)) {
    throw_error(ErrorCode::OutOfRange, "mu must lie in (0, 1)");
  }
  // Strict benefit at n iff g(n) < 1 - mu, i.e. log g(n) < log(1 - mu).
  const double target = std::log1p(-mu);
  for (int n = 2; n <= 1 << 22; ++n) {
    if (posted_welfare_gap_log(mu, n) < target) return n;
  }
  // The limit argument guarantees a finite threshold; reaching here means
  // the iteration cap is wrong, not the math.
  throw_error(ErrorCode::InternalError, "posting threshold iteration cap hit");
}

}  // namespace pandora
