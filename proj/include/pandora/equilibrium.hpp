#pragma once

#include "pandora/params.hpp"
#include "pandora/strategy.hpp"

namespace pandora {

/// The symmetric equilibrium of one regime together with its analytic
/// per-firm profit and consumer welfare.
struct EquilibriumProfile {
  Regime regime;
  FirmStrategy strategy;
  double firm_profit = 0.0;
  double consumer_welfare = 0.0;
};

/// Hidden-information equilibrium: every firm prices at marginal cost 0 and
/// provides no useful information; the consumer visits exactly one firm and
/// buys. Profit 0, welfare mu - c, independently of n.
EquilibriumProfile hidden_equilibrium(const MarketParams& params);

/// Posted-information equilibrium: full information and dispersed prices
/// with CDF posted_price_cdf. Profit (mu-c)(1-mu)^(n-1), welfare the
/// expected maximum effective value.
EquilibriumProfile posted_equilibrium(const MarketParams& params);

struct PriceSupport {
  double low = 0.0;   // (1-mu)^(n-1) * u_high
  double high = 0.0;  // u_high
};

PriceSupport posted_price_support(const MarketParams& params);

/// Equilibrium price CDF of the posted regime,
///   Phi(p) = 1/mu - ((1-mu)/mu) * (u_high / p)^(1/(n-1))
/// on [support.low, support.high], clamped to 0 below and 1 above.
/// Throws NonpositivePrice for p <= 0.
double posted_price_cdf(const MarketParams& params, double p);

/// Inverse of posted_price_cdf on [0, 1]:
///   p(u) = u_high * ((1-mu) / (1-mu*u))^(n-1).
/// Throws OutOfRange for u outside [0, 1].
double posted_price_quantile(const MarketParams& params, double u);

/// Per-firm equilibrium profit in the posted regime: (mu-c)(1-mu)^(n-1).
double posted_equilibrium_profit(const MarketParams& params);

/// log of the posted-regime welfare shortfall factor
///   g(n) = n*mu*(1-mu)^(n-1) + (1-mu)^n = (1-mu)^(n-1) * (1 + (n-1)*mu),
/// so that posted welfare is u_high * (1 - g(n)). Evaluated in log space so
/// the strict ordering in n survives double precision for large n.
double posted_welfare_gap_log(double mu, int n);

/// Consumer welfare: mu - c in the hidden regime; the expected maximum
/// effective value u_high * (1 - g(n)) in the posted regime.
double consumer_welfare(const MarketParams& params, Regime regime);

/// Smallest n >= 2 at which the consumer strictly prefers the posted
/// regime. Independent of c (the factor (mu-c)/mu cancels); exact ties are
/// classified as not benefiting.
int posting_threshold(double mu);

}  // namespace pandora
