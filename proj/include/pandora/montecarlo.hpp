#pragma once

#include <cstdint>
#include <vector>

#include "pandora/params.hpp"
#include "pandora/stats.hpp"
#include "pandora/strategy.hpp"

namespace pandora {

struct MetricStat {
  double mean = 0.0;
  double standard_error = 0.0;
  std::uint64_t count = 0;
};

/// Aggregate outcome of a simulated market. `transaction_price` is
/// conditional on a purchase (its count is the number of purchases); the
/// other metrics average over all replications.
struct MarketStats {
  Regime regime = Regime::Posted;
  std::uint64_t replications = 0;
  std::uint64_t master_seed = 0;
  MetricStat consumer_surplus;
  MetricStat firm_profit;  // total revenue / n per replication
  MetricStat purchase_probability;
  MetricStat visits;
  MetricStat transaction_price;
};

/// Simulates `replications` independent plays of the symmetric equilibrium.
/// Posted regime: every firm draws a price from the equilibrium CDF via its
/// quantile on an independent uniform, posts full information, and the
/// consumer observes the realized Bernoulli(mu) match value on each visit.
/// Hidden regime: all firms price at 0 with no information. The consumer
/// follows Pandora's rule; each simulated purchase is cross-checked against
/// the static argmax-W rule (InternalError on disagreement).
///
/// Replication r draws from the counter-based stream (master_seed, r), and
/// accumulation runs over fixed-size chunks merged in index order, so the
/// result is bit-identical for every worker count.
MarketStats simulate_market(const MarketParams& params, Regime regime,
                            std::uint64_t replications,
                            std::uint64_t master_seed, int workers = 0);

/// Probability that the consumer purchases at all: 1 - (1-mu)^n in the
/// posted regime, 1 in the hidden regime.
double analytic_purchase_probability(const MarketParams& params, Regime regime);

/// i.i.d. draws from the posted-regime price CDF (one counter stream per
/// draw), for distribution-fit checks.
std::vector<double> sample_posted_prices(const MarketParams& params,
                                         std::uint64_t count,
                                         std::uint64_t master_seed);

}  // namespace pandora
