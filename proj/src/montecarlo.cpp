#include "pandora/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "pandora/equilibrium.hpp"
#include "pandora/rng.hpp"
#include "pandora/weitzman.hpp"

namespace pandora {

namespace {

// Replications are accumulated over fixed-size chunks merged in index
// order, so the aggregate is independent of how workers pick up chunks.
constexpr std::uint64_t kChunkSize = 1 << 16;

struct ChunkAccumulators {
  RunningStat surplus;
  RunningStat profit;
  RunningStat purchase;
  RunningStat visits;
  RunningStat price;
};

struct ReplicationScratch {
  std::vector<double> prices;
  std::vector<FirmOffer> offers;
  std::vector<double> effective_values;
};

void run_replication(const MarketParams& params, Regime regime,
                     const DiscreteDistribution& full_info,
                     std::uint64_t master_seed, std::uint64_t rep,
                     ReplicationScratch& scratch, ChunkAccumulators& acc) {
  const std::size_t n = static_cast<std::size_t>(params.n);
  CounterRng rng(master_seed, rep);

  if (regime == Regime::Posted) {
    for (std::size_t i = 0; i < n; ++i) {
      scratch.prices[i] = posted_price_quantile(params, rng.uniform01());
    }
    for (std::size_t i = 0; i < n; ++i) {
      const double match = rng.bernoulli(params.mu) ? 1.0 : 0.0;
      const double u = reservation_value(full_info, scratch.prices[i], params.c);
      scratch.offers[i] =
          FirmOffer{u, match - scratch.prices[i], scratch.prices[i]};
      scratch.effective_values[i] = std::min(match - scratch.prices[i], u);
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      scratch.offers[i] = FirmOffer{params.u_low, params.mu, 0.0};
      scratch.effective_values[i] = params.u_low;
    }
  }

  const SearchOutcome outcome =
      pandora_search(std::span<const FirmOffer>(scratch.offers), params.c);
  const auto winner =
      static_winner(std::span<const double>(scratch.effective_values));
  if (regime == Regime::Posted && outcome.purchase != winner) {
    throw_error(ErrorCode::InternalError,
                "sequential search and the static argmax-W rule disagree");
  }

  double revenue = 0.0;
  if (outcome.purchase) revenue = scratch.offers[*outcome.purchase].price;
  acc.surplus.add(outcome.consumer_payoff);
  acc.profit.add(revenue / static_cast<double>(params.n));
  acc.purchase.add(outcome.purchase ? 1.0 : 0.0);
  acc.visits.add(static_cast<double>(outcome.visits()));
  if (outcome.purchase) acc.price.add(revenue);
}

MetricStat to_metric(const RunningStat& stat) {
  return MetricStat{stat.mean(), stat.standard_error(), stat.count()};
}

}  // namespace

MarketStats simulate_market(const MarketParams& params, Regime regime,
                            std::uint64_t replications,
                            std::uint64_t master_seed, int workers) {
  const MarketParams p = validate(params);
  if (replications < 1) {
    throw_error(ErrorCode::OutOfRange, "at least one replication is required");
  }
  const DiscreteDistribution full_info = full_info_signal(p.mu);

  const std::uint64_t chunks = (replications + kChunkSize - 1) / kChunkSize;
  std::vector<ChunkAccumulators> per_chunk(chunks);

  int worker_count = workers > 0
                         ? workers
                         : static_cast<int>(std::thread::hardware_concurrency());
  worker_count = std::max(
      1, std::min<int>(worker_count, static_cast<int>(chunks)));

  std::atomic<std::uint64_t> next_chunk{0};
  std::atomic<bool> failed{false};
  auto run = [&]() {
    ReplicationScratch scratch;
    scratch.prices.resize(static_cast<std::size_t>(p.n));
    scratch.offers.resize(static_cast<std::size_t>(p.n));
    scratch.effective_values.resize(static_cast<std::size_t>(p.n));
    for (;;) {
      const std::uint64_t chunk = next_chunk.fetch_add(1);
      if (chunk >= chunks || failed.load()) return;
      const std::uint64_t lo = chunk * kChunkSize;
      const std::uint64_t hi = std::min(lo + kChunkSize, replications);
      ChunkAccumulators& acc = per_chunk[chunk];
      try {
        for (std::uint64_t rep = lo; rep < hi; ++rep) {
          run_replication(p, regime, full_info, master_seed, rep, scratch, acc);
        }
      } catch (...) {
        failed.store(true);
        throw;
      }
    }
  };

  if (worker_count == 1) {
    run();
  } else {
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::atomic<bool> error_set{false};
    auto guarded = [&]() {
      try {
        run();
      } catch (...) {
        if (!error_set.exchange(true)) error = std::current_exception();
      }
    };
    pool.reserve(static_cast<std::size_t>(worker_count));
    for (int t = 0; t < worker_count; ++t) pool.emplace_back(guarded);
    for (std::thread& t : pool) t.join();
    if (error) std::rethrow_exception(error);
  }

  ChunkAccumulators total;
  for (const ChunkAccumulators& acc : per_chunk) {
    total.surplus.merge(acc.surplus);
    total.profit.merge(acc.profit);
    total.purchase.merge(acc.purchase);
    total.visits.merge(acc.visits);
    total.price.merge(acc.price);
  }

  MarketStats stats;
  stats.regime = regime;
  stats.replications = replications;
  stats.master_seed = master_seed;
  stats.consumer_surplus = to_metric(total.surplus);
  stats.firm_profit = to_metric(total.profit);
  stats.purchase_probability = to_metric(total.purchase);
  stats.visits = to_metric(total.visits);
  stats.transaction_price = to_metric(total.price);
  return stats;
}

double analytic_purchase_probability(const MarketParams& params, Regime regime) {
  if (regime == Regime::Hidden) return 1.0;
  return 1.0 - std::pow(1.0 - params.mu, params.n);
}

std::vector<double> sample_posted_prices(const MarketParams& params,
                                         std::uint64_t count,
                                         std::uint64_t master_seed) {
  const MarketParams p = validate(params);
  std::vector<double> prices;
  prices.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    CounterRng rng(master_seed, i);
    prices.push_back(posted_price_quantile(p, rng.uniform01()));
  }
  return prices;
}

}  // namespace pandora
