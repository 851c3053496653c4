#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "pandora/distribution.hpp"

namespace pandora {

/// Resolves a tie among the candidate firm indices (ascending order).
/// An empty function means the deterministic default: pick the lowest index.
using TieBreak = std::function<std::size_t(const std::vector<std::size_t>&)>;

/// Weitzman reservation value U of a firm posting price `price` and signal
/// F: the unique solution of
///     search_cost = sum over atoms x > U + price of (x - price - U) * w(x).
/// Solved exactly by scanning the piecewise-linear segments between atoms;
/// a bisection fallback guards the closed form and raises InternalError if
/// it cannot bracket. For search_cost == 0 the minimal solution
/// (max support - price) is returned.
double reservation_value(const DiscreteDistribution& signal, double price,
                         double search_cost);

/// Distribution of the effective value W = min(x - price, U) induced by a
/// signal/price pair: each posterior atom is shifted by -price and capped
/// at the reservation value U, merging atoms at the cap.
struct EffectiveValueLottery {
  DiscreteDistribution dist;
  double reservation = 0.0;
  double price = 0.0;
};

EffectiveValueLottery effective_value_lottery(const DiscreteDistribution& signal,
                                              double price, double search_cost);

/// What the consumer knows about one firm before visiting (reservation
/// value) and what a visit would reveal (net value = posterior - price).
struct FirmOffer {
  double reservation = 0.0;
  double net_value = 0.0;
  double price = 0.0;
};

/// A firm's realized play for one simulated consumer journey.
struct FirmPlay {
  double price = 0.0;
  const DiscreteDistribution* signal = nullptr;
  double realized_posterior = 0.0;
};

/// One consumer journey: visit order, purchase (nullopt = outside option),
/// realized consumer payoff x - p - k*c (or -k*c), and per-firm revenue.
struct SearchOutcome {
  std::vector<std::size_t> visit_order;
  std::optional<std::size_t> purchase;
  double consumer_payoff = 0.0;
  std::vector<double> firm_revenues;

  std::size_t visits() const noexcept { return visit_order.size(); }
};

/// Pandora's rule over the given offers:
///   selection  - visit the unvisited firm with the highest reservation value;
///   stopping   - stop once the best sampled net value reaches the highest
///                remaining reservation value, or that value is negative;
///   purchase   - best sampled net value if nonnegative (costless recall),
///                otherwise the outside option.
/// Ties in selection and purchase go through tie_break.
SearchOutcome pandora_search(std::span<const FirmOffer> offers,
                             double search_cost,
                             const TieBreak& tie_break = {});

/// Same journey driven by realized signal draws; reservation values are
/// computed from each firm's signal and price. Each realized posterior must
/// be an atom of its signal.
SearchOutcome pandora_search(std::span<const FirmPlay> plays,
                             double search_cost,
                             const TieBreak& tie_break = {});

/// Static reformulation of the search problem: the consumer buys from the
/// firm with the highest realized effective value if that value is
/// nonnegative, otherwise takes the outside option.
std::optional<std::size_t> static_winner(std::span<const double> effective_values,
                                         const TieBreak& tie_break = {});

}  // namespace pandora
