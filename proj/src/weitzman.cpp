#include "pandora/weitzman.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pandora {

namespace {

constexpr double kResidualTol = 1e-12;

// Right side of the reservation-value equation at a candidate U:
// sum over atoms x > U + price of (x - price - U) * w(x). Continuous and
// nonincreasing in U, piecewise linear with kinks at the atoms.
double excess_gain(const DiscreteDistribution& f, double price, double u) noexcept {
  const auto& x = f.values();
  const auto& w = f.weights();
  double g = 0.0;
  for (std::size_t i = x.size(); i-- > 0;) {
    const double gap = x[i] - price - u;
    if (gap <= 0.0) break;
    g += gap * w[i];
  }
  return g;
}

double bisect_reservation(const DiscreteDistribution& f, double price,
                          double search_cost) {
  // The solution lies in [min - c - price, max - price].
  double lo = f.min() - search_cost - price;
  double hi = f.max() - price;
  double glo = excess_gain(f, price, lo);
  double ghi = excess_gain(f, price, hi);
  if (glo < search_cost - kResidualTol || ghi > search_cost + kResidualTol) {
    throw_error(ErrorCode::InternalError,
                "reservation-value bisection failed to bracket");
  }
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (excess_gain(f, price, mid) >= search_cost) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-15 * std::max(1.0, std::abs(lo))) break;
  }
  return 0.5 * (lo + hi);
}

struct VisitState {
  std::vector<bool> visited;
  std::vector<std::size_t> order;
  double best_sampled = -std::numeric_limits<double>::infinity();
};

std::size_t resolve_tie(const TieBreak& tie_break,
                        const std::vector<std::size_t>& tied) {
  if (tied.size() == 1 || !tie_break) return tied.front();
  const std::size_t pick = tie_break(tied);
  for (std::size_t idx : tied) {
    if (idx == pick) return pick;
  }
  throw_error(ErrorCode::OutOfRange, "tie_break returned a non-candidate index");
}

}  // namespace

double reservation_value(const DiscreteDistribution& signal, double price,
                         double search_cost) {
  if (!(search_cost >= 0.0) || !std::isfinite(search_cost)) {
    throw_error(ErrorCode::OutOfRange, "search cost must be nonnegative");
  }
  if (!std::isfinite(price)) {
    throw_error(ErrorCode::OutOfRange, "price must be finite");
  }
  const auto& x = signal.values();
  const auto& w = signal.weights();
  const std::size_t m = x.size();

  // Tail sums over atoms i >= k; on the segment between atoms k-1 and k the
  // equation is linear: tail1 - (U + price) * tail0 = c. Scan segments from
  // the top; the leftmost segment (k = 0) always brackets, giving
  // U = mean - c - price there.
  double tail0 = 0.0;
  double tail1 = 0.0;
  double candidate = 0.0;
  for (std::size_t k = m; k-- > 0;) {
    tail0 += w[k];
    tail1 += x[k] * w[k];
    // Gain evaluated at the segment's left breakpoint U = x[k-1] - price.
    const double left_gain =
        k == 0 ? std::numeric_limits<double>::infinity()
               : tail1 - x[k - 1] * tail0;
    if (left_gain >= search_cost) {
      candidate = (tail1 - search_cost) / tail0 - price;
      break;
    }
  }
  if (std::abs(excess_gain(signal, price, candidate) - search_cost) <= kResidualTol) {
    return candidate;
  }
  return bisect_reservation(signal, price, search_cost);
}

EffectiveValueLottery effective_value_lottery(const DiscreteDistribution& signal,
                                              double price, double search_cost) {
  const double u = reservation_value(signal, price, search_cost);
  std::vector<double> values;
  values.reserve(signal.size());
  for (double x : signal.values()) {
    values.push_back(std::min(x - price, u));
  }
  EffectiveValueLottery lottery{
      DiscreteDistribution(std::move(values), signal.weights()), u, price};
  return lottery;
}

SearchOutcome pandora_search(std::span<const FirmOffer> offers,
                             double search_cost, const TieBreak& tie_break) {
  const std::size_t n = offers.size();
  SearchOutcome outcome;
  outcome.firm_revenues.assign(n, 0.0);

  VisitState state;
  state.visited.assign(n, false);
  state.order.reserve(n);

  while (state.order.size() < n) {
    // Highest remaining reservation value and its tied candidates.
    double best_reservation = -std::numeric_limits<double>::infinity();
    std::vector<std::size_t> tied;
    for (std::size_t i = 0; i < n; ++i) {
      if (state.visited[i]) continue;
      if (offers[i].reservation > best_reservation) {
        best_reservation = offers[i].reservation;
        tied.assign(1, i);
      } else if (offers[i].reservation == best_reservation) {
        tied.push_back(i);
      }
    }
    // Stop at indifference; the outside option alone (value 0) triggers a
    // stop only against strictly negative reservation values, so a firm
    // with reservation exactly 0 is still visited when nothing sampled is
    // nonnegative.
    if (state.best_sampled >= best_reservation || best_reservation < 0.0) break;

    const std::size_t next = resolve_tie(tie_break, tied);
    state.visited[next] = true;
    state.order.push_back(next);
    state.best_sampled = std::max(state.best_sampled, offers[next].net_value);
  }

  outcome.visit_order = state.order;
  const double k = static_cast<double>(state.order.size());
  if (!state.order.empty() && state.best_sampled >= 0.0) {
    std::vector<std::size_t> tied;
    for (std::size_t idx : state.order) {
      if (offers[idx].net_value == state.best_sampled) tied.push_back(idx);
    }
    std::sort(tied.begin(), tied.end());
    const std::size_t buy = resolve_tie(tie_break, tied);
    outcome.purchase = buy;
    outcome.consumer_payoff = offers[buy].net_value - k * search_cost;
    outcome.firm_revenues[buy] = offers[buy].price;
  } else {
    outcome.purchase = std::nullopt;
    outcome.consumer_payoff = -k * search_cost;
  }
  return outcome;
}

SearchOutcome pandora_search(std::span<const FirmPlay> plays, double search_cost,
                             const TieBreak& tie_break) {
  std::vector<FirmOffer> offers;
  offers.reserve(plays.size());
  for (const FirmPlay& play : plays) {
    if (play.signal == nullptr) {
      throw_error(ErrorCode::EmptyInput, "firm play without a signal");
    }
    bool on_support = false;
    for (double atom : play.signal->values()) {
      if (std::abs(atom - play.realized_posterior) <= 1e-9) {
        on_support = true;
        break;
      }
    }
    if (!on_support) {
      throw_error(ErrorCode::OutOfRange,
                  "realized posterior is not an atom of the firm's signal");
    }
    offers.push_back(FirmOffer{
        reservation_value(*play.signal, play.price, search_cost),
        play.realized_posterior - play.price, play.price});
  }
  return pandora_search(std::span<const FirmOffer>(offers), search_cost, tie_break);
}

std::optional<std::size_t> static_winner(std::span<const double> effective_values,
                                         const TieBreak& tie_break) {
  if (effective_values.empty()) return std::nullopt;
  double best = -std::numeric_limits<double>::infinity();
  std::vector<std::size_t> tied;
  for (std::size_t i = 0; i < effective_values.size(); ++i) {
    if (effective_values[i] > best) {
      best = effective_values[i];
      tied.assign(1, i);
    } else if (effective_values[i] == best) {
      tied.push_back(i);
    }
  }
  if (best < 0.0) return std::nullopt;
  return resolve_tie(tie_break, tied);
}

}  // namespace pandora
