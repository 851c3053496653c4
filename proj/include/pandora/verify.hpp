#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pandora/equilibrium.hpp"
#include "pandora/params.hpp"

namespace pandora {

/// Demand in effective value facing a single deviating firm when all rivals
/// play the posted-information equilibrium:
///   D(w) = 0                                   for w < 0
///   D(w) = (1-mu)^(n-1) * u_high/(u_high - w)  for 0 <= w <= d_bar
///   D(w) = 1                                   for w > d_bar,
/// with d_bar = u_high * (1 - (1-mu)^(n-1)). Continuous on [0, u_high],
/// strictly increasing on [0, d_bar], and D(0) = (1-mu)^(n-1) > 0.
class DemandCurve {
 public:
  explicit DemandCurve(const MarketParams& params);

  double operator()(double w) const noexcept;

  /// Independent evaluation route through the price CDF:
  /// [1 - mu * Phi(u_high - w)]^(n-1) for w >= 0. Tested against
  /// operator() but never used by it.
  double via_price_cdf(double w) const;

  double d_bar() const noexcept { return d_bar_; }
  double at_zero() const noexcept { return demand_at_zero_; }
  const MarketParams& params() const noexcept { return params_; }

 private:
  MarketParams params_;
  double demand_at_zero_;  // (1-mu)^(n-1)
  double d_bar_;
};

/// Deviating firm's payoff at realized effective value w when charging
/// price p against the equilibrium field:
///   Pi(w) = 0 on [-p, 0),
///   Pi(w) = p (1-mu)^(n-1) (mu-c) / (mu-c - mu w) on [0, u_high - p],
/// saturating at p where demand has already reached 1 (only reachable for
/// prices below the dispersed-price support). Equals p * D(w).
/// Throws OutOfRange for p outside (0, u_high], OutOfDomain for w outside
/// [-p, u_high - p].
double deviation_payoff(const MarketParams& params, double p, double w);

/// The line t(w) = (1-mu)^(n-1) * (w + p) that majorizes Pi on
/// [-p, u_high - p] and touches it at {-p, 0, u_high - p}, for p in the
/// dispersed-price support. Throws PriceOutsideSupport otherwise.
struct MajorizingLine {
  double slope = 0.0;
  double intercept = 0.0;

  double at(double w) const noexcept { return slope * w + intercept; }
};

MajorizingLine majorizing_line(const MarketParams& params, double p);

/// Numeric companion of majorizing_line: gap statistics of t - Pi over a
/// grid of [-p, u_high - p] with the three touch points forced onto the
/// grid. `min_gap_away` is taken over the grid points farther than two
/// grid spacings from every touch point.
struct MajorizationReport {
  double price = 0.0;
  double min_gap = 0.0;
  double max_abs_gap_at_touch = 0.0;
  double min_gap_away = 0.0;

  bool holds(double touch_tol = 1e-10) const noexcept {
    return min_gap >= -1e-12 && max_abs_gap_at_touch <= touch_tol &&
           min_gap_away > touch_tol;
  }
};

MajorizationReport check_majorization(const MarketParams& params, double p,
                                      int grid_points);

/// Optimal ternary effective-value lottery structure at price p: support
/// {w0, w1, w2} with w2 playing the role of the reservation value. The top
/// atom carries mass c / (1 - (w2 + p)) and the remaining mass splits
/// between w0 and w1 so their conditional mean is
///   a_p(w2) = [(mu-c-p)(1 - (w2+p)) - c*w2] / (1 - (w2+p) - c).
/// The resulting lottery has mean mu - c - p.
struct TernaryWeights {
  std::array<double, 3> support{};
  std::array<double, 3> weight{};
  double a_p = 0.0;      // conditional mean of the bottom two atoms
  double top_mass = 0.0; // c / (1 - (w2 + p))
};

/// Mass the optimal structure puts on the reservation-value atom w2:
/// c / (1 - (w2 + p)).
double ternary_top_mass(const MarketParams& params, double p, double w2);

/// Conditional mean a_p(w2) the residual mass must average to, mapping
/// [u_low - p, u_high - p] into [-p, u_low - p].
double ternary_conditional_mean(const MarketParams& params, double p, double w2);

/// Throws InfeasibleSupport when any weight falls outside [0, 1] (or the
/// construction degenerates), OutOfRange when w2 is not a feasible
/// reservation value, OutOfDomain unless w0 < w1 < w2 with w0 >= -p.
TernaryWeights ternary_effective_weights(const MarketParams& params, double p,
                                         double w0, double w1, double w2);

/// Non-throwing variant used by the grid search; infeasible supports give
/// nullopt.
std::optional<TernaryWeights> try_ternary_weights(const MarketParams& params,
                                                  double p, double w0,
                                                  double w1, double w2) noexcept;

/// Least concave majorant of a sampled function, restricted to the sampled
/// grid: the upper convex hull of the (x, y) points, evaluable anywhere in
/// [x_min, x_max].
class ConcaveEnvelope {
 public:
  struct Point {
    double x = 0.0;
    double y = 0.0;
  };

  /// Throws EmptyInput for an empty point set. Points at equal x keep the
  /// larger y.
  static ConcaveEnvelope build(std::vector<Point> points);

  double at(double x) const;  // OutOfDomain outside [x_min, x_max]
  const std::vector<Point>& vertices() const noexcept { return hull_; }

 private:
  std::vector<Point> hull_;
};

enum class DeviationKind { NoInfo, Binary, Ternary };

const char* to_string(DeviationKind kind) noexcept;

/// A single (price, signal) deviation candidate with its expected profit
/// against the equilibrium field. The signal is recorded in posterior
/// space: support values in [0, 1] with their weights.
struct DeviationCandidate {
  DeviationKind kind = DeviationKind::NoInfo;
  double price = 0.0;
  int support_size = 0;
  std::array<double, 3> posterior_support{};
  std::array<double, 3> weight{};
  double profit = 0.0;
};

struct DeviationSearchOptions {
  int price_points = 200;
  int support_points = 200;
  bool include_ternary = false;
  int workers = 0;  // 0 = hardware concurrency
};

/// Grid certification result. margin = best_profit - equilibrium_profit;
/// the analytic profile is certified when margin <= tolerance.
struct DeviationReport {
  MarketParams params;
  DeviationSearchOptions options;
  double equilibrium_profit = 0.0;
  double best_profit = 0.0;
  double margin = 0.0;
  DeviationCandidate best;
  int refine_levels = 1;               // grid-doubling passes performed
  std::vector<double> level_best;      // best profit per pass
};

/// Expected profit of a deviation to price p with the binary posterior
/// signal {a, b} (0 <= a < mu < b <= 1) against the analytic demand curve.
double binary_deviation_profit(const MarketParams& params, const DemandCurve& demand,
                               double p, double a, double b);

/// Expected profit of a deviation to price p with no information.
double no_info_deviation_profit(const MarketParams& params, const DemandCurve& demand,
                                double p);

/// Best deviation profit at a fixed price over the signal grids (binary +
/// no-info, plus the ternary family when enabled).
DeviationCandidate best_deviation_at_price(const MarketParams& params,
                                           const DemandCurve& demand, double p,
                                           int support_points,
                                           bool include_ternary);

/// Brute-force deviation oracle: enumerates prices on a grid over
/// (0, u_high] and Bayes-plausible signals per best_deviation_at_price,
/// scoring each candidate as p * E[D(w)] over its effective-value lottery.
/// Pure deviations only: against a fixed rival profile a mixed deviation's
/// profit is a convex combination of its pure components, so it cannot beat
/// the best pure one. The grid argmax is reduced with a deterministic tie
/// rule (lowest price, then candidate enumeration order), so the result is
/// identical for every worker count.
DeviationReport best_deviation_search(const MarketParams& params,
                                      const DeviationSearchOptions& options);

/// best_deviation_search plus grid-doubling refinement: grids double until
/// the best-profit estimate moves by less than refine_tol (at most
/// max_levels passes). The returned report reflects the last pass.
DeviationReport certify_deviation_proofness(const MarketParams& params,
                                            DeviationSearchOptions options,
                                            double refine_tol = 1e-7,
                                            int max_levels = 3);

/// Hidden-regime deviation payoff under the off-path belief rule: a firm
/// deviating to p_dev > 0 is conjectured to provide no information, so its
/// conjectured reservation value u_low - p_dev is beaten with certainty by
/// the rivals' effective value u_low and the deviant is never visited. At
/// p_dev = 0 any sale is at marginal cost. Profit is 0 either way.
double hidden_deviation_check(const MarketParams& params, double p_dev);

}  // namespace pandora
