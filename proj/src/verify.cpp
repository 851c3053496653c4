#include "pandora/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

namespace pandora {

namespace {

constexpr double kEdgeTol = 1e-12;

double grid_point(double lo, double hi, int i, int count) noexcept {
  if (i <= 0 || count <= 1) return lo;
  if (i >= count - 1) return hi;  // keep the endpoint exact
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
}

}  // namespace

DemandCurve::DemandCurve(const MarketParams& params) : params_(validate(params)) {
  demand_at_zero_ = std::pow(1.0 - params_.mu, params_.n - 1);
  d_bar_ = params_.u_high * (1.0 - demand_at_zero_);
}

double DemandCurve::operator()(double w) const noexcept {
  if (w < 0.0) return 0.0;
  if (w >= d_bar_) return 1.0;
  return demand_at_zero_ * params_.u_high / (params_.u_high - w);
}

double DemandCurve::via_price_cdf(double w) const {
  if (w < 0.0) return 0.0;
  const double p = params_.u_high - w;
  const PriceSupport support = posted_price_support(params_);
  if (p <= support.low) return 1.0;  // Phi = 0 at and below the support
  const double phi = posted_price_cdf(params_, p);
  return std::pow(1.0 - params_.mu * phi, params_.n - 1);
}

double deviation_payoff(const MarketParams& params, double p, double w) {
  if (!(p > 0.0) || p > params.u_high + kEdgeTol) {
    throw_error(ErrorCode::OutOfRange,
                "deviation price must lie in (0, u_high]");
  }
  if (w < -p - kEdgeTol || w > params.u_high - p + kEdgeTol) {
    throw_error(ErrorCode::OutOfDomain,
                "effective value outside [-p, u_high - p]");
  }
  if (w < 0.0) return 0.0;
  const double d0 = std::pow(1.0 - params.mu, params.n - 1);
  const double d_bar = params.u_high * (1.0 - d0);
  if (w > d_bar) return p;  // demand saturated (prices below the support)
  return p * d0 * (params.mu - params.c) /
         (params.mu - params.c - params.mu * w);
}

MajorizingLine majorizing_line(const MarketParams& params, double p) {
  const PriceSupport support = posted_price_support(params);
  if (p < support.low - kEdgeTol || p > support.high + kEdgeTol) {
    throw_error(ErrorCode::PriceOutsideSupport,
                "majorizing line is defined on the dispersed-price support");
  }
  const double d0 = std::pow(1.0 - params.mu, params.n - 1);
  return MajorizingLine{d0, d0 * p};
}

MajorizationReport check_majorization(const MarketParams& params, double p,
                                      int grid_points) {
  if (grid_points < 2) {
    throw_error(ErrorCode::OutOfRange, "majorization grid needs >= 2 points");
  }
  const MajorizingLine line = majorizing_line(params, p);
  const double lo = -p;
  const double hi = params.u_high - p;
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(grid_points) + 3);
  for (int i = 0; i < grid_points; ++i) {
    grid.push_back(grid_point(lo, hi, i, grid_points));
  }
  const double touch[3] = {lo, 0.0, hi};
  grid.insert(grid.end(), std::begin(touch), std::end(touch));
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  const double spacing = (hi - lo) / static_cast<double>(grid_points - 1);
  MajorizationReport report;
  report.price = p;
  report.min_gap = std::numeric_limits<double>::infinity();
  report.min_gap_away = std::numeric_limits<double>::infinity();
  report.max_abs_gap_at_touch = 0.0;
  for (double w : grid) {
    const double gap = line.at(w) - deviation_payoff(params, p, w);
    report.min_gap = std::min(report.min_gap, gap);
    double touch_dist = std::numeric_limits<double>::infinity();
    for (double t : touch) touch_dist = std::min(touch_dist, std::abs(w - t));
    if (touch_dist == 0.0) {
      report.max_abs_gap_at_touch =
          std::max(report.max_abs_gap_at_touch, std::abs(gap));
    } else if (touch_dist > 2.0 * spacing) {
      report.min_gap_away = std::min(report.min_gap_away, gap);
    }
  }
  return report;
}

double ternary_top_mass(const MarketParams& params, double p, double w2) {
  const double den = 1.0 - (w2 + p);
  if (den <= 1e-14) {
    throw_error(ErrorCode::OutOfDomain, "reservation atom too close to 1 - p");
  }
  return params.c / den;
}

double ternary_conditional_mean(const MarketParams& params, double p, double w2) {
  const double den = 1.0 - (w2 + p);
  const double a_den = den - params.c;
  if (a_den <= 1e-14) {
    throw_error(ErrorCode::OutOfDomain, "degenerate conditional-mean denominator");
  }
  return ((params.mu - params.c - p) * den - params.c * w2) / a_den;
}

std::optional<TernaryWeights> try_ternary_weights(const MarketParams& params,
                                                  double p, double w0, double w1,
                                                  double w2) noexcept {
  if (!(w0 < w1 && w1 < w2)) return std::nullopt;
  if (w0 < -p - kEdgeTol) return std::nullopt;
  if (w2 < params.u_low - p - kEdgeTol || w2 > params.u_high - p + kEdgeTol) {
    return std::nullopt;
  }
  const double top_den = 1.0 - (w2 + p);
  if (top_den <= 1e-14) return std::nullopt;
  const double top_mass = params.c / top_den;
  if (top_mass > 1.0 + kEdgeTol) return std::nullopt;
  const double a_den = top_den - params.c;
  if (a_den <= 1e-14) return std::nullopt;
  const double a =
      ((params.mu - params.c - p) * top_den - params.c * w2) / a_den;
  const double span = w1 - w0;
  const double rest = 1.0 - top_mass;
  double f0 = rest * (w1 - a) / span;
  double f1 = rest * (a - w0) / span;
  if (f0 < -kEdgeTol || f0 > 1.0 + kEdgeTol || f1 < -kEdgeTol ||
      f1 > 1.0 + kEdgeTol) {
    return std::nullopt;
  }
  f0 = std::clamp(f0, 0.0, 1.0);
  f1 = std::clamp(f1, 0.0, 1.0);
  TernaryWeights weights;
  weights.support = {w0, w1, w2};
  weights.weight = {f0, f1, std::clamp(top_mass, 0.0, 1.0)};
  weights.a_p = a;
  weights.top_mass = top_mass;
  return weights;
}

TernaryWeights ternary_effective_weights(const MarketParams& params, double p,
                                         double w0, double w1, double w2) {
  if (!(w0 < w1 && w1 < w2)) {
    throw_error(ErrorCode::OutOfDomain, "ternary support needs w0 < w1 < w2");
  }
  if (w0 < -p - kEdgeTol) {
    throw_error(ErrorCode::OutOfDomain, "w0 below -p is not an effective value");
  }
  if (w2 < params.u_low - p - kEdgeTol || w2 > params.u_high - p + kEdgeTol) {
    throw_error(ErrorCode::OutOfRange,
                "w2 must be a feasible reservation value");
  }
  const auto weights = try_ternary_weights(params, p, w0, w1, w2);
  if (!weights) {
    throw_error(ErrorCode::InfeasibleSupport,
                "ternary weights fall outside [0, 1] for this support");
  }
  return *weights;
}

ConcaveEnvelope ConcaveEnvelope::build(std::vector<Point> points) {
  if (points.empty()) {
    throw_error(ErrorCode::EmptyInput, "concave envelope of an empty point set");
  }
  std::sort(points.begin(), points.end(), [](const Point& a, const Point& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  // Points sharing an x keep only the topmost.
  std::vector<Point> unique_pts;
  unique_pts.reserve(points.size());
  for (const Point& pt : points) {
    if (!unique_pts.empty() && unique_pts.back().x == pt.x) {
      unique_pts.back().y = pt.y;
    } else {
      unique_pts.push_back(pt);
    }
  }
  ConcaveEnvelope env;
  auto& hull = env.hull_;
  for (const Point& pt : unique_pts) {
    // Keep slopes strictly decreasing: pop while the previous vertex ends up
    // on or below the chord to the new point.
    while (hull.size() >= 2) {
      const Point& o = hull[hull.size() - 2];
      const Point& a = hull.back();
      const double cross =
          (a.x - o.x) * (pt.y - o.y) - (a.y - o.y) * (pt.x - o.x);
      if (cross >= 0.0) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(pt);
  }
  return env;
}

double ConcaveEnvelope::at(double x) const {
  if (x < hull_.front().x - kEdgeTol || x > hull_.back().x + kEdgeTol) {
    throw_error(ErrorCode::OutOfDomain, "envelope evaluated outside its range");
  }
  if (hull_.size() == 1) return hull_.front().y;
  auto it = std::lower_bound(
      hull_.begin(), hull_.end(), x,
      [](const Point& pt, double value) { return pt.x < value; });
  if (it == hull_.begin()) return hull_.front().y;
  if (it == hull_.end()) return hull_.back().y;
  const Point& right = *it;
  const Point& left = *(it - 1);
  if (right.x == left.x) return std::max(left.y, right.y);
  const double t = (x - left.x) / (right.x - left.x);
  return left.y + t * (right.y - left.y);
}

const char* to_string(DeviationKind kind) noexcept {
  switch (kind) {
    case DeviationKind::NoInfo: return "no_info";
    case DeviationKind::Binary: return "binary";
    case DeviationKind::Ternary: return "ternary";
  }
  return "unknown";
}

double binary_deviation_profit(const MarketParams& params,
                               const DemandCurve& demand, double p, double a,
                               double b) {
  const double span = b - a;
  const double fa = (b - params.mu) / span;
  const double fb = (params.mu - a) / span;
  // Closed-form reservation value of a two-atom signal: either the equation
  // crosses between the atoms, or the signal is useless information and the
  // reservation value sits at mu - c - p. The crossing is evaluated with the
  // same expression as the general solver so both round identically (the
  // demand curve is discontinuous at w = 0, so the boundary matters).
  const double crossing = (b * fb - params.c) / fb - p;
  const double u = crossing >= a - p ? crossing : params.mu - params.c - p;
  const double w_low = std::min(a - p, u);
  return p * (fa * demand(w_low) + fb * demand(u));
}

double no_info_deviation_profit(const MarketParams& params,
                                const DemandCurve& demand, double p) {
  return p * demand(params.u_low - p);
}

namespace {

void record_binary(DeviationCandidate& best, const MarketParams& params,
                   double p, double a, double b, double profit) {
  best.kind = DeviationKind::Binary;
  best.price = p;
  best.support_size = 2;
  const double span = b - a;
  best.posterior_support = {a, b, 0.0};
  best.weight = {(b - params.mu) / span, (params.mu - a) / span, 0.0};
  best.profit = profit;
}

}  // namespace

DeviationCandidate best_deviation_at_price(const MarketParams& params,
                                           const DemandCurve& demand, double p,
                                           int support_points,
                                           bool include_ternary) {
  const int s = support_points;
  if (s < 2) {
    throw_error(ErrorCode::OutOfRange, "support grid needs >= 2 points");
  }

  DeviationCandidate best;
  best.kind = DeviationKind::NoInfo;
  best.price = p;
  best.support_size = 1;
  best.posterior_support = {params.mu, 0.0, 0.0};
  best.weight = {1.0, 0.0, 0.0};
  best.profit = no_info_deviation_profit(params, demand, p);

  // Binary posteriors a < mu < b; the grid includes the fully revealing
  // signal (a = 0, b = 1).
  for (int j = 0; j < s; ++j) {
    const double a = params.mu * static_cast<double>(j) / static_cast<double>(s);
    for (int k = 0; k < s; ++k) {
      const double b = params.mu + (1.0 - params.mu) *
                                       static_cast<double>(k + 1) /
                                       static_cast<double>(s);
      const double profit = binary_deviation_profit(params, demand, p, a, b);
      if (profit > best.profit) record_binary(best, params, p, a, b, profit);
    }
  }

  if (include_ternary) {
    std::vector<double> w0_grid(static_cast<std::size_t>(s));
    std::vector<double> w1_grid(static_cast<std::size_t>(s));
    std::vector<double> d0_grid(static_cast<std::size_t>(s));
    std::vector<double> d1_grid(static_cast<std::size_t>(s));
    const double w2_lo = params.u_low - p;
    const double w2_hi = params.u_high - p;
    for (int t = 0; t < s; ++t) {
      const double w2 = grid_point(w2_lo, w2_hi, t, s);
      if (w2 < 0.0) continue;  // entire support below the outside option
      const double top_den = 1.0 - (w2 + p);
      if (top_den <= 1e-14) continue;
      const double top_mass = params.c / top_den;
      if (top_mass > 1.0) continue;
      const double a_den = top_den - params.c;
      if (a_den <= 1e-14) continue;
      const double a =
          ((params.mu - params.c - p) * top_den - params.c * w2) / a_den;
      if (a < -p - kEdgeTol || a > w2 + kEdgeTol) continue;
      const double d_w2 = demand(w2);
      // D is nondecreasing, so p * D(w2) bounds every lottery on [-p, w2].
      if (p * d_w2 <= best.profit) continue;
      for (int i = 0; i < s; ++i) {
        const double w0 = grid_point(-p, a, i, s);
        w0_grid[static_cast<std::size_t>(i)] = w0;
        d0_grid[static_cast<std::size_t>(i)] = demand(w0);
        const double w1 = grid_point(a, w2, i, s);
        w1_grid[static_cast<std::size_t>(i)] = w1;
        d1_grid[static_cast<std::size_t>(i)] = demand(w1);
      }
      const double rest = 1.0 - top_mass;
      const double base = top_mass * d_w2;
      for (int i = 0; i < s; ++i) {
        const double w0 = w0_grid[static_cast<std::size_t>(i)];
        const double dl = d0_grid[static_cast<std::size_t>(i)];
        for (int j = 0; j < s; ++j) {
          const double w1 = w1_grid[static_cast<std::size_t>(j)];
          const double span = w1 - w0;
          if (span <= 1e-14 || w1 >= w2 - 1e-14) continue;
          const double mixed =
              ((w1 - a) * dl + (a - w0) * d1_grid[static_cast<std::size_t>(j)]) /
              span;
          const double profit = p * (base + rest * mixed);
          if (profit > best.profit) {
            best.kind = DeviationKind::Ternary;
            best.price = p;
            best.support_size = 3;
            best.posterior_support = {w0 + p, w1 + p, 1.0};
            best.weight = {rest * (w1 - a) / span, rest * (a - w0) / span,
                           top_mass};
            best.profit = profit;
          }
        }
      }
    }
  }
  return best;
}

DeviationReport best_deviation_search(const MarketParams& params,
                                      const DeviationSearchOptions& options) {
  const MarketParams p = validate(params);
  if (options.price_points < 1) {
    throw_error(ErrorCode::OutOfRange, "price grid needs >= 1 point");
  }
  const DemandCurve demand(p);
  const int price_points = options.price_points;

  std::vector<DeviationCandidate> per_price(
      static_cast<std::size_t>(price_points));
  int workers = options.workers > 0
                    ? options.workers
                    : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::max(1, std::min(workers, price_points));

  std::atomic<int> next{0};
  auto run = [&]() {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= price_points) return;
      const double price =
          i + 1 == price_points
              ? p.u_high  // keep the top grid price exactly on the support
              : p.u_high * static_cast<double>(i + 1) /
                    static_cast<double>(price_points);
      per_price[static_cast<std::size_t>(i)] = best_deviation_at_price(
          p, demand, price, options.support_points, options.include_ternary);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers) - 1);
  for (int t = 1; t < workers; ++t) pool.emplace_back(run);
  run();
  for (std::thread& t : pool) t.join();

  DeviationReport report;
  report.params = p;
  report.options = options;
  report.equilibrium_profit = posted_equilibrium_profit(p);
  // Strict improvement keeps the lowest-price winner: the reduction order is
  // fixed by price index, so the report is worker-count independent.
  report.best = per_price.front();
  for (const DeviationCandidate& candidate : per_price) {
    if (candidate.profit > report.best.profit) report.best = candidate;
  }
  report.best_profit = report.best.profit;
  report.margin = report.best_profit - report.equilibrium_profit;
  report.level_best = {report.best_profit};
  report.refine_levels = 1;
  return report;
}

DeviationReport certify_deviation_proofness(const MarketParams& params,
                                            DeviationSearchOptions options,
                                            double refine_tol, int max_levels) {
  DeviationReport report = best_deviation_search(params, options);
  std::vector<double> level_best = report.level_best;
  for (int level = 1; level < max_levels; ++level) {
    options.price_points *= 2;
    options.support_points *= 2;
    DeviationReport refined = best_deviation_search(params, options);
    level_best.push_back(refined.best_profit);
    const bool stable =
        std::abs(level_best[level_best.size() - 1] -
                 level_best[level_best.size() - 2]) < refine_tol;
    report = refined;
    report.refine_levels = level + 1;
    report.level_best = level_best;
    if (stable) break;
  }
  report.level_best = level_best;
  return report;
}

double hidden_deviation_check(const MarketParams& params, double p_dev) {
  if (!(p_dev >= 0.0)) {
    throw_error(ErrorCode::OutOfRange, "deviation price must be nonnegative");
  }
  // Rivals price at 0 with useless information: their realized effective
  // value is u_low with certainty. A positively priced deviant is
  // conjectured to provide no information, so its conjectured reservation
  // value u_low - p_dev loses to every rival and it is never visited.
  const double conjectured_reservation = params.u_low - p_dev;
  const double rival_effective_value = params.u_low;
  const bool ever_visited = conjectured_reservation > rival_effective_value;
  if (!ever_visited) return 0.0;
  // At p_dev = 0 the deviant may tie and be visited, but sells at price 0;
  // p_dev >= 0 means this branch never carries revenue.
  return 0.0;
}

}  // namespace pandora
