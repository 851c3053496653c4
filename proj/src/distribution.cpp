#include "pandora/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace pandora {

DiscreteDistribution::DiscreteDistribution(std::vector<double> values,
                                           std::vector<double> weights) {
  if (values.size() != weights.size()) {
    throw_error(ErrorCode::OutOfRange, "values/weights size mismatch");
  }
  if (values.empty()) {
    throw_error(ErrorCode::EmptyInput, "distribution needs at least one atom");
  }
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  double sum = 0.0;
  for (std::size_t idx : order) {
    const double v = values[idx];
    const double w = weights[idx];
    if (!std::isfinite(v) || !std::isfinite(w)) {
      throw_error(ErrorCode::OutOfRange, "non-finite atom");
    }
    if (w < 0.0) throw_error(ErrorCode::OutOfRange, "negative weight");
    if (w == 0.0) continue;
    sum += w;
    if (!values_.empty() && v - values_.back() <= kMergeTol) {
      // Merge near-coincident atoms at their weighted mean.
      const double wa = weights_.back();
      values_.back() = (values_.back() * wa + v * w) / (wa + w);
      weights_.back() += w;
    } else {
      values_.push_back(v);
      weights_.push_back(w);
    }
  }
  if (values_.empty()) {
    throw_error(ErrorCode::EmptyInput, "all atoms have zero weight");
  }
  if (std::abs(sum - 1.0) > kWeightSumTol) {
    throw_error(ErrorCode::OutOfRange,
                "weights sum to " + std::to_string(sum) + ", expected 1");
  }
}

DiscreteDistribution DiscreteDistribution::degenerate(double value) {
  return DiscreteDistribution({value}, {1.0});
}

double DiscreteDistribution::mean() const noexcept {
  double m = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) m += values_[i] * weights_[i];
  return m;
}

double DiscreteDistribution::cdf(double x) const noexcept {
  double acc = 0.0;
  for (std::size_t i = 0; i < values_.size() && values_[i] <= x; ++i) {
    acc += weights_[i];
  }
  return acc;
}

double DiscreteDistribution::quantile(double q) const {
  if (!(q >= 0.0 && q <= 1.0)) {
    throw_error(ErrorCode::OutOfRange, "quantile argument outside [0, 1]");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    acc += weights_[i];
    if (acc >= q) return values_[i];
  }
  return values_.back();
}

DiscreteDistribution make_binary_posterior(double a, double b, double mu) {
  if (!(mu > 0.0 && mu < 1.0)) {
    throw_error(ErrorCode::OutOfRange, "mu must lie in (0, 1)");
  }
  if (a < 0.0 || b > 1.0 || a >= mu || b <= mu) {
    throw_error(ErrorCode::InvalidSupport,
                "binary posterior needs 0 <= a < mu < b <= 1");
  }
  const double span = b - a;
  return DiscreteDistribution({a, b}, {(b - mu) / span, (mu - a) / span});
}

DiscreteDistribution full_info_signal(double mu) {
  return make_binary_posterior(0.0, 1.0, mu);
}

DiscreteDistribution no_info_signal(double mu) {
  if (!(mu > 0.0 && mu < 1.0)) {
    throw_error(ErrorCode::OutOfRange, "mu must lie in (0, 1)");
  }
  return DiscreteDistribution::degenerate(mu);
}

bool is_bayes_plausible(const DiscreteDistribution& dist, double mu,
                        double tol) noexcept {
  if (dist.min() < -tol || dist.max() > 1.0 + tol) return false;
  return std::abs(dist.mean() - mu) <= tol;
}

}  // namespace pandora
