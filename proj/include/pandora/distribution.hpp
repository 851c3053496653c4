#pragma once

#include <cstddef>
#include <vector>

#include "pandora/errors.hpp"

namespace pandora {

/// Finite-support probability distribution over real values, stored as
/// strictly increasing atom values with strictly positive weights summing
/// to one. Atoms closer than kMergeTol are merged (weights summed, value
/// set to the weighted mean). Immutable after construction.
class DiscreteDistribution {
 public:
  static constexpr double kMergeTol = 1e-12;
  static constexpr double kWeightSumTol = 1e-12;

  /// Builds from parallel (value, weight) arrays. Values may be unsorted;
  /// zero weights are dropped, negative weights rejected, and the weight
  /// sum must be 1 within kWeightSumTol.
  DiscreteDistribution(std::vector<double> values, std::vector<double> weights);

  static DiscreteDistribution degenerate(double value);

  const std::vector<double>& values() const noexcept { return values_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  std::size_t size() const noexcept { return values_.size(); }

  double min() const noexcept { return values_.front(); }
  double max() const noexcept { return values_.back(); }
  double mean() const noexcept;

  /// Right-continuous CDF: P(X <= x).
  double cdf(double x) const noexcept;

  /// Smallest atom value v with cdf(v) >= q, for q in [0, 1].
  double quantile(double q) const;

 private:
  std::vector<double> values_;
  std::vector<double> weights_;
};

/// Two-atom Bayes-plausible posterior distribution {a, b} with mean mu.
/// Requires 0 <= a < mu < b <= 1; weights are (b-mu)/(b-a) and (mu-a)/(b-a).
DiscreteDistribution make_binary_posterior(double a, double b, double mu);

/// Fully revealing signal: atoms {0, 1} with weights {1-mu, mu}.
DiscreteDistribution full_info_signal(double mu);

/// Uninformative signal: degenerate at the prior mu.
DiscreteDistribution no_info_signal(double mu);

/// True when the distribution is a valid posterior distribution for prior
/// mu: support inside [0, 1] and mean equal to mu within tol.
bool is_bayes_plausible(const DiscreteDistribution& dist, double mu,
                        double tol = 1e-12) noexcept;

}  // namespace pandora
