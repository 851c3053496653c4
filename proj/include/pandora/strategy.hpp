#pragma once

#include "pandora/distribution.hpp"

namespace pandora {

/// Which instruments are publicly posted before search begins.
enum class Regime { Hidden, Posted };

const char* to_string(Regime regime) noexcept;

enum class SignalKind { FullInfo, NoInfo, Explicit };

const char* to_string(SignalKind kind) noexcept;

/// A firm's information policy: a Bayes-plausible distribution over
/// posterior match values, revealed to the consumer on a visit.
struct Signal {
  SignalKind kind;
  DiscreteDistribution posterior;

  static Signal full_info(double mu);
  static Signal no_info(double mu);
  /// Arbitrary finite-support signal; rejects non-Bayes-plausible input.
  static Signal explicit_signal(DiscreteDistribution dist, double mu);
};

/// Either a degenerate posted price or a dispersed price CDF described by
/// its support (the functional form lives in the equilibrium module).
struct PricePolicy {
  bool dispersed = false;
  double price = 0.0;  // when degenerate
  double support_low = 0.0;
  double support_high = 0.0;

  static PricePolicy degenerate(double p);
  static PricePolicy dispersed_cdf(double low, double high);
};

/// One firm's complete strategy. All equilibrium policies pair every price
/// with the same signal, so the price-to-signal map is a single Signal.
struct FirmStrategy {
  Regime regime;
  PricePolicy price_policy;
  Signal signal_policy;
};

}  // namespace pandora
