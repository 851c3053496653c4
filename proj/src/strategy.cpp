#include "pandora/strategy.hpp"

namespace pandora {

const char* to_string(Regime regime) noexcept {
  return regime == Regime::Hidden ? "hidden" : "posted";
}

const char* to_string(SignalKind kind) noexcept {
  switch (kind) {
    case SignalKind::FullInfo: return "full_info";
    case SignalKind::NoInfo: return "no_info";
    case SignalKind::Explicit: return "explicit";
  }
  return "unknown";
}

Signal Signal::full_info(double mu) {
  return Signal{SignalKind::FullInfo, full_info_signal(mu)};
}

Signal Signal::no_info(double mu) {
  return Signal{SignalKind::NoInfo, no_info_signal(mu)};
}

Signal Signal::explicit_signal(DiscreteDistribution dist, double mu) {
  if (!is_bayes_plausible(dist, mu)) {
    throw_error(ErrorCode::InvalidSupport,
                "signal is not Bayes-plausible for the given prior");
  }
  return Signal{SignalKind::Explicit, std::move(dist)};
}

PricePolicy PricePolicy::degenerate(double p) {
  if (p < 0.0) throw_error(ErrorCode::OutOfRange, "price must be nonnegative");
  PricePolicy policy;
  policy.dispersed = false;
  policy.price = p;
  policy.support_low = p;
  policy.support_high = p;
  return policy;
}

PricePolicy PricePolicy::dispersed_cdf(double low, double high) {
  if (low < 0.0 || high < low) {
    throw_error(ErrorCode::OutOfRange, "invalid price support");
  }
  PricePolicy policy;
  policy.dispersed = true;
  policy.price = 0.0;
  policy.support_low = low;
  policy.support_high = high;
  return policy;
}

}  // namespace pandora
