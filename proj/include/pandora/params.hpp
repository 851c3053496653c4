#pragma once

#include "pandora/errors.hpp"

namespace pandora {

/// Market primitives: n identical firms, binary match value with prior
/// success probability mu, and per-visit search cost c.
///
/// u_low and u_high are the reservation-value bounds of the two extreme
/// signals at a zero price: u_low = mu - c (no information) and
/// u_high = (mu - c) / mu (full information). They are filled by validate().
struct MarketParams {
  int n = 0;
  double mu = 0.0;
  double c = 0.0;
  double u_low = 0.0;
  double u_high = 0.0;
};

/// Checks n >= 2, mu in (0,1), c in [0, mu) and returns the params with the
/// derived bounds populated. Throws MarketError (DegenerateN / OutOfRange)
/// naming the offending field otherwise.
MarketParams validate(const MarketParams& raw);

/// Convenience: build-and-validate from the three primitives.
MarketParams validate(int n, double mu, double c);

}  // namespace pandora
