#include "pandora/params.hpp"

#include <cmath>
#include <string>

namespace pandora {

MarketParams validate(const MarketParams& raw) {
  if (raw.n < 2) {
    throw_error(ErrorCode::DegenerateN,
                "n = " + std::to_string(raw.n) +
                    "; at least two firms are required (the dispersed-price "
                    "exponent 1/(n-1) is undefined at n = 1)");
  }
  if (!std::isfinite(raw.mu) || raw.mu <= 0.0 || raw.mu >= 1.0) {
    throw_error(ErrorCode::OutOfRange, "mu must lie in (0, 1)");
  }
  if (!std::isfinite(raw.c) || raw.c < 0.0 || raw.c >= raw.mu) {
    throw_error(ErrorCode::OutOfRange, "c must lie in [0, mu)");
  }
  MarketParams p = raw;
  p.u_low = p.mu - p.c;
  p.u_high = (p.mu - p.c) / p.mu;
  // c in [0, mu) guarantees 0 < u_low <= u_high <= 1 (u_high = 1 iff c = 0).
  if (!(p.u_low > 0.0 && p.u_low <= p.u_high && p.u_high <= 1.0)) {
    throw_error(ErrorCode::InternalError, "derived reservation bounds are inconsistent");
  }
  return p;
}

MarketParams validate(int n, double mu, double c) {
  MarketParams raw;
  raw.n = n;
  raw.mu = mu;
  raw.c = c;
  return validate(raw);
}

}  // namespace pandora
