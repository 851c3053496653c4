#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "pandora/errors.hpp"

namespace pandora {

/// Welford running mean/variance accumulator with an exact pairwise merge
/// (Chan et al.). Merging a fixed sequence of chunk accumulators in chunk
/// order yields bit-identical results regardless of which worker produced
/// each chunk.
class RunningStat {
 public:
  void add(double x) noexcept {
    ++count_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta * (x - mean_);
  }

  void merge(const RunningStat& other) noexcept {
    if (other.count_ == 0) return;
    if (count_ == 0) {
      *this = other;
      return;
    }
    const double na = static_cast<double>(count_);
    const double nb = static_cast<double>(other.count_);
    const double delta = other.mean_ - mean_;
    const double n = na + nb;
    mean_ += delta * (nb / n);
    m2_ += other.m2_ + delta * delta * (na * nb / n);
    count_ += other.count_;
  }

  std::uint64_t count() const noexcept { return count_; }
  double mean() const noexcept { return mean_; }

  double variance() const noexcept {
    return count_ > 1 ? m2_ / static_cast<double>(count_ - 1) : 0.0;
  }

  double stddev() const noexcept { return std::sqrt(variance()); }

  /// Standard error of the mean: sample sd / sqrt(count).
  double standard_error() const noexcept {
    return count_ > 0 ? stddev() / std::sqrt(static_cast<double>(count_)) : 0.0;
  }

 private:
  std::uint64_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

/// Kolmogorov-Smirnov sup-distance between a sample and a model CDF.
/// Sorts a copy of the sample.
template <typename Cdf>
double ks_distance(std::vector<double> sample, const Cdf& cdf) {
  if (sample.empty()) throw_error(ErrorCode::EmptyInput, "ks_distance: empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max(d, f - static_cast<double>(i) / n);
    d = std::max(d, static_cast<double>(i + 1) / n - f);
  }
  return d;
}

/// Asymptotic KS critical value at significance alpha: sqrt(-ln(alpha/2)/2)/sqrt(n).
inline double ks_critical_value(double alpha, std::uint64_t n) noexcept {
  return std::sqrt(-std::log(alpha / 2.0) / 2.0) /
         std::sqrt(static_cast<double>(n));
}

}  // namespace pandora
