#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace dwre {

/// Proportion k/n with a 95% Wilson score interval.
struct Proportion {
  std::size_t successes = 0;
  std::size_t trials = 0;
  double estimate = 0;
  double lo = 0;
  double hi = 1;

  double standard_error() const;
  bool covers(double p) const { return lo <= p && p <= hi; }
};

Proportion wilson(std::size_t successes, std::size_t trials, double z = 1.959963984540054);

struct LinearFit {
  double slope = 0;
  double intercept = 0;
  double r2 = 0;
  std::size_t n = 0;
};

/// Ordinary least squares y ~ a + b x.
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

/// Survival S(t) = #{tail >= t} / total from a histogram.
std::vector<double> survival(const std::vector<std::size_t>& histogram);

/// Fit of log S(t) against t over the support points with at least `min_count` observations at or beyond t.
LinearFit log_survival_fit(const std::vector<std::size_t>& histogram, std::size_t min_count = 10);

struct Interval {
  double lo = 0;
  double hi = 0;
};

/// Percentile interval of statistic(resample) over `resamples` bootstrap draws of indices 0..n-1.
Interval bootstrap(std::size_t n, const std::function<double(const std::vector<std::size_t>&)>& statistic,
                   int resamples, std::uint64_t seed, double level = 0.95);

/// Runs fn(i) for i in [0, n) on `threads` workers; fn must only write state owned by index i.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace dwre
