#include "dwre/stats.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "dwre/errors.hpp"
#include "dwre/rng.hpp"

namespace dwre {

double Proportion::standard_error() const {
  if (trials == 0) return 0;
  return std::sqrt(estimate * (1 - estimate) / static_cast<double>(trials));
}

Proportion wilson(std::size_t successes, std::size_t trials, double z) {
  if (successes > trials) throw ValidationError("more successes than trials");
  Proportion p;
  p.successes = successes;
  p.trials = trials;
  if (trials == 0) return p;
  const double n = static_cast<double>(trials);
  const double ph = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1 + z2 / n;
  const double centre = (ph + z2 / (2 * n)) / denom;
  const double half = z * std::sqrt(ph * (1 - ph) / n + z2 / (4 * n * n)) / denom;
  p.estimate = ph;
  p.lo = std::max(0.0, centre - half);
  p.hi = std::min(1.0, centre + half);
  return p;
}

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw ValidationError("regression inputs differ in length");
  LinearFit f;
  f.n = x.size();
  if (f.n < 2) return f;
  const double n = static_cast<double>(f.n);
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < f.n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < f.n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0) return f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy > 0 ? sxy * sxy / (sxx * syy) : 1.0;
  return f;
}

std::vector<double> survival(const std::vector<std::size_t>& histogram) {
  std::vector<double> s(histogram.size(), 0.0);
  std::size_t total = 0;
  for (std::size_t c : histogram) total += c;
  if (total == 0) return s;
  std::size_t above = total;
  for (std::size_t t = 0; t < histogram.size(); ++t) {
    s[t] = static_cast<double>(above) / static_cast<double>(total);
    above -= histogram[t];
  }
  return s;
}

LinearFit log_survival_fit(const std::vector<std::size_t>& histogram, std::size_t min_count) {
  std::size_t total = 0;
  for (std::size_t c : histogram) total += c;
  std::vector<double> x, y;
  std::size_t above = total;
  for (std::size_t t = 0; t < histogram.size() && above >= std::max<std::size_t>(min_count, 1); ++t) {
    x.push_back(static_cast<double>(t));
    y.push_back(std::log(static_cast<double>(above) / static_cast<double>(total)));
    above -= histogram[t];
  }
  return linear_fit(x, y);
}

Interval bootstrap(std::size_t n, const std::function<double(const std::vector<std::size_t>&)>& statistic,
                   int resamples, std::uint64_t seed, double level) {
  if (n == 0 || resamples < 1) throw ValidationError("bootstrap needs data and resamples");
  std::vector<double> stats;
  stats.reserve(static_cast<std::size_t>(resamples));
  std::vector<std::size_t> idx(n);
  for (int r = 0; r < resamples; ++r) {
    for (std::size_t i = 0; i < n; ++i)
      idx[i] = static_cast<std::size_t>(uniform(seed, static_cast<std::uint64_t>(r), i) * static_cast<double>(n));
    stats.push_back(statistic(idx));
  }
  std::sort(stats.begin(), stats.end());
  const double a = (1 - level) / 2;
  auto q = [&](double p) {
    const auto k = static_cast<std::size_t>(std::clamp(p * (resamples - 1), 0.0, resamples - 1.0));
    return stats[k];
  };
  return Interval{q(a), q(1 - a)};
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(threads, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < n;) {
        try {
          fn(i);
        } catch (...) {
          const std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          next.store(n);
        }
      }
    });
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace dwre
