#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <variant>
#include <vector>

#include "dwre/core.hpp"
#include "dwre/rng.hpp"

namespace dwre {

/// Rank marks k in 1..K drawn from pi (pi[k-1] = P(k)).
struct RankLaw {
  std::vector<double> pi;
  int K() const { return static_cast<int>(pi.size()); }
};
/// Directions drawn uniformly from {+e1, -e1, +e2, -e2}.
struct DirectionLaw {};

using MarkLaw = std::variant<RankLaw, DirectionLaw>;

inline RankLaw uniform_rank_law(int K) {
  if (K < 1) throw ValidationError("K must be >= 1");
  return RankLaw{std::vector<double>(static_cast<std::size_t>(K), 1.0 / K)};
}

void validate_law(const MarkLaw& law);

/// Mark for uniform variate u in [0,1).
Mark draw_mark(const MarkLaw& law, double u);

namespace streams {
inline constexpr std::uint64_t kCount = ~0ULL;
inline constexpr std::uint64_t kMark = 64;
inline constexpr std::uint64_t kThin = 65;
}  // namespace streams

/// Poisson process of intensity lambda on `window`, i.i.d. marks; ids first_id, first_id+1, ...
template <int Dim>
MarkedConfiguration<Dim> sample_poisson(const Box<Dim>& window, double lambda, const MarkLaw& law,
                                        std::uint64_t seed, std::int64_t first_id = 0) {
  if (!(lambda > 0) || !std::isfinite(lambda)) throw ValidationError("intensity must be positive");
  validate_law(law);
  const double mean = lambda * window.volume();
  CounterEngine engine(seed, streams::kCount);
  const std::int64_t n = mean > 0 ? std::poisson_distribution<std::int64_t>(mean)(engine) : 0;
  const Point<Dim> lo = window.lo(), hi = window.hi();
  std::vector<MarkedPoint<Dim>> pts(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    auto& p = pts[static_cast<std::size_t>(i)];
    for (int k = 0; k < Dim; ++k) {
      double c = lo[k] + window.side * uniform(seed, static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(k));
      if (c >= hi[k]) c = std::nextafter(hi[k], lo[k]);
      p.position[k] = c;
    }
    p.mark = draw_mark(law, uniform(seed, static_cast<std::uint64_t>(i), streams::kMark));
    p.id = first_id + i;
  }
  return MarkedConfiguration<Dim>(std::move(pts), window);
}

template <int Dim>
struct SprinkleSplit {
  MarkedConfiguration<Dim> x1;
  MarkedConfiguration<Dim> x2;
  double s = 0;
  double base_intensity = 1;
};

/// Sprinkling probability s^{-d-1}.
template <int Dim>
double sprinkle_probability(double s) {
  return std::pow(s, -(Dim + 1));
}

/// Full process at `base_intensity`, each point sent to x2 independently with probability s^{-d-1}.
template <int Dim>
SprinkleSplit<Dim> sprinkle_split(const Box<Dim>& window, double s, const MarkLaw& law, std::uint64_t seed,
                                  double base_intensity = 1.0) {
  if (!(s > 1)) throw ValidationError("sprinkling scale must exceed 1");
  const auto full = sample_poisson<Dim>(window, base_intensity, law, seed);
  const double p2 = sprinkle_probability<Dim>(s);
  std::vector<MarkedPoint<Dim>> a, b;
  for (std::size_t i = 0; i < full.size(); ++i) {
    if (uniform(seed, i, streams::kThin) < p2)
      b.push_back(full[i]);
    else
      a.push_back(full[i]);
  }
  return SprinkleSplit<Dim>{MarkedConfiguration<Dim>(std::move(a), window),
                            MarkedConfiguration<Dim>(std::move(b), window), s, base_intensity};
}

}  // namespace dwre
