#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "dwre/core.hpp"
#include "dwre/grid.hpp"
#include "dwre/ppgen.hpp"
#include "dwre/rng.hpp"
#include "dwre/walks.hpp"

namespace dwre {

struct KnnModel {
  int K = 1;
  std::vector<double> pi{1.0};
  double eps = kDefaultTolerance;

  static KnnModel uniform(int K) { return KnnModel{K, uniform_rank_law(K).pi, kDefaultTolerance}; }
  RankLaw law() const { return RankLaw{pi}; }
  void validate() const {
    if (K < 1) throw ValidationError("K must be >= 1");
    if (static_cast<int>(pi.size()) != K) throw ValidationError("pi must have K entries");
    validate_law(law());
  }
};

template <int Dim>
struct StabilizationBall {
  Point<Dim> center;
  double radius = 0;
};

namespace detail {

// Sorted (distance, index) pairs of the `count` nearest other points, by brute force.
template <int Dim>
std::vector<std::pair<double, std::size_t>> brute_nearest(const MarkedConfiguration<Dim>& phi, std::size_t x,
                                                           std::size_t count) {
  std::vector<std::pair<double, std::size_t>> d;
  d.reserve(phi.size());
  for (std::size_t j = 0; j < phi.size(); ++j)
    if (j != x) d.emplace_back((phi[j].position - phi[x].position).norm(), j);
  count = std::min(count, d.size());
  std::partial_sort(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(count), d.end());
  d.resize(count);
  return d;
}

inline void check_rank_gap(const std::vector<double>& dist, std::size_t k, double eps) {
  // dist is ascending, dist[k-1] is the k-th nearest.
  if (k >= 2 && dist[k - 1] - dist[k - 2] <= eps * dist[k - 1])
    throw GenericityError("distance tie at neighbour rank " + std::to_string(k));
  if (k < dist.size() && dist[k] - dist[k - 1] <= eps * dist[k])
    throw GenericityError("distance tie at neighbour rank " + std::to_string(k));
}

}  // namespace detail

/// k-th nearest neighbour of point x (k = rank mark of x): returns (index, position).
template <int Dim>
std::pair<std::size_t, Point<Dim>> knn_descendant(const MarkedConfiguration<Dim>& phi, std::size_t x,
                                                  const KnnModel& model) {
  model.validate();
  if (phi.size() < static_cast<std::size_t>(model.K) + 1) throw ValidationError("fewer than K+1 points");
  if (x >= phi.size()) throw ValidationError("point index out of range");
  const int k = phi[x].mark.rank();
  if (k > model.K) throw ValidationError("rank mark exceeds K");
  const auto nb = detail::brute_nearest(phi, x, static_cast<std::size_t>(k) + 1);
  std::vector<double> dist;
  for (const auto& e : nb) dist.push_back(e.first);
  detail::check_rank_gap(dist, static_cast<std::size_t>(k), model.eps);
  const std::size_t y = nb[static_cast<std::size_t>(k) - 1].second;
  return {y, phi[y].position};
}

/// Smallest ball around x holding K+1 points of phi.
template <int Dim>
StabilizationBall<Dim> r_stab(const MarkedConfiguration<Dim>& phi, std::size_t x, const KnnModel& model) {
  if (phi.size() < static_cast<std::size_t>(model.K) + 1) throw ValidationError("fewer than K+1 points");
  if (x >= phi.size()) throw ValidationError("point index out of range");
  const auto nb = detail::brute_nearest(phi, x, static_cast<std::size_t>(model.K));
  return StabilizationBall<Dim>{phi[x].position, nb.back().first};
}

enum class KnnCensor {
  None,    // every node gets its edge
  Window,  // censored when the ball fixing the edge is not strictly inside the window
};

/// Out-degree-1 k-nearest-neighbour graph over the whole configuration.
template <int Dim>
WalkGraph<Dim> build_knn_graph(const MarkedConfiguration<Dim>& phi, const KnnModel& model,
                               KnnCensor censor = KnnCensor::None) {
  model.validate();
  const std::size_t n = phi.size();
  if (n < static_cast<std::size_t>(model.K) + 1) throw ValidationError("fewer than K+1 points");
  const GridIndex<Dim> grid = make_grid(phi, natural_cell(phi, static_cast<double>(model.K)));
  WalkGraph<Dim> g = WalkGraph<Dim>::with_size(n);
  std::vector<double> dist;
  for (std::size_t i = 0; i < n; ++i) {
    const int k = phi[i].mark.rank();
    if (k > model.K) throw ValidationError("rank mark exceeds K");
    const auto nb = grid.nearest(phi[i].position, static_cast<std::size_t>(k) + 1, static_cast<int>(i));
    dist.clear();
    for (const auto& e : nb) dist.push_back(std::sqrt(e.dist2));
    detail::check_rank_gap(dist, static_cast<std::size_t>(k), model.eps);
    const auto y = static_cast<std::size_t>(nb[static_cast<std::size_t>(k) - 1].index);
    if (censor == KnnCensor::Window &&
        !(distance_to_boundary(phi[i].position, phi.window()) > dist[static_cast<std::size_t>(k) - 1]))
      continue;
    g.next[i] = static_cast<int>(y);
    g.geo[i] = phi[y].position;
    g.censored[i] = 0;
  }
  return g;
}

// ---------------------------------------------------------------------------
// Events. Configurations are given relative to the site centre o.

/// Subcubes per axis in the dense-filling event: 3(4d+1).
template <int Dim>
constexpr int a1_parts() {
  return 3 * (4 * Dim + 1);
}

/// Every subcube of Q_3s(o) of side s/(4d+1) holds at least K+1 points.
template <int Dim>
bool event_A1(const MarkedConfiguration<Dim>& phi, double s, const KnnModel& model) {
  const int m = a1_parts<Dim>();
  const double side = s / (4 * Dim + 1);
  const Box<Dim> big = Box<Dim>::centered(3 * s);
  std::size_t cells = 1;
  for (int i = 0; i < Dim; ++i) cells *= static_cast<std::size_t>(m);
  std::vector<int> count(cells, 0);
  for (const auto& p : phi) {
    if (!big.contains(p.position)) continue;
    std::size_t l = 0;
    for (int i = 0; i < Dim; ++i) {
      const int c = std::clamp(static_cast<int>(std::floor((p.position[i] + 1.5 * s) / side)), 0, m - 1);
      l = l * static_cast<std::size_t>(m) + static_cast<std::size_t>(c);
    }
    ++count[l];
  }
  for (int c : count)
    if (c < model.K + 1) return false;
  return true;
}

/// No points in Q_s(o) \ Q_{s - s^{-d}}(o).
template <int Dim>
bool event_A2(const MarkedConfiguration<Dim>& phi, double s) {
  const Box<Dim> outer = Box<Dim>::centered(s);
  const Box<Dim> inner = Box<Dim>::centered(s - std::pow(s, -Dim));
  for (const auto& p : phi)
    if (outer.contains(p.position) && !inner.contains(p.position)) return false;
  return true;
}

/// For each point of Q_3s(o) with rho = dist(xi, boundary of Q_s(o)), no other point at distance in
/// (rho - s^{-2d}, rho + s^{-2d}).
template <int Dim>
bool event_A3(const MarkedConfiguration<Dim>& phi, double s) {
  if (phi.size() < 2) return true;
  const double w = std::pow(s, -2 * Dim);
  const Box<Dim> qs = Box<Dim>::centered(s);
  const Box<Dim> big = Box<Dim>::centered(3 * s);
  const GridIndex<Dim> grid = make_grid(phi, natural_cell(phi, 2.0));
  for (std::size_t i = 0; i < phi.size(); ++i) {
    const Point<Dim>& xi = phi[i].position;
    if (!big.contains(xi)) continue;
    const double rho = distance_to_boundary(xi, qs);
    bool hit = false;
    grid.for_each_in_shell(xi, rho - w, rho + w, [&](int j) {
      if (hit || static_cast<std::size_t>(j) == i) return;
      const double d = (grid.position(j) - xi).norm();
      if (d > rho - w && d < rho + w) hit = true;
    });
    if (hit) return false;
  }
  return true;
}

/// Sites of {-1,0,1}^d.
template <int Dim>
std::vector<Site<Dim>> unit_block_sites() {
  std::vector<Site<Dim>> out;
  Site<Dim> z = Site<Dim>::Constant(-1);
  for (;;) {
    out.push_back(z);
    int i = Dim - 1;
    for (; i >= 0; --i) {
      if (++z[i] <= 1) break;
      z[i] = -1;
    }
    if (i < 0) return out;
  }
}

/// No point of Q_s(sz) is within s^{-d} of equidistant from two distinct lattice neighbours z1, z2 of z.
template <int Dim>
bool event_A4(const MarkedConfiguration<Dim>& phi, double s) {
  const double gap = std::pow(s, -Dim);
  const auto sites = unit_block_sites<Dim>();
  for (const auto& p : phi) {
    const Site<Dim> z = site_of<Dim>(p.position, s);
    if (z.cwiseAbs().maxCoeff() > 1) continue;
    std::vector<double> d;
    for (const auto& z1 : sites)
      if ((z1 - z).cwiseAbs().sum() == 1) d.push_back(distance_to_box(p.position, Box<Dim>::at_site(z1, s)));
    for (std::size_t a = 0; a < d.size(); ++a)
      for (std::size_t b = a + 1; b < d.size(); ++b)
        if (std::abs(d[a] - d[b]) < gap) return false;
  }
  return true;
}

/// The good-site event for the k-nearest-neighbour walk: A1 and A2 and A3 and A4.
template <int Dim>
bool event_A_knn(const MarkedConfiguration<Dim>& phi, double s, const KnnModel& model) {
  return event_A1(phi, s, model) && event_A2(phi, s) && event_A4(phi, s) && event_A3(phi, s);
}

/// Geometry of the dense shell: cell side h = s^{-4d}, shell index m with |z|_inf = m.
struct ShellGeometry {
  double h = 0;
  long long m = 0;
  double cells = 0;
};

template <int Dim>
ShellGeometry shell_geometry(double s) {
  if (!(s > 1)) throw ValidationError("shell scale must exceed 1");
  ShellGeometry g;
  g.h = std::pow(s, -4 * Dim);
  const double a = (s - std::pow(s, -3 * Dim)) * std::pow(s, 4 * Dim) / 2;
  g.m = static_cast<long long>(std::ceil(a));
  g.cells = std::pow(2.0 * g.m + 1, Dim) - std::pow(2.0 * g.m - 1, Dim);
  return g;
}

inline constexpr double kShellCellCap = 1e6;

namespace detail {
template <int Dim, int Axis, class F>
void shell_sites_rec(int m, Site<Dim>& z, bool on_shell, F& f) {
  if constexpr (Axis == Dim - 1) {
    if (on_shell || m == 0) {
      for (int j = -m; j <= m; ++j) {
        z[Axis] = j;
        f(std::as_const(z));
      }
    } else {
      z[Axis] = -m;
      f(std::as_const(z));
      z[Axis] = m;
      f(std::as_const(z));
    }
  } else {
    for (int j = -m; j <= m; ++j) {
      z[Axis] = j;
      shell_sites_rec<Dim, Axis + 1>(m, z, on_shell || std::abs(j) == m, f);
    }
  }
}
}  // namespace detail

/// Visits the sites with |z|_inf = m in lexicographic order.
template <int Dim, class F>
void for_each_shell_site(int m, F&& f) {
  Site<Dim> z;
  detail::shell_sites_rec<Dim, 0>(m, z, false, f);
}

/// Dense-shell event: psi lies in the shell cells and each cell holds at least K+1 points.
template <int Dim>
bool event_App(const MarkedConfiguration<Dim>& psi, double s, const KnnModel& model,
               double cell_cap = kShellCellCap) {
  const ShellGeometry g = shell_geometry<Dim>(s);
  if (g.cells > cell_cap) throw ResourceCapError("shell has too many cells");
  std::map<Site<Dim>, int, SiteLess> count;
  for (const auto& p : psi) {
    const Site<Dim> z = site_of<Dim>(p.position, g.h);
    if (z.cwiseAbs().maxCoeff() != g.m) return false;
    ++count[z];
  }
  std::size_t full = 0;
  for (const auto& [z, c] : count)
    if (c >= model.K + 1) ++full;
  return static_cast<double>(full) == g.cells;
}

/// A configuration satisfying the dense-shell event: K+1 uniform points per shell cell (clipped to Q_s(o)).
template <int Dim>
MarkedConfiguration<Dim> gen_shell_config(double s, const KnnModel& model, std::uint64_t seed,
                                          std::int64_t first_id = 0, double cell_cap = kShellCellCap) {
  model.validate();
  const ShellGeometry g = shell_geometry<Dim>(s);
  if (g.cells > cell_cap) throw ResourceCapError("shell has too many cells");
  const Box<Dim> window = Box<Dim>::centered(s);
  const RankLaw law = model.law();
  std::vector<MarkedPoint<Dim>> pts;
  std::uint64_t counter = 0;
  for_each_shell_site<Dim>(static_cast<int>(g.m), [&](const Site<Dim>& z) {
    const Box<Dim> cell = Box<Dim>::at_site(z, g.h);
    const Point<Dim> lo = cell.lo().cwiseMax(window.lo());
    const Point<Dim> hi = cell.hi().cwiseMin(window.hi());
    for (int k = 0; k <= model.K; ++k, ++counter) {
      MarkedPoint<Dim> p;
      for (int i = 0; i < Dim; ++i) {
        double c = lo[i] + (hi[i] - lo[i]) * uniform(seed, counter, static_cast<std::uint64_t>(i));
        if (c >= hi[i]) c = std::nextafter(hi[i], lo[i]);
        p.position[i] = c;
      }
      p.mark = draw_mark(law, uniform(seed, counter, streams::kMark));
      p.id = first_id + static_cast<std::int64_t>(counter);
      pts.push_back(p);
    }
  });
  return MarkedConfiguration<Dim>(std::move(pts), window, model.eps);
}

}  // namespace dwre
