#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <queue>
#include <utility>
#include <vector>

#include "dwre/core.hpp"

namespace dwre {

/// Uniform bucket grid over a point set for neighbourhood queries.
template <int Dim>
class GridIndex {
 public:
  struct Neighbor {
    double dist2;
    int index;
    friend bool operator<(const Neighbor& a, const Neighbor& b) {
      return a.dist2 < b.dist2 || (a.dist2 == b.dist2 && a.index < b.index);
    }
  };

  GridIndex() = default;

  /// `cell` is the target cell side; it is enlarged if the cell count would exceed max(64, 4n).
  GridIndex(std::vector<Point<Dim>> pts, double cell) : points_(std::move(pts)) {
    const std::size_t n = points_.size();
    Point<Dim> lo = Point<Dim>::Zero(), hi = Point<Dim>::Zero();
    if (n > 0) {
      lo = hi = points_[0];
      for (const auto& p : points_) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
      }
    }
    const Point<Dim> extent = (hi - lo).cwiseMax(1e-9);
    if (!(cell > 0) || !std::isfinite(cell)) cell = extent.maxCoeff();
    const double max_cells = std::max<double>(64.0, 4.0 * static_cast<double>(n));
    for (;;) {
      double total = 1;
      for (int i = 0; i < Dim; ++i) total *= std::floor(extent[i] / cell) + 1;
      if (total <= max_cells) break;
      cell *= 1.25;
    }
    cell_ = cell;
    origin_ = lo;
    std::size_t total = 1;
    for (int i = Dim - 1; i >= 0; --i) {
      counts_[i] = static_cast<int>(std::floor(extent[i] / cell_)) + 1;
      strides_[i] = total;
      total *= static_cast<std::size_t>(counts_[i]);
    }
    start_.assign(total + 1, 0);
    std::vector<std::size_t> slot(n);
    for (std::size_t i = 0; i < n; ++i) {
      slot[i] = linear(cell_of(points_[i]));
      ++start_[slot[i] + 1];
    }
    for (std::size_t c = 0; c < total; ++c) start_[c + 1] += start_[c];
    items_.resize(n);
    std::vector<std::size_t> fill(start_.begin(), start_.end() - 1);
    for (std::size_t i = 0; i < n; ++i) items_[fill[slot[i]]++] = static_cast<int>(i);
  }

  std::size_t size() const { return points_.size(); }
  double cell_side() const { return cell_; }
  int count(int axis) const { return counts_[axis]; }
  double origin(int axis) const { return origin_[axis]; }
  const Point<Dim>& position(int i) const { return points_[static_cast<std::size_t>(i)]; }

  /// Unclamped cell coordinate of x along `axis`.
  int coord(int axis, double x) const {
    const double c = std::floor((x - origin_[axis]) / cell_);
    return static_cast<int>(std::clamp(c, -1e9, 1e9));
  }
  double cell_lo(int axis, int j) const { return origin_[axis] + j * cell_; }

  Site<Dim> cell_of(const Point<Dim>& p) const {
    Site<Dim> c;
    for (int i = 0; i < Dim; ++i) c[i] = std::clamp(coord(i, p[i]), 0, counts_[i] - 1);
    return c;
  }

  template <class F>
  void for_each_in_cell(const Site<Dim>& c, F&& f) const {
    const std::size_t l = linear(c);
    for (std::size_t k = start_[l]; k < start_[l + 1]; ++k) f(items_[k]);
  }

  /// Visits every point in cells [lo, hi] (inclusive, clipped to the grid).
  template <class F>
  void for_each_in_cells(Site<Dim> lo, Site<Dim> hi, F&& f) const {
    for (int i = 0; i < Dim; ++i) {
      lo[i] = std::max(lo[i], 0);
      hi[i] = std::min(hi[i], counts_[i] - 1);
      if (lo[i] > hi[i]) return;
    }
    Site<Dim> c = lo;
    for (;;) {
      for_each_in_cell(c, f);
      int i = Dim - 1;
      for (; i >= 0; --i) {
        if (++c[i] <= hi[i]) break;
        c[i] = lo[i];
      }
      if (i < 0) return;
    }
  }

  /// Visits every point in the closed box [lo, hi] (exact filter).
  template <class F>
  void for_each_in_box(const Point<Dim>& lo, const Point<Dim>& hi, F&& f) const {
    Site<Dim> a, b;
    for (int i = 0; i < Dim; ++i) {
      a[i] = coord(i, lo[i]);
      b[i] = coord(i, hi[i]);
    }
    for_each_in_cells(a, b, [&](int idx) {
      const auto& p = points_[static_cast<std::size_t>(idx)];
      if ((p.array() >= lo.array()).all() && (p.array() <= hi.array()).all()) f(idx);
    });
  }

  /// The `count` nearest points to q (excluding index `exclude`), ascending by distance.
  std::vector<Neighbor> nearest(const Point<Dim>& q, std::size_t count, int exclude = -1) const {
    std::priority_queue<Neighbor> heap;
    if (count == 0 || points_.empty()) return {};
    const Site<Dim> c = cell_of(q);
    for (int r = 0;; ++r) {
      bool covers_all = true;
      Site<Dim> lo, hi;
      for (int i = 0; i < Dim; ++i) {
        lo[i] = c[i] - r;
        hi[i] = c[i] + r;
        if (lo[i] > 0 || hi[i] < counts_[i] - 1) covers_all = false;
      }
      visit_ring(c, r, [&](int idx) {
        if (idx == exclude) return;
        const Neighbor nb{(points_[static_cast<std::size_t>(idx)] - q).squaredNorm(), idx};
        if (heap.size() < count) {
          heap.push(nb);
        } else if (nb < heap.top()) {
          heap.pop();
          heap.push(nb);
        }
      });
      if (covers_all) break;
      if (heap.size() == count) {
        // Unvisited points lie outside the cube of cells [c-r, c+r].
        double bound = kInf;
        for (int i = 0; i < Dim; ++i) {
          if (lo[i] > 0) bound = std::min(bound, q[i] - cell_lo(i, lo[i]));
          if (hi[i] < counts_[i] - 1) bound = std::min(bound, cell_lo(i, hi[i] + 1) - q[i]);
        }
        if (bound > 0 && heap.top().dist2 < bound * bound) break;
      }
    }
    std::vector<Neighbor> out(heap.size());
    for (std::size_t k = heap.size(); k-- > 0;) {
      out[k] = heap.top();
      heap.pop();
    }
    return out;
  }

  /// Visits every point whose cell can meet the shell rmin <= |p - q| <= rmax; callers filter exactly.
  template <class F>
  void for_each_in_shell(const Point<Dim>& q, double rmin, double rmax, F&& f) const {
    if (points_.empty() || rmax < 0) return;
    Site<Dim> cell;
    shell_rec<0>(q, cell, 0.0, 0.0, rmin > 0 ? rmin * rmin : -1.0, rmax * rmax, f);
  }

 private:
  std::size_t linear(const Site<Dim>& c) const {
    std::size_t l = 0;
    for (int i = 0; i < Dim; ++i) l += strides_[i] * static_cast<std::size_t>(c[i]);
    return l;
  }

  template <class F>
  void visit_ring(const Site<Dim>& c, int r, F&& f) const {
    Site<Dim> lo, hi;
    for (int i = 0; i < Dim; ++i) {
      lo[i] = std::max(c[i] - r, 0);
      hi[i] = std::min(c[i] + r, counts_[i] - 1);
    }
    Site<Dim> k = lo;
    for (;;) {
      if ((k - c).cwiseAbs().maxCoeff() == r) for_each_in_cell(k, f);
      int i = Dim - 1;
      for (; i >= 0; --i) {
        if (++k[i] <= hi[i]) break;
        k[i] = lo[i];
      }
      if (i < 0) return;
    }
  }

  // Distance extremes along one axis between coordinate x and cell j.
  std::pair<double, double> axis_range(int axis, double x, int j) const {
    const double a = cell_lo(axis, j), b = a + cell_;
    const double near = std::max({0.0, a - x, x - b});
    const double far = std::max(std::abs(a - x), std::abs(b - x));
    return {near, far};
  }

  template <int Axis, class F>
  void shell_rec(const Point<Dim>& q, Site<Dim>& cell, double mlo, double mhi, double rmin2, double rmax2,
                 F& f) const {
    const double w = std::sqrt(std::max(0.0, rmax2 - mlo));
    const int jl = std::max(coord(Axis, q[Axis] - w), 0);
    const int jh = std::min(coord(Axis, q[Axis] + w), counts_[Axis] - 1);
    if constexpr (Axis == Dim - 1) {
      int il = 1, ih = 0;  // cells wholly inside the inner ball
      if (rmin2 > mhi) {
        const double win = std::sqrt(rmin2 - mhi);
        il = static_cast<int>(std::ceil((q[Axis] - win - origin_[Axis]) / cell_));
        ih = static_cast<int>(std::floor((q[Axis] + win - origin_[Axis]) / cell_)) - 1;
      }
      for (int j = jl; j <= jh; ++j) {
        if (j >= il && j <= ih) {
          j = ih;
          continue;
        }
        cell[Axis] = j;
        for_each_in_cell(cell, f);
      }
    } else {
      for (int j = jl; j <= jh; ++j) {
        const auto [near, far] = axis_range(Axis, q[Axis], j);
        if (mlo + near * near > rmax2) continue;
        cell[Axis] = j;
        shell_rec<Axis + 1>(q, cell, mlo + near * near, mhi + far * far, rmin2, rmax2, f);
      }
    }
  }

  std::vector<Point<Dim>> points_;
  Point<Dim> origin_ = Point<Dim>::Zero();
  double cell_ = 1;
  int counts_[Dim] = {};
  std::size_t strides_[Dim] = {};
  std::vector<std::size_t> start_;
  std::vector<int> items_;
};

template <int Dim>
GridIndex<Dim> make_grid(const MarkedConfiguration<Dim>& phi, double cell) {
  std::vector<Point<Dim>> pts;
  pts.reserve(phi.size());
  for (const auto& p : phi) pts.push_back(p.position);
  return GridIndex<Dim>(std::move(pts), cell);
}

/// Cell side giving about `per_cell` points per cell for the configuration's window density.
template <int Dim>
double natural_cell(const MarkedConfiguration<Dim>& phi, double per_cell) {
  if (phi.empty()) return phi.window().side;
  const double density = static_cast<double>(phi.size()) / phi.window().volume();
  return std::pow(per_cell / density, 1.0 / Dim);
}

}  // namespace dwre
