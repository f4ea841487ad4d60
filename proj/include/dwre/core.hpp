#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

#include "dwre/errors.hpp"

namespace dwre {

inline constexpr double kDefaultTolerance = 1e-12;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

template <int Dim>
using Point = Eigen::Matrix<double, Dim, 1>;
using Vec2 = Point<2>;

/// Lattice site z in Z^d.
template <int Dim>
using Site = Eigen::Matrix<int, Dim, 1>;
using Site2 = Site<2>;

/// Strict weak ordering on lattice sites (lexicographic).
struct SiteLess {
  template <int Dim>
  bool operator()(const Site<Dim>& a, const Site<Dim>& b) const {
    return std::lexicographical_compare(a.data(), a.data() + Dim, b.data(), b.data() + Dim);
  }
};

enum class Direction : std::uint8_t { PosX = 0, NegX = 1, PosY = 2, NegY = 3 };

inline constexpr Direction kDirections[4] = {Direction::PosX, Direction::NegX, Direction::PosY,
                                             Direction::NegY};

/// 0 for ±e1, 1 for ±e2.
constexpr int axis(Direction d) { return static_cast<int>(d) >> 1; }
/// +1 or -1.
constexpr int sign(Direction d) { return (static_cast<int>(d) & 1) ? -1 : 1; }
constexpr Direction make_direction(int axis, int sign) {
  return static_cast<Direction>(2 * axis + (sign < 0 ? 1 : 0));
}
inline Vec2 unit(Direction d) {
  Vec2 v = Vec2::Zero();
  v[axis(d)] = sign(d);
  return v;
}
/// Counterclockwise rotation by pi/2: e1 -> e2 -> -e1 -> -e2 -> e1.
constexpr Direction rotate_ccw(Direction d) {
  switch (d) {
    case Direction::PosX: return Direction::PosY;
    case Direction::PosY: return Direction::NegX;
    case Direction::NegX: return Direction::NegY;
    case Direction::NegY: return Direction::PosX;
  }
  return d;
}
constexpr Direction opposite(Direction d) { return make_direction(axis(d), -sign(d)); }

std::string to_string(Direction d);
Direction direction_from_string(const std::string& s);

/// Point mark: a neighbour rank, a growth direction, or nothing.
class Mark {
 public:
  enum class Kind : std::uint8_t { None, Rank, Direction };

  constexpr Mark() = default;
  static constexpr Mark none() { return Mark(); }
  static Mark rank(int k) {
    if (k < 1) throw ValidationError("rank mark must be >= 1");
    Mark m;
    m.kind_ = Kind::Rank;
    m.value_ = k;
    return m;
  }
  static constexpr Mark direction(Direction d) {
    Mark m;
    m.kind_ = Kind::Direction;
    m.value_ = static_cast<int>(d);
    return m;
  }

  constexpr Kind kind() const { return kind_; }
  constexpr bool is_none() const { return kind_ == Kind::None; }
  constexpr bool is_rank() const { return kind_ == Kind::Rank; }
  constexpr bool is_direction() const { return kind_ == Kind::Direction; }
  int rank() const {
    if (!is_rank()) throw ValidationError("mark is not a rank");
    return value_;
  }
  Direction direction() const {
    if (!is_direction()) throw ValidationError("mark is not a direction");
    return static_cast<Direction>(value_);
  }

  friend constexpr bool operator==(const Mark& a, const Mark& b) {
    return a.kind_ == b.kind_ && a.value_ == b.value_;
  }

 private:
  Kind kind_ = Kind::None;
  int value_ = 0;
};

std::string to_string(const Mark& m);
Mark mark_from_string(const std::string& s);

template <int Dim>
struct MarkedPoint {
  Point<Dim> position;
  Mark mark;
  std::int64_t id = 0;
};

/// Half-open box [c - s/2, c + s/2)^d.
template <int Dim>
struct Box {
  Point<Dim> center = Point<Dim>::Zero();
  double side = 1.0;

  static Box centered(double side) { return Box{Point<Dim>::Zero(), side}; }
  static Box at_site(const Site<Dim>& z, double s) { return Box{s * z.template cast<double>(), s}; }

  Point<Dim> lo() const { return center.array() - side / 2; }
  Point<Dim> hi() const { return center.array() + side / 2; }
  double volume() const { return std::pow(side, Dim); }

  bool contains(const Point<Dim>& p) const {
    const Point<Dim> l = lo(), h = hi();
    return ((p.array() >= l.array()) && (p.array() < h.array())).all();
  }
  bool contains_closed(const Point<Dim>& p) const {
    const Point<Dim> l = lo(), h = hi();
    return ((p.array() >= l.array()) && (p.array() <= h.array())).all();
  }
  bool contains(const Box& other) const {
    return (other.lo().array() >= lo().array()).all() && (other.hi().array() <= hi().array()).all();
  }
  bool intersects(const Box& other) const {
    return (other.lo().array() < hi().array()).all() && (lo().array() < other.hi().array()).all();
  }
};

/// Euclidean distance from p to the closed box (0 inside).
template <int Dim>
double distance_to_box(const Point<Dim>& p, const Box<Dim>& b) {
  const Point<Dim> excess = ((p - b.center).cwiseAbs().array() - b.side / 2).cwiseMax(0.0);
  return excess.norm();
}

/// Euclidean distance from p to the boundary of the box.
template <int Dim>
double distance_to_boundary(const Point<Dim>& p, const Box<Dim>& b) {
  const Point<Dim> rel = (p - b.center).cwiseAbs();
  if ((rel.array() <= b.side / 2).all()) return (b.side / 2 - rel.array()).minCoeff();
  return distance_to_box(p, b);
}

template <int Dim>
double sup_norm(const Point<Dim>& p) {
  return p.cwiseAbs().maxCoeff();
}

/// Lattice site whose box Q_s(sz) contains p.
template <int Dim>
Site<Dim> site_of(const Point<Dim>& p, double s) {
  Site<Dim> z;
  for (int i = 0; i < Dim; ++i) z[i] = static_cast<int>(std::floor(p[i] / s + 0.5));
  return z;
}

/// Finite marked point set with its sampling window. Immutable once built.
template <int Dim>
class MarkedConfiguration {
 public:
  using PointType = MarkedPoint<Dim>;

  MarkedConfiguration() = default;
  MarkedConfiguration(std::vector<PointType> points, Box<Dim> window,
                      double tolerance = kDefaultTolerance)
      : points_(std::move(points)), window_(window), tolerance_(tolerance) {
    validate();
  }

  const std::vector<PointType>& points() const { return points_; }
  const PointType& operator[](std::size_t i) const { return points_[i]; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const Box<Dim>& window() const { return window_; }
  double tolerance() const { return tolerance_; }

  auto begin() const { return points_.begin(); }
  auto end() const { return points_.end(); }

  /// Largest absolute coordinate, at least 1: the scale for relative tolerances.
  double scale() const {
    double m = 1.0;
    for (const auto& p : points_) m = std::max(m, p.position.cwiseAbs().maxCoeff());
    return m;
  }

  /// Map from point id to index.
  std::unordered_map<std::int64_t, std::size_t> id_index() const {
    std::unordered_map<std::int64_t, std::size_t> m;
    m.reserve(points_.size());
    for (std::size_t i = 0; i < points_.size(); ++i) m.emplace(points_[i].id, i);
    return m;
  }

  std::int64_t max_id() const {
    std::int64_t m = -1;
    for (const auto& p : points_) m = std::max(m, p.id);
    return m;
  }

 private:
  void validate() const {
    if (!(window_.side > 0) || !window_.center.allFinite()) throw ValidationError("window side must be positive");
    if (!(tolerance_ > 0)) throw ValidationError("genericity tolerance must be positive");
    std::vector<std::size_t> order(points_.size());
    std::iota(order.begin(), order.end(), 0);
    for (const auto& p : points_) {
      if (!p.position.allFinite()) throw ValidationError("non-finite coordinate");
      if (!window_.contains(p.position)) throw ValidationError("point outside window");
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return points_[a].id < points_[b].id; });
    for (std::size_t i = 1; i < order.size(); ++i)
      if (points_[order[i]].id == points_[order[i - 1]].id) throw ValidationError("duplicate point id");
    auto lex = [&](std::size_t a, std::size_t b) {
      const auto& pa = points_[a].position;
      const auto& pb = points_[b].position;
      return std::lexicographical_compare(pa.data(), pa.data() + Dim, pb.data(), pb.data() + Dim);
    };
    std::sort(order.begin(), order.end(), lex);
    for (std::size_t i = 1; i < order.size(); ++i)
      if (points_[order[i]].position == points_[order[i - 1]].position)
        throw ValidationError("coincident positions");
  }

  std::vector<PointType> points_;
  Box<Dim> window_;
  double tolerance_ = kDefaultTolerance;
};

using Configuration2 = MarkedConfiguration<2>;

/// Positions as a Dim x n matrix.
template <int Dim>
Eigen::Matrix<double, Dim, Eigen::Dynamic> positions(const MarkedConfiguration<Dim>& phi) {
  Eigen::Matrix<double, Dim, Eigen::Dynamic> m(Dim, phi.size());
  for (std::size_t i = 0; i < phi.size(); ++i) m.col(i) = phi[i].position;
  return m;
}

template <int Dim>
MarkedConfiguration<Dim> translate(const MarkedConfiguration<Dim>& phi, const Point<Dim>& eta) {
  std::vector<MarkedPoint<Dim>> pts(phi.points());
  for (auto& p : pts) p.position += eta;
  Box<Dim> w = phi.window();
  w.center += eta;
  return MarkedConfiguration<Dim>(std::move(pts), w, phi.tolerance());
}

/// Points of phi inside `region`, same window.
template <int Dim>
MarkedConfiguration<Dim> restrict_to(const MarkedConfiguration<Dim>& phi, const Box<Dim>& region) {
  std::vector<MarkedPoint<Dim>> pts;
  for (const auto& p : phi)
    if (region.contains(p.position)) pts.push_back(p);
  return MarkedConfiguration<Dim>(std::move(pts), phi.window(), phi.tolerance());
}

/// (phi - center) restricted to Q_side(o), with window Q_side(o).
template <int Dim>
MarkedConfiguration<Dim> local_view(const MarkedConfiguration<Dim>& phi, const Point<Dim>& center, double side) {
  const Box<Dim> region{center, side};
  std::vector<MarkedPoint<Dim>> pts;
  for (const auto& p : phi)
    if (region.contains(p.position)) {
      MarkedPoint<Dim> q = p;
      q.position -= center;
      pts.push_back(q);
    }
  const Box<Dim> w = Box<Dim>::centered(side);
  // Subtraction can round a coordinate onto the upper face; drop such points.
  std::erase_if(pts, [&](const MarkedPoint<Dim>& q) { return !w.contains(q.position); });
  return MarkedConfiguration<Dim>(std::move(pts), w, phi.tolerance());
}

/// Union of two configurations with disjoint ids inside a common window.
template <int Dim>
MarkedConfiguration<Dim> merge(const MarkedConfiguration<Dim>& a, const MarkedConfiguration<Dim>& b,
                               const Box<Dim>& window) {
  std::vector<MarkedPoint<Dim>> pts(a.points());
  pts.insert(pts.end(), b.points().begin(), b.points().end());
  return MarkedConfiguration<Dim>(std::move(pts), window, a.tolerance());
}

/// parts^d half-open boxes tiling `box`, in row-major order over the axes.
template <int Dim>
std::vector<Box<Dim>> subcube_partition(const Box<Dim>& box, int parts) {
  if (parts < 1) throw ValidationError("parts_per_axis must be >= 1");
  const double side = box.side / parts;
  const Point<Dim> lo = box.lo();
  std::size_t count = 1;
  for (int i = 0; i < Dim; ++i) count *= static_cast<std::size_t>(parts);
  std::vector<Box<Dim>> out;
  out.reserve(count);
  Site<Dim> idx = Site<Dim>::Zero();
  for (std::size_t c = 0; c < count; ++c) {
    out.push_back(Box<Dim>{lo.array() + side * (idx.template cast<double>().array() + 0.5), side});
    for (int i = Dim - 1; i >= 0; --i) {
      if (++idx[i] < parts) break;
      idx[i] = 0;
    }
  }
  return out;
}

/// True iff #phi >= K+1 and all pairwise distances differ by more than eps (relative).
template <int Dim>
bool check_generic_knn(const MarkedConfiguration<Dim>& phi, int K, double eps = kDefaultTolerance) {
  const std::size_t n = phi.size();
  if (n == 0 || n < static_cast<std::size_t>(K) + 1) return false;
  std::vector<double> d;
  d.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) d.push_back((phi[i].position - phi[j].position).norm());
  std::sort(d.begin(), d.end());
  for (std::size_t i = 1; i < d.size(); ++i)
    if (d[i] - d[i - 1] <= eps * d[i]) return false;
  return true;
}

/// True iff all marks are directions and no pair is axis-aligned or diagonal within angle eps.
bool check_generic_lily(const Configuration2& phi, double eps = kDefaultTolerance);

}  // namespace dwre
