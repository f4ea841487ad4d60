#include <cmath>

#include "dwre/grid.hpp"
#include "dwre/lilypond.hpp"

namespace dwre {

namespace {

int quarter_turns(Direction d) {
  switch (d) {
    case Direction::PosX: return 0;
    case Direction::PosY: return 1;
    case Direction::NegX: return 2;
    case Direction::NegY: return 3;
  }
  return 0;
}

Vec2 rotate_cw(const Vec2& p, int times) {
  Vec2 q = p;
  for (int k = 0; k < times; ++k) q = Vec2(q.y(), -q.x());
  return q;
}

Direction rotate_cw(Direction d, int times) {
  for (int k = 0; k < times; ++k) d = rotate_ccw(rotate_ccw(rotate_ccw(d)));
  return d;
}

Direction reflect_y(Direction d) { return axis(d) == 1 ? opposite(d) : d; }

}  // namespace

ShieldGeometry shield_geometry(double s, double alpha) {
  if (!(alpha > 0 && alpha < 1)) throw ValidationError("alpha must lie in (0, 1)");
  if (!(s >= 1)) throw ValidationError("s must be >= 1");
  ShieldGeometry g;
  g.strips = static_cast<int>(std::floor(std::pow(s, 1 - alpha / 2)));
  g.delta = s / g.strips;
  g.grid_max = static_cast<int>(std::floor(std::pow(s, alpha) / (5 * g.delta)));
  return g;
}

Vec2 Frame::apply(const Vec2& p) const {
  Vec2 q = rotate_cw(p, quarter_turns(entry));
  if (reflect) q.y() = -q.y();
  return q;
}

Vec2 Frame::unapply(const Vec2& p) const {
  Vec2 q = p;
  if (reflect) q.y() = -q.y();
  return rotate_cw(q, (4 - quarter_turns(entry)) % 4);
}

Direction Frame::apply(Direction d) const {
  d = rotate_cw(d, quarter_turns(entry));
  return reflect ? reflect_y(d) : d;
}

Direction Frame::unapply(Direction d) const {
  if (reflect) d = reflect_y(d);
  return rotate_cw(d, (4 - quarter_turns(entry)) % 4);
}

std::array<Frame, 8> shield_frames() {
  std::array<Frame, 8> out;
  for (int k = 0; k < 4; ++k) {
    out[static_cast<std::size_t>(2 * k)] = Frame{kDirections[k], false};
    out[static_cast<std::size_t>(2 * k + 1)] = Frame{kDirections[k], true};
  }
  return out;
}

bool shield_block(const std::vector<Vec2>& pts, const std::vector<Direction>& dirs, const Vec2& xi, double delta) {
  bool blocker = false;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Vec2 r = pts[i] - xi;
    if (std::abs(r.x()) > 2.5 * delta || std::abs(r.y()) > delta) continue;  // outside R1
    const bool in_r2 = std::abs(r.x()) <= delta / 2 && r.y() >= -delta && r.y() <= 0;
    if (!in_r2 || dirs[i] != Direction::PosY) return false;
    blocker = true;
  }
  return blocker;
}

namespace {

struct FrameView {
  std::vector<Vec2> pts;
  std::vector<Direction> dirs;
  GridIndex<2> grid;
};

FrameView frame_view(const Configuration2& phi, double s, const Frame& f, double cell) {
  FrameView v;
  const Box<2> box = Box<2>::centered(s);
  for (const auto& p : phi) {
    if (!box.contains(p.position) || !p.mark.is_direction()) continue;
    v.pts.push_back(f.apply(p.position));
    v.dirs.push_back(f.apply(p.mark.direction()));
  }
  v.grid = GridIndex<2>(v.pts, cell);
  return v;
}

bool block_at(const FrameView& v, const Vec2& xi, double delta) {
  std::vector<Vec2> pts;
  std::vector<Direction> dirs;
  v.grid.for_each_in_box(Vec2(xi.x() - 2.5 * delta, xi.y() - delta), Vec2(xi.x() + 2.5 * delta, xi.y() + delta),
                         [&](int i) {
                           pts.push_back(v.pts[static_cast<std::size_t>(i)]);
                           dirs.push_back(v.dirs[static_cast<std::size_t>(i)]);
                         });
  return shield_block(pts, dirs, xi, delta);
}

// Strip indices j whose entry band [sigma, sigma + delta] meets the upper half of the entry side.
std::vector<int> frame_strips(double s, const ShieldGeometry& g) {
  std::vector<int> out;
  for (int j = 1; j <= g.strips - 1; ++j) {
    const double sigma = -s / 2 + j * g.delta;
    if (sigma + g.delta >= 0) out.push_back(j);
  }
  return out;
}

std::vector<int> unshielded(const FrameView& v, double s, const ShieldGeometry& g, bool first_only) {
  std::vector<int> bad;
  for (int j : frame_strips(s, g)) {
    const double sigma = -s / 2 + j * g.delta;
    bool ok = false;
    for (int i = 0; i <= g.grid_max && !ok; ++i) ok = block_at(v, Vec2(-s / 2 + 5 * i * g.delta, sigma), g.delta);
    if (!ok) {
      bad.push_back(j);
      if (first_only) break;
    }
  }
  return bad;
}

}  // namespace

std::vector<int> unshielded_strips(const Configuration2& phi, double s, double alpha, const Frame& f) {
  const ShieldGeometry g = shield_geometry(s, alpha);
  return unshielded(frame_view(phi, s, f, g.delta), s, g, false);
}

bool event_A5(const Configuration2& phi, double s, double alpha) {
  const ShieldGeometry g = shield_geometry(s, alpha);
  if (g.strips < 2) return false;  // no entry strip to shield
  for (const Frame& f : shield_frames())
    if (!unshielded(frame_view(phi, s, f, g.delta), s, g, true).empty()) return false;
  return true;
}

std::vector<Site2> a7_ring_sites() {
  std::vector<Site2> out;
  for (int x = -3; x <= 3; ++x)
    for (int y = -3; y <= 3; ++y)
      if (std::max(std::abs(x), std::abs(y)) == 3) out.push_back(Site2(x, y));
  return out;
}

bool event_A7(const Configuration2& phi, double s) {
  if (!(s >= 3)) throw ValidationError("A7 needs s >= 3 so that the ring boxes have side >= 1");
  if (!event_A5(phi, s, 1.0 / 8)) return false;
  for (const Site2& z : a7_ring_sites()) {
    const Vec2 c = (s / 3) * z.cast<double>();
    if (!event_A5(local_view(phi, c, s / 3), s / 3, 1.0 / 8)) return false;
  }
  return true;
}

bool event_A8(const Configuration2& phi, double s) {
  if (!(s >= 1)) throw ValidationError("s must be >= 1");
  const Box<2> outer = Box<2>::centered(3 * s);
  for (const auto& p : phi)
    if (!outer.contains(p.position)) return false;
  const double sep = std::pow(s, -4.0);
  for (int k = 0; k < 2; ++k) {
    std::vector<double> vals{-s / 2, s / 2};
    vals.reserve(phi.size() + 2);
    for (const auto& p : phi) vals.push_back(p.position[k]);
    std::sort(vals.begin(), vals.end());
    for (std::size_t i = 1; i < vals.size(); ++i)
      if (vals[i] - vals[i - 1] < sep) return false;
  }
  return true;
}

bool event_A_lily(const Configuration2& phi, double s) {
  // Cheapest test first.
  return event_A8(phi, s) && event_A5(phi, s, 0.5) && event_A7(phi, s);
}

}  // namespace dwre
