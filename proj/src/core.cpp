#include "dwre/core.hpp"
#include "dwre/ppgen.hpp"

#include <array>

namespace dwre {

std::string to_string(Direction d) {
  switch (d) {
    case Direction::PosX: return "+e1";
    case Direction::NegX: return "-e1";
    case Direction::PosY: return "+e2";
    case Direction::NegY: return "-e2";
  }
  return "?";
}

Direction direction_from_string(const std::string& s) {
  for (Direction d : kDirections)
    if (to_string(d) == s) return d;
  throw ValidationError("unknown direction '" + s + "'");
}

std::string to_string(const Mark& m) {
  switch (m.kind()) {
    case Mark::Kind::None: return "-";
    case Mark::Kind::Rank: return "k" + std::to_string(m.rank());
    case Mark::Kind::Direction: return to_string(m.direction());
  }
  return "?";
}

Mark mark_from_string(const std::string& s) {
  if (s == "-") return Mark::none();
  if (s.size() > 1 && s[0] == 'k') {
    std::size_t used = 0;
    const int k = std::stoi(s.substr(1), &used);
    if (used + 1 != s.size()) throw ValidationError("bad rank mark '" + s + "'");
    return Mark::rank(k);
  }
  return Mark::direction(direction_from_string(s));
}

bool check_generic_lily(const Configuration2& phi, double eps) {
  const std::size_t n = phi.size();
  for (const auto& p : phi)
    if (!p.mark.is_direction()) return false;
  if (n < 2) return true;
  Vec2 lo = phi[0].position, hi = lo;
  for (const auto& p : phi) {
    lo = lo.cwiseMin(p.position);
    hi = hi.cwiseMax(p.position);
  }
  const double diameter = (hi - lo).norm();
  // A pair is suspect for a forbidden direction only if its key difference is within eps*sqrt(2)*diameter.
  const double reach = 2.0 * eps * diameter;
  using Key = double (*)(const Vec2&);
  const std::array<Key, 4> keys = {
      [](const Vec2& p) { return p.y(); },          // e1 alignment
      [](const Vec2& p) { return p.x(); },          // e2 alignment
      [](const Vec2& p) { return p.x() - p.y(); },  // (e1+e2) diagonal
      [](const Vec2& p) { return p.x() + p.y(); },  // (e1-e2) diagonal
  };
  std::vector<std::pair<double, std::size_t>> order(n);
  for (std::size_t k = 0; k < keys.size(); ++k) {
    const Key key = keys[k];
    const double norm = k < 2 ? 1.0 : std::sqrt(2.0);
    for (std::size_t i = 0; i < n; ++i) order[i] = {key(phi[i].position), i};
    std::sort(order.begin(), order.end());
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n && order[j].first - order[i].first <= reach; ++j) {
        const Vec2 d = phi[order[j].second].position - phi[order[i].second].position;
        const double len = d.norm();
        // off / norm is |d| times the sine of the angle to the forbidden direction
        if (std::abs(key(d)) / norm <= eps * len) return false;
      }
    }
  }
  return true;
}

void validate_law(const MarkLaw& law) {
  if (const auto* r = std::get_if<RankLaw>(&law)) {
    if (r->pi.empty()) throw ValidationError("rank law needs K >= 1");
    double sum = 0;
    for (double p : r->pi) {
      if (!(p >= 0)) throw ValidationError("rank probabilities must be nonnegative");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw ValidationError("rank probabilities must sum to 1");
  }
}

Mark draw_mark(const MarkLaw& law, double u) {
  if (const auto* r = std::get_if<RankLaw>(&law)) {
    double acc = 0;
    for (std::size_t k = 0; k < r->pi.size(); ++k) {
      acc += r->pi[k];
      if (u < acc) return Mark::rank(static_cast<int>(k) + 1);
    }
    for (std::size_t k = r->pi.size(); k-- > 0;)
      if (r->pi[k] > 0) return Mark::rank(static_cast<int>(k) + 1);
    return Mark::rank(1);
  }
  return Mark::direction(kDirections[std::min(3, static_cast<int>(u * 4))]);
}

}  // namespace dwre
