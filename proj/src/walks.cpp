#include "dwre/walks.hpp"

#include <deque>

namespace dwre {

bool encloses(const std::set<Site2, SiteLess>& B, const std::set<Site2, SiteLess>& Bp) {
  if (B.empty()) return true;
  Site2 lo = *B.begin(), hi = lo;
  for (const auto* set : {&B, &Bp})
    for (const Site2& z : *set) {
      lo = lo.cwiseMin(z);
      hi = hi.cwiseMax(z);
    }
  lo.array() -= 1;
  hi.array() += 1;
  // Flood the complement of B' from the frame around the bounding box; the frame lies in the infinite component.
  const int w = hi.x() - lo.x() + 1, h = hi.y() - lo.y() + 1;
  std::vector<std::uint8_t> seen(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), 0);
  auto slot = [&](const Site2& z) { return static_cast<std::size_t>(z.y() - lo.y()) * w + static_cast<std::size_t>(z.x() - lo.x()); };
  std::deque<Site2> queue;
  for (int x = lo.x(); x <= hi.x(); ++x)
    for (int y = lo.y(); y <= hi.y(); ++y)
      if (x == lo.x() || x == hi.x() || y == lo.y() || y == hi.y()) {
        const Site2 z(x, y);
        seen[slot(z)] = 1;
        queue.push_back(z);
      }
  while (!queue.empty()) {
    const Site2 z = queue.front();
    queue.pop_front();
    if (B.count(z)) return false;
    for (int dx = -1; dx <= 1; ++dx)
      for (int dy = -1; dy <= 1; ++dy) {
        const Site2 n(z.x() + dx, z.y() + dy);
        if (n.x() < lo.x() || n.x() > hi.x() || n.y() < lo.y() || n.y() > hi.y()) continue;
        if (seen[slot(n)] || Bp.count(n)) continue;
        seen[slot(n)] = 1;
        queue.push_back(n);
      }
  }
  return true;
}

}  // namespace dwre
