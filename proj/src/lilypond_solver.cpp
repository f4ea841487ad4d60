#include "dwre/lilypond.hpp"

#include <Eigen/Dense>
#include <queue>

#include "dwre/grid.hpp"

namespace dwre {

namespace {

Direction dir_of(const Configuration2& phi, std::size_t i) { return phi[i].mark.direction(); }

Vec2 clipped_tip(const Configuration2& phi, std::size_t i) {
  const Direction d = dir_of(phi, i);
  Vec2 tip = phi[i].position;
  const int a = axis(d);
  tip[a] = sign(d) > 0 ? phi.window().hi()[a] : phi.window().lo()[a];
  return tip;
}

void require_nonempty(const Configuration2& phi) {
  if (phi.empty()) throw ValidationError("lilypond model needs a non-empty configuration");
  for (const auto& p : phi)
    if (!p.mark.is_direction()) throw ValidationError("lilypond points need direction marks");
}

struct Candidate {
  double t;
  double u;
  int x;
  int y;
  bool operator>(const Candidate& o) const {
    if (t != o.t) return t > o.t;
    if (x != o.x) return x > o.x;
    return y > o.y;
  }
};

// Crossing parameters of x's ray with y's ray: x reaches the crossing at t, y at u.
// Only meaningful for perpendicular pairs.
void crossing(const Vec2& xi, Direction v, const Vec2& eta, Direction w, double& t, double& u) {
  const int a = axis(v), b = axis(w);
  t = sign(v) * (eta[a] - xi[a]);
  u = sign(w) * (xi[b] - eta[b]);
}

}  // namespace

Segment segment(const Configuration2& phi, const LilypondSolution& sol, std::size_t i) {
  return Segment{phi[i].position, dir_of(phi, i), sol.f[i]};
}

LilypondSolution solve(const Configuration2& phi) {
  require_nonempty(phi);
  if (!check_generic_lily(phi, phi.tolerance())) throw GenericityError("configuration is not in general position");
  const std::size_t n = phi.size();
  const double tol = phi.tolerance() * phi.scale();

  std::vector<Vec2> pts;
  pts.reserve(n);
  Vec2 lo = phi[0].position, hi = lo;
  for (const auto& p : phi) {
    pts.push_back(p.position);
    lo = lo.cwiseMin(p.position);
    hi = hi.cwiseMax(p.position);
  }
  const double area = std::max((hi - lo).prod(), 1e-12);
  const GridIndex<2> grid(std::move(pts), std::sqrt(2.0 * area / static_cast<double>(n)));

  LilypondSolution sol;
  sol.f.assign(n, kInf);
  sol.stopper.assign(n, -1);
  sol.tip.resize(n);
  std::vector<std::uint8_t> assigned(n, 0);
  std::vector<int> next_col(n), pending(n, 0);
  std::priority_queue<Candidate, std::vector<Candidate>, std::greater<>> heap;

  for (std::size_t i = 0; i < n; ++i) next_col[i] = grid.cell_of(phi[i].position)[axis(dir_of(phi, i))];

  // Pushes the candidates of the next non-empty column ahead of x; marks x unstoppable past the grid.
  auto load = [&](int x) {
    const auto xi = static_cast<std::size_t>(x);
    const Direction v = dir_of(phi, xi);
    const int a = axis(v), b = 1 - a, sg = sign(v);
    const Vec2& p = phi[xi].position;
    while (next_col[xi] >= 0 && next_col[xi] < grid.count(a)) {
      const int j = next_col[xi];
      next_col[xi] += sg;
      const double far = sg > 0 ? grid.cell_lo(a, j + 1) - p[a] : p[a] - grid.cell_lo(a, j);
      Site2 c0, c1;
      c0[a] = c1[a] = j;
      c0[b] = grid.coord(b, p[b] - far);
      c1[b] = grid.coord(b, p[b] + far);
      grid.for_each_in_cells(c0, c1, [&](int y) {
        const Direction w = dir_of(phi, static_cast<std::size_t>(y));
        if (axis(w) == a) return;
        double t, u;
        crossing(p, v, phi[static_cast<std::size_t>(y)].position, w, t, u);
        if (!(t > 0) || u < 0 || !(u < t)) return;
        if (t - u <= tol) throw GenericityError("simultaneous arrival at a crossing");
        heap.push(Candidate{t, u, x, y});
        ++pending[xi];
      });
      if (pending[xi] > 0) return;
    }
    assigned[xi] = 1;  // the ray leaves the sampled region unstopped
  };

  for (std::size_t i = 0; i < n; ++i) load(static_cast<int>(i));

  while (!heap.empty()) {
    const Candidate c = heap.top();
    heap.pop();
    const auto xi = static_cast<std::size_t>(c.x);
    const auto yi = static_cast<std::size_t>(c.y);
    --pending[xi];
    if (assigned[xi]) continue;
    bool valid = true;
    if (assigned[yi]) {
      if (std::abs(sol.f[yi] - c.u) <= tol) throw GenericityError("arrival tie with a segment tip");
      valid = sol.f[yi] > c.u;
    }
    if (valid) {
      sol.f[xi] = c.t;
      sol.stopper[xi] = c.y;
      assigned[xi] = 1;
    } else if (pending[xi] == 0) {
      load(c.x);
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (sol.stopper[i] < 0) {
      sol.tip[i] = clipped_tip(phi, i);
      continue;
    }
    const int a = axis(dir_of(phi, i));
    sol.tip[i] = phi[i].position;
    sol.tip[i][a] = phi[static_cast<std::size_t>(sol.stopper[i])].position[a];
  }
  return sol;
}

LilypondSolution oracle_solve(const Configuration2& phi, int pass_cap) {
  require_nonempty(phi);
  const std::size_t n = phi.size();
  if (pass_cap <= 0) pass_cap = 2 * static_cast<int>(n) + 10;

  struct Cand {
    double t, u;
    int y;
  };
  std::vector<std::vector<Cand>> cands(n);
  for (std::size_t x = 0; x < n; ++x) {
    const Vec2 v = unit(dir_of(phi, x));
    for (std::size_t y = 0; y < n; ++y) {
      if (y == x) continue;
      const Vec2 w = unit(dir_of(phi, y));
      Eigen::Matrix2d m;
      m << v, -w;
      if (std::abs(m.determinant()) < 0.5) continue;  // parallel
      const Vec2 tu = m.partialPivLu().solve(phi[y].position - phi[x].position);
      if (tu[0] > 0 && tu[1] >= 0 && tu[1] < tu[0]) cands[x].push_back({tu[0], tu[1], static_cast<int>(y)});
    }
    std::sort(cands[x].begin(), cands[x].end(), [](const Cand& a, const Cand& b) { return a.t < b.t; });
  }

  LilypondSolution sol;
  sol.f.assign(n, kInf);
  sol.stopper.assign(n, -1);
  for (int pass = 0;; ++pass) {
    if (pass >= pass_cap) throw GenericityError("fixed-point iteration did not converge");
    bool changed = false;
    for (std::size_t x = 0; x < n; ++x) {
      double f = kInf;
      int stop = -1;
      for (const Cand& c : cands[x])
        if (c.u < sol.f[static_cast<std::size_t>(c.y)]) {
          f = c.t;
          stop = c.y;
          break;
        }
      if (f != sol.f[x] || stop != sol.stopper[x]) {
        sol.f[x] = f;
        sol.stopper[x] = stop;
        changed = true;
      }
    }
    if (!changed) break;
  }
  sol.tip.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    sol.tip[i] = sol.finite(i) ? Vec2(phi[i].position + sol.f[i] * unit(dir_of(phi, i))) : clipped_tip(phi, i);
  return sol;
}

namespace {

// Do the half-open segments [base, base + f v) of i and j intersect (up to tol)?
bool segments_hit(const Configuration2& phi, const LilypondSolution& sol, std::size_t i, std::size_t j, double tol) {
  const Direction v = dir_of(phi, i), w = dir_of(phi, j);
  const Vec2& xi = phi[i].position;
  const Vec2& eta = phi[j].position;
  if (axis(v) != axis(w)) {
    double t, u;
    crossing(xi, v, eta, w, t, u);
    return t >= -tol && u >= -tol && t < sol.f[i] - tol && u < sol.f[j] - tol;
  }
  const int a = axis(v), b = 1 - a;
  if (std::abs(xi[b] - eta[b]) > tol) return false;
  // Collinear: compare the covered intervals along axis a.
  auto interval = [&](std::size_t k) {
    const Direction d = dir_of(phi, k);
    const double s0 = phi[k].position[a];
    const double len = sol.f[k];
    return sign(d) > 0 ? std::pair{s0, s0 + len} : std::pair{s0 - len, s0};
  };
  const auto [l1, h1] = interval(i);
  const auto [l2, h2] = interval(j);
  return std::max(l1, l2) < std::min(h1, h2) - tol;
}

}  // namespace

bool verify_solution(const Configuration2& phi, const LilypondSolution& sol) {
  const std::size_t n = phi.size();
  if (sol.f.size() != n || sol.stopper.size() != n) return false;
  for (const auto& p : phi)
    if (!p.mark.is_direction()) return false;
  const double tol = kDefaultTolerance * phi.scale();
  for (std::size_t i = 0; i < n; ++i) {
    if (!(sol.f[i] >= 0)) return false;
    if (!sol.finite(i)) {
      if (sol.stopper[i] != -1) return false;
      continue;
    }
    const int y = sol.stopper[i];
    if (y < 0 || static_cast<std::size_t>(y) >= n || static_cast<std::size_t>(y) == i) return false;
    const auto yi = static_cast<std::size_t>(y);
    const Direction v = dir_of(phi, i), w = dir_of(phi, yi);
    if (axis(v) == axis(w)) return false;
    const Vec2 tip = phi[i].position + sol.f[i] * unit(v);
    const Vec2& eta = phi[yi].position;
    const int b = axis(w), a = 1 - b;
    if (std::abs(tip[a] - eta[a]) > tol) return false;
    const double u = sign(w) * (tip[b] - eta[b]);
    if (u < -tol || !(u < sol.f[yi] - tol)) return false;
    if (!(u < sol.f[i])) return false;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (segments_hit(phi, sol, i, j, tol) || segments_hit(phi, sol, j, i, tol)) return false;
  return true;
}

std::size_t count_hardcore_violations(const Configuration2& phi, const LilypondSolution& sol) {
  const double tol = kDefaultTolerance * phi.scale();
  std::size_t count = 0;
  for (std::size_t i = 0; i < phi.size(); ++i)
    for (std::size_t j = i + 1; j < phi.size(); ++j)
      if (segments_hit(phi, sol, i, j, tol) || segments_hit(phi, sol, j, i, tol)) ++count;
  return count;
}

WalkGraph<2> build_lily_graph(const Configuration2& phi, const LilypondSolution& sol) {
  if (sol.size() != phi.size()) throw ValidationError("solution does not match configuration");
  auto g = WalkGraph<2>::with_size(phi.size());
  for (std::size_t i = 0; i < phi.size(); ++i) {
    g.geo[i] = sol.tip[i];
    if (!sol.finite(i)) continue;
    g.next[i] = sol.stopper[i];
    g.censored[i] = 0;
  }
  return g;
}

}  // namespace dwre
