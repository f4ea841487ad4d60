#include <cmath>
#include <set>

#include "dwre/grid.hpp"
#include "dwre/lilypond.hpp"

namespace dwre {

bool is_descending_chain(const std::vector<Vec2>& pts, double b) {
  if (pts.empty()) return false;
  double prev = b;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double gap = sup_norm<2>(pts[i] - pts[i + 1]);
    if (i == 0 ? gap > b : !(gap < prev)) return false;
    prev = gap;
  }
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      if (pts[i] == pts[j]) return false;
  return true;
}

namespace {

// Depth-first walk over descending chains. `visit` returns true to stop the search.
class ChainSearch {
 public:
  ChainSearch(const Configuration2& phi, double b, std::size_t cap)
      : phi_(phi), b_(b), cap_(cap), grid_(make_grid(phi, b)), used_(phi.size(), 0) {}

  template <class Visit>
  bool from(int start, Visit&& visit) {
    path_.assign(1, start);
    used_[static_cast<std::size_t>(start)] = 1;
    const bool stop = extend(b_, true, visit);
    used_[static_cast<std::size_t>(start)] = 0;
    return stop;
  }

  const std::vector<int>& path() const { return path_; }

 private:
  template <class Visit>
  bool extend(double limit, bool first, Visit& visit) {
    if (++expanded_ > cap_) throw ResourceCapError("chain enumeration exceeded the cap");
    if (visit(path_)) return true;
    const Vec2 q = phi_[static_cast<std::size_t>(path_.back())].position;
    std::vector<std::pair<int, double>> next;
    grid_.for_each_in_box(q.array() - limit, q.array() + limit, [&](int j) {
      if (used_[static_cast<std::size_t>(j)]) return;
      const double gap = sup_norm<2>(phi_[static_cast<std::size_t>(j)].position - q);
      if (first ? gap <= limit : gap < limit) next.emplace_back(j, gap);
    });
    for (const auto& [j, gap] : next) {
      used_[static_cast<std::size_t>(j)] = 1;
      path_.push_back(j);
      const bool stop = extend(gap, false, visit);
      path_.pop_back();
      used_[static_cast<std::size_t>(j)] = 0;
      if (stop) return true;
    }
    return false;
  }

  const Configuration2& phi_;
  double b_;
  std::size_t cap_;
  GridIndex<2> grid_;
  std::vector<std::uint8_t> used_;
  std::vector<int> path_;
  std::size_t expanded_ = 0;
};

}  // namespace

std::vector<DescendingChain> find_chains(const Configuration2& phi, double b, int n_min, std::size_t cap) {
  if (!(b > 0)) throw ValidationError("chain bound must be positive");
  std::vector<DescendingChain> out;
  if (phi.empty()) return out;
  ChainSearch search(phi, b, cap);
  std::set<std::vector<std::int64_t>> seen;
  for (std::size_t s = 0; s < phi.size(); ++s) {
    search.from(static_cast<int>(s), [&](const std::vector<int>& path) {
      if (static_cast<int>(path.size()) < n_min) return false;
      std::vector<std::int64_t> ids;
      for (int k : path) ids.push_back(phi[static_cast<std::size_t>(k)].id);
      std::vector<std::int64_t> key = ids;
      std::sort(key.begin(), key.end());
      if (seen.insert(key).second) out.push_back(DescendingChain{ids, b});
      return false;
    });
  }
  return out;
}

bool event_A6(const Configuration2& phi, double s, double b, int n) {
  if (n < 0) throw ValidationError("chain length must be >= 0");
  if (!(b > 0)) throw ValidationError("chain bound must be positive");
  const Box<2> start = Box<2>::centered(s);
  if (phi.empty()) return false;
  ChainSearch search(phi, b, std::numeric_limits<std::size_t>::max());
  for (std::size_t i = 0; i < phi.size(); ++i) {
    if (!start.contains(phi[i].position)) continue;
    const bool found = search.from(static_cast<int>(i), [&](const std::vector<int>& path) {
      return static_cast<int>(path.size()) >= n + 1;
    });
    if (found) return true;
  }
  return false;
}

double chain_bound(double s, double b, int n, double lambda) {
  if (n < 0) throw ValidationError("chain length must be >= 0");
  if (!(s > 0) || !(b > 0) || !(lambda > 0)) throw ValidationError("chain bound parameters must be positive");
  const double log_bound = 2 * std::log(s) + n * std::log(4 * b * b) + (n + 1) * std::log(lambda) - std::lgamma(n + 1.0);
  return std::exp(log_bound);
}

double intcomp(double b, int k) {
  if (b < 0 || k < 0) throw ValidationError("intcomp needs b >= 0 and k >= 0");
  return 4 * std::pow(b, 2 * k + 2) / (k + 1);
}

double intcomp_quadrature(double b, int k, int grid_n) {
  if (b < 0 || k < 0 || grid_n < 1) throw ValidationError("bad quadrature parameters");
  const double h = 2 * b / grid_n;
  // max(|a|,|b|)^{2k} = max(|a|^{2k}, |b|^{2k}), so tabulate per-coordinate powers once.
  std::vector<double> p(static_cast<std::size_t>(grid_n));
  for (int i = 0; i < grid_n; ++i) p[static_cast<std::size_t>(i)] = std::pow(std::abs(-b + (i + 0.5) * h), 2 * k);
  double total = 0;
  for (double pi : p) {
    double row = 0;
    for (double pj : p) row += std::max(pi, pj);
    total += row;
  }
  return total * h * h;
}

DescendingChain build_alternating_chain(const Configuration2& phi, const Configuration2& phi_prime,
                                        std::int64_t x1_id) {
  const auto idx = phi.id_index();
  const auto idx_p = phi_prime.id_index();
  if (!idx.count(x1_id) || !idx_p.count(x1_id)) throw PreconditionError("x1 must lie in both configurations");
  const LilypondSolution sol = solve(phi);
  const LilypondSolution sol_p = solve(phi_prime);
  const double f1 = sol.f[idx.at(x1_id)];
  if (!(f1 < sol_p.f[idx_p.at(x1_id)])) throw PreconditionError("need f_phi(x1) < f_phi'(x1)");

  DescendingChain chain{{x1_id}, f1};
  std::set<std::int64_t> seen{x1_id};
  for (std::size_t i = 1;; ++i) {
    const std::int64_t cur = chain.points.back();
    if (!idx.count(cur) || !idx_p.count(cur)) break;  // left the intersection
    const bool odd = i % 2 == 1;
    const Configuration2& cfg = odd ? phi : phi_prime;
    const LilypondSolution& s = odd ? sol : sol_p;
    const std::size_t k = (odd ? idx : idx_p).at(cur);
    if (!s.finite(k)) break;  // no descendant inside the sample
    const std::int64_t nxt = cfg[static_cast<std::size_t>(s.stopper[k])].id;
    if (!seen.insert(nxt).second) throw Error("alternating sequence revisited a point");
    chain.points.push_back(nxt);
  }
  return chain;
}

}  // namespace dwre
