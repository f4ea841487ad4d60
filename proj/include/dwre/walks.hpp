#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dwre/core.hpp"

namespace dwre {

/// Out-degree-1 graph: next[i] = h_c(i) (or -1 if censored), geo[i] = h_g(i).
template <int Dim>
struct WalkGraph {
  std::vector<int> next;
  std::vector<Point<Dim>> geo;
  std::vector<std::uint8_t> censored;

  std::size_t n() const { return next.size(); }
  bool is_censored(std::size_t i) const { return censored[i] != 0; }

  static WalkGraph with_size(std::size_t n) {
    WalkGraph g;
    g.next.assign(n, -1);
    g.geo.assign(n, Point<Dim>::Constant(std::numeric_limits<double>::quiet_NaN()));
    g.censored.assign(n, 1);
    return g;
  }

  void check() const {
    if (geo.size() != next.size() || censored.size() != next.size()) throw ValidationError("walk graph size mismatch");
    for (std::size_t i = 0; i < next.size(); ++i) {
      if ((next[i] < 0) != (censored[i] != 0)) throw ValidationError("censored nodes must be exactly those without next");
      if (next[i] >= static_cast<int>(next.size())) throw ValidationError("next out of range");
    }
  }
};

struct WalkOutcome {
  int tail = 0;   // hops before entering the cycle
  int cycle = 0;  // cycle length, 0 when censored
  bool censored = false;

  friend bool operator==(const WalkOutcome&, const WalkOutcome&) = default;
};

/// Outcome of the walk started at x, found with a visited array.
template <int Dim>
WalkOutcome trace(const WalkGraph<Dim>& g, int x) {
  if (x < 0 || static_cast<std::size_t>(x) >= g.n()) throw ValidationError("node out of range");
  std::vector<int> step(g.n(), -1);
  int cur = x;
  for (int k = 0;; ++k) {
    if (g.next[static_cast<std::size_t>(cur)] < 0) return WalkOutcome{k, 0, true};
    if (step[static_cast<std::size_t>(cur)] >= 0) {
      const int first = step[static_cast<std::size_t>(cur)];
      return WalkOutcome{first, k - first, false};
    }
    step[static_cast<std::size_t>(cur)] = k;
    cur = g.next[static_cast<std::size_t>(cur)];
  }
}

/// Outcomes for every node in O(n), with the cycle id each walk ends in (-1 if censored).
struct WalkAnalysis {
  std::vector<WalkOutcome> outcome;
  std::vector<int> cycle_id;
  std::vector<int> cycle_length;  // indexed by cycle id
};

template <int Dim>
WalkAnalysis analyze_walks(const WalkGraph<Dim>& g) {
  const std::size_t n = g.n();
  WalkAnalysis a;
  a.outcome.assign(n, WalkOutcome{});
  a.cycle_id.assign(n, -1);
  std::vector<std::uint8_t> state(n, 0);  // 0 new, 1 on path, 2 done
  std::vector<int> path;
  std::vector<int> pos(n, -1);
  for (std::size_t s = 0; s < n; ++s) {
    if (state[s]) continue;
    path.clear();
    int cur = static_cast<int>(s);
    while (cur >= 0 && state[static_cast<std::size_t>(cur)] == 0) {
      state[static_cast<std::size_t>(cur)] = 1;
      pos[static_cast<std::size_t>(cur)] = static_cast<int>(path.size());
      path.push_back(cur);
      cur = g.next[static_cast<std::size_t>(cur)];
    }
    std::size_t resolved = path.size();
    if (cur >= 0 && state[static_cast<std::size_t>(cur)] == 1) {
      const int id = static_cast<int>(a.cycle_length.size());
      const int start = pos[static_cast<std::size_t>(cur)];
      const int len = static_cast<int>(path.size()) - start;
      a.cycle_length.push_back(len);
      for (std::size_t k = static_cast<std::size_t>(start); k < path.size(); ++k) {
        const auto v = static_cast<std::size_t>(path[k]);
        a.outcome[v] = WalkOutcome{0, len, false};
        a.cycle_id[v] = id;
        state[v] = 2;
      }
      resolved = static_cast<std::size_t>(start);
    }
    // Nodes before `resolved` flow into `cur` (a finished node, a cycle entry, or a censored stop).
    WalkOutcome below;
    int below_cycle = -1;
    int target = resolved < path.size() ? path[resolved] : cur;
    if (target < 0) {
      below = WalkOutcome{-1, 0, true};
    } else {
      below = a.outcome[static_cast<std::size_t>(target)];
      below_cycle = a.cycle_id[static_cast<std::size_t>(target)];
    }
    for (std::size_t k = resolved; k-- > 0;) {
      const auto v = static_cast<std::size_t>(path[k]);
      WalkOutcome o = below;
      ++o.tail;
      if (g.next[v] < 0) o = WalkOutcome{0, 0, true};
      a.outcome[v] = o;
      a.cycle_id[v] = o.censored ? -1 : below_cycle;
      state[v] = 2;
      below = o;
    }
  }
  return a;
}

struct BasinStats {
  struct Basin {
    int cycle_length = 0;
    std::size_t size = 0;
  };
  std::vector<Basin> basins;
  std::vector<std::size_t> tail_histogram;  // tail_histogram[t] = uncensored nodes with tail t
  std::size_t counted = 0;
  std::size_t censored = 0;
  std::size_t stuck = 0;  // uncensored walks ending in a finite cycle

  double censored_fraction() const { return counted ? static_cast<double>(censored) / counted : 0.0; }
  double stuck_fraction() const {
    const std::size_t u = counted - censored;
    return u ? static_cast<double>(stuck) / u : 1.0;
  }
};

/// Basin and tail statistics over the nodes selected by `include` (all nodes if empty).
template <int Dim>
BasinStats basin_stats(const WalkGraph<Dim>& g, const std::vector<std::uint8_t>& include = {}) {
  const WalkAnalysis a = analyze_walks(g);
  BasinStats st;
  std::vector<std::size_t> basin_size(a.cycle_length.size(), 0);
  for (std::size_t i = 0; i < g.n(); ++i) {
    if (!include.empty() && !include[i]) continue;
    ++st.counted;
    const WalkOutcome& o = a.outcome[i];
    if (o.censored) {
      ++st.censored;
      continue;
    }
    if (o.cycle > 0) ++st.stuck;
    ++basin_size[static_cast<std::size_t>(a.cycle_id[i])];
    if (st.tail_histogram.size() <= static_cast<std::size_t>(o.tail)) st.tail_histogram.resize(o.tail + 1, 0);
    ++st.tail_histogram[static_cast<std::size_t>(o.tail)];
  }
  for (std::size_t c = 0; c < basin_size.size(); ++c)
    if (basin_size[c] > 0) st.basins.push_back({a.cycle_length[c], basin_size[c]});
  return st;
}

/// Ids of points outside Q_s(sz) whose geometric descendant lies in Q_s(sz).
template <int Dim>
std::set<std::int64_t> boundary_in(const MarkedConfiguration<Dim>& phi, const WalkGraph<Dim>& g, const Site<Dim>& z,
                                   double s) {
  const Box<Dim> box = Box<Dim>::at_site(z, s);
  std::set<std::int64_t> out;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    if (g.is_censored(i) || box.contains(phi[i].position)) continue;
    if (box.contains(g.geo[i])) out.insert(phi[i].id);
  }
  return out;
}

/// True iff no site of B lies in the unbounded 8-connected component of Z^d minus B'.
bool encloses(const std::set<Site2, SiteLess>& B, const std::set<Site2, SiteLess>& Bp);

struct SHReport {
  bool precondition_ok = true;
  std::string precondition_failure;
  std::size_t checked = 0;
  std::size_t censored_skipped = 0;
  std::vector<std::int64_t> violations;

  bool passed() const { return precondition_ok && violations.empty(); }
};

/// Checks the shielding condition on a concrete instance. `good(z)` decides whether site z is good.
template <int Dim>
SHReport check_SH(const MarkedConfiguration<Dim>& phi, const WalkGraph<Dim>& g, double s,
                  const std::function<bool(const Site<Dim>&)>& good, const std::set<Site2, SiteLess>& B,
                  const std::set<Site2, SiteLess>& Bp) {
  static_assert(Dim == 2, "enclosure search is implemented on Z^2");
  SHReport rep;
  if (!encloses(B, Bp)) {
    rep.precondition_ok = false;
    rep.precondition_failure = "B is not enclosed by B'";
    return rep;
  }
  for (const auto& z : Bp)
    if (!good(z)) {
      rep.precondition_ok = false;
      rep.precondition_failure = "site (" + std::to_string(z[0]) + "," + std::to_string(z[1]) + ") of B' is not good";
      return rep;
    }
  std::set<Site2, SiteLess> both = B;
  both.insert(Bp.begin(), Bp.end());
  for (std::size_t i = 0; i < phi.size(); ++i) {
    if (g.is_censored(i)) continue;
    if (!B.count(site_of<Dim>(g.geo[i], s))) continue;
    const int y = g.next[i];
    if (g.is_censored(static_cast<std::size_t>(y))) {
      ++rep.censored_skipped;
      continue;
    }
    ++rep.checked;
    const bool ok = both.count(site_of<Dim>(phi[i].position, s)) &&
                    both.count(site_of<Dim>(g.geo[static_cast<std::size_t>(y)], s));
    if (!ok) rep.violations.push_back(phi[i].id);
  }
  return rep;
}

struct StabilizationResult {
  bool stabilized = false;
  std::size_t first_stable = 0;  // index from which the descendant equals the final one
  std::vector<std::optional<std::int64_t>> descendants;
};

/// Descendant of point `id` along a nested sequence. `descendant(cfg, id)` returns the descendant id or nullopt.
/// Stabilized means the final value was already reached before the last configuration (or the sequence has length 1).
template <class Config, class Fn>
StabilizationResult check_stabilization(const std::vector<Config>& nested, std::int64_t id, Fn&& descendant) {
  if (nested.empty()) throw ValidationError("empty sequence");
  for (std::size_t k = 1; k < nested.size(); ++k) {
    const auto idx = nested[k].id_index();
    for (const auto& p : nested[k - 1])
      if (!idx.count(p.id)) throw PreconditionError("sequence is not nested");
  }
  StabilizationResult r;
  for (const auto& cfg : nested) r.descendants.push_back(descendant(cfg, id));
  std::size_t k = nested.size() - 1;
  while (k > 0 && r.descendants[k - 1] == r.descendants.back()) --k;
  r.first_stable = k;
  r.stabilized = r.descendants.back().has_value() && (nested.size() == 1 || k + 1 < nested.size());
  return r;
}

}  // namespace dwre
