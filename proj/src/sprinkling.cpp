#include "dwre/sprinkling.hpp"

#include <deque>
#include <random>
#include <tuple>

#include "dwre/rng.hpp"

namespace dwre {

void check_field(const SiteField& field) {
  if (field.width() <= 0 || field.height() <= 0) throw ValidationError("empty site rectangle");
  if (field.count() != static_cast<std::size_t>(field.width()) * static_cast<std::size_t>(field.height()))
    throw ValidationError("site field size mismatch");
  for (std::uint8_t v : field.data)
    if (v > 2) throw ValidationError("site values must lie in {0, 1, 2}");
}

Occupancy occupancy(const Configuration2& x2, double s, const Site2& lo, const Site2& hi) {
  Occupancy occ = Occupancy::filled(lo, hi, 0);
  for (const auto& p : x2) {
    const Site2 z = site_of<2>(p.position, s);
    if (occ.in(z)) occ.at(z) = 1;
  }
  return occ;
}

SiteField classify_sites(const Configuration2& x1, const Configuration2& x2, double s, const Site2& lo,
                         const Site2& hi, const SiteChecker& good, const SiteChecker& perfect) {
  if (!(s > 0)) throw ValidationError("site scale must be positive");
  const Occupancy occ = occupancy(x2, s, lo, hi);
  SiteField field = SiteField::filled(lo, hi, 2);
  for (std::size_t k = 0; k < field.count(); ++k) {
    const Site2 z = field.site(k);
    if (!occ.data[k] && good(x1, x2, z, s))
      field.data[k] = 0;
    else if (perfect(x1, x2, z, s))
      field.data[k] = 1;
  }
  return field;
}

std::vector<Site2> neighborhood(const Site2& z) {
  std::vector<Site2> out;
  out.reserve(25);
  for (int dy = -2; dy <= 2; ++dy)
    for (int dx = -2; dx <= 2; ++dx) out.push_back(Site2(z.x() + dx, z.y() + dy));
  return out;
}

namespace {

using Key = std::tuple<long long, int, int>;

Key order_key(const Site2& z) {
  const long long r2 = static_cast<long long>(z.x()) * z.x() + static_cast<long long>(z.y()) * z.y();
  return {r2, z.x(), z.y()};
}

SiteSet initial_bad(const SiteField& field) {
  SiteSet bad;
  for (std::size_t k = 0; k < field.count(); ++k)
    if (field.data[k] == 2) bad.insert(field.site(k));
  return bad;
}

}  // namespace

RevealedSet reveal(const SiteField& field, const Occupancy& occupied) {
  check_field(field);
  if (occupied.lo != field.lo || occupied.hi != field.hi) throw ValidationError("occupancy rectangle mismatch");
  RevealedSet out;
  out.bad = initial_bad(field);
  out.revealed = out.bad;
  std::set<Key> pending;
  for (const Site2& z : out.bad) pending.insert(order_key(z));

  auto covered = [&](const Site2& z) {
    for (const Site2& w : neighborhood(z))
      if (field.in(w) && !out.revealed.count(w)) return false;
    return true;
  };
  // R only grows, so a covered site never needs another look.
  while (!pending.empty()) {
    const auto [r2, x, y] = *pending.begin();
    pending.erase(pending.begin());
    const Site2 z(x, y);
    if (covered(z)) continue;
    out.trace.push_back(z);
    for (const Site2& w : neighborhood(z)) {
      if (!field.in(w)) continue;
      out.revealed.insert(w);
      if (occupied.at(w) && out.bad.insert(w).second) pending.insert(order_key(w));
    }
  }
  return out;
}

SiteSet replay(const SiteField& field, const std::vector<Site2>& trace) {
  check_field(field);
  SiteSet r = initial_bad(field);
  for (const Site2& z : trace)
    for (const Site2& w : neighborhood(z))
      if (field.in(w)) r.insert(w);
  return r;
}

Configuration2 assemble_x3(const Configuration2& x1, const Configuration2& x2, const SiteSet& revealed, double s) {
  std::vector<MarkedPoint<2>> pts(x1.points());
  for (const auto& p : x2)
    if (revealed.count(site_of<2>(p.position, s))) pts.push_back(p);
  return Configuration2(std::move(pts), x1.window(), x1.tolerance());
}

std::map<Site2, std::vector<MarkedPoint<2>>, SiteLess> unrevealed_by_site(const Configuration2& x2,
                                                                          const SiteSet& revealed, double s) {
  std::map<Site2, std::vector<MarkedPoint<2>>, SiteLess> out;
  for (const auto& p : x2) {
    const Site2 z = site_of<2>(p.position, s);
    if (!revealed.count(z)) out[z].push_back(p);
  }
  return out;
}

namespace {

std::int64_t next_id(const Configuration2& cfg, const WalkGraph<2>& g, std::size_t i) {
  return g.is_censored(i) ? -1 : cfg[static_cast<std::size_t>(g.next[i])].id;
}

}  // namespace

IncrementalReport incremental_check(const Configuration2& x3,
                                    const std::map<Site2, std::vector<MarkedPoint<2>>, SiteLess>& x2_by_site,
                                    const std::vector<Site2>& order, const GraphBuilder& builder, double s,
                                    const SiteSet& revealed, const Box<2>& analysis) {
  SiteSet seen;
  for (const Site2& z : order) {
    if (revealed.count(z)) throw PreconditionError("enumeration contains a revealed site");
    if (!seen.insert(z).second) throw PreconditionError("enumeration repeats a site");
  }
  IncrementalReport rep;
  const std::size_t n3 = x3.size();
  const WalkGraph<2> base = builder(x3);
  std::vector<std::int64_t> d0(n3);
  std::vector<std::uint8_t> inside(n3), kept(n3, 1);
  for (std::size_t i = 0; i < n3; ++i) {
    d0[i] = next_id(x3, base, i);
    inside[i] = analysis.contains(x3[i].position);
    rep.checked += inside[i];
  }

  std::vector<MarkedPoint<2>> pts(x3.points());
  std::map<std::int64_t, Site2> added_site;
  std::vector<std::pair<Site2, std::set<std::int64_t>>> entrants;
  std::set<std::int64_t> bad_i, bad_ii;
  Configuration2 cfg = x3;
  WalkGraph<2> g = base;

  for (const Site2& z : order) {
    const auto it = x2_by_site.find(z);
    if (it == x2_by_site.end() || it->second.empty()) continue;
    ++rep.steps;
    for (const auto& p : it->second) {
      if (site_of<2>(p.position, s) != z) throw PreconditionError("sprinkled point filed under the wrong site");
      pts.push_back(p);
      added_site.emplace(p.id, z);
    }
    cfg = Configuration2(pts, x3.window(), x3.tolerance());
    g = builder(cfg);
    entrants.emplace_back(z, boundary_in(x3, base, z, s));

    for (std::size_t i = 0; i < n3; ++i) {
      if (!inside[i]) continue;
      const std::int64_t di = next_id(cfg, g, i);
      if (di != d0[i]) kept[i] = 0;
      if (kept[i]) continue;
      const auto a = added_site.find(di);
      const bool lands = a != added_site.end() && Box<2>::at_site(a->second, s).contains(g.geo[i]);
      if (!lands) bad_i.insert(x3[i].id);
    }
    const auto idx = x3.id_index();
    for (const auto& [zz, ids] : entrants)
      for (std::int64_t id : ids) {
        const std::size_t i = idx.at(id);
        if (inside[i] && kept[i]) bad_ii.insert(id);
      }
  }
  for (std::size_t i = 0; i < n3; ++i)
    if (inside[i] && !kept[i]) ++rep.switched;
  rep.violations_i.assign(bad_i.begin(), bad_i.end());
  rep.violations_ii.assign(bad_ii.begin(), bad_ii.end());
  for (std::size_t i = 0; i < cfg.size(); ++i) rep.final_next.emplace(cfg[i].id, next_id(cfg, g, i));
  return rep;
}

std::vector<Site2> random_order(std::vector<Site2> sites, std::uint64_t seed) {
  CounterEngine engine(seed, 0x0dde7);
  std::shuffle(sites.begin(), sites.end(), engine);
  return sites;
}

ClusterStats cluster_stats(const SiteSet& revealed, const Site2& lo, const Site2& hi) {
  SiteArray<std::uint8_t> mark = SiteArray<std::uint8_t>::filled(lo, hi, 0);
  for (const Site2& z : revealed)
    if (mark.in(z)) mark.at(z) = 1;
  ClusterStats st;
  st.window_sites = mark.count();
  std::size_t total = 0;
  std::deque<Site2> queue;
  for (std::size_t k = 0; k < mark.count(); ++k) {
    if (mark.data[k] != 1) continue;
    std::size_t size = 0;
    mark.data[k] = 2;
    queue.push_back(mark.site(k));
    while (!queue.empty()) {
      const Site2 z = queue.front();
      queue.pop_front();
      ++size;
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          const Site2 w(z.x() + dx, z.y() + dy);
          if (!mark.in(w) || mark.at(w) != 1) continue;
          mark.at(w) = 2;
          queue.push_back(w);
        }
    }
    st.sizes.push_back(size);
    total += size;
  }
  std::sort(st.sizes.rbegin(), st.sizes.rend());
  st.density = static_cast<double>(total) / static_cast<double>(st.window_sites);
  st.largest_fraction = st.sizes.empty() ? 0.0 : static_cast<double>(st.sizes[0]) / static_cast<double>(st.window_sites);
  return st;
}

GraphBuilder lily_builder() {
  return [](const Configuration2& cfg) { return build_lily_graph(cfg, solve(cfg)); };
}

GraphBuilder knn_builder(const KnnModel& model) {
  return [model](const Configuration2& cfg) { return build_knn_graph(cfg, model, KnnCensor::Window); };
}

CheckerPair lily_checkers(DevicePrecondition pre) {
  auto good = [pre](const Configuration2& x1, const Configuration2&, const Site2& z, double s) {
    const Configuration2 v = local_view(x1, Vec2(s * z.cast<double>()), 3 * s);
    switch (pre) {
      case DevicePrecondition::Full: return event_A_lily(v, s);
      case DevicePrecondition::Separation: return event_A8(v, s);
      case DevicePrecondition::None: return true;
    }
    return false;
  };
  auto perfect = [good](const Configuration2& x1, const Configuration2& x2, const Site2& z, double s) {
    const Vec2 c = s * z.cast<double>();
    const Configuration2 psi = local_view(x2, c, s);
    if (psi.empty() || psi.size() % 4 != 0) return false;  // a device is a nonempty union of 4-cycles
    if (!good(x1, x2, z, s)) return false;
    try {
      return matches_device(local_view(x1, c, 3 * s), psi, s);
    } catch (const GenericityError&) {
      return false;
    }
  };
  return {SiteChecker(good), SiteChecker(perfect)};
}

CheckerPair knn_checkers(const KnnModel& model) {
  auto good = [model](const Configuration2& x1, const Configuration2&, const Site2& z, double s) {
    return event_A_knn(local_view(x1, Vec2(s * z.cast<double>()), 3 * s), s, model);
  };
  auto perfect = [model, good](const Configuration2& x1, const Configuration2& x2, const Site2& z, double s) {
    if (!good(x1, x2, z, s)) return false;
    const Configuration2 psi = local_view(x2, Vec2(s * z.cast<double>()), s);
    const ShellGeometry g = shell_geometry<2>(s);
    if (static_cast<double>(psi.size()) < (model.K + 1) * g.cells) return false;
    return event_App(psi, s, model);
  };
  return {SiteChecker(good), SiteChecker(perfect)};
}

Configuration2 plant_devices(const Configuration2& x1, const std::vector<Site2>& sites, double s,
                             DevicePrecondition pre, std::uint64_t seed, std::int64_t first_id,
                             std::vector<Site2>* skipped) {
  std::vector<MarkedPoint<2>> pts;
  std::int64_t id = first_id;
  for (std::size_t k = 0; k < sites.size(); ++k) {
    const Site2& z = sites[k];
    const Vec2 c = s * z.cast<double>();
    const Box<2> box = Box<2>::at_site(z, s);
    std::vector<MarkedPoint<2>> dev;
    try {
      const Device d = gen_device(local_view(x1, c, 3 * s), s, pre, derive(seed, k, 0xde71ce));
      for (auto p : d.psi) {
        p.position += c;
        if (!box.contains(p.position)) throw PreconditionError("device point rounded out of its site");
        dev.push_back(p);
      }
    } catch (const PreconditionError&) {
      if (skipped) skipped->push_back(z);
      continue;
    } catch (const GenericityError&) {
      if (skipped) skipped->push_back(z);
      continue;
    }
    for (auto& p : dev) {
      p.id = id++;
      pts.push_back(p);
    }
  }
  return Configuration2(std::move(pts), x1.window(), x1.tolerance());
}

}  // namespace dwre
