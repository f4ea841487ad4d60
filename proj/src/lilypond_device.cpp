#include <map>
#include <sstream>

#include "dwre/lilypond.hpp"
#include "dwre/rng.hpp"

namespace dwre {

FourCycle make_cycle(const Vec2& xi, double delta, std::uint64_t seed, std::int64_t first_id) {
  if (!(delta > 0)) throw ValidationError("cycle scale must be positive");
  // Pinwheel template on Q_1(o): x_j moves in direction v_j and runs into the segment of x_{j+1}.
  auto jitter = [&](int j, int k, double lo, double hi) { return lo + (hi - lo) * uniform(seed, static_cast<std::uint64_t>(j), static_cast<std::uint64_t>(k)); };
  std::array<double, 4> a{}, b{};
  for (int j = 0; j < 4; ++j) {
    a[static_cast<std::size_t>(j)] = jitter(j, 0, 0.08, 0.16);
    b[static_cast<std::size_t>(j)] = jitter(j, 1, 0.30, 0.40);
  }
  const std::array<Vec2, 4> tpl = {Vec2(a[0], b[0]), Vec2(b[1], -a[1]), Vec2(-a[2], -b[2]), Vec2(-b[3], a[3])};
  const std::array<Direction, 4> dirs = {Direction::NegY, Direction::NegX, Direction::PosY, Direction::PosX};
  FourCycle c{{}, xi, delta};
  for (std::size_t j = 0; j < 4; ++j)
    c.points[j] = MarkedPoint<2>{xi + delta * tpl[j], Mark::direction(dirs[j]), first_id + static_cast<std::int64_t>(j)};
  return c;
}

bool is_cycle(const std::vector<MarkedPoint<2>>& D, const Vec2& xi, double delta) {
  if (D.size() != 4 || !(delta > 0)) return false;
  const Box<2> cell{xi, delta};
  for (const auto& p : D)
    if (!p.mark.is_direction() || !cell.contains(p.position)) return false;
  LilypondSolution sol;
  Configuration2 cfg;
  try {
    cfg = Configuration2(D, cell);
    sol = solve(cfg);
  } catch (const Error&) {
    return false;
  }
  // Order the points along the stopper map: order[j + 1] stops order[j].
  std::array<std::size_t, 4> order{};
  order[0] = 0;
  for (std::size_t j = 0; j < 4; ++j) {
    if (!sol.finite(order[j])) return false;
    const auto nxt = static_cast<std::size_t>(sol.stopper[order[j]]);
    if (j < 3) {
      order[j + 1] = nxt;
    } else if (nxt != order[0]) {
      return false;
    }
  }
  for (std::size_t j = 0; j < 4; ++j)
    for (std::size_t k = j + 1; k < 4; ++k)
      if (order[j] == order[k]) return false;
  for (std::size_t j = 0; j < 4; ++j) {
    const std::size_t x = order[j], y = order[(j + 1) % 4];
    const Direction vj = D[x].mark.direction(), vn = D[y].mark.direction();
    if (vj != rotate_ccw(vn)) return false;                  // (1)
    if (!cell.contains(sol.tip[x])) return false;            // (2)
    const Vec2 lo = D[y].position.cwiseMin(sol.tip[y]);    // (3): tip on the closed segment of the next point
    const Vec2 hi = D[y].position.cwiseMax(sol.tip[y]);
    if ((sol.tip[x].array() < lo.array()).any() || (sol.tip[x].array() > hi.array()).any()) return false;
    const Vec2 in = xi - D[x].position;                      // (4)
    if (!(in.dot(unit(vj)) > 0) || !(in.dot(unit(vn)) > 0)) return false;
  }
  return true;
}

namespace {

// The axis-parallel segment [base, tip] meets the half-open box.
bool segment_meets(const Vec2& base, const Vec2& tip, const Box<2>& box) {
  const Vec2 lo = box.lo(), hi = box.hi();
  for (int k = 0; k < 2; ++k) {
    const double p = std::min(base[k], tip[k]), q = std::max(base[k], tip[k]);
    if (!(p < hi[k] && q >= lo[k])) return false;
  }
  return true;
}

bool ray_meets(const Vec2& base, Direction d, const Box<2>& box) {
  Vec2 far = base;
  far[axis(d)] = sign(d) * kInf;
  return segment_meets(base, far, box);
}

}  // namespace

BoundarySet boundary_in_star(const Configuration2& phi, const LilypondSolution& sol, const Site2& z, double s) {
  const Box<2> box = Box<2>::at_site(z, s);
  BoundarySet out;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    const Vec2& xi = phi[i].position;
    if (box.contains(xi)) continue;
    if (segment_meets(xi, sol.tip[i], box)) out.ids.insert(phi[i].id);
    if (!sol.finite(i) && ray_meets(xi, phi[i].mark.direction(), box)) out.censored.insert(phi[i].id);
  }
  return out;
}

BoundarySet boundary_in(const Configuration2& phi, const LilypondSolution& sol, const Site2& z, double s) {
  const Box<2> box = Box<2>::at_site(z, s);
  BoundarySet out;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    const Vec2& xi = phi[i].position;
    if (box.contains(xi)) continue;
    if (sol.finite(i)) {
      if (box.contains(sol.tip[i])) out.ids.insert(phi[i].id);
    } else if (ray_meets(xi, phi[i].mark.direction(), box)) {
      out.censored.insert(phi[i].id);
    }
  }
  return out;
}

BoundarySet boundary_out(const Configuration2& phi, const LilypondSolution& sol, const Site2& z, double s) {
  const Box<2> box = Box<2>::at_site(z, s);
  BoundarySet out;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    if (!box.contains(phi[i].position)) continue;
    if (!sol.finite(i)) {
      out.ids.insert(phi[i].id);
      out.censored.insert(phi[i].id);
    } else if (!box.contains(sol.tip[i])) {
      out.ids.insert(phi[i].id);
    }
  }
  return out;
}

Device device_layout(const Configuration2& phi1, double s, double offset) {
  if (!(s >= 1)) throw ValidationError("s must be >= 1");
  const Configuration2 phi = restrict_to(phi1, Box<2>::centered(3 * s));
  Device dev;
  dev.delta = std::pow(s, -4.0);
  const double off = offset < 0 ? 3 * dev.delta / 8 : offset;
  const Box<2> box = Box<2>::centered(s);
  if (!phi.empty()) {
    const LilypondSolution sol = solve(phi);
    for (std::size_t i = 0; i < phi.size(); ++i) {
      const Vec2& xi = phi[i].position;
      const Direction d = phi[i].mark.direction();
      const bool inside = box.contains(xi);
      const bool lands_inside = sol.finite(i) && box.contains(sol.tip[i]);
      if (inside && lands_inside) {
        dev.m1.push_back(xi + off * unit(d));
      } else if (!inside && lands_inside) {
        Vec2 entry = xi;
        entry[axis(d)] = -sign(d) * s / 2;
        dev.m2.push_back(entry + off * unit(d));
      }
    }
  }
  dev.m3.push_back(Vec2::Constant(-s / 2 + off));
  dev.psi = Configuration2({}, box, phi1.tolerance());
  return dev;
}

std::vector<Vec2> Device::centres() const {
  std::vector<Vec2> out(m1);
  out.insert(out.end(), m2.begin(), m2.end());
  out.insert(out.end(), m3.begin(), m3.end());
  return out;
}

Device gen_device(const Configuration2& phi1, double s, DevicePrecondition pre, std::uint64_t seed, double offset) {
  if (!(s >= 1)) throw ValidationError("s must be >= 1");
  if (pre != DevicePrecondition::None) {
    const Configuration2 phi = restrict_to(phi1, Box<2>::centered(3 * s));
    if (!event_A8(phi, s)) throw PreconditionError("bulk configuration is not s^-4 separated (A8)");
    if (pre == DevicePrecondition::Full && !event_A_lily(phi, s))
      throw PreconditionError("bulk configuration is not s-good");
  }
  Device dev = device_layout(phi1, s, offset);
  const Box<2> box = Box<2>::centered(s);
  const std::vector<Vec2> centres = dev.centres();
  const double cell = dev.delta / 16;
  std::vector<std::size_t> order(centres.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return centres[a].x() < centres[b].x(); });
  for (std::size_t i = 0; i < order.size(); ++i)
    for (std::size_t j = i + 1; j < order.size() && centres[order[j]].x() - centres[order[i]].x() < cell; ++j)
      if (Box<2>{centres[order[i]], cell}.intersects(Box<2>{centres[order[j]], cell}))
        throw PreconditionError("device cells overlap");

  // The jitter is redrawn until bulk and device together are in general position.
  constexpr int kAttempts = 32;
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    const std::uint64_t sd = attempt == 0 ? seed : derive(seed, static_cast<std::uint64_t>(attempt), 0x9e7);
    std::vector<MarkedPoint<2>> pts;
    std::int64_t next_id = phi1.max_id() + 1;
    for (std::size_t k = 0; k < centres.size(); ++k) {
      const FourCycle c = make_cycle(centres[k], cell, derive(sd, k, 0xc7c1e), next_id);
      next_id += 4;
      for (const auto& p : c.points) {
        if (!box.contains(p.position)) throw PreconditionError("device cycle leaves Q_s(o)");
        pts.push_back(p);
      }
    }
    std::vector<MarkedPoint<2>> all(phi1.points());
    all.insert(all.end(), pts.begin(), pts.end());
    double reach = s;
    for (const auto& p : all) reach = std::max(reach, sup_norm<2>(p.position));
    const Configuration2 joint(std::move(all), Box<2>::centered(2 * reach + 2), phi1.tolerance());
    if (!check_generic_lily(joint, phi1.tolerance())) continue;
    dev.psi = Configuration2(std::move(pts), box, phi1.tolerance());
    return dev;
  }
  throw GenericityError("no generic device jitter found");
}

bool matches_device(const Configuration2& phi1, const Configuration2& psi, double s) {
  const Device layout = device_layout(phi1, s);
  const std::vector<Vec2> centres = layout.centres();
  const double cell = layout.delta / 16;
  std::vector<std::vector<MarkedPoint<2>>> per_cell(centres.size());
  for (const auto& p : psi) {
    bool placed = false;
    for (std::size_t k = 0; k < centres.size() && !placed; ++k)
      if (Box<2>{centres[k], cell}.contains(p.position)) {
        per_cell[k].push_back(p);
        placed = true;
      }
    if (!placed) return false;
  }
  for (std::size_t k = 0; k < centres.size(); ++k)
    if (!is_cycle(per_cell[k], centres[k], cell)) return false;
  return true;
}

namespace {

Box<2> covering_window(std::initializer_list<const Configuration2*> cfgs) {
  double half = 0;
  for (const Configuration2* c : cfgs)
    half = std::max(half, sup_norm<2>(c->window().center) + c->window().side / 2);
  return Box<2>::centered(2 * half);
}

Configuration2 union_of(std::initializer_list<const Configuration2*> cfgs, const Box<2>& window, double tol) {
  std::vector<MarkedPoint<2>> pts;
  for (const Configuration2* c : cfgs) pts.insert(pts.end(), c->points().begin(), c->points().end());
  return Configuration2(std::move(pts), window, tol);
}

std::int64_t stopper_id(const Configuration2& phi, const LilypondSolution& sol, std::size_t i) {
  return sol.finite(i) ? phi[static_cast<std::size_t>(sol.stopper[i])].id : -1;
}

}  // namespace

std::string USReport::summary() const {
  std::ostringstream os;
  os << "device=" << device_points << " bulk=" << bulk_points << " switched=" << switched
     << " viol_a=" << violations_a.size() << " viol_b=" << violations_b.size() << " viol_in=" << violations_in.size()
     << " viol_out=" << violations_out.size() << (passed() ? " PASS" : " FAIL");
  return os.str();
}

USReport check_US(const Configuration2& phi1, const Configuration2& phi2, const Configuration2& psi, double s) {
  USReport rep;
  rep.device_points = phi2.size();
  rep.bulk_points = phi1.size();
  if (phi1.empty() && phi2.empty() && psi.empty()) return rep;
  const Box<2> window = covering_window({&phi1, &phi2, &psi});
  const double tol = phi1.tolerance();
  const Configuration2 full = union_of({&phi1, &phi2, &psi}, window, tol);
  const Configuration2 bulk_psi = union_of({&phi1, &psi}, window, tol);
  const Configuration2 bulk = union_of({&phi1}, window, tol);
  const LilypondSolution sol_full = solve(full);
  const auto full_idx = full.id_index();
  const Box<2> box = Box<2>::centered(s);

  std::set<std::int64_t> device_ids;
  for (const auto& p : phi2) device_ids.insert(p.id);

  if (!phi2.empty()) {
    const LilypondSolution sol2 = solve(phi2);
    for (std::size_t i = 0; i < phi2.size(); ++i) {
      const std::size_t k = full_idx.at(phi2[i].id);
      const bool ok = sol2.finite(i) && box.contains(sol2.tip[i]) &&
                      stopper_id(full, sol_full, k) == stopper_id(phi2, sol2, i);
      if (!ok) rep.violations_a.push_back(phi2[i].id);
    }
  }

  if (!bulk_psi.empty()) {
    const LilypondSolution sol_bp = solve(bulk_psi);
    const std::set<std::int64_t> in_o = boundary_in(bulk_psi, sol_bp, Site2(0, 0), s).ids;
    const auto bp_idx = bulk_psi.id_index();
    for (const auto& p : phi1) {
      const std::size_t k = full_idx.at(p.id);
      const std::int64_t yf = stopper_id(full, sol_full, k);
      if (yf >= 0 && device_ids.count(yf) && box.contains(sol_full.tip[k])) {
        ++rep.switched;
        continue;
      }
      const bool kept = yf == stopper_id(bulk_psi, sol_bp, bp_idx.at(p.id)) && !in_o.count(p.id);
      if (!kept) rep.violations_b.push_back(p.id);
    }
  }

  const LilypondSolution sol_bulk = bulk.empty() ? LilypondSolution{} : solve(bulk);
  const Site2 zlo = site_of<2>(window.lo(), s), zhi = site_of<2>(window.hi(), s);
  for (int zx = zlo.x(); zx <= zhi.x(); ++zx)
    for (int zy = zlo.y(); zy <= zhi.y(); ++zy) {
      const Site2 z(zx, zy);
      std::set<std::int64_t> in_b, out_b;
      if (!bulk.empty()) {
        in_b = boundary_in(bulk, sol_bulk, z, s).ids;
        out_b = boundary_out(bulk, sol_bulk, z, s).ids;
      }
      if (boundary_in(full, sol_full, z, s).ids != in_b) rep.violations_in.push_back(z);
      if (boundary_out(full, sol_full, z, s).ids != out_b) rep.violations_out.push_back(z);
    }
  return rep;
}

RestrictedReport compare_restricted(const Configuration2& phi, const Configuration2& phi_prime, double s) {
  const Box<2> box = Box<2>::centered(s);
  const Site2 o(0, 0);
  const LilypondSolution sol = solve(phi);
  const LilypondSolution sol_p = solve(phi_prime);

  auto core = [&](const Configuration2& c, const LilypondSolution& so) {
    std::map<std::int64_t, std::size_t> m;
    const std::set<std::int64_t> star = boundary_in_star(c, so, o, s).ids;
    for (std::size_t i = 0; i < c.size(); ++i)
      if (box.contains(c[i].position) || star.count(c[i].id)) m.emplace(c[i].id, i);
    return m;
  };
  const auto S = core(phi, sol);
  const auto Sp = core(phi_prime, sol_p);
  bool same = S.size() == Sp.size();
  for (auto it = S.begin(), jt = Sp.begin(); same && it != S.end(); ++it, ++jt) {
    const auto& a = phi[it->second];
    const auto& b = phi_prime[jt->second];
    same = it->first == jt->first && a.position == b.position && a.mark == b.mark;
  }
  if (!same) throw PreconditionError("configurations differ on Q_s(o) together with the segments meeting it");

  RestrictedReport rep;
  for (const auto& [id, i] : S) {
    const std::size_t j = Sp.at(id);
    const bool touches = (sol.finite(i) && box.contains(sol.tip[i])) || (sol_p.finite(j) && box.contains(sol_p.tip[j]));
    if (touches && stopper_id(phi, sol, i) != stopper_id(phi_prime, sol_p, j)) rep.descendant_mismatch.push_back(id);
  }
  const bool eq = boundary_in_star(phi, sol, o, s).ids == boundary_in(phi, sol, o, s).ids;
  const bool eq_p = boundary_in_star(phi_prime, sol_p, o, s).ids == boundary_in(phi_prime, sol_p, o, s).ids;
  rep.equivalence_ok = eq == eq_p;
  rep.out_equal = boundary_out(phi, sol, o, s).ids == boundary_out(phi_prime, sol_p, o, s).ids;
  return rep;
}

}  // namespace dwre
