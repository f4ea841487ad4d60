#pragma once

#include <array>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "dwre/core.hpp"
#include "dwre/walks.hpp"

namespace dwre {

/// Growth lengths and stopping neighbours of the one-sided axis-parallel lilypond model.
struct LilypondSolution {
  std::vector<double> f;     // kInf when never stopped inside the sample
  std::vector<int> stopper;  // index of the stopping neighbour, -1 if none
  std::vector<Vec2> tip;     // base + f v; for f = inf, where the ray leaves the window

  std::size_t size() const { return f.size(); }
  bool finite(std::size_t i) const { return f[i] < kInf; }
};

struct Segment {
  Vec2 base;
  Direction dir;
  double length;  // may be kInf

  Vec2 point_at(double t) const { return base + t * unit(dir); }
};

/// Segment of point i; infinite segments are clipped to the window.
Segment segment(const Configuration2& phi, const LilypondSolution& sol, std::size_t i);

/// Event-driven solver. Throws GenericityError on aligned pairs or arrival ties.
LilypondSolution solve(const Configuration2& phi);

/// Independent Gauss-Seidel fixed-point solver, O(n^2) per pass.
LilypondSolution oracle_solve(const Configuration2& phi, int pass_cap = 0);

/// Literal O(n^2) check of the hard-core property and of the stopping-neighbour property.
bool verify_solution(const Configuration2& phi, const LilypondSolution& sol);

/// Number of intersecting pairs of half-open segments [base, tip).
std::size_t count_hardcore_violations(const Configuration2& phi, const LilypondSolution& sol);

/// h_c = stopper, h_g = tip; nodes with f = inf are censored.
WalkGraph<2> build_lily_graph(const Configuration2& phi, const LilypondSolution& sol);

// ---------------------------------------------------------------------------
// Descending chains

struct DescendingChain {
  std::vector<std::int64_t> points;
  double bound = 0;
};

/// |p1 - p2|_inf <= b and strictly decreasing consecutive sup-norm gaps.
bool is_descending_chain(const std::vector<Vec2>& pts, double b);

/// All b-bounded chains with at least n_min points, one per point set; throws ResourceCapError past `cap` paths.
std::vector<DescendingChain> find_chains(const Configuration2& phi, double b, int n_min,
                                         std::size_t cap = 1000000);

/// A b-bounded chain of n+1 distinct points starting in Q_s(o) exists.
bool event_A6(const Configuration2& phi, double s, double b, int n);

/// s^2 (4 b^2)^n lambda^{n+1} / n!, evaluated in log space.
double chain_bound(double s, double b, int n, double lambda);

/// Closed form of the integral of |x|_inf^{2k} over the sup-norm ball of radius b: 4 b^{2k+2}/(k+1).
double intcomp(double b, int k);
/// Midpoint rule on a grid_n x grid_n grid over [-b, b]^2.
double intcomp_quadrature(double b, int k, int grid_n);

/// Alternating h_c sequence in phi and phi' from point x1 until it leaves their intersection.
DescendingChain build_alternating_chain(const Configuration2& phi, const Configuration2& phi_prime,
                                        std::int64_t x1_id);

// ---------------------------------------------------------------------------
// Shielding and separation events (configurations relative to the site centre o)

struct ShieldGeometry {
  int strips = 0;     // floor(s^{1 - alpha/2})
  double delta = 0;   // s / strips
  int grid_max = 0;   // floor(s^alpha / (5 delta))
};
ShieldGeometry shield_geometry(double s, double alpha);

/// Rigid motion of the plane mapping direction `entry` to +e1, optionally followed by y -> -y.
struct Frame {
  Direction entry = Direction::PosX;
  bool reflect = false;

  Vec2 apply(const Vec2& p) const;
  Vec2 unapply(const Vec2& p) const;
  Direction apply(Direction d) const;
  Direction unapply(Direction d) const;
};
std::array<Frame, 8> shield_frames();

/// Blocker test at grid point xi (frame coordinates): some point in xi + R2 with direction +e2, and
/// every point of xi + R1 is such a point.
bool shield_block(const std::vector<Vec2>& pts, const std::vector<Direction>& dirs, const Vec2& xi, double delta);

/// Shielding event on phi restricted to Q_s(o): every entry strip meeting the upper half of the entry side,
/// in each of the 8 frames, has a grid point within s^alpha of the side carrying a blocker.
bool event_A5(const Configuration2& phi, double s, double alpha);

/// Strips of frame `f` that carry no blocker (diagnostic).
std::vector<int> unshielded_strips(const Configuration2& phi, double s, double alpha, const Frame& f);

/// The 24 sites z with |z|_inf = 3.
std::vector<Site2> a7_ring_sites();

/// A5(1/8) at scale s and shifted A5(1/8) at scale s/3 on the 24 sites with |z|_inf = 3.
bool event_A7(const Configuration2& phi, double s);

/// phi inside Q_3s(o), and per coordinate the values of all points together with +-s/2 pairwise >= s^{-4} apart.
bool event_A8(const Configuration2& phi, double s);

/// The good-site event A5(1/2) and A7 and A8.
bool event_A_lily(const Configuration2& phi, double s);

// ---------------------------------------------------------------------------
// Four-cycles and the stopping device

struct FourCycle {
  std::array<MarkedPoint<2>, 4> points;  // x_j is stopped by x_{j+1}
  Vec2 center;
  double scale;
};

/// A (xi, delta)-cycle: jittered pinwheel, ids first_id .. first_id + 3.
FourCycle make_cycle(const Vec2& xi, double delta, std::uint64_t seed, std::int64_t first_id = 0);

/// Checks the four cycle conditions for D (any order) around xi at scale delta.
bool is_cycle(const std::vector<MarkedPoint<2>>& D, const Vec2& xi, double delta);

enum class DevicePrecondition {
  Full,        // the good-site event A_s must hold
  Separation,  // A8 must hold
  None,        // unchecked; overlapping cells still throw
};

struct Device {
  Configuration2 psi;
  std::vector<Vec2> m1, m2, m3;
  double delta = 0;

  std::vector<Vec2> centres() const;
};

/// Cycle centres M1, M2, M3 for the bulk phi1 without placing cycles or checking preconditions.
Device device_layout(const Configuration2& phi1, double s, double offset = -1);

/// Places a (zeta, delta/16)-cycle at every zeta in M1, M2, M3 (delta = s^{-4}) computed from solve(phi1).
/// `offset` is the distance of the cycle centre from the base (M1) or entry point (M2), 3 delta / 8 by default.
Device gen_device(const Configuration2& phi1, double s, DevicePrecondition pre = DevicePrecondition::Separation,
                  std::uint64_t seed = 0, double offset = -1);

/// psi lies in the cells Q_{delta/16}(zeta) of the layout for phi1 and each cell holds exactly one cycle.
bool matches_device(const Configuration2& phi1, const Configuration2& psi, double s);

struct BoundarySet {
  std::set<std::int64_t> ids;
  std::set<std::int64_t> censored;  // members decided on a window-clipped infinite segment
};

/// Points of phi outside Q_s(sz) whose segment meets Q_s(sz).
BoundarySet boundary_in_star(const Configuration2& phi, const LilypondSolution& sol, const Site2& z, double s);
/// Points of phi outside Q_s(sz) whose geometric descendant lies in Q_s(sz).
BoundarySet boundary_in(const Configuration2& phi, const LilypondSolution& sol, const Site2& z, double s);
/// Points of phi inside Q_s(sz) whose geometric descendant lies outside Q_s(sz).
BoundarySet boundary_out(const Configuration2& phi, const LilypondSolution& sol, const Site2& z, double s);

struct USReport {
  std::size_t device_points = 0;
  std::size_t bulk_points = 0;
  std::size_t switched = 0;  // bulk points whose descendant moved into the device
  std::vector<std::int64_t> violations_a;
  std::vector<std::int64_t> violations_b;
  std::vector<Site2> violations_in;   // sites whose boundary_in changed
  std::vector<Site2> violations_out;  // sites whose boundary_out changed

  bool passed() const {
    return violations_a.empty() && violations_b.empty() && violations_in.empty() && violations_out.empty();
  }
  std::string summary() const;
};

/// Checks the uniform stopping condition for bulk phi1, device phi2 in Q_s(o) and other-site devices psi.
USReport check_US(const Configuration2& phi1, const Configuration2& phi2, const Configuration2& psi, double s);

struct RestrictedReport {
  std::vector<std::int64_t> descendant_mismatch;  // part (i)
  bool equivalence_ok = true;                     // part (ii)
  bool out_equal = true;                          // part (iii)

  bool passed() const { return descendant_mismatch.empty() && equivalence_ok && out_equal; }
};

/// Compares two configurations that agree on Q_s(o) and on the segments meeting it.
/// Throws PreconditionError when they do not.
RestrictedReport compare_restricted(const Configuration2& phi, const Configuration2& phi_prime, double s);

}  // namespace dwre
