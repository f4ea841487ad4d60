#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <vector>

#include "dwre/core.hpp"
#include "dwre/knn.hpp"
#include "dwre/lilypond.hpp"
#include "dwre/walks.hpp"

namespace dwre {

using SiteSet = std::set<Site2, SiteLess>;

/// Per-site values on the inclusive lattice rectangle [lo, hi].
template <class T>
struct SiteArray {
  Site2 lo = Site2::Zero();
  Site2 hi = Site2::Zero();
  std::vector<T> data;

  static SiteArray filled(const Site2& lo, const Site2& hi, T value) {
    if ((hi.array() < lo.array()).any()) throw ValidationError("empty site rectangle");
    SiteArray a{lo, hi, {}};
    a.data.assign(static_cast<std::size_t>(a.width()) * static_cast<std::size_t>(a.height()), value);
    return a;
  }

  int width() const { return hi.x() - lo.x() + 1; }
  int height() const { return hi.y() - lo.y() + 1; }
  std::size_t count() const { return data.size(); }
  bool in(const Site2& z) const { return (z.array() >= lo.array()).all() && (z.array() <= hi.array()).all(); }
  std::size_t index(const Site2& z) const {
    return static_cast<std::size_t>(z.y() - lo.y()) * static_cast<std::size_t>(width()) +
           static_cast<std::size_t>(z.x() - lo.x());
  }
  Site2 site(std::size_t k) const {
    return Site2(lo.x() + static_cast<int>(k % static_cast<std::size_t>(width())),
                 lo.y() + static_cast<int>(k / static_cast<std::size_t>(width())));
  }
  const T& at(const Site2& z) const { return data[index(z)]; }
  T& at(const Site2& z) { return data[index(z)]; }
};

/// Site process Y_z in {0, 1, 2}.
using SiteField = SiteArray<std::uint8_t>;
/// Per-site flag: the sprinkling meets Q_s(sz).
using Occupancy = SiteArray<std::uint8_t>;

void check_field(const SiteField& field);

/// Decides a site property from the bulk x1, the sprinkling x2, the site z and the scale s.
using SiteChecker = std::function<bool(const Configuration2& x1, const Configuration2& x2, const Site2& z, double s)>;

Occupancy occupancy(const Configuration2& x2, double s, const Site2& lo, const Site2& hi);

/// Y_z = 0 if the sprinkling misses Q_s(sz) and z is good; 1 if z is perfect; 2 otherwise.
SiteField classify_sites(const Configuration2& x1, const Configuration2& x2, double s, const Site2& lo,
                         const Site2& hi, const SiteChecker& good, const SiteChecker& perfect);

/// S(z) = {z' : |z - z'|_inf <= 2}.
std::vector<Site2> neighborhood(const Site2& z);

struct RevealedSet {
  SiteSet revealed;          // R
  SiteSet bad;               // final B
  std::vector<Site2> trace;  // processed sites in order
};

/// Revealed-set exploration on the field's rectangle. Sites outside the rectangle count as revealed and not bad.
RevealedSet reveal(const SiteField& field, const Occupancy& occupied);

/// Rebuilds R from the initial bad sites and the processed sites.
SiteSet replay(const SiteField& field, const std::vector<Site2>& trace);

/// X1 together with the points of X2 whose site lies in R.
Configuration2 assemble_x3(const Configuration2& x1, const Configuration2& x2, const SiteSet& revealed, double s);

/// Points of x2 grouped by site, restricted to sites outside R.
std::map<Site2, std::vector<MarkedPoint<2>>, SiteLess> unrevealed_by_site(const Configuration2& x2,
                                                                          const SiteSet& revealed, double s);

using GraphBuilder = std::function<WalkGraph<2>(const Configuration2&)>;

struct IncrementalReport {
  std::size_t steps = 0;     // nonempty sites added
  std::size_t checked = 0;   // points of X3 inside the analysis box
  std::size_t switched = 0;  // points whose descendant moved into an added site
  std::vector<std::int64_t> violations_i;
  std::vector<std::int64_t> violations_ii;
  std::map<std::int64_t, std::int64_t> final_next;  // descendant id per point id, -1 if censored

  bool passed() const { return violations_i.empty() && violations_ii.empty(); }
};

/// Adds the sprinkled sites in `order` one at a time and checks the descendant dichotomy and the entrant
/// property for points of x3 inside `analysis`. Sites of `order` must lie outside R.
IncrementalReport incremental_check(const Configuration2& x3,
                                    const std::map<Site2, std::vector<MarkedPoint<2>>, SiteLess>& x2_by_site,
                                    const std::vector<Site2>& order, const GraphBuilder& builder, double s,
                                    const SiteSet& revealed, const Box<2>& analysis);

/// Deterministic shuffle of `sites`.
std::vector<Site2> random_order(std::vector<Site2> sites, std::uint64_t seed);

struct ClusterStats {
  std::vector<std::size_t> sizes;  // descending
  std::size_t window_sites = 0;
  double density = 0;
  double largest_fraction = 0;
};

/// Components of R inside [lo, hi] under |.|_inf-adjacency.
ClusterStats cluster_stats(const SiteSet& revealed, const Site2& lo, const Site2& hi);

// ---------------------------------------------------------------------------
// Model bindings

GraphBuilder lily_builder();
GraphBuilder knn_builder(const KnnModel& model);

struct CheckerPair {
  SiteChecker good;
  SiteChecker perfect;
};

/// Lilypond: good = the good-site event under `pre` on the 3s-box; perfect = good and the sprinkling in Q_s(sz)
/// is exactly the stopping device of the bulk.
CheckerPair lily_checkers(DevicePrecondition pre = DevicePrecondition::Full);

/// KNN: good = A_s on the 3s-box; perfect = good and the dense-shell event on the sprinkling in Q_s(sz).
CheckerPair knn_checkers(const KnnModel& model);

/// Stopping devices at each site of `sites`, built from local views of x1, shifted back and renumbered from
/// first_id. Sites whose device cannot be built are skipped and returned in `skipped`.
Configuration2 plant_devices(const Configuration2& x1, const std::vector<Site2>& sites, double s,
                             DevicePrecondition pre, std::uint64_t seed, std::int64_t first_id,
                             std::vector<Site2>* skipped = nullptr);

}  // namespace dwre
