#include <gtest/gtest.h>

#include "dwre/knn.hpp"
#include "dwre/walks.hpp"

using namespace dwre;

using SiteSet = std::set<Site2, SiteLess>;

namespace {

WalkGraph<2> graph(const std::vector<int>& next) {
  auto g = WalkGraph<2>::with_size(next.size());
  for (std::size_t i = 0; i < next.size(); ++i) {
    g.next[i] = next[i];
    g.censored[i] = next[i] < 0;
    g.geo[i] = Vec2::Zero();
  }
  g.check();
  return g;
}

}  // namespace

TEST(Trace, TailCycleAndCensoring) {
  // 0 -> 1 -> 2 -> 3 -> 2, 4 -> 5 (censored).
  const auto g = graph({1, 2, 3, 2, 5, -1});
  EXPECT_EQ(trace(g, 0), (WalkOutcome{2, 2, false}));
  EXPECT_EQ(trace(g, 3), (WalkOutcome{0, 2, false}));
  EXPECT_EQ(trace(g, 4), (WalkOutcome{1, 0, true}));
  EXPECT_EQ(trace(g, 5), (WalkOutcome{0, 0, true}));
  EXPECT_THROW(trace(g, 6), ValidationError);
}

TEST(Trace, AnalyzeMatchesTraceOnRandomGraphs) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const std::size_t n = 1 + static_cast<std::size_t>(uniform(seed, 0) * 60);
    std::vector<int> next(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double u = uniform(seed, i, 1);
      next[i] = u < 0.05 ? -1 : static_cast<int>(uniform(seed, i, 2) * static_cast<double>(n));
    }
    const auto g = graph(next);
    const auto a = analyze_walks(g);
    for (std::size_t i = 0; i < n; ++i) ASSERT_EQ(a.outcome[i], trace(g, static_cast<int>(i))) << seed << ' ' << i;
  }
}

TEST(Basins, Statistics) {
  const auto g = graph({1, 0, 1, 2, 5, -1, 6});
  const auto st = basin_stats(g);
  EXPECT_EQ(st.counted, 7u);
  EXPECT_EQ(st.censored, 2u);
  EXPECT_EQ(st.stuck, 5u);
  EXPECT_DOUBLE_EQ(st.stuck_fraction(), 1.0);
  ASSERT_EQ(st.basins.size(), 2u);
  EXPECT_EQ(st.basins[0].size + st.basins[1].size, 5u);
  EXPECT_EQ(st.tail_histogram, (std::vector<std::size_t>{3, 1, 1}));
  const auto part = basin_stats(g, {1, 0, 0, 1, 0, 0, 0});
  EXPECT_EQ(part.counted, 2u);
  EXPECT_EQ(part.tail_histogram, (std::vector<std::size_t>{1, 0, 1}));
}

TEST(Boundary, InSetAndShiftEquivariance) {
  std::vector<MarkedPoint<2>> pts = {{Vec2(-1.5, 0.2), Mark::rank(1), 0}, {Vec2(0.1, 0.3), Mark::rank(1), 1},
                                     {Vec2(0.3, -0.2), Mark::rank(1), 2}};
  const Configuration2 phi(pts, Box<2>::centered(10));
  const auto g = build_knn_graph(phi, KnnModel::uniform(1));
  EXPECT_EQ(boundary_in(phi, g, Site2(0, 0), 2.0), (std::set<std::int64_t>{0}));
  const Vec2 shift(4, -6);
  const auto moved = translate(phi, shift);
  const auto gm = build_knn_graph(moved, KnnModel::uniform(1));
  EXPECT_EQ(boundary_in(moved, gm, Site2(2, -3), 2.0), (std::set<std::int64_t>{0}));
}

TEST(Enclosure, RingEnclosesCentre) {
  SiteSet ring;
  for (int x = -2; x <= 2; ++x)
    for (int y = -2; y <= 2; ++y)
      if (std::max(std::abs(x), std::abs(y)) == 2) ring.insert(Site2(x, y));
  EXPECT_TRUE(encloses({Site2(0, 0), Site2(1, 1)}, ring));
  EXPECT_FALSE(encloses({Site2(3, 0)}, ring));
  SiteSet open = ring;
  open.erase(Site2(2, 0));
  EXPECT_FALSE(encloses({Site2(0, 0)}, open));
  // A diagonal gap lets the 8-connected walk through.
  SiteSet diag = ring;
  diag.erase(Site2(2, 2));
  EXPECT_FALSE(encloses({Site2(1, 1)}, diag));
  EXPECT_TRUE(encloses({}, {}));
}

TEST(Shielding, PreconditionsAndCheck) {
  std::vector<MarkedPoint<2>> pts = {{Vec2(0.1, 0.3), Mark::rank(1), 0}, {Vec2(0.3, -0.2), Mark::rank(1), 1},
                                     {Vec2(-3.7, 0.4), Mark::rank(1), 2}, {Vec2(-3.1, 0.9), Mark::rank(1), 3}};
  const Configuration2 phi(pts, Box<2>::centered(20));
  const auto g = build_knn_graph(phi, KnnModel::uniform(1));
  const double s = 1;
  SiteSet ring;
  for (int x = -1; x <= 1; ++x)
    for (int y = -1; y <= 1; ++y)
      if (x || y) ring.insert(Site2(x, y));
  const SiteSet B{Site2(0, 0)};
  const auto all_good = [](const Site2&) { return true; };
  const auto rep = check_SH(phi, g, s, std::function<bool(const Site2&)>(all_good), B, ring);
  EXPECT_TRUE(rep.passed());
  EXPECT_EQ(rep.checked, 2u);
  const auto not_enclosed = check_SH(phi, g, s, std::function<bool(const Site2&)>(all_good), B, SiteSet{});
  EXPECT_FALSE(not_enclosed.precondition_ok);
  const auto bad_site = check_SH(phi, g, s, std::function<bool(const Site2&)>([](const Site2& z) { return z.x() != 1; }),
                                 B, ring);
  EXPECT_FALSE(bad_site.precondition_ok);
}

TEST(Stabilization, NestedKnnWindows) {
  const KnnModel m = KnnModel::uniform(2);
  const auto big = sample_poisson<2>(Box<2>::centered(40), 1.0, m.law(), 9);
  std::vector<Configuration2> nested;
  for (double side : {6.0, 10.0, 20.0, 40.0}) {
    std::vector<MarkedPoint<2>> pts;
    for (const auto& p : big)
      if (Box<2>::centered(side).contains(p.position)) pts.push_back(p);
    nested.emplace_back(pts, Box<2>::centered(side));
  }
  ASSERT_FALSE(nested[0].empty());
  const std::int64_t id = nested[0][0].id;
  auto desc = [&](const Configuration2& cfg, std::int64_t x) -> std::optional<std::int64_t> {
    const auto g = build_knn_graph(cfg, m, KnnCensor::Window);
    const std::size_t i = cfg.id_index().at(x);
    if (g.is_censored(i)) return std::nullopt;
    return cfg[static_cast<std::size_t>(g.next[i])].id;
  };
  const auto r = check_stabilization(nested, id, desc);
  EXPECT_TRUE(r.stabilized);
  EXPECT_LT(r.first_stable, nested.size() - 1);
  std::vector<Configuration2> reversed(nested.rbegin(), nested.rend());
  EXPECT_THROW(check_stabilization(reversed, id, desc), PreconditionError);
}
