#include <gtest/gtest.h>

#include "dwre/knn.hpp"

using namespace dwre;

namespace {

Configuration2 ranked(std::vector<std::pair<Vec2, int>> pts, double side = 20) {
  std::vector<MarkedPoint<2>> v;
  std::int64_t id = 0;
  for (const auto& [p, k] : pts) v.push_back({p, Mark::rank(k), id++});
  return Configuration2(std::move(v), Box<2>::centered(side));
}

}  // namespace

TEST(KnnDescendant, HandExample) {
  const auto phi = ranked({{Vec2(0, 0), 1}, {Vec2(1, 0.1), 2}, {Vec2(-2, 0.3), 1}, {Vec2(0.2, 3), 2}});
  const KnnModel m = KnnModel::uniform(2);
  EXPECT_EQ(knn_descendant(phi, 0, m).first, 1u);
  EXPECT_EQ(knn_descendant(phi, 1, m).first, 2u);  // second nearest of (1, 0.1)
  EXPECT_NEAR(r_stab(phi, 0, m).radius, (phi[2].position - phi[0].position).norm(), 1e-15);
}

TEST(KnnDescendant, TieThrows) {
  const auto phi = ranked({{Vec2(0, 0), 1}, {Vec2(1, 0), 1}, {Vec2(-1, 0), 1}});
  EXPECT_THROW(knn_descendant(phi, 0, KnnModel::uniform(1)), GenericityError);
}

TEST(KnnGraph, MatchesBruteForce) {
  const KnnModel m = KnnModel::uniform(3);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto phi = sample_poisson<2>(Box<2>::centered(12), 1.0, m.law(), seed);
    const auto g = build_knn_graph(phi, m);
    for (std::size_t i = 0; i < phi.size(); ++i)
      EXPECT_EQ(static_cast<std::size_t>(g.next[i]), knn_descendant(phi, i, m).first);
  }
}

TEST(KnnGraph, NearestNeighbourWalksEndInTwoCycles) {
  const KnnModel m = KnnModel::uniform(1);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto phi = sample_poisson<2>(Box<2>::centered(15), 1.0, m.law(), seed);
    const auto g = build_knn_graph(phi, m);
    const auto a = analyze_walks(g);
    for (int len : a.cycle_length) EXPECT_EQ(len, 2);
    EXPECT_DOUBLE_EQ(basin_stats(g).stuck_fraction(), 1.0);
  }
}

TEST(KnnGraph, WindowCensoring) {
  const KnnModel m = KnnModel::uniform(2);
  const auto phi = sample_poisson<2>(Box<2>::centered(10), 1.0, m.law(), 3);
  const auto g = build_knn_graph(phi, m, KnnCensor::Window);
  const auto full = build_knn_graph(phi, m);
  for (std::size_t i = 0; i < phi.size(); ++i) {
    const double r = (full.geo[i] - phi[i].position).norm();
    EXPECT_EQ(g.is_censored(i), !(distance_to_boundary(phi[i].position, phi.window()) > r));
    if (!g.is_censored(i)) EXPECT_EQ(g.next[i], full.next[i]);
  }
}

TEST(KnnEvents, A2Gap) {
  const double s = 2;
  EXPECT_TRUE(event_A2(ranked({{Vec2(0.5, 0), 1}, {Vec2(5, 5), 1}}), s));
  EXPECT_FALSE(event_A2(ranked({{Vec2(0.9, 0), 1}}), s));
  EXPECT_TRUE(event_A2(ranked({{Vec2(1.0, 0), 1}}), s));  // outside Q_s
}

TEST(KnnEvents, A1NeedsEveryCell) {
  const double s = 1;
  const KnnModel m = KnnModel::uniform(1);
  std::vector<std::pair<Vec2, int>> pts;
  const int parts = a1_parts<2>();
  const double side = s / 9;
  for (int i = 0; i < parts; ++i)
    for (int j = 0; j < parts; ++j) {
      const Vec2 c(-1.5 * s + (i + 0.5) * side, -1.5 * s + (j + 0.5) * side);
      pts.push_back({c + Vec2(0.01, 0.013) * side, 1});
      pts.push_back({c - Vec2(0.02, 0.007) * side, 1});
    }
  EXPECT_TRUE(event_A1(ranked(pts), s, m));
  pts.pop_back();
  EXPECT_FALSE(event_A1(ranked(pts), s, m));
}

TEST(KnnEvents, A3AndA4) {
  const double s = 2;
  // The second point sits at the first point's distance 0.5 to the boundary of Q_2(o).
  EXPECT_FALSE(event_A3(ranked({{Vec2(0.5, 0), 1}, {Vec2(0.5, 0.5), 1}}), s));
  EXPECT_TRUE(event_A3(ranked({{Vec2(0.5, 0), 1}, {Vec2(-0.1, 0.2), 1}}), s));
  // The centre of Q_2(o) is equidistant from all four neighbouring boxes.
  EXPECT_FALSE(event_A4(ranked({{Vec2(0.01, 0.02), 1}}), s));
  EXPECT_TRUE(event_A4(ranked({{Vec2(0.6, 0.3), 1}}), s));
}

TEST(KnnShell, GeneratedShellSatisfiesEvent) {
  const double s = 1.2;
  const KnnModel m = KnnModel::uniform(2);
  const ShellGeometry g = shell_geometry<2>(s);
  EXPECT_EQ(g.m, 2);
  EXPECT_DOUBLE_EQ(g.cells, 16);
  const auto psi = gen_shell_config<2>(s, m, 7);
  EXPECT_EQ(psi.size(), 48u);
  EXPECT_TRUE(event_App(psi, s, m));
  std::vector<MarkedPoint<2>> fewer(psi.points().begin(), psi.points().end() - 1);
  EXPECT_FALSE(event_App(Configuration2(fewer, psi.window()), s, m));
  EXPECT_THROW(gen_shell_config<2>(5.0, m, 1), ResourceCapError);
}

TEST(KnnShell, ShellSitesCount) {
  int count = 0;
  for_each_shell_site<2>(3, [&](const Site2& z) {
    EXPECT_EQ(z.cwiseAbs().maxCoeff(), 3);
    ++count;
  });
  EXPECT_EQ(count, 24);
}
