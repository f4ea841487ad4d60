#include <gtest/gtest.h>

#include "dwre/lilypond.hpp"
#include "dwre/ppgen.hpp"

using namespace dwre;

namespace {

Configuration2 config(std::vector<std::pair<Vec2, Direction>> pts, double side = 10) {
  std::vector<MarkedPoint<2>> v;
  std::int64_t id = 0;
  for (const auto& [p, d] : pts) v.push_back({p, Mark::direction(d), id++});
  return Configuration2(std::move(v), Box<2>::centered(side));
}

}  // namespace

TEST(Solver, PerpendicularPair) {
  const auto phi = config({{Vec2(0, 0), Direction::PosX}, {Vec2(1, -0.5), Direction::PosY}});
  const auto sol = solve(phi);
  EXPECT_DOUBLE_EQ(sol.f[0], 1.0);
  EXPECT_EQ(sol.stopper[0], 1);
  EXPECT_FALSE(sol.finite(1));
  EXPECT_EQ(sol.stopper[1], -1);
  EXPECT_DOUBLE_EQ(sol.tip[1].y(), 5.0);
  EXPECT_TRUE(verify_solution(phi, sol));
}

TEST(Solver, StoppedSegmentDoesNotBlockLater) {
  // a is stopped by b at x = 1 before reaching c's line at x = 2.
  const auto phi = config({{Vec2(0, 0), Direction::PosX},
                           {Vec2(1, -0.3), Direction::PosY},
                           {Vec2(2, -1.7), Direction::PosY}});
  const auto sol = solve(phi);
  EXPECT_EQ(sol.stopper[0], 1);
  EXPECT_FALSE(sol.finite(2));
  EXPECT_EQ(count_hardcore_violations(phi, sol), 0u);
}

TEST(Solver, FourCyclePinwheel) {
  const FourCycle c = make_cycle(Vec2(0.3, -0.2), 0.5, 11);
  const Configuration2 cfg(std::vector<MarkedPoint<2>>(c.points.begin(), c.points.end()), Box<2>::centered(4));
  const auto sol = solve(cfg);
  for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(sol.stopper[j], static_cast<int>((j + 1) % 4));
}

TEST(Solver, MatchesOracleOnRandomInstances) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto phi = sample_poisson<2>(Box<2>::centered(10), 1.0, DirectionLaw{}, replicate_seed(77, seed));
    const auto a = solve(phi);
    const auto b = oracle_solve(phi);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_EQ(a.stopper[i], b.stopper[i]);
      if (a.finite(i)) EXPECT_NEAR(a.f[i], b.f[i], 1e-12 * a.f[i]);
      else EXPECT_FALSE(b.finite(i));
    }
    EXPECT_TRUE(verify_solution(phi, a));
    EXPECT_EQ(count_hardcore_violations(phi, a), 0u);
  }
}

TEST(Solver, VerifierRejectsTamperedSolution) {
  const auto phi = sample_poisson<2>(Box<2>::centered(10), 1.0, DirectionLaw{}, 5);
  auto sol = solve(phi);
  std::size_t i = 0;
  while (!sol.finite(i)) ++i;
  sol.f[i] *= 1.5;
  sol.tip[i] = phi[i].position + sol.f[i] * unit(phi[i].mark.direction());
  EXPECT_FALSE(verify_solution(phi, sol));
}

TEST(Solver, GenericityViolationsThrow) {
  EXPECT_THROW(solve(config({{Vec2(0, 0), Direction::PosX}, {Vec2(2, 0), Direction::NegX}})), GenericityError);
  EXPECT_THROW(solve(config({{Vec2(0, 0), Direction::PosX}, {Vec2(1, -1), Direction::PosY}})), GenericityError);
  EXPECT_THROW(solve(Configuration2({{Vec2(0, 0), Mark::rank(1), 0}}, Box<2>::centered(2))), ValidationError);
}

TEST(Solver, EmptyAndSingle) {
  EXPECT_THROW(solve(config({})), ValidationError);
  const auto sol = solve(config({{Vec2(0.5, 0.25), Direction::NegY}}));
  EXPECT_FALSE(sol.finite(0));
  EXPECT_DOUBLE_EQ(sol.tip[0].y(), -5.0);
}

TEST(Solver, GraphFromSolution) {
  const auto phi = sample_poisson<2>(Box<2>::centered(20), 1.0, DirectionLaw{}, 8);
  const auto sol = solve(phi);
  const auto g = build_lily_graph(phi, sol);
  g.check();
  for (std::size_t i = 0; i < phi.size(); ++i) {
    EXPECT_EQ(g.is_censored(i), !sol.finite(i));
    if (sol.finite(i)) {
      EXPECT_EQ(g.next[i], sol.stopper[i]);
      EXPECT_EQ(g.geo[i], sol.tip[i]);
    }
  }
}
