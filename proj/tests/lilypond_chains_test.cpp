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

TEST(Chains, DescendingPredicate) {
  EXPECT_TRUE(is_descending_chain({Vec2(0, 0), Vec2(1, 0.2), Vec2(1.5, 0)}, 1));
  EXPECT_FALSE(is_descending_chain({Vec2(0, 0), Vec2(1, 0.2), Vec2(1.5, 0)}, 0.9));
  EXPECT_FALSE(is_descending_chain({Vec2(0, 0), Vec2(0.5, 0), Vec2(1.5, 0)}, 1));
  EXPECT_FALSE(is_descending_chain({Vec2(0, 0), Vec2(0.5, 0), Vec2(0, 0)}, 1));
  EXPECT_TRUE(is_descending_chain({Vec2(3, 3)}, 1));
  EXPECT_FALSE(is_descending_chain({}, 1));
}

TEST(Chains, FindChainsHand) {
  const auto phi = config({{Vec2(0, 0), Direction::PosX}, {Vec2(0.9, 0.1), Direction::PosY}, {Vec2(1.3, 0.4), Direction::NegX},
                           {Vec2(4, 4), Direction::NegY}});
  const auto two = find_chains(phi, 1.0, 2);
  EXPECT_EQ(two.size(), 3u);  // {0,1}, {1,2} and {0,1,2}
  const auto three = find_chains(phi, 1.0, 3);
  ASSERT_EQ(three.size(), 1u);
  std::vector<Vec2> pos;
  for (auto id : three[0].points) pos.push_back(phi[static_cast<std::size_t>(id)].position);
  EXPECT_TRUE(is_descending_chain(pos, 1.0));
  EXPECT_TRUE(event_A6(phi, 1.0, 1.0, 2));
  EXPECT_FALSE(event_A6(phi, 1.0, 1.0, 3));
  EXPECT_FALSE(event_A6(phi, 0.5, 0.5, 1));
  EXPECT_TRUE(event_A6(phi, 0.5, 0.5, 0));
}

TEST(Chains, ChainsFromFindAreDescending) {
  const auto phi = sample_poisson<2>(Box<2>::centered(8), 1.0, DirectionLaw{}, 4);
  const auto chains = find_chains(phi, 1.0, 3);
  const auto idx = phi.id_index();
  for (const auto& c : chains) {
    std::vector<Vec2> pos;
    for (auto id : c.points) pos.push_back(phi[idx.at(id)].position);
    EXPECT_TRUE(is_descending_chain(pos, 1.0));
  }
  EXPECT_THROW(find_chains(phi, 3.0, 2, 10), ResourceCapError);
}

TEST(Chains, BoundValues) {
  EXPECT_DOUBLE_EQ(chain_bound(1, 1, 1, 1), 4);
  EXPECT_NEAR(chain_bound(2, 0.5, 3, 1), 4.0 / 6.0, 1e-14);
  EXPECT_NEAR(chain_bound(1, 1, 0, 2), 2, 1e-14);
  EXPECT_THROW(chain_bound(1, 1, -1, 1), ValidationError);
}

TEST(Chains, IntcompQuadrature) {
  EXPECT_DOUBLE_EQ(intcomp(1, 0), 4);
  EXPECT_NEAR(intcomp_quadrature(1, 0, 10), 4, 1e-13);
  EXPECT_NEAR(intcomp_quadrature(2, 1, 2000), intcomp(2, 1), 1e-4 * intcomp(2, 1));
  EXPECT_THROW(intcomp_quadrature(1, 1, 0), ValidationError);
}

TEST(Chains, AlternatingChainHand) {
  const auto phi = config({{Vec2(0, 0), Direction::PosX}, {Vec2(1, -0.5), Direction::PosY}});
  const auto phi_p = config({{Vec2(0, 0), Direction::PosX}});
  const auto chain = build_alternating_chain(phi, phi_p, 0);
  EXPECT_EQ(chain.points, (std::vector<std::int64_t>{0, 1}));
  EXPECT_DOUBLE_EQ(chain.bound, 1.0);
  EXPECT_THROW(build_alternating_chain(phi_p, phi, 0), PreconditionError);
}

TEST(Chains, AlternatingChainsAreDescending) {
  int built = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto base = sample_poisson<2>(Box<2>::centered(12), 1.0, DirectionLaw{}, replicate_seed(21, seed));
    // phi drops the last point, phi' drops the first one.
    std::vector<MarkedPoint<2>> a(base.points().begin(), base.points().end() - 1);
    std::vector<MarkedPoint<2>> b(base.points().begin() + 1, base.points().end());
    const Configuration2 phi(a, base.window()), phi_p(b, base.window());
    const auto sol = solve(phi), sol_p = solve(phi_p);
    const auto idx_p = phi_p.id_index();
    for (std::size_t i = 1; i < phi.size(); ++i) {
      const std::size_t j = idx_p.at(phi[i].id);
      if (!(sol.f[i] < sol_p.f[j])) continue;
      const auto chain = build_alternating_chain(phi, phi_p, phi[i].id);
      std::vector<Vec2> pos;
      for (auto id : chain.points) pos.push_back(base[static_cast<std::size_t>(id)].position);
      EXPECT_TRUE(is_descending_chain(pos, chain.bound)) << "seed " << seed << " start " << phi[i].id;
      ++built;
    }
  }
  EXPECT_GT(built, 0);
}
