#include <gtest/gtest.h>

#include "dwre/core.hpp"

using namespace dwre;

namespace {

Configuration2 config(std::vector<std::pair<Vec2, Direction>> pts, double side = 10) {
  std::vector<MarkedPoint<2>> v;
  std::int64_t id = 0;
  for (const auto& [p, d] : pts) v.push_back({p, Mark::direction(d), id++});
  return Configuration2(std::move(v), Box<2>::centered(side));
}

}  // namespace

TEST(Direction, RotationCyclesThroughAllFour) {
  Direction d = Direction::PosX;
  const Direction expect[] = {Direction::PosY, Direction::NegX, Direction::NegY, Direction::PosX};
  for (Direction e : expect) {
    d = rotate_ccw(d);
    EXPECT_EQ(d, e);
  }
  for (Direction x : kDirections) {
    EXPECT_EQ(make_direction(axis(x), sign(x)), x);
    EXPECT_EQ(unit(opposite(x)), -unit(x));
    EXPECT_EQ(direction_from_string(to_string(x)), x);
  }
}

TEST(Mark, StringRoundTrip) {
  for (const Mark m : {Mark::none(), Mark::rank(3), Mark::direction(Direction::NegY)})
    EXPECT_EQ(mark_from_string(to_string(m)), m);
  EXPECT_THROW(Mark::rank(0), ValidationError);
  EXPECT_THROW(Mark::rank(2).direction(), ValidationError);
}

TEST(Box, HalfOpen) {
  const Box<2> b = Box<2>::centered(2);
  EXPECT_TRUE(b.contains(Vec2(-1, -1)));
  EXPECT_FALSE(b.contains(Vec2(1, 0)));
  EXPECT_TRUE(b.contains_closed(Vec2(1, 1)));
  EXPECT_DOUBLE_EQ(distance_to_box(Vec2(4, 5), b), 5.0);
  EXPECT_DOUBLE_EQ(distance_to_boundary(Vec2(0.25, 0), b), 0.75);
}

TEST(Site, SiteOfMatchesBoxes) {
  const double s = 3;
  for (const Vec2 p : {Vec2(0, 0), Vec2(1.49, -1.5), Vec2(1.5, 4.6), Vec2(-7, 7.4)}) {
    const Site2 z = site_of<2>(p, s);
    EXPECT_TRUE(Box<2>::at_site(z, s).contains(p)) << p.transpose();
  }
}

TEST(Configuration, Validation) {
  const Box<2> w = Box<2>::centered(4);
  EXPECT_THROW(Configuration2({{Vec2(3, 0), Mark::none(), 0}}, w), ValidationError);
  EXPECT_THROW(Configuration2({{Vec2(0, 0), Mark::none(), 0}, {Vec2(1, 0), Mark::none(), 0}}, w), ValidationError);
  EXPECT_THROW(Configuration2({{Vec2(0, 0), Mark::none(), 0}, {Vec2(0, 0), Mark::none(), 1}}, w), ValidationError);
  EXPECT_THROW(Configuration2({}, Box<2>::centered(0)), ValidationError);
  const Configuration2 ok({{Vec2(0, 0), Mark::none(), 5}, {Vec2(1, 1), Mark::none(), 9}}, w);
  EXPECT_EQ(ok.max_id(), 9);
  EXPECT_EQ(ok.id_index().at(9), 1u);
}

TEST(Configuration, LocalViewTranslates) {
  const Configuration2 phi = config({{Vec2(4, 4), Direction::PosX}, {Vec2(0, 0), Direction::PosY}});
  const Configuration2 v = local_view(phi, Vec2(4, 4), 2);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].position, Vec2(0, 0));
  EXPECT_EQ(v[0].id, 0);
  const Configuration2 t = translate(phi, Vec2(1, -1));
  EXPECT_EQ(t[1].position, Vec2(1, -1));
}

TEST(Configuration, SubcubePartitionTiles) {
  const Box<2> big{Vec2(1, 2), 6};
  const auto parts = subcube_partition(big, 3);
  ASSERT_EQ(parts.size(), 9u);
  for (const Vec2 p : {Vec2(-1.9, -0.9), Vec2(0.1, 2.2), Vec2(3.99, 4.99)}) {
    int hits = 0;
    for (const auto& b : parts) hits += b.contains(p);
    EXPECT_EQ(hits, 1);
  }
}

TEST(Genericity, Knn) {
  const Box<2> w = Box<2>::centered(10);
  const Configuration2 tie({{Vec2(0, 0), Mark::rank(1), 0}, {Vec2(1, 0), Mark::rank(1), 1}, {Vec2(-1, 0), Mark::rank(1), 2}},
                           w);
  EXPECT_FALSE(check_generic_knn(tie, 1));
  const Configuration2 ok({{Vec2(0, 0), Mark::rank(1), 0}, {Vec2(1, 0.1), Mark::rank(1), 1}, {Vec2(-1.3, 0.4), Mark::rank(1), 2}},
                          w);
  EXPECT_TRUE(check_generic_knn(ok, 1));
  EXPECT_FALSE(check_generic_knn(ok, 3));
}

TEST(Genericity, Lily) {
  EXPECT_FALSE(check_generic_lily(config({{Vec2(0, 0), Direction::PosX}, {Vec2(2, 0), Direction::PosY}})));
  EXPECT_FALSE(check_generic_lily(config({{Vec2(0, 0), Direction::PosX}, {Vec2(1, 1), Direction::PosY}})));
  EXPECT_FALSE(check_generic_lily(config({{Vec2(0, 0), Direction::PosX}, {Vec2(1, -1), Direction::PosY}})));
  EXPECT_TRUE(check_generic_lily(config({{Vec2(0, 0), Direction::PosX}, {Vec2(1, 0.3), Direction::PosY}})));
}
