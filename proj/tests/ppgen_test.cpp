#include <gtest/gtest.h>

#include <cmath>

#include "dwre/ppgen.hpp"

using namespace dwre;

TEST(Poisson, Deterministic) {
  const Box<2> w = Box<2>::centered(10);
  const auto a = sample_poisson<2>(w, 1.0, DirectionLaw{}, 42);
  const auto b = sample_poisson<2>(w, 1.0, DirectionLaw{}, 42);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].position, b[i].position);
    EXPECT_EQ(a[i].mark, b[i].mark);
    EXPECT_EQ(a[i].id, static_cast<std::int64_t>(i));
  }
  const auto c = sample_poisson<2>(w, 1.0, DirectionLaw{}, 43);
  ASSERT_FALSE(c.empty());
  EXPECT_NE(c[0].position, a[0].position);
}

TEST(Poisson, MeanCountAndMarks) {
  const Box<2> w = Box<2>::centered(10);
  double total = 0;
  std::array<double, 4> dirs{};
  const int reps = 400;
  for (int r = 0; r < reps; ++r) {
    const auto phi = sample_poisson<2>(w, 0.5, DirectionLaw{}, replicate_seed(3, r));
    total += static_cast<double>(phi.size());
    for (const auto& p : phi) dirs[static_cast<std::size_t>(p.mark.direction())] += 1;
  }
  const double mean = total / reps;
  EXPECT_NEAR(mean, 50, 4 * std::sqrt(50.0 / reps));
  for (double c : dirs) EXPECT_NEAR(c / total, 0.25, 0.01);
}

TEST(Poisson, RankLawFrequencies) {
  const RankLaw law{{0.2, 0.8}};
  std::array<double, 2> count{};
  const auto phi = sample_poisson<2>(Box<2>::centered(100), 1.0, law, 5);
  for (const auto& p : phi) count[static_cast<std::size_t>(p.mark.rank() - 1)] += 1;
  EXPECT_NEAR(count[0] / static_cast<double>(phi.size()), 0.2, 0.01);
}

TEST(Poisson, Validation) {
  EXPECT_THROW(sample_poisson<2>(Box<2>::centered(1), 0.0, DirectionLaw{}, 1), ValidationError);
  EXPECT_THROW(validate_law(RankLaw{{0.5, 0.6}}), ValidationError);
  EXPECT_THROW(validate_law(RankLaw{{}}), ValidationError);
  EXPECT_THROW(uniform_rank_law(0), ValidationError);
}

TEST(Sprinkling, SplitIsPartition) {
  const Box<2> w = Box<2>::centered(60);
  const double s = 2;
  const auto full = sample_poisson<2>(w, 1.0, DirectionLaw{}, 9);
  const auto split = sprinkle_split<2>(w, s, DirectionLaw{}, 9);
  EXPECT_EQ(split.x1.size() + split.x2.size(), full.size());
  const double p = sprinkle_probability<2>(s);
  EXPECT_DOUBLE_EQ(p, 0.125);
  const double frac = static_cast<double>(split.x2.size()) / static_cast<double>(full.size());
  EXPECT_NEAR(frac, p, 4 * std::sqrt(p * (1 - p) / static_cast<double>(full.size())));
  EXPECT_THROW(sprinkle_split<2>(w, 1.0, DirectionLaw{}, 1), ValidationError);
}

TEST(Sampling, ThreeDimensions) {
  const auto phi = sample_poisson<3>(Box<3>::centered(4), 1.0, uniform_rank_law(2), 11);
  for (const auto& p : phi) EXPECT_TRUE(Box<3>::centered(4).contains(p.position));
}
