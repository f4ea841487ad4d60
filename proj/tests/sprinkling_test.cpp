#include <gtest/gtest.h>

#include "dwre/ppgen.hpp"
#include "dwre/sprinkling.hpp"

using namespace dwre;

namespace {

SiteField field_with(const Site2& lo, const Site2& hi, const std::vector<std::pair<Site2, int>>& values) {
  SiteField f = SiteField::filled(lo, hi, 0);
  for (const auto& [z, v] : values) f.at(z) = static_cast<std::uint8_t>(v);
  return f;
}

Occupancy occupied_at(const Site2& lo, const Site2& hi, const std::vector<Site2>& sites) {
  Occupancy o = Occupancy::filled(lo, hi, 0);
  for (const auto& z : sites) o.at(z) = 1;
  return o;
}

const Site2 kLo(-6, -6), kHi(6, 6);

SiteSet block(int x0, int x1, int y0, int y1) {
  SiteSet out;
  for (int x = x0; x <= x1; ++x)
    for (int y = y0; y <= y1; ++y) out.insert(Site2(x, y));
  return out;
}

}  // namespace

TEST(Reveal, EmptyField) {
  const auto r = reveal(field_with(kLo, kHi, {}), occupied_at(kLo, kHi, {}));
  EXPECT_TRUE(r.revealed.empty());
  EXPECT_TRUE(r.bad.empty());
  EXPECT_TRUE(r.trace.empty());
}

TEST(Reveal, SingleBadSite) {
  const Site2 o(0, 0);
  const auto r = reveal(field_with(kLo, kHi, {{o, 2}}), occupied_at(kLo, kHi, {o}));
  EXPECT_EQ(r.revealed.size(), 25u);
  EXPECT_EQ(r.revealed, block(-2, 2, -2, 2));
  EXPECT_EQ(r.bad, SiteSet{o});
  EXPECT_EQ(r.trace, std::vector<Site2>{o});
}

TEST(Reveal, OccupiedNeighbourSpreads) {
  const Site2 o(0, 0), a(2, 0), far(5, 5);
  const auto r = reveal(field_with(kLo, kHi, {{o, 2}, {a, 1}, {far, 1}}), occupied_at(kLo, kHi, {o, a, far}));
  EXPECT_EQ(r.revealed, block(-2, 4, -2, 2));
  EXPECT_EQ(r.bad, (SiteSet{o, a}));
}

TEST(Reveal, WindowTruncation) {
  const Site2 corner(6, 6);
  const auto r = reveal(field_with(kLo, kHi, {{corner, 2}}), occupied_at(kLo, kHi, {}));
  EXPECT_EQ(r.revealed, block(4, 6, 4, 6));
}

TEST(Reveal, DeterministicAndReplayable) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    SiteField f = SiteField::filled(kLo, kHi, 0);
    Occupancy occ = Occupancy::filled(kLo, kHi, 0);
    for (std::size_t k = 0; k < f.count(); ++k) {
      const double u = uniform(seed, k);
      f.data[k] = u < 0.03 ? 2 : (u < 0.1 ? 1 : 0);
      occ.data[k] = f.data[k] > 0 || uniform(seed, k, 1) < 0.1;
    }
    const auto a = reveal(f, occ);
    const auto b = reveal(f, occ);
    EXPECT_EQ(a.revealed, b.revealed);
    EXPECT_EQ(a.trace, b.trace);
    EXPECT_EQ(replay(f, a.trace), a.revealed);
    for (const auto& z : a.bad) EXPECT_TRUE(occ.at(z));
    // Every unrevealed occupied site is at sup-distance > 2 from all bad sites.
    for (std::size_t k = 0; k < f.count(); ++k) {
      const Site2 z = f.site(k);
      if (a.revealed.count(z) || !occ.data[k]) continue;
      for (const auto& b2 : a.bad) EXPECT_GT((z - b2).cwiseAbs().maxCoeff(), 2);
    }
  }
}

TEST(Reveal, RejectsBadInput) {
  SiteField f = SiteField::filled(kLo, kHi, 0);
  f.data[0] = 3;
  EXPECT_THROW(reveal(f, Occupancy::filled(kLo, kHi, 0)), ValidationError);
  EXPECT_THROW(reveal(SiteField::filled(kLo, kHi, 0), Occupancy::filled(kLo, Site2(5, 5), 0)), ValidationError);
  EXPECT_THROW(SiteField::filled(Site2(1, 1), Site2(0, 0), 0), ValidationError);
}

TEST(Clusters, Components) {
  SiteSet r = block(-2, 2, -2, 2);
  r.insert(Site2(5, 5));
  r.insert(Site2(9, 9));  // outside the window
  const auto st = cluster_stats(r, Site2(-5, -5), Site2(5, 5));
  EXPECT_EQ(st.sizes, (std::vector<std::size_t>{25, 1}));
  EXPECT_EQ(st.window_sites, 121u);
  EXPECT_DOUBLE_EQ(st.density, 26.0 / 121);
  EXPECT_DOUBLE_EQ(st.largest_fraction, 25.0 / 121);
  EXPECT_TRUE(cluster_stats({}, Site2(0, 0), Site2(3, 3)).sizes.empty());
}

TEST(Assemble, X3FromRevealedSites) {
  const double s = 2;
  const auto split = sprinkle_split<2>(Box<2>::centered(20), s, DirectionLaw{}, 4);
  EXPECT_EQ(assemble_x3(split.x1, split.x2, {}, s).size(), split.x1.size());
  SiteSet all;
  for (const auto& p : split.x2) all.insert(site_of<2>(p.position, s));
  EXPECT_EQ(assemble_x3(split.x1, split.x2, all, s).size(), split.x1.size() + split.x2.size());
  EXPECT_TRUE(unrevealed_by_site(split.x2, all, s).empty());
  std::size_t total = 0;
  for (const auto& [z, pts] : unrevealed_by_site(split.x2, {}, s)) {
    total += pts.size();
    for (const auto& p : pts) EXPECT_EQ(site_of<2>(p.position, s), z);
  }
  EXPECT_EQ(total, split.x2.size());
}

TEST(Classify, NoSprinklingIsAllGood) {
  const double s = 2;
  const auto x1 = sample_poisson<2>(Box<2>::centered(20), 1.0, DirectionLaw{}, 1);
  const Configuration2 x2({}, x1.window());
  const auto [good, perfect] = lily_checkers(DevicePrecondition::None);
  const auto f = classify_sites(x1, x2, s, Site2(-2, -2), Site2(2, 2), good, perfect);
  for (auto v : f.data) EXPECT_EQ(v, 0);
}

TEST(Classify, PlantedDeviceIsPerfectAndNoiseIsBad) {
  const double s = 4;
  const auto [good, perfect] = lily_checkers(DevicePrecondition::None);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto x1 = sample_poisson<2>(Box<2>::centered(28), 1.0, DirectionLaw{}, seed);
    std::vector<Site2> skipped;
    const auto x2 = plant_devices(x1, {Site2(0, 0)}, s, DevicePrecondition::None, seed, 1000000, &skipped);
    if (!skipped.empty()) continue;
    auto f = classify_sites(x1, x2, s, Site2(-1, -1), Site2(1, 1), good, perfect);
    EXPECT_EQ(f.at(Site2(0, 0)), 1);
    EXPECT_EQ(f.at(Site2(1, 0)), 0);
    // One extra sprinkled point in the site breaks the device.
    std::vector<MarkedPoint<2>> noisy(x2.points());
    noisy.push_back({Vec2(0.123, -0.456), Mark::direction(Direction::NegX), 5000000});
    f = classify_sites(x1, Configuration2(noisy, x2.window()), s, Site2(-1, -1), Site2(1, 1), good, perfect);
    EXPECT_EQ(f.at(Site2(0, 0)), 2);
    return;
  }
  FAIL() << "no seed produced a device";
}

TEST(Incremental, DeviceAtOriginPassesOnSeparatedBulk) {
  const double s = 8;
  int tested = 0;
  for (std::uint64_t r = 0; r < 20000 && tested < 2; ++r) {
    const auto x1 = sample_poisson<2>(Box<2>::centered(3 * s), 1.0, DirectionLaw{}, replicate_seed(12, r));
    if (!event_A8(x1, s)) continue;
    const auto x2 = plant_devices(x1, {Site2(0, 0)}, s, DevicePrecondition::Separation, r, 1000000);
    if (x2.empty()) continue;
    const auto by_site = unrevealed_by_site(x2, {}, s);
    const auto rep = incremental_check(x1, by_site, {Site2(0, 0)}, lily_builder(), s, {}, Box<2>::centered(3 * s));
    EXPECT_TRUE(rep.passed());
    EXPECT_EQ(rep.steps, 1u);
    EXPECT_GT(rep.switched, 0u);
    ++tested;
  }
  EXPECT_EQ(tested, 2);
}

TEST(Incremental, FinalGraphIndependentOfOrder) {
  const double s = 4;
  const auto x1 = sample_poisson<2>(Box<2>::centered(5 * s), 1.0, DirectionLaw{}, 3);
  std::vector<Site2> sites;
  for (int x = -1; x <= 1; ++x)
    for (int y = -1; y <= 1; ++y) sites.push_back(Site2(x, y));
  const auto x2 = plant_devices(x1, sites, s, DevicePrecondition::None, 3, 1000000);
  ASSERT_FALSE(x2.empty());
  const auto by_site = unrevealed_by_site(x2, {}, s);
  const Box<2> analysis = Box<2>::centered(3 * s);
  const auto a = incremental_check(x1, by_site, random_order(sites, 1), lily_builder(), s, {}, analysis);
  for (std::uint64_t seed : {2u, 3u}) {
    const auto b = incremental_check(x1, by_site, random_order(sites, seed), lily_builder(), s, {}, analysis);
    EXPECT_EQ(a.final_next, b.final_next);
    EXPECT_EQ(a.steps, b.steps);
  }
  EXPECT_EQ(random_order(sites, 7), random_order(sites, 7));
}

TEST(Incremental, Preconditions) {
  const double s = 4;
  const auto x1 = sample_poisson<2>(Box<2>::centered(12), 1.0, DirectionLaw{}, 3);
  const std::map<Site2, std::vector<MarkedPoint<2>>, SiteLess> none;
  const Box<2> analysis = Box<2>::centered(12);
  EXPECT_THROW(incremental_check(x1, none, {Site2(0, 0)}, lily_builder(), s, {Site2(0, 0)}, analysis),
               PreconditionError);
  EXPECT_THROW(incremental_check(x1, none, {Site2(0, 0), Site2(0, 0)}, lily_builder(), s, {}, analysis),
               PreconditionError);
  const auto rep = incremental_check(x1, none, {Site2(1, 0)}, lily_builder(), s, {}, analysis);
  EXPECT_TRUE(rep.passed());
  EXPECT_EQ(rep.steps, 0u);
  EXPECT_EQ(rep.switched, 0u);
}

TEST(Checkers, KnnPerfectNeedsDenseShell) {
  const KnnModel m = KnnModel::uniform(1);
  const double s = 1.2;
  const auto [good, perfect] = knn_checkers(m);
  const auto x1 = sample_poisson<2>(Box<2>::centered(12), 60.0, m.law(), 5);
  const Configuration2 empty({}, x1.window());
  EXPECT_FALSE(perfect(x1, empty, Site2(0, 0), s));
}
