// Acceptance run: one PASS/FAIL line per criterion, tolerances fixed below.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "dwre/harness.hpp"
#include "dwre/sprinkling.hpp"

using namespace dwre;

namespace {

constexpr double kRelTolF = 1e-12;
constexpr double kQuadTol = 1e-6;
constexpr int kQuadGrid = 4000;
constexpr int kQuadGridCoarse = 2000;
constexpr double kCensoredMax = 0.05;
constexpr double kR2Min = 0.9;
constexpr double kSeTimes = 3.0;
constexpr std::size_t kDeviceTarget = 500;

int failures = 0;

void report(const std::string& id, bool ok, const std::string& detail) {
  std::printf("%s  %-4s %s\n", ok ? "PASS" : "FAIL", id.c_str(), detail.c_str());
  std::fflush(stdout);
  failures += !ok;
}

void note(const std::string& id, const std::string& detail) {
  std::printf("INFO  %-4s %s\n", id.c_str(), detail.c_str());
  std::fflush(stdout);
}

class Timer {
 public:
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count(); }

 private:
  std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// ---------------------------------------------------------------------------

void criteria_solver() {
  const Timer t;
  std::size_t instances = 0, mismatches = 0, verify_fail = 0, hardcore = 0;
  for (std::uint64_t r = 0; instances < 500; ++r) {
    const auto phi = sample_poisson<2>(Box<2>::centered(12), 1.0, DirectionLaw{}, replicate_seed(101, r));
    if (phi.empty() || phi.size() > 200) continue;
    ++instances;
    const auto a = solve(phi);
    const auto b = oracle_solve(phi);
    bool same = a.size() == b.size();
    for (std::size_t i = 0; same && i < a.size(); ++i) {
      same = a.stopper[i] == b.stopper[i] && a.finite(i) == b.finite(i);
      if (same && a.finite(i)) same = std::abs(a.f[i] - b.f[i]) <= kRelTolF * std::abs(b.f[i]);
    }
    mismatches += !same;
    verify_fail += !verify_solution(phi, a);
    hardcore += count_hardcore_violations(phi, a);
  }
  const double secs = t.seconds();
  report("C1", mismatches == 0 && verify_fail == 0 && secs < 60,
         fmt("solve vs oracle on %zu instances: %zu mismatches, %zu verify failures, %.2f s (limit 60 s)", instances,
             mismatches, verify_fail, secs));
  report("C2", hardcore == 0, fmt("hard-core intersections across the suite: %zu", hardcore));
}

void criteria_percolation() {
  const Timer t;
  ExperimentConfig c;
  c.kind = "percolation";
  c.model = "lilypond";
  c.lambda = 1;
  c.s = 100;
  c.padding = 20;
  c.replicates = 1000;
  c.base_seed = 2024;
  const auto suite = run_walk_suite(c);
  const ExperimentReport main = percolation_report(c, suite);
  const auto& e = main.estimates;
  const bool all_stuck = e["all_stuck"].get<bool>();
  const double stuck = e["stuck_fraction"]["estimate"].get<double>();
  const double cens20 = e["censored_fraction"]["estimate"].get<double>();

  std::vector<double> pads{2, 5, 10}, cens;
  for (double p : pads) {
    ExperimentConfig d = c;
    d.padding = p;
    d.replicates = 200;
    cens.push_back(run_percolation(d).estimates["censored_fraction"]["estimate"].get<double>());
  }
  pads.push_back(20);
  cens.push_back(cens20);
  bool decreasing = true;
  for (std::size_t i = 1; i < cens.size(); ++i) decreasing = decreasing && cens[i] < cens[i - 1];

  bool knn_stuck = true;
  std::string knn_detail;
  for (int K : {1, 2, 3}) {
    ExperimentConfig k = c;
    k.model = "knn";
    k.K = K;
    k.padding.reset();
    const ExperimentReport r = run_percolation(k);
    const bool ok = r.estimates["all_stuck"].get<bool>();
    knn_stuck = knn_stuck && ok;
    knn_detail += fmt(" K=%d: %.6f (%zu walks)", K, r.estimates["stuck_fraction"]["estimate"].get<double>(),
                      r.estimates["uncensored"].get<std::size_t>());
  }
  const double secs = t.seconds();

  report("C3a", all_stuck && stuck == 1.0,
         fmt("lilypond uncensored stuck fraction %.6f over %zu walks, 1000 replicates", stuck,
             e["uncensored"].get<std::size_t>()));
  report("C3b", cens20 < kCensoredMax && decreasing,
         fmt("censored fraction by padding 2/5/10/20: %.5f %.5f %.5f %.5f (limit %.2f, decreasing)", cens[0], cens[1],
             cens[2], cens[3], kCensoredMax));
  report("C3c", knn_stuck, "knn stuck fraction:" + knn_detail);
  report("C3d", secs < 600, fmt("percolation suite %.1f s (limit 600 s)", secs));

  const double slope = e["log_survival_fit"]["slope"].get<double>();
  const double r2 = e["log_survival_fit"]["r2"].get<double>();
  report("C4", slope < 0 && r2 > kR2Min,
         fmt("pooled log-survival fit: slope %.4f, R^2 %.4f over %zu points (need slope < 0, R^2 > %.1f)", slope, r2,
             e["log_survival_fit"]["points"].get<std::size_t>(), kR2Min));
}

void criterion_quadrature() {
  const Timer t;
  double worst = 0, worst_coarse = 0;
  for (double b : {0.5, 1.0, 2.0})
    for (int k : {0, 1, 2}) {
      const double exact = intcomp(b, k);
      worst = std::max(worst, std::abs(intcomp_quadrature(b, k, kQuadGrid) / exact - 1));
      worst_coarse = std::max(worst_coarse, std::abs(intcomp_quadrature(b, k, kQuadGridCoarse) / exact - 1));
    }
  const double secs = t.seconds();
  report("C5", worst <= kQuadTol && secs < 5,
         fmt("quadrature (grid %d) vs 4b^(2k+2)/(k+1), 9 pairs: max relative error %.3g (tol %.0e), %.2f s", kQuadGrid, worst,
             kQuadTol, secs));
  note("C5", fmt("grid %d max relative error %.3g", kQuadGridCoarse, worst_coarse));
}

void criterion_chains() {
  const Timer t;
  ExperimentConfig c;
  c.kind = "chain_bound";
  c.replicates = 10000;
  c.base_seed = 6;
  for (double s : {1.0, 2.0})
    for (double b : {0.5, 1.0})
      for (double n : {1.0, 2.0, 3.0}) c.chain_grid.push_back({s, b, n});
  const ExperimentReport r = run_chain_bound(c);
  const double secs = t.seconds();
  bool ok = !r.estimates["any_violation"].get<bool>();
  std::string detail;
  for (const auto& p : r.estimates["grid"])
    detail += fmt(" (%g,%g,%d) %.4f<=%.4f", p["s"].get<double>(), p["b"].get<double>(), p["n"].get<int>(),
                  p["estimate"].get<double>(), p["bound"].get<double>() + kSeTimes * p["se"].get<double>());
  ok = ok && secs < 300;
  report("C6", ok, fmt("P(A6) <= bound + 3SE, 10^4 replicates, %.1f s (limit 300 s):", secs) + detail);
}

void criterion_a2() {
  ExperimentConfig c;
  c.kind = "event_curve";
  c.model = "knn";
  c.event = "A2";
  c.s_grid = {5, 10};
  c.replicates = 10000;
  auto describe = [](const ExperimentReport& r, bool& ok) {
    std::string detail;
    for (const auto& p : r.estimates["curve"]) {
      ok = ok && p["analytic_in_ci"].get<bool>();
      detail += fmt(" s=%g: %.4f [%.4f, %.4f] vs %.4f", p["s"].get<double>(), p["estimate"].get<double>(),
                    p["ci_lo"].get<double>(), p["ci_hi"].get<double>(), p["analytic"].get<double>());
    }
    return detail;
  };
  bool ok = true;
  const std::string detail = describe(run_event_curve(c), ok);
  report("C7", ok, "A2 Monte Carlo vs closed form, 10^4 replicates:" + detail);
  c.s_grid = {10};
  c.replicates = 100000;
  bool big_ok = true;
  const std::string big = describe(run_event_curve(c), big_ok);
  note("C7", fmt("10^5 replicates (%s):", big_ok ? "covered" : "not covered") + big);
}

ExperimentReport us_suite(double s, const std::string& pre, int cap, int target) {
  ExperimentConfig c;
  c.kind = "us_suite";
  c.s = s;
  c.precondition = pre;
  c.replicates = cap;
  c.target_good = target;
  c.base_seed = 8;
  return run_us_suite(c);
}

void criterion_device() {
  // Literal criterion: replicates where the good-site event A_s holds.
  for (double s : {8.0, 12.0}) {
    const ExperimentReport r = us_suite(s, "full", 20000, static_cast<int>(kDeviceTarget));
    const auto held = r.estimates["precondition_held"].get<std::size_t>();
    const bool ok = held >= kDeviceTarget && r.estimates["us_pass"]["estimate"].get<double>() == 1.0 &&
                    r.estimates["incremental_pass"]["estimate"].get<double>() == 1.0;
    report("C8a", ok,
           fmt("s=%g: A_s held in %zu of %zu samples (need %zu passing US and incremental checks); "
               "A_s is not observed at this scale",
               s, held, r.estimates["attempted"].get<std::size_t>(), kDeviceTarget));
  }
  // Same checks on samples satisfying the separation event A8.
  for (double s : {8.0, 12.0}) {
    const Timer t;
    const ExperimentReport r = us_suite(s, "separation", 2000000, static_cast<int>(kDeviceTarget));
    const auto held = r.estimates["precondition_held"].get<std::size_t>();
    const double us = r.estimates["us_pass"]["estimate"].get<double>();
    const double inc = r.estimates["incremental_pass"]["estimate"].get<double>();
    const double cyc = r.estimates["cycles_ok"]["estimate"].get<double>();
    note("C8a", fmt("s=%g separation-conditioned: %zu samples of %zu, US %.4f, incremental %.4f, cycles %.4f, %.1f s", s,
                    held, r.estimates["attempted"].get<std::size_t>(), us, inc, cyc, t.seconds()));
  }
  std::size_t bad = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const Vec2 xi(20 * uniform(seed, 0, 88) - 10, 20 * uniform(seed, 1, 88) - 10);
    const double delta = std::pow(10.0, -4 + 4 * uniform(seed, 2, 88));
    const FourCycle c = make_cycle(xi, delta, seed);
    bad += !is_cycle({c.points.begin(), c.points.end()}, xi, delta);
  }
  report("C8b", bad == 0, fmt("make_cycle/is_cycle round trip: %zu failures in 1000 seeds", bad));
}

SiteSet square(int x0, int x1, int y0, int y1) {
  SiteSet out;
  for (int x = x0; x <= x1; ++x)
    for (int y = y0; y <= y1; ++y) out.insert(Site2(x, y));
  return out;
}

void criterion_reveal() {
  const Site2 lo(-5, -5), hi(5, 5);
  const SiteField zeros = SiteField::filled(lo, hi, 0);
  const Occupancy none = Occupancy::filled(lo, hi, 0);
  const bool empty_ok = reveal(zeros, none).revealed.empty();
  SiteField one = zeros;
  one.at(Site2(0, 0)) = 2;
  Occupancy occ = none;
  occ.at(Site2(0, 0)) = 1;
  const RevealedSet single = reveal(one, occ);
  const bool single_ok = single.revealed == square(-2, 2, -2, 2) && single.bad == SiteSet{Site2(0, 0)};
  report("C9a", empty_ok && single_ok,
         fmt("hand examples: empty field R size %zu, single bad site R size %zu", reveal(zeros, none).revealed.size(),
             single.revealed.size()));

  const double s = 4;
  const int h = 2;
  const Site2 slo(-h, -h), shi(h, h);
  const CheckerPair checkers = lily_checkers(DevicePrecondition::None);
  std::size_t instances = 0, deterministic = 0, replayed = 0, identical = 0, multi_step = 0, skipped_total = 0;
  std::size_t genericity = 0;
  for (std::uint64_t r = 0; instances < 100; ++r) {
    const std::uint64_t seed = replicate_seed(909, r);
    const auto split = sprinkle_split<2>(Box<2>::centered((2 * h + 3) * s), s, DirectionLaw{}, seed);
    std::vector<Site2> sites;
    for (int k = 0; k < 3; ++k)
      sites.push_back(Site2(static_cast<int>(uniform(seed, k, 1) * 5) - 2, static_cast<int>(uniform(seed, k, 2) * 5) - 2));
    std::sort(sites.begin(), sites.end(), SiteLess{});
    sites.erase(std::unique(sites.begin(), sites.end()), sites.end());
    std::vector<Site2> skipped;
    try {
      // Planted devices go on sites the natural sprinkling misses.
      std::vector<Site2> free;
      const auto natural = unrevealed_by_site(split.x2, {}, s);
      for (const auto& z : sites)
        if (!natural.count(z)) free.push_back(z);
      const auto planted = plant_devices(split.x1, free, s, DevicePrecondition::None, seed, 10000000, &skipped);
      skipped_total += skipped.size();
      std::vector<MarkedPoint<2>> x2pts(split.x2.points());
      x2pts.insert(x2pts.end(), planted.points().begin(), planted.points().end());
      const Configuration2 x2(x2pts, split.x2.window());
      const SiteField field = classify_sites(split.x1, x2, s, slo, shi, checkers.good, checkers.perfect);
      const Occupancy oc = occupancy(x2, s, slo, shi);
      const RevealedSet a = reveal(field, oc), b = reveal(field, oc);
      const auto x3 = assemble_x3(split.x1, x2, a.revealed, s);
      const auto by_site = unrevealed_by_site(x2, a.revealed, s);
      std::vector<Site2> order;
      for (const auto& [z, pts] : by_site) order.push_back(z);
      const Box<2> analysis = Box<2>::centered((2 * h + 1) * s);
      std::vector<IncrementalReport> reps;
      for (std::uint64_t k = 0; k < 3; ++k)
        reps.push_back(incremental_check(x3, by_site, random_order(order, derive(seed, k, 0x04d)), lily_builder(), s,
                                         a.revealed, analysis));
      ++instances;
      deterministic += a.revealed == b.revealed && a.trace == b.trace;
      replayed += replay(field, a.trace) == a.revealed;
      identical += reps[0].final_next == reps[1].final_next && reps[0].final_next == reps[2].final_next;
      multi_step += reps[0].steps >= 2;
    } catch (const GenericityError&) {
      ++genericity;
    }
  }
  report("C9b", deterministic == instances && replayed == instances,
         fmt("reveal determinism %zu/%zu, replay %zu/%zu", deterministic, instances, replayed, instances));
  report("C9c", identical == instances,
         fmt("incremental final graph identical across 3 orders: %zu/%zu instances (%zu with >= 2 added sites, "
             "%zu planted sites skipped, %zu samples redrawn for genericity)",
             identical, instances, multi_step, skipped_total, genericity));
}

void criterion_monotone() {
  const struct {
    const char* event;
    const char* model;
    int K;
    std::vector<double> grid;
  } curves[] = {{"A1", "knn", 1, {24, 28, 32}}, {"A8", "lilypond", 1, {16, 32, 64}}};
  for (const auto& cv : curves) {
    ExperimentConfig c;
    c.kind = "event_curve";
    c.event = cv.event;
    c.model = cv.model;
    c.K = cv.K;
    c.s_grid = cv.grid;
    c.replicates = 1000;
    c.base_seed = 10;
    const ExperimentReport r = run_event_curve(c);
    std::vector<double> est;
    std::string detail;
    for (const auto& p : r.estimates["curve"]) {
      est.push_back(p["estimate"].get<double>());
      detail += fmt(" s=%g: %.3f", p["s"].get<double>(), est.back());
    }
    bool inc = true;
    for (std::size_t i = 1; i < est.size(); ++i) inc = inc && est[i] > est[i - 1];
    report("C10", inc, fmt("P(%s) strictly increasing, 1000 replicates per point:", cv.event) + detail);
  }
}

}  // namespace

int main() {
  const Timer total;
  criteria_solver();
  criterion_quadrature();
  criterion_a2();
  criterion_chains();
  criterion_monotone();
  criterion_reveal();
  criteria_percolation();
  criterion_device();
  std::printf("%s  %d failing line(s), %.1f s total\n", failures ? "FAIL" : "PASS", failures, total.seconds());
  return failures ? 1 : 0;
}
