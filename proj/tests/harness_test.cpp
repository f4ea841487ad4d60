#include <gtest/gtest.h>

#include <atomic>
#include <cmath>

#include "dwre/harness.hpp"
#include "dwre/stats.hpp"

using namespace dwre;

TEST(Stats, WilsonInterval) {
  const Proportion p = wilson(0, 10);
  EXPECT_DOUBLE_EQ(p.estimate, 0);
  EXPECT_DOUBLE_EQ(p.lo, 0);
  EXPECT_NEAR(p.hi, 0.2775, 1e-4);
  const Proportion q = wilson(50, 100);
  EXPECT_NEAR(q.lo, 0.4038, 1e-4);
  EXPECT_NEAR(q.hi, 0.5962, 1e-4);
  EXPECT_NEAR(q.standard_error(), 0.05, 1e-12);
  EXPECT_TRUE(q.covers(0.5));
  EXPECT_FALSE(q.covers(0.7));
}

TEST(Stats, LinearFitExact) {
  const LinearFit f = linear_fit({0, 1, 2, 3}, {1, -1, -3, -5});
  EXPECT_NEAR(f.slope, -2, 1e-14);
  EXPECT_NEAR(f.intercept, 1, 1e-14);
  EXPECT_NEAR(f.r2, 1, 1e-14);
  EXPECT_EQ(f.n, 4u);
}

TEST(Stats, SurvivalAndGeometricTail) {
  EXPECT_EQ(survival({2, 1, 1}), (std::vector<double>{1.0, 0.5, 0.25}));
  // Geometric histogram: log-survival is exactly linear with slope log(1/2).
  std::vector<std::size_t> h;
  for (int t = 0; t < 20; ++t) h.push_back(static_cast<std::size_t>(std::ldexp(1.0, 19 - t)));
  h.push_back(1);
  const LinearFit f = log_survival_fit(h);
  EXPECT_NEAR(f.slope, std::log(0.5), 1e-12);
  EXPECT_NEAR(f.r2, 1, 1e-12);
}

TEST(Stats, BootstrapCoversMean) {
  std::vector<double> x;
  for (int i = 0; i < 200; ++i) x.push_back(uniform(3, static_cast<std::uint64_t>(i)));
  auto mean = [&](const std::vector<std::size_t>& idx) {
    double s = 0;
    for (auto i : idx) s += x[i];
    return s / static_cast<double>(idx.size());
  };
  const Interval a = bootstrap(x.size(), mean, 400, 9);
  const Interval b = bootstrap(x.size(), mean, 400, 9);
  EXPECT_EQ(a.lo, b.lo);
  EXPECT_LT(a.lo, 0.5);
  EXPECT_GT(a.hi, 0.5);
}

TEST(Stats, ParallelForMatchesSerial) {
  std::vector<double> a(1000), b(1000);
  parallel_for(a.size(), 1, [&](std::size_t i) { a[i] = std::sin(static_cast<double>(i)); });
  parallel_for(b.size(), 4, [&](std::size_t i) { b[i] = std::sin(static_cast<double>(i)); });
  EXPECT_EQ(a, b);
  EXPECT_THROW(parallel_for(10, 3, [](std::size_t i) { if (i == 7) throw ValidationError("x"); }), ValidationError);
}

TEST(Config, ParseAndRoundTrip) {
  const ExperimentConfig c = parse_config(R"({"version": 1, "kind": "event_curve", "model": "knn", "K": 2,
                                              "event": "A2", "s_grid": [3, 4], "replicates": 10})");
  EXPECT_EQ(c.kind, "event_curve");
  EXPECT_EQ(c.K, 2);
  EXPECT_EQ(c.knn().pi, (std::vector<double>{0.5, 0.5}));
  const ExperimentConfig d = ExperimentConfig::from_json(c.to_json());
  EXPECT_EQ(d.to_json(), c.to_json());
  EXPECT_DOUBLE_EQ(c.effective_padding(), 5.0);
}

TEST(Config, Rejections) {
  EXPECT_THROW(parse_config(R"({"kind": "percolation"})"), ValidationError);
  EXPECT_THROW(parse_config(R"({"version": 2})"), ValidationError);
  EXPECT_THROW(parse_config(R"({"version": 1, "colour": "red"})"), ValidationError);
  EXPECT_THROW(parse_config(R"({"version": 1, "s": "big"})"), ValidationError);
  EXPECT_THROW(parse_config(R"({"version": 1, "s": -1})"), ValidationError);
  EXPECT_THROW(parse_config(R"({"version": 1, "kind": "magic"})"), ValidationError);
  EXPECT_THROW(parse_config(R"({"version": 1, "kind": "event_curve"})"), ValidationError);
  EXPECT_THROW(parse_config("not json"), ValidationError);
  EXPECT_THROW(load_config("/nonexistent/config.json"), ValidationError);
}

TEST(Experiments, PercolationIsReproducibleAndThreadInvariant) {
  ExperimentConfig c;
  c.kind = "percolation";
  c.model = "knn";
  c.K = 1;
  c.s = 20;
  c.replicates = 6;
  const Json a = run_experiment(c).to_json(false);
  const Json b = run_experiment(c).to_json(false);
  EXPECT_EQ(a, b);
  c.threads = 3;
  Json t = run_experiment(c).to_json(false);
  t["config"]["threads"] = 1;
  EXPECT_EQ(a, t);
  EXPECT_EQ(a["estimates"]["all_stuck"], true);
  EXPECT_EQ(a["seeds"].size(), 6u);
}

TEST(Experiments, LilypondPercolationStuck) {
  ExperimentConfig c;
  c.kind = "percolation";
  c.model = "lilypond";
  c.s = 20;
  c.padding = 10;
  c.replicates = 4;
  const ExperimentReport r = run_experiment(c);
  EXPECT_EQ(r.estimates["all_stuck"], true);
  EXPECT_LT(r.estimates["censored_fraction"]["estimate"].get<double>(), 0.1);
  EXPECT_EQ(r.rows.size(), 4u);
}

TEST(Experiments, A2CurveMatchesClosedForm) {
  ExperimentConfig c;
  c.kind = "event_curve";
  c.model = "knn";
  c.event = "A2";
  c.s_grid = {3, 5};
  c.replicates = 2000;
  const ExperimentReport r = run_experiment(c);
  for (const auto& point : r.estimates["curve"]) {
    EXPECT_NEAR(point["analytic"].get<double>(), a2_probability(point["s"].get<double>(), 1.0), 1e-15);
    EXPECT_TRUE(point["analytic_in_ci"].get<bool>());
  }
}

TEST(Experiments, ChainBoundHolds) {
  ExperimentConfig c;
  c.kind = "chain_bound";
  c.chain_grid = {{1, 0.5, 1}, {2, 1, 2}};
  c.replicates = 500;
  const ExperimentReport r = run_experiment(c);
  EXPECT_EQ(r.estimates["any_violation"], false);
  EXPECT_EQ(r.estimates["grid"].size(), 2u);
}

TEST(Experiments, UsSuiteSkipsWhenPreconditionFails) {
  ExperimentConfig c;
  c.kind = "us_suite";
  c.s = 4;
  c.precondition = "full";
  c.replicates = 50;
  const ExperimentReport r = run_experiment(c);
  EXPECT_EQ(r.estimates["attempted"], 50);
  EXPECT_EQ(r.estimates["precondition_held"], 0);
  EXPECT_EQ(r.estimates["skipped"], 50);
}

TEST(Experiments, UsSuiteSeparation) {
  ExperimentConfig c;
  c.kind = "us_suite";
  c.s = 8;
  c.precondition = "separation";
  c.replicates = 10000;
  c.target_good = 3;
  const ExperimentReport r = run_experiment(c);
  EXPECT_EQ(r.estimates["precondition_held"], 3);
  EXPECT_DOUBLE_EQ(r.estimates["us_pass"]["estimate"].get<double>(), 1.0);
  EXPECT_DOUBLE_EQ(r.estimates["incremental_pass"]["estimate"].get<double>(), 1.0);
}

TEST(Experiments, RevealClusters) {
  ExperimentConfig c;
  c.kind = "reveal";
  c.model = "lilypond";
  c.precondition = "none";
  c.s_grid = {2, 4};
  c.sites_half = 3;
  c.replicates = 4;
  const ExperimentReport r = run_experiment(c);
  ASSERT_EQ(r.estimates["curve"].size(), 2u);
  const double d2 = r.estimates["curve"][0]["mean_density"].get<double>();
  const double d4 = r.estimates["curve"][1]["mean_density"].get<double>();
  EXPECT_GE(d2, d4);
  EXPECT_EQ(r.estimates["sites"], 49);
}

TEST(Events, EvaluateByName) {
  ExperimentConfig c;
  const Configuration2 empty({}, Box<2>::centered(30));
  EXPECT_TRUE(evaluate_event("A2", empty, 10, c));
  EXPECT_FALSE(evaluate_event("A6", empty, 10, c));
  EXPECT_THROW(evaluate_event("A99", empty, 10, c), ValidationError);
  EXPECT_NEAR(a2_probability(5, 1), std::exp(-(25 - std::pow(5 - 1.0 / 25, 2))), 1e-15);
}
