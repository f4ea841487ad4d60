#include "dwre/harness.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "dwre/rng.hpp"
#include "dwre/sprinkling.hpp"

namespace dwre {

namespace {

const std::set<std::string> kKinds = {"percolation", "hop_tail", "event_curve", "chain_bound", "us_suite", "reveal"};
const std::set<std::string> kKnnEvents = {"A1", "A2", "A3", "A4", "A_knn"};
const std::set<std::string> kLilyEvents = {"A5", "A6", "A7", "A8", "A_lily"};

void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}

bool finite_positive(double x) { return std::isfinite(x) && x > 0; }

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

Json proportion_json(const Proportion& p) {
  return Json{{"estimate", p.estimate}, {"ci_lo", p.lo}, {"ci_hi", p.hi}, {"successes", p.successes},
              {"trials", p.trials}};
}

ExperimentReport make_report(const ExperimentConfig& cfg) {
  ExperimentReport r;
  r.kind = cfg.kind;
  r.config = cfg.to_json();
  for (int i = 0; i < cfg.replicates; ++i)
    r.seeds.push_back(replicate_seed(cfg.base_seed, static_cast<std::uint64_t>(i)));
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// Config

void ExperimentConfig::validate() const {
  require(version == kConfigVersion, "unsupported config version " + std::to_string(version));
  require(kKinds.count(kind) > 0, "unknown experiment kind '" + kind + "'");
  require(model == "knn" || model == "lilypond", "model must be knn or lilypond");
  require(finite_positive(lambda), "lambda must be positive");
  require(finite_positive(s), "s must be positive (empty analysis window)");
  require(!padding || (std::isfinite(*padding) && *padding >= 0), "padding must be >= 0");
  require(K >= 1, "K must be >= 1");
  if (!pi.empty()) {
    require(static_cast<int>(pi.size()) == K, "pi must have K entries");
    validate_law(RankLaw{pi});
  }
  require(replicates >= 1, "replicates must be >= 1");
  require(threads >= 1, "threads must be >= 1");
  require(alpha > 0 && alpha < 1, "alpha must lie in (0, 1)");
  require(finite_positive(b), "b must be positive");
  require(n >= 0, "n must be >= 0");
  require(precondition == "full" || precondition == "separation" || precondition == "none",
          "precondition must be full, separation or none");
  require(target_good >= 0 && natural_replicates >= 0 && sites_half >= 0, "counts must be >= 0");
  require(finite_positive(natural_s) && natural_s > 1, "natural_s must exceed 1");
  require(bootstrap >= 1, "bootstrap must be >= 1");
  for (double x : s_grid) require(finite_positive(x), "s_grid entries must be positive");
  for (const auto& e : chain_grid) {
    require(finite_positive(e[0]) && finite_positive(e[1]), "chain_grid s and b must be positive");
    require(e[2] >= 0 && e[2] == std::floor(e[2]), "chain_grid n must be a non-negative integer");
  }
  require(kKnnEvents.count(event) || kLilyEvents.count(event), "unknown event '" + event + "'");
  if (kind == "event_curve") require(!s_grid.empty(), "event_curve needs s_grid");
  if (kind == "chain_bound") require(!chain_grid.empty(), "chain_bound needs chain_grid");
  if (kind == "us_suite") require(model == "lilypond", "us_suite runs on the lilypond model");
  if (kind == "reveal" && model == "knn") require(s > 1, "reveal needs s > 1");
}

double ExperimentConfig::effective_padding() const {
  if (padding) return *padding;
  return model == "knn" ? 5 / std::sqrt(lambda) : 20.0;
}

KnnModel ExperimentConfig::knn() const {
  KnnModel m = KnnModel::uniform(K);
  if (!pi.empty()) m.pi = pi;
  return m;
}

MarkLaw ExperimentConfig::law() const {
  if (model == "lilypond") return DirectionLaw{};
  return knn().law();
}

DevicePrecondition ExperimentConfig::device_precondition() const {
  if (precondition == "full") return DevicePrecondition::Full;
  if (precondition == "none") return DevicePrecondition::None;
  return DevicePrecondition::Separation;
}

Json ExperimentConfig::to_json() const {
  Json j;
  j["version"] = version;
  j["kind"] = kind;
  j["model"] = model;
  j["lambda"] = lambda;
  j["s"] = s;
  if (padding) j["padding"] = *padding;
  j["K"] = K;
  j["pi"] = pi;
  j["replicates"] = replicates;
  j["base_seed"] = base_seed;
  j["threads"] = threads;
  j["event"] = event;
  j["s_grid"] = s_grid;
  j["alpha"] = alpha;
  j["b"] = b;
  j["n"] = n;
  j["chain_grid"] = chain_grid;
  j["precondition"] = precondition;
  j["target_good"] = target_good;
  j["natural_replicates"] = natural_replicates;
  j["natural_s"] = natural_s;
  j["sites_half"] = sites_half;
  j["bootstrap"] = bootstrap;
  return j;
}

ExperimentConfig ExperimentConfig::from_json(const Json& j) {
  require(j.is_object(), "config must be an object");
  require(j.contains("version"), "config needs a version");
  ExperimentConfig c;
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "version") c.version = v.get<int>();
      else if (key == "kind") c.kind = v.get<std::string>();
      else if (key == "model") c.model = v.get<std::string>();
      else if (key == "lambda") c.lambda = v.get<double>();
      else if (key == "s") c.s = v.get<double>();
      else if (key == "padding") c.padding = v.get<double>();
      else if (key == "K") c.K = v.get<int>();
      else if (key == "pi") c.pi = v.get<std::vector<double>>();
      else if (key == "replicates") c.replicates = v.get<int>();
      else if (key == "base_seed") c.base_seed = v.get<std::uint64_t>();
      else if (key == "threads") c.threads = v.get<int>();
      else if (key == "event") c.event = v.get<std::string>();
      else if (key == "s_grid") c.s_grid = v.get<std::vector<double>>();
      else if (key == "alpha") c.alpha = v.get<double>();
      else if (key == "b") c.b = v.get<double>();
      else if (key == "n") c.n = v.get<int>();
      else if (key == "chain_grid") c.chain_grid = v.get<std::vector<std::array<double, 3>>>();
      else if (key == "precondition") c.precondition = v.get<std::string>();
      else if (key == "target_good") c.target_good = v.get<int>();
      else if (key == "natural_replicates") c.natural_replicates = v.get<int>();
      else if (key == "natural_s") c.natural_s = v.get<double>();
      else if (key == "sites_half") c.sites_half = v.get<int>();
      else if (key == "bootstrap") c.bootstrap = v.get<int>();
      else throw ValidationError("unknown config key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("bad config value: ") + e.what());
  }
  c.validate();
  return c;
}

ExperimentConfig parse_config(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("config is not valid JSON: ") + e.what());
  }
  return ExperimentConfig::from_json(j);
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

Json ExperimentReport::to_json(bool with_wall_clock) const {
  Json j;
  j["kind"] = kind;
  j["config"] = config;
  j["estimates"] = estimates;
  j["seeds"] = seeds;
  if (with_wall_clock) j["wall_seconds"] = wall_seconds;
  return j;
}

// ---------------------------------------------------------------------------
// Walk suite

std::vector<WalkReplicate> run_walk_suite(const ExperimentConfig& cfg) {
  cfg.validate();
  const double m = cfg.effective_padding();
  const Box<2> window = Box<2>::centered(cfg.s + 2 * m);
  const Box<2> analysis = Box<2>::centered(cfg.s);
  const MarkLaw law = cfg.law();
  const KnnModel model = cfg.knn();
  std::vector<WalkReplicate> out(static_cast<std::size_t>(cfg.replicates));
  parallel_for(out.size(), cfg.threads, [&](std::size_t r) {
    WalkReplicate& rep = out[r];
    rep.seed = replicate_seed(cfg.base_seed, r);
    const Configuration2 phi = sample_poisson<2>(window, cfg.lambda, law, rep.seed);
    rep.points = phi.size();
    if (phi.empty()) return;
    const WalkGraph<2> g = cfg.model == "lilypond" ? build_lily_graph(phi, solve(phi))
                                                   : build_knn_graph(phi, model, KnnCensor::Window);
    std::vector<std::uint8_t> include(phi.size());
    for (std::size_t i = 0; i < phi.size(); ++i) include[i] = analysis.contains(phi[i].position);
    rep.stats = basin_stats(g, include);
  });
  return out;
}

namespace {

std::vector<std::size_t> pooled_histogram(const std::vector<WalkReplicate>& suite,
                                          const std::vector<std::size_t>& which) {
  std::vector<std::size_t> h;
  for (std::size_t k : which) {
    const auto& t = suite[k].stats.tail_histogram;
    if (h.size() < t.size()) h.resize(t.size(), 0);
    for (std::size_t i = 0; i < t.size(); ++i) h[i] += t[i];
  }
  return h;
}

std::vector<std::size_t> all_indices(std::size_t n) {
  std::vector<std::size_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = i;
  return v;
}

Json fit_json(const LinearFit& f) { return Json{{"slope", f.slope}, {"intercept", f.intercept}, {"r2", f.r2}, {"points", f.n}}; }

}  // namespace

ExperimentReport percolation_report(const ExperimentConfig& cfg, const std::vector<WalkReplicate>& suite) {
  ExperimentReport rep = make_report(cfg);
  std::size_t counted = 0, censored = 0, stuck = 0;
  std::map<int, std::size_t> cycles;
  for (std::size_t r = 0; r < suite.size(); ++r) {
    const BasinStats& st = suite[r].stats;
    counted += st.counted;
    censored += st.censored;
    stuck += st.stuck;
    int max_cycle = 0;
    for (const auto& b : st.basins) {
      cycles[b.cycle_length] += b.size;
      max_cycle = std::max(max_cycle, b.cycle_length);
    }
    rep.rows.push_back(Json{{"replicate", r}, {"seed", suite[r].seed}, {"points", suite[r].points},
                            {"counted", st.counted}, {"censored", st.censored}, {"stuck", st.stuck},
                            {"max_tail", st.tail_histogram.empty() ? 0 : st.tail_histogram.size() - 1},
                            {"max_cycle", max_cycle}});
  }
  const std::vector<std::size_t> hist = pooled_histogram(suite, all_indices(suite.size()));
  Json cyc = Json::object();
  for (const auto& [len, count] : cycles) cyc[std::to_string(len)] = count;
  rep.estimates["padding"] = cfg.effective_padding();
  rep.estimates["walks"] = counted;
  rep.estimates["uncensored"] = counted - censored;
  rep.estimates["stuck"] = stuck;
  rep.estimates["stuck_fraction"] = proportion_json(wilson(stuck, counted - censored));
  rep.estimates["all_stuck"] = stuck == counted - censored;
  rep.estimates["censored_fraction"] = proportion_json(wilson(censored, counted));
  rep.estimates["cycle_length_weights"] = cyc;
  rep.estimates["tail_histogram"] = hist;
  rep.estimates["log_survival_fit"] = fit_json(log_survival_fit(hist));
  return rep;
}

ExperimentReport hop_tail_report(const ExperimentConfig& cfg, const std::vector<WalkReplicate>& suite) {
  ExperimentReport rep = make_report(cfg);
  const std::vector<std::size_t> hist = pooled_histogram(suite, all_indices(suite.size()));
  const LinearFit fit = log_survival_fit(hist);
  const Interval ci = bootstrap(
      suite.size(), [&](const std::vector<std::size_t>& idx) { return log_survival_fit(pooled_histogram(suite, idx)).slope; },
      cfg.bootstrap, derive(cfg.base_seed, 0xb007));
  for (std::size_t r = 0; r < suite.size(); ++r)
    rep.rows.push_back(Json{{"replicate", r}, {"seed", suite[r].seed}, {"tail_histogram", suite[r].stats.tail_histogram}});
  rep.estimates["tail_histogram"] = hist;
  rep.estimates["survival"] = survival(hist);
  rep.estimates["log_survival_fit"] = fit_json(fit);
  rep.estimates["slope_ci"] = Json{{"lo", ci.lo}, {"hi", ci.hi}, {"resamples", cfg.bootstrap}};
  return rep;
}

ExperimentReport run_percolation(const ExperimentConfig& cfg) {
  const Stopwatch sw;
  ExperimentReport rep = percolation_report(cfg, run_walk_suite(cfg));
  rep.wall_seconds = sw.seconds();
  return rep;
}

ExperimentReport run_hop_tail(const ExperimentConfig& cfg) {
  const Stopwatch sw;
  ExperimentReport rep = hop_tail_report(cfg, run_walk_suite(cfg));
  rep.wall_seconds = sw.seconds();
  return rep;
}

// ---------------------------------------------------------------------------
// Events

bool evaluate_event(const std::string& event, const Configuration2& phi, double s, const ExperimentConfig& cfg) {
  if (event == "A1") return event_A1(phi, s, cfg.knn());
  if (event == "A2") return event_A2(phi, s);
  if (event == "A3") return event_A3(phi, s);
  if (event == "A4") return event_A4(phi, s);
  if (event == "A_knn") return event_A_knn(phi, s, cfg.knn());
  if (event == "A5") return event_A5(phi, s, cfg.alpha);
  if (event == "A6") return event_A6(phi, s, cfg.b, cfg.n);
  if (event == "A7") return event_A7(phi, s);
  if (event == "A8") return event_A8(phi, s);
  if (event == "A_lily") return event_A_lily(phi, s);
  throw ValidationError("unknown event '" + event + "'");
}

double a2_probability(double s, double lambda) {
  const double inner = s - std::pow(s, -2.0);
  return std::exp(-lambda * (s * s - inner * inner));
}

ExperimentReport run_event_curve(const ExperimentConfig& cfg) {
  cfg.validate();
  const Stopwatch sw;
  ExperimentReport rep = make_report(cfg);
  const bool lily = kLilyEvents.count(cfg.event) > 0;
  const MarkLaw law = lily ? MarkLaw(DirectionLaw{}) : MarkLaw(cfg.knn().law());
  Json curve = Json::array();
  for (std::size_t g = 0; g < cfg.s_grid.size(); ++g) {
    const double s = cfg.s_grid[g];
    const double side = cfg.event == "A6" ? std::max(3 * s, s + 2 * cfg.n * cfg.b) : 3 * s;
    std::vector<std::uint8_t> hit(static_cast<std::size_t>(cfg.replicates));
    std::vector<std::uint64_t> seeds(hit.size());
    parallel_for(hit.size(), cfg.threads, [&](std::size_t r) {
      seeds[r] = derive(replicate_seed(cfg.base_seed, r), g, 0xe7e);
      const Configuration2 phi = sample_poisson<2>(Box<2>::centered(side), cfg.lambda, law, seeds[r]);
      hit[r] = evaluate_event(cfg.event, phi, s, cfg);
    });
    std::size_t k = 0;
    for (std::size_t r = 0; r < hit.size(); ++r) {
      k += hit[r];
      rep.rows.push_back(Json{{"s", s}, {"replicate", r}, {"seed", seeds[r]}, {"event", hit[r] != 0}});
    }
    Json point = proportion_json(wilson(k, hit.size()));
    point["s"] = s;
    if (cfg.event == "A2") {
      const double p = a2_probability(s, cfg.lambda);
      point["analytic"] = p;
      point["analytic_in_ci"] = wilson(k, hit.size()).covers(p);
    }
    curve.push_back(point);
  }
  rep.estimates["event"] = cfg.event;
  rep.estimates["curve"] = curve;
  rep.wall_seconds = sw.seconds();
  return rep;
}

ExperimentReport run_chain_bound(const ExperimentConfig& cfg) {
  cfg.validate();
  const Stopwatch sw;
  ExperimentReport rep = make_report(cfg);
  Json grid = Json::array();
  bool any_violation = false;
  for (std::size_t g = 0; g < cfg.chain_grid.size(); ++g) {
    const double s = cfg.chain_grid[g][0], b = cfg.chain_grid[g][1];
    const int n = static_cast<int>(cfg.chain_grid[g][2]);
    const Box<2> window = Box<2>::centered(s + 2 * n * b);
    std::vector<std::uint8_t> hit(static_cast<std::size_t>(cfg.replicates));
    parallel_for(hit.size(), cfg.threads, [&](std::size_t r) {
      const std::uint64_t seed = derive(replicate_seed(cfg.base_seed, r), g, 0xc4a1);
      const Configuration2 phi = sample_poisson<2>(window, cfg.lambda, DirectionLaw{}, seed);
      hit[r] = event_A6(phi, s, b, n);
    });
    std::size_t k = 0;
    for (std::uint8_t h : hit) k += h;
    const Proportion p = wilson(k, hit.size());
    const double bound = chain_bound(s, b, n, cfg.lambda);
    const bool violation = p.estimate > bound + 3 * p.standard_error();
    any_violation = any_violation || violation;
    Json point = proportion_json(p);
    point["s"] = s;
    point["b"] = b;
    point["n"] = n;
    point["se"] = p.standard_error();
    point["bound"] = bound;
    point["violation"] = violation;
    grid.push_back(point);
    rep.rows.push_back(Json{{"s", s}, {"b", b}, {"n", n}, {"events", k}, {"trials", hit.size()}});
  }
  rep.estimates["grid"] = grid;
  rep.estimates["any_violation"] = any_violation;
  rep.wall_seconds = sw.seconds();
  return rep;
}

// ---------------------------------------------------------------------------
// Stopping device suite

namespace {

bool device_precondition_holds(DevicePrecondition pre, const Configuration2& phi, double s) {
  switch (pre) {
    case DevicePrecondition::Full: return event_A_lily(phi, s);
    case DevicePrecondition::Separation: return event_A8(phi, s);
    case DevicePrecondition::None: return true;
  }
  return false;
}

struct DeviceOutcome {
  bool built = false;
  bool us_pass = false;
  bool incremental_pass = false;
  bool cycles_ok = false;
  std::size_t device_points = 0;
  std::size_t switched = 0;
  std::string note;
};

DeviceOutcome device_trial(const Configuration2& phi, double s, DevicePrecondition pre, std::uint64_t seed) {
  DeviceOutcome out;
  Device dev;
  try {
    dev = gen_device(phi, s, pre, derive(seed, 1, 0xde7));
  } catch (const Error& e) {
    out.note = e.what();
    return out;
  }
  out.built = true;
  out.device_points = dev.psi.size();
  out.cycles_ok = matches_device(phi, dev.psi, s);
  const Configuration2 none({}, phi.window(), phi.tolerance());
  const USReport us = check_US(phi, dev.psi, none, s);
  out.us_pass = us.passed();
  out.switched = us.switched;
  if (!out.us_pass) out.note = us.summary();
  std::map<Site2, std::vector<MarkedPoint<2>>, SiteLess> by_site;
  by_site[Site2(0, 0)] = dev.psi.points();
  const Configuration2 x3(phi.points(), Box<2>::centered(3 * s), phi.tolerance());
  const IncrementalReport inc =
      incremental_check(x3, by_site, {Site2(0, 0)}, lily_builder(), s, SiteSet{}, x3.window());
  out.incremental_pass = inc.passed();
  return out;
}

}  // namespace

ExperimentReport run_us_suite(const ExperimentConfig& cfg) {
  cfg.validate();
  const Stopwatch sw;
  ExperimentReport rep = make_report(cfg);
  rep.seeds.clear();
  const double s = cfg.s;
  const DevicePrecondition pre = cfg.device_precondition();
  const Box<2> window = Box<2>::centered(3 * s);

  // Screen replicates for the precondition in batches until enough good ones are found.
  std::vector<std::size_t> good;
  std::size_t attempted = 0;
  const std::size_t cap = static_cast<std::size_t>(cfg.replicates);
  const std::size_t batch = 4096;
  while (attempted < cap && (cfg.target_good == 0 || good.size() < static_cast<std::size_t>(cfg.target_good))) {
    const std::size_t m = std::min(batch, cap - attempted);
    std::vector<std::uint8_t> ok(m);
    parallel_for(m, cfg.threads, [&](std::size_t k) {
      const Configuration2 phi = sample_poisson<2>(window, cfg.lambda, DirectionLaw{}, replicate_seed(cfg.base_seed, attempted + k));
      ok[k] = device_precondition_holds(pre, phi, s);
    });
    for (std::size_t k = 0; k < m; ++k) {
      if (!ok[k]) continue;
      if (cfg.target_good > 0 && good.size() >= static_cast<std::size_t>(cfg.target_good)) break;
      good.push_back(attempted + k);
    }
    attempted += m;
  }

  std::vector<DeviceOutcome> outcomes(good.size());
  parallel_for(good.size(), cfg.threads, [&](std::size_t k) {
    const std::uint64_t seed = replicate_seed(cfg.base_seed, good[k]);
    const Configuration2 phi = sample_poisson<2>(window, cfg.lambda, DirectionLaw{}, seed);
    outcomes[k] = device_trial(phi, s, pre, seed);
  });
  std::size_t built = 0, us = 0, inc = 0, cycles = 0;
  for (std::size_t k = 0; k < good.size(); ++k) {
    const DeviceOutcome& o = outcomes[k];
    built += o.built;
    us += o.us_pass;
    inc += o.incremental_pass;
    cycles += o.cycles_ok;
    const std::uint64_t seed = replicate_seed(cfg.base_seed, good[k]);
    rep.seeds.push_back(seed);
    rep.rows.push_back(Json{{"replicate", good[k]}, {"seed", seed}, {"device_built", o.built},
                            {"device_points", o.device_points}, {"switched", o.switched}, {"cycles_ok", o.cycles_ok},
                            {"us_pass", o.us_pass}, {"incremental_pass", o.incremental_pass}, {"note", o.note}});
  }
  rep.estimates["precondition"] = cfg.precondition;
  rep.estimates["attempted"] = attempted;
  rep.estimates["precondition_held"] = good.size();
  rep.estimates["skipped"] = attempted - good.size();
  rep.estimates["precondition_rate"] = proportion_json(wilson(good.size(), attempted));
  rep.estimates["device_built"] = built;
  rep.estimates["us_pass"] = proportion_json(wilson(us, good.size()));
  rep.estimates["incremental_pass"] = proportion_json(wilson(inc, good.size()));
  rep.estimates["cycles_ok"] = proportion_json(wilson(cycles, good.size()));

  if (cfg.natural_replicates > 0) {
    const double sn = cfg.natural_s;
    const CheckerPair checkers = lily_checkers(pre);
    const std::size_t nn = static_cast<std::size_t>(cfg.natural_replicates);
    std::vector<std::uint8_t> perfect(nn), occupied(nn);
    parallel_for(nn, cfg.threads, [&](std::size_t r) {
      const std::uint64_t seed = derive(cfg.base_seed, r, 0x9a7);
      const auto split = sprinkle_split<2>(Box<2>::centered(3 * sn), sn, DirectionLaw{}, seed, cfg.lambda);
      occupied[r] = !restrict_to(split.x2, Box<2>::centered(sn)).empty();
      perfect[r] = checkers.perfect(split.x1, split.x2, Site2(0, 0), sn);
    });
    std::size_t kp = 0, ko = 0;
    for (std::size_t r = 0; r < nn; ++r) {
      kp += perfect[r];
      ko += occupied[r];
    }
    Json nat = proportion_json(wilson(kp, nn));
    nat["s"] = sn;
    nat["sprinkled_site_fraction"] = static_cast<double>(ko) / static_cast<double>(nn);
    // Exact one-sided 95% upper bound for the perfect-site probability.
    nat["upper_95"] = kp == 0 ? 1 - std::pow(0.05, 1.0 / static_cast<double>(nn)) : wilson(kp, nn).hi;
    rep.estimates["natural_perfect"] = nat;
  }
  rep.wall_seconds = sw.seconds();
  return rep;
}

// ---------------------------------------------------------------------------
// Revealed-set clusters

ExperimentReport run_reveal(const ExperimentConfig& cfg) {
  cfg.validate();
  const Stopwatch sw;
  ExperimentReport rep = make_report(cfg);
  const std::vector<double> grid = cfg.s_grid.empty() ? std::vector<double>{cfg.s} : cfg.s_grid;
  const int h = cfg.sites_half;
  const Site2 lo(-h, -h), hi(h, h);
  const CheckerPair checkers = cfg.model == "lilypond" ? lily_checkers(cfg.device_precondition()) : knn_checkers(cfg.knn());
  const MarkLaw law = cfg.law();
  Json curve = Json::array();
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const double s = grid[g];
    if (!(s > 1)) throw ValidationError("reveal needs s > 1");
    struct Row {
      std::uint64_t seed;
      std::size_t bad0, iterations;
      ClusterStats st;
    };
    std::vector<Row> rows(static_cast<std::size_t>(cfg.replicates));
    parallel_for(rows.size(), cfg.threads, [&](std::size_t r) {
      const std::uint64_t seed = derive(replicate_seed(cfg.base_seed, r), g, 0x7e7);
      const auto split = sprinkle_split<2>(Box<2>::centered((2 * h + 3) * s), s, law, seed, cfg.lambda);
      const SiteField field = classify_sites(split.x1, split.x2, s, lo, hi, checkers.good, checkers.perfect);
      const RevealedSet rs = reveal(field, occupancy(split.x2, s, lo, hi));
      std::size_t bad0 = 0;
      for (std::uint8_t v : field.data) bad0 += v == 2;
      rows[r] = Row{seed, bad0, rs.trace.size(), cluster_stats(rs.revealed, lo, hi)};
    });
    double density = 0, largest = 0;
    std::map<std::size_t, std::size_t> sizes;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      density += rows[r].st.density;
      largest += rows[r].st.largest_fraction;
      for (std::size_t c : rows[r].st.sizes) ++sizes[c];
      rep.rows.push_back(Json{{"s", s}, {"replicate", r}, {"seed", rows[r].seed}, {"bad0", rows[r].bad0},
                              {"iterations", rows[r].iterations}, {"density", rows[r].st.density},
                              {"largest_fraction", rows[r].st.largest_fraction}});
    }
    Json hist = Json::object();
    for (const auto& [size, count] : sizes) hist[std::to_string(size)] = count;
    curve.push_back(Json{{"s", s},
                         {"mean_density", density / static_cast<double>(rows.size())},
                         {"mean_largest_fraction", largest / static_cast<double>(rows.size())},
                         {"cluster_size_histogram", hist}});
  }
  rep.estimates["sites"] = (2 * h + 1) * (2 * h + 1);
  rep.estimates["curve"] = curve;
  rep.wall_seconds = sw.seconds();
  return rep;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.kind == "percolation") return run_percolation(cfg);
  if (cfg.kind == "hop_tail") return run_hop_tail(cfg);
  if (cfg.kind == "event_curve") return run_event_curve(cfg);
  if (cfg.kind == "chain_bound") return run_chain_bound(cfg);
  if (cfg.kind == "us_suite") return run_us_suite(cfg);
  return run_reveal(cfg);
}

}  // namespace dwre
