#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

#include "dwre/harness.hpp"
#include "dwre/io.hpp"
#include "dwre/sprinkling.hpp"

using namespace dwre;
namespace fs = std::filesystem;

namespace {

struct Common {
  std::string config;
  std::string out = ".";
  std::string model = "lilypond";
  std::uint64_t seed = 1;
  bool seed_set = false;
  int threads = 1;
  double lambda = 1.0;
  double side = 20;
  double s = 8;
  int K = 1;
};

fs::path out_dir(const Common& c) {
  fs::path p(c.out);
  fs::create_directories(p);
  return p;
}

ExperimentConfig config_of(const Common& c) {
  ExperimentConfig cfg = c.config.empty() ? ExperimentConfig{} : load_config(c.config);
  if (c.config.empty()) {
    cfg.model = c.model;
    cfg.lambda = c.lambda;
    cfg.s = c.side;
    cfg.K = c.K;
  }
  if (c.seed_set) cfg.base_seed = c.seed;
  cfg.threads = std::max(cfg.threads, c.threads);
  cfg.validate();
  return cfg;
}

void require_model(const std::string& m) {
  if (m != "knn" && m != "lilypond") throw ValidationError("--model must be knn or lilypond");
}

WalkGraph<2> build_graph(const Configuration2& phi, const std::string& model, int K) {
  if (phi.empty()) throw ValidationError("empty configuration");
  if (model == "lilypond") return build_lily_graph(phi, solve(phi));
  return build_knn_graph(phi, KnnModel::uniform(K), KnnCensor::Window);
}

// --- plots -----------------------------------------------------------------

std::vector<std::string> plot_report(const Json& report, const fs::path& dir) {
  std::vector<std::string> written;
  const std::string kind = report.at("kind").get<std::string>();
  const Json& e = report.at("estimates");
  auto emit = [&](const std::string& name, const PlotSpec& spec, const std::vector<Series>& series) {
    const fs::path p = dir / name;
    write_text(p.string(), svg_plot(spec, series));
    written.push_back(p.string());
  };
  if (e.contains("tail_histogram")) {
    const auto hist = e.at("tail_histogram").get<std::vector<std::size_t>>();
    const std::vector<double> surv = survival(hist);
    Series sv{"P(tail >= t)", {}, surv};
    for (std::size_t t = 0; t < surv.size(); ++t) sv.x.push_back(static_cast<double>(t));
    emit("survival.svg", PlotSpec{"Tail-length survival", "hops t", "survival", true, false}, {sv});
  }
  if (kind == "event_curve") {
    Series est{"estimate", {}, {}}, lo{"95% lo", {}, {}}, hi{"95% hi", {}, {}}, an{"analytic", {}, {}};
    for (const auto& pt : e.at("curve")) {
      const double s = pt.at("s").get<double>();
      est.x.push_back(s), est.y.push_back(pt.at("estimate").get<double>());
      lo.x.push_back(s), lo.y.push_back(pt.at("ci_lo").get<double>());
      hi.x.push_back(s), hi.y.push_back(pt.at("ci_hi").get<double>());
      if (pt.contains("analytic")) an.x.push_back(s), an.y.push_back(pt.at("analytic").get<double>());
    }
    std::vector<Series> all{est, lo, hi};
    if (!an.x.empty()) all.push_back(an);
    emit("event_curve.svg", PlotSpec{"P(" + e.at("event").get<std::string>() + ")", "s", "probability", false, false}, all);
  }
  if (kind == "chain_bound") {
    Series est{"MC estimate", {}, {}}, bound{"bound", {}, {}};
    double k = 0;
    for (const auto& pt : e.at("grid")) {
      est.x.push_back(k), est.y.push_back(pt.at("estimate").get<double>());
      bound.x.push_back(k), bound.y.push_back(pt.at("bound").get<double>());
      ++k;
    }
    emit("chain_bound.svg", PlotSpec{"Descending chains vs bound", "grid point", "probability", true, false}, {est, bound});
  }
  if (kind == "reveal") {
    std::vector<Series> all;
    for (const auto& pt : e.at("curve")) {
      Series sr{"s = " + format_double(pt.at("s").get<double>()), {}, {}};
      for (const auto& [size, count] : pt.at("cluster_size_histogram").items()) {
        sr.x.push_back(std::stod(size));
        sr.y.push_back(count.get<double>());
      }
      all.push_back(sr);
    }
    emit("clusters.svg", PlotSpec{"Revealed-cluster sizes", "cluster size", "count", false, true}, all);
  }
  if (kind == "us_suite") {
    Series rates{"pass rate", {0, 1, 2}, {}};
    for (const char* key : {"us_pass", "incremental_pass", "cycles_ok"}) rates.y.push_back(e.at(key).at("estimate").get<double>());
    emit("us_suite.svg", PlotSpec{"Device checks: US, incremental, cycles", "check", "pass rate", false, true}, {rates});
  }
  return written;
}

// --- commands --------------------------------------------------------------

int cmd_sample(const Common& c) {
  const ExperimentConfig cfg = config_of(c);
  const double side = cfg.s + 2 * cfg.effective_padding();
  const Configuration2 phi = sample_poisson<2>(Box<2>::centered(side), cfg.lambda, cfg.law(), cfg.base_seed);
  const fs::path p = out_dir(c) / "points.tsv";
  save_points(p.string(), phi);
  std::cout << "points " << phi.size() << " window " << side << " -> " << p.string() << "\n";
  return 0;
}

int cmd_solve(const Common& c, const std::string& in, bool verify) {
  require_model(c.model);
  const Configuration2 phi = load_points(in);
  if (phi.empty()) throw ValidationError("empty configuration");
  GraphTable table;
  if (c.model == "lilypond") {
    const LilypondSolution sol = solve(phi);
    if (verify && !verify_solution(phi, sol)) throw Error("solution failed verification");
    table = lily_table(phi, sol);
  } else {
    table = knn_table(phi, build_knn_graph(phi, KnnModel::uniform(c.K), KnnCensor::Window));
  }
  std::size_t censored = 0;
  for (const auto& r : table.rows) censored += r.censored;
  const fs::path p = out_dir(c) / "graph.tsv";
  save_graph(p.string(), table);
  std::cout << "nodes " << table.rows.size() << " censored " << censored << " -> " << p.string() << "\n";
  return 0;
}

int cmd_trace(const Common& c, const std::string& in, const std::vector<std::int64_t>& ids) {
  require_model(c.model);
  const Configuration2 phi = load_points(in);
  const WalkGraph<2> g = build_graph(phi, c.model, c.K);
  const WalkAnalysis a = analyze_walks(g);
  const auto idx = phi.id_index();
  std::vector<Json> rows;
  auto add = [&](std::size_t i) {
    const WalkOutcome& o = a.outcome[i];
    rows.push_back(Json{{"id", phi[i].id}, {"tail", o.tail}, {"cycle", o.cycle}, {"censored", o.censored ? 1 : 0}});
  };
  if (ids.empty()) {
    for (std::size_t i = 0; i < phi.size(); ++i) add(i);
  } else {
    for (std::int64_t id : ids) {
      const auto it = idx.find(id);
      if (it == idx.end()) throw ValidationError("unknown point id " + std::to_string(id));
      add(it->second);
    }
  }
  const BasinStats st = basin_stats(g);
  const fs::path p = out_dir(c) / "trace.tsv";
  save_rows(p.string(), rows);
  std::cout << "walks " << st.counted << " censored " << st.censored << " stuck " << st.stuck << " cycles "
            << st.basins.size() << " -> " << p.string() << "\n";
  return 0;
}

int cmd_events(const Common& c, const std::string& in) {
  const Configuration2 phi = load_points(in);
  ExperimentConfig cfg;
  cfg.K = c.K;
  Json out;
  const bool lily = !phi.empty() && phi[0].mark.is_direction();
  const std::vector<std::string> names = lily ? std::vector<std::string>{"A5", "A7", "A8", "A_lily"}
                                              : std::vector<std::string>{"A1", "A2", "A3", "A4", "A_knn"};
  for (const auto& e : names) {
    if (e == "A7" && c.s < 3) continue;
    out[e] = evaluate_event(e, phi, c.s, cfg);
  }
  std::cout << out.dump(2) << "\n";
  write_text((out_dir(c) / "events.json").string(), out.dump(2) + "\n");
  return 0;
}

int cmd_chains(const Common& c, const std::string& in, double b, int n) {
  const Configuration2 phi = load_points(in);
  const auto chains = find_chains(phi, b, n + 1);
  std::vector<Json> rows;
  for (const auto& ch : chains) {
    std::string ids;
    for (std::size_t k = 0; k < ch.points.size(); ++k) ids += (k ? "," : "") + std::to_string(ch.points[k]);
    rows.push_back(Json{{"length", ch.points.size()}, {"ids", ids}});
  }
  const fs::path p = out_dir(c) / "chains.tsv";
  save_rows(p.string(), rows);
  std::cout << "A6 " << (event_A6(phi, c.s, b, n) ? "true" : "false") << " chains " << chains.size() << " bound "
            << chain_bound(c.s, b, n, c.lambda) << " -> " << p.string() << "\n";
  return 0;
}

int cmd_sprinkle(const Common& c) {
  ExperimentConfig cfg = config_of(c);
  if (c.config.empty()) cfg.s = c.s;
  const int h = cfg.sites_half;
  const Site2 lo(-h, -h), hi(h, h);
  const auto split = sprinkle_split<2>(Box<2>::centered((2 * h + 3) * cfg.s), cfg.s, cfg.law(), cfg.base_seed, cfg.lambda);
  const CheckerPair ch = cfg.model == "lilypond" ? lily_checkers(cfg.device_precondition()) : knn_checkers(cfg.knn());
  const SiteField field = classify_sites(split.x1, split.x2, cfg.s, lo, hi, ch.good, ch.perfect);
  const Occupancy occ = occupancy(split.x2, cfg.s, lo, hi);
  const RevealedSet rs = reveal(field, occ);
  const ClusterStats st = cluster_stats(rs.revealed, lo, hi);
  std::vector<Json> rows;
  for (std::size_t k = 0; k < field.count(); ++k) {
    const Site2 z = field.site(k);
    rows.push_back(Json{{"zx", z.x()}, {"zy", z.y()}, {"Y", field.data[k]}, {"occupied", occ.data[k]},
                        {"revealed", rs.revealed.count(z) ? 1 : 0}, {"bad", rs.bad.count(z) ? 1 : 0}});
  }
  const fs::path dir = out_dir(c);
  save_rows((dir / "sites.tsv").string(), rows);
  std::vector<Json> trace;
  for (std::size_t k = 0; k < rs.trace.size(); ++k)
    trace.push_back(Json{{"step", k}, {"zx", rs.trace[k].x()}, {"zy", rs.trace[k].y()}});
  save_rows((dir / "reveal_trace.tsv").string(), trace);
  save_points((dir / "x1.tsv").string(), split.x1);
  save_points((dir / "x2.tsv").string(), split.x2);
  std::cout << "sites " << field.count() << " revealed " << rs.revealed.size() << " iterations " << rs.trace.size()
            << " density " << st.density << " largest_fraction " << st.largest_fraction << "\n";
  return 0;
}

int cmd_device(const Common& c, const std::string& in, const std::string& pre) {
  const Configuration2 phi = load_points(in);
  ExperimentConfig cfg;
  cfg.precondition = pre;
  cfg.validate();
  const Device dev = gen_device(phi, c.s, cfg.device_precondition(), c.seed);
  const fs::path dir = out_dir(c);
  save_points((dir / "device.tsv").string(), dev.psi);
  const Configuration2 bulk = restrict_to(phi, Box<2>::centered(3 * c.s));
  const Configuration2 none({}, phi.window(), phi.tolerance());
  const USReport us = check_US(bulk, dev.psi, none, c.s);
  std::cout << "cycles " << dev.psi.size() / 4 << " (M1 " << dev.m1.size() << ", M2 " << dev.m2.size() << ", M3 "
            << dev.m3.size() << ") " << us.summary() << "\n";
  return us.passed() ? 0 : 1;
}

int cmd_experiment(const Common& c, bool plots) {
  if (c.config.empty()) throw ValidationError("experiment needs --config");
  const ExperimentConfig cfg = config_of(c);
  const ExperimentReport rep = run_experiment(cfg);
  const fs::path dir = out_dir(c);
  save_report((dir / "report.json").string(), rep);
  save_rows((dir / "rows.tsv").string(), rep.rows);
  std::cout << rep.estimates.dump(2) << "\n";
  if (plots)
    for (const auto& p : plot_report(rep.to_json(), dir)) std::cout << "plot " << p << "\n";
  return 0;
}

int cmd_plot(const Common& c, const std::string& report) {
  const Json j = Json::parse(read_text(report));
  for (const auto& p : plot_report(j, out_dir(c))) std::cout << "plot " << p << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic walks in random environments: lilypond and k-nearest-neighbour models"};
  app.require_subcommand(1);
  Common c;
  std::string in, pre = "separation", report;
  std::vector<std::int64_t> ids;
  double b = 1.0;
  int n = 1;
  bool verify = false, plots = false;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", c.config, "experiment config (JSON)");
    sub->add_option("--out", c.out, "output directory");
    sub->add_option("--model", c.model, "knn or lilypond");
    sub->add_option("--seed", c.seed, "seed")->each([&](const std::string&) { c.seed_set = true; });
    sub->add_option("--threads", c.threads, "worker threads");
    sub->add_option("--lambda", c.lambda, "intensity");
    sub->add_option("--K", c.K, "neighbour ranks for knn");
  };
  auto* sample = app.add_subcommand("sample", "sample a marked Poisson configuration");
  common(sample);
  sample->add_option("--side", c.side, "analysis box side (padding added from config)");
  auto* solve_cmd = app.add_subcommand("solve", "build the walk graph of a configuration");
  common(solve_cmd);
  solve_cmd->add_option("--in", in, "points file")->required();
  solve_cmd->add_flag("--verify", verify, "check the lilypond solution");
  auto* trace_cmd = app.add_subcommand("trace", "trace walks");
  common(trace_cmd);
  trace_cmd->add_option("--in", in, "points file")->required();
  trace_cmd->add_option("--id", ids, "start ids (default all)");
  auto* events = app.add_subcommand("events", "evaluate site events around o");
  common(events);
  events->add_option("--in", in, "points file")->required();
  events->add_option("--s", c.s, "site scale");
  auto* chains = app.add_subcommand("chains", "descending chains");
  common(chains);
  chains->add_option("--in", in, "points file")->required();
  chains->add_option("--s", c.s, "start box side");
  chains->add_option("--b", b, "first gap bound");
  chains->add_option("--n", n, "chain steps");
  auto* sprinkle = app.add_subcommand("sprinkle", "classify sites and reveal");
  common(sprinkle);
  sprinkle->add_option("--s", c.s, "site scale");
  auto* device = app.add_subcommand("device", "build a stopping device for a bulk configuration");
  common(device);
  device->add_option("--in", in, "bulk points file")->required();
  device->add_option("--s", c.s, "site scale");
  device->add_option("--precondition", pre, "full, separation or none");
  auto* experiment = app.add_subcommand("experiment", "run a harness experiment");
  common(experiment);
  experiment->add_flag("--plot", plots, "write SVG plots");
  auto* plot = app.add_subcommand("plot", "plot a report");
  common(plot);
  plot->add_option("--report", report, "report.json")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*sample) return cmd_sample(c);
    if (*solve_cmd) return cmd_solve(c, in, verify);
    if (*trace_cmd) return cmd_trace(c, in, ids);
    if (*events) return cmd_events(c, in);
    if (*chains) return cmd_chains(c, in, b, n);
    if (*sprinkle) return cmd_sprinkle(c);
    if (*device) return cmd_device(c, in, pre);
    if (*experiment) return cmd_experiment(c, plots);
    if (*plot) return cmd_plot(c, report);
  } catch (const GenericityError& e) {
    std::cerr << "genericity: " << e.what() << "\n";
    return 3;
  } catch (const ResourceCapError& e) {
    std::cerr << "resource cap: " << e.what() << "\n";
    return 4;
  } catch (const ValidationError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
