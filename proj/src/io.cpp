#include "dwre/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace dwre {

std::string format_double(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) throw ValidationError("cannot serialize NaN");
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& text) {
  double x = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), x);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw ValidationError("bad number '" + text + "'");
  return x;
}

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t tab = line.find('\t', start);
    out.push_back(line.substr(start, tab - start));
    if (tab == std::string::npos) return out;
    start = tab + 1;
  }
}

std::int64_t parse_int(const std::string& text) {
  std::int64_t v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) throw ValidationError("bad integer '" + text + "'");
  return v;
}

constexpr const char* kPointsMagic = "# dwre points v1";
constexpr const char* kGraphMagic = "# dwre graph v1";

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path);
  return out;
}

void expect_line(std::istream& in, const std::string& want, const std::string& what) {
  std::string line;
  if (!std::getline(in, line) || line != want) throw ValidationError("bad " + what + " header");
}

}  // namespace

void write_points(std::ostream& out, const Configuration2& phi) {
  const Box<2>& w = phi.window();
  out << kPointsMagic << "\twindow\t" << format_double(w.center.x()) << '\t' << format_double(w.center.y()) << '\t'
      << format_double(w.side) << '\n';
  out << "x\ty\tmark\tid\n";
  for (const auto& p : phi)
    out << format_double(p.position.x()) << '\t' << format_double(p.position.y()) << '\t' << to_string(p.mark) << '\t'
        << p.id << '\n';
}

Configuration2 read_points(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("empty point file");
  const auto head = split_tabs(line);
  if (head.size() != 5 || head[0] != kPointsMagic || head[1] != "window") throw ValidationError("bad point file header");
  const Box<2> window{Vec2(parse_double(head[2]), parse_double(head[3])), parse_double(head[4])};
  expect_line(in, "x\ty\tmark\tid", "point column");
  std::vector<MarkedPoint<2>> pts;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_tabs(line);
    if (f.size() != 4) throw ValidationError("point row needs 4 fields");
    pts.push_back(MarkedPoint<2>{Vec2(parse_double(f[0]), parse_double(f[1])), mark_from_string(f[2]), parse_int(f[3])});
  }
  return Configuration2(std::move(pts), window);
}

void save_points(const std::string& path, const Configuration2& phi) {
  auto out = open_out(path);
  write_points(out, phi);
}

Configuration2 load_points(const std::string& path) {
  auto in = open_in(path);
  return read_points(in);
}

GraphTable lily_table(const Configuration2& phi, const LilypondSolution& sol) {
  if (sol.size() != phi.size()) throw ValidationError("solution does not match configuration");
  GraphTable t{"lilypond", {}};
  for (std::size_t i = 0; i < phi.size(); ++i) {
    GraphRow r;
    r.id = phi[i].id;
    r.length = sol.f[i];
    r.geo = sol.tip[i];
    r.censored = !sol.finite(i);
    r.next_id = r.censored ? -1 : phi[static_cast<std::size_t>(sol.stopper[i])].id;
    t.rows.push_back(r);
  }
  return t;
}

GraphTable knn_table(const Configuration2& phi, const WalkGraph<2>& g) {
  GraphTable t{"knn", {}};
  for (std::size_t i = 0; i < phi.size(); ++i) {
    GraphRow r;
    r.id = phi[i].id;
    r.censored = g.is_censored(i);
    if (!r.censored) {
      const auto y = static_cast<std::size_t>(g.next[i]);
      r.next_id = phi[y].id;
      r.geo = g.geo[i];
      r.length = (phi[y].position - phi[i].position).norm();
    }
    t.rows.push_back(r);
  }
  return t;
}

namespace {

std::vector<const GraphRow*> match_rows(const Configuration2& phi, const GraphTable& table) {
  if (table.rows.size() != phi.size()) throw ValidationError("graph rows do not match configuration size");
  const auto idx = phi.id_index();
  std::vector<const GraphRow*> by_index(phi.size(), nullptr);
  for (const auto& r : table.rows) {
    const auto it = idx.find(r.id);
    if (it == idx.end() || by_index[it->second]) throw ValidationError("graph row id not in configuration");
    by_index[it->second] = &r;
  }
  return by_index;
}

}  // namespace

LilypondSolution solution_from_table(const Configuration2& phi, const GraphTable& table) {
  const auto rows = match_rows(phi, table);
  const auto idx = phi.id_index();
  LilypondSolution sol;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    const GraphRow& r = *rows[i];
    sol.f.push_back(r.length);
    sol.tip.push_back(r.geo);
    if (r.censored) {
      sol.stopper.push_back(-1);
    } else {
      const auto it = idx.find(r.next_id);
      if (it == idx.end()) throw ValidationError("descendant id not in configuration");
      sol.stopper.push_back(static_cast<int>(it->second));
    }
  }
  return sol;
}

WalkGraph<2> graph_from_table(const Configuration2& phi, const GraphTable& table) {
  const auto rows = match_rows(phi, table);
  const auto idx = phi.id_index();
  auto g = WalkGraph<2>::with_size(phi.size());
  for (std::size_t i = 0; i < phi.size(); ++i) {
    const GraphRow& r = *rows[i];
    g.geo[i] = r.geo;
    if (r.censored) continue;
    const auto it = idx.find(r.next_id);
    if (it == idx.end()) throw ValidationError("descendant id not in configuration");
    g.next[i] = static_cast<int>(it->second);
    g.censored[i] = 0;
  }
  g.check();
  return g;
}

void write_graph(std::ostream& out, const GraphTable& table) {
  const std::string len = table.model == "lilypond" ? "f" : "radius";
  out << kGraphMagic << "\tmodel\t" << table.model << '\n';
  out << "id\tnext_id\t" << len << "\thg_x\thg_y\tcensored\n";
  for (const auto& r : table.rows)
    out << r.id << '\t' << r.next_id << '\t' << format_double(r.length) << '\t' << format_double(r.geo.x()) << '\t'
        << format_double(r.geo.y()) << '\t' << (r.censored ? 1 : 0) << '\n';
}

GraphTable read_graph(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("empty graph file");
  const auto head = split_tabs(line);
  if (head.size() != 3 || head[0] != kGraphMagic || head[1] != "model" || (head[2] != "knn" && head[2] != "lilypond"))
    throw ValidationError("bad graph file header");
  GraphTable t{head[2], {}};
  expect_line(in, std::string("id\tnext_id\t") + (t.model == "lilypond" ? "f" : "radius") + "\thg_x\thg_y\tcensored",
              "graph column");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_tabs(line);
    if (f.size() != 6) throw ValidationError("graph row needs 6 fields");
    GraphRow r;
    r.id = parse_int(f[0]);
    r.next_id = parse_int(f[1]);
    r.length = parse_double(f[2]);
    r.geo = Vec2(parse_double(f[3]), parse_double(f[4]));
    if (f[5] != "0" && f[5] != "1") throw ValidationError("censored flag must be 0 or 1");
    r.censored = f[5] == "1";
    if (r.censored != (r.next_id < 0)) throw ValidationError("censored rows must have next_id -1");
    t.rows.push_back(r);
  }
  return t;
}

void save_graph(const std::string& path, const GraphTable& table) {
  auto out = open_out(path);
  write_graph(out, table);
}

GraphTable load_graph(const std::string& path) {
  auto in = open_in(path);
  return read_graph(in);
}

void save_report(const std::string& path, const ExperimentReport& report) {
  write_text(path, report.to_json().dump(2) + "\n");
}

void save_rows(const std::string& path, const std::vector<Json>& rows) {
  auto out = open_out(path);
  if (rows.empty()) return;
  std::vector<std::string> keys;
  for (const auto& [k, v] : rows.front().items()) keys.push_back(k);
  for (std::size_t i = 0; i < keys.size(); ++i) out << (i ? "\t" : "") << keys[i];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < keys.size(); ++i) {
      const Json& v = row.at(keys[i]);
      out << (i ? "\t" : "") << (v.is_string() ? v.get<std::string>() : v.dump());
    }
    out << '\n';
  }
}

std::string read_text(const std::string& path) {
  auto in = open_in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
}

}  // namespace dwre
