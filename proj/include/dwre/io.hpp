#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "dwre/core.hpp"
#include "dwre/harness.hpp"
#include "dwre/lilypond.hpp"
#include "dwre/walks.hpp"

namespace dwre {

/// Shortest decimal form that reads back to the same double ("inf" for infinity).
std::string format_double(double x);
double parse_double(const std::string& text);

/// Tab-separated point rows under a header; the first line records the window.
void write_points(std::ostream& out, const Configuration2& phi);
Configuration2 read_points(std::istream& in);
void save_points(const std::string& path, const Configuration2& phi);
Configuration2 load_points(const std::string& path);

struct GraphRow {
  std::int64_t id = 0;
  std::int64_t next_id = -1;  // -1 when censored
  double length = kInf;       // f for the lilypond model, descendant distance for knn
  Vec2 geo = Vec2::Zero();
  bool censored = true;
};

struct GraphTable {
  std::string model;  // knn | lilypond
  std::vector<GraphRow> rows;
};

GraphTable lily_table(const Configuration2& phi, const LilypondSolution& sol);
GraphTable knn_table(const Configuration2& phi, const WalkGraph<2>& g);

/// Rebuilds a solution from rows matched to phi by id.
LilypondSolution solution_from_table(const Configuration2& phi, const GraphTable& table);
/// Rebuilds the walk graph from rows matched to phi by id.
WalkGraph<2> graph_from_table(const Configuration2& phi, const GraphTable& table);

void write_graph(std::ostream& out, const GraphTable& table);
GraphTable read_graph(std::istream& in);
void save_graph(const std::string& path, const GraphTable& table);
GraphTable load_graph(const std::string& path);

void save_report(const std::string& path, const ExperimentReport& report);
/// Per-replicate rows as tab-separated values with the keys of the first row as header.
void save_rows(const std::string& path, const std::vector<Json>& rows);

std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& text);

// ---------------------------------------------------------------------------
// SVG plots

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_y = false;
  bool bars = false;
};

std::string svg_plot(const PlotSpec& spec, const std::vector<Series>& series);

}  // namespace dwre
