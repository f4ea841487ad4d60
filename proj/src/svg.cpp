#include <algorithm>
#include <cmath>
#include <sstream>

#include "dwre/io.hpp"

namespace dwre {

namespace {

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

}  // namespace

std::string svg_plot(const PlotSpec& spec, const std::vector<Series>& series) {
  const double W = 640, H = 420, L = 70, R = 20, T = 40, B = 55;
  double x0 = kInf, x1 = -kInf, y0 = kInf, y1 = -kInf;
  auto ty = [&](double y) { return spec.log_y ? std::log10(y) : y; };
  for (const auto& s : series) {
    if (s.x.size() != s.y.size()) throw ValidationError("series '" + s.name + "' has mismatched lengths");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (spec.log_y && !(s.y[i] > 0)) continue;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, ty(s.y[i]));
      y1 = std::max(y1, ty(s.y[i]));
    }
  }
  if (!(x0 <= x1)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (spec.bars) y0 = std::min(y0, 0.0);
  if (x1 == x0) x0 -= 0.5, x1 += 0.5;
  if (y1 == y0) y0 -= 0.5, y1 += 0.5;
  const double pad = 0.05 * (x1 - x0);
  x0 -= pad;
  x1 += pad;
  auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };

  std::ostringstream o;
  o.precision(6);
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W << ' '
    << H << "\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">"
    << escape_xml(spec.title) << "</text>\n"
    << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
    << "\" stroke=\"black\"/>\n"
    << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double xv = x0 + pad + k * (x1 - x0 - 2 * pad) / 4;
    const double yv = y0 + k * (y1 - y0) / 4;
    o << "<text x=\"" << px(xv) << "\" y=\"" << H - B + 18 << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      << "font-size=\"11\">" << xv << "</text>\n";
    o << "<text x=\"" << L - 6 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
      << "font-size=\"11\">" << (spec.log_y ? std::pow(10.0, yv) : yv) << "</text>\n";
  }
  o << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
    << "font-size=\"12\">" << escape_xml(spec.x_label) << "</text>\n"
    << "<text x=\"16\" y=\"" << (T + H - B) / 2 << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
    << "transform=\"rotate(-90 16 " << (T + H - B) / 2 << ")\">" << escape_xml(spec.y_label)
    << (spec.log_y ? " (log)" : "") << "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* colour = kPalette[k % std::size(kPalette)];
    if (spec.bars) {
      const double w = std::max(1.0, 0.8 * (W - L - R) / std::max<std::size_t>(s.x.size(), 1) / series.size());
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        const double top = py(ty(s.y[i])), base = py(std::max(y0, 0.0));
        o << "<rect x=\"" << px(s.x[i]) - w / 2 + k * w / series.size() << "\" y=\"" << std::min(top, base)
          << "\" width=\"" << w / series.size() << "\" height=\"" << std::abs(base - top) << "\" fill=\"" << colour
          << "\"/>\n";
      }
    } else {
      o << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        if (spec.log_y && !(s.y[i] > 0)) continue;
        o << px(s.x[i]) << ',' << py(ty(s.y[i])) << ' ';
      }
      o << "\"/>\n";
    }
    o << "<text x=\"" << W - R - 4 << "\" y=\"" << T + 14 * (k + 1) << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
      << "font-size=\"11\" fill=\"" << colour << "\">" << escape_xml(s.name) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace dwre
