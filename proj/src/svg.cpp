// SPDX-License-Identifier: Apache-2.0
#include "qsmiles/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "qsmiles/errors.hpp"

namespace qsmiles {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 440.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 55.0;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct Range {
  double lo = 0.0;
  double hi = 1.0;
};

Range find_range(const std::vector<Series>& series, bool use_x) {
  Range r{1e300, -1e300};
  for (const auto& s : series) {
    for (double v : use_x ? s.x : s.y) {
      r.lo = std::min(r.lo, v);
      r.hi = std::max(r.hi, v);
    }
  }
  if (r.lo > r.hi) return {0.0, 1.0};
  if (r.lo == r.hi) {
    r.lo -= 0.5;
    r.hi += 0.5;
  }
  return r;
}

}  // namespace

void write_line_chart(const std::string& path, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      const std::vector<Series>& series) {
  const Range xr = find_range(series, true);
  Range yr = find_range(series, false);
  const double pad = 0.05 * (yr.hi - yr.lo);
  yr.lo -= pad;
  yr.hi += pad;

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto px = [&](double x) {
    return kLeft + plot_w * (x - xr.lo) / (xr.hi - xr.lo);
  };
  auto py = [&](double y) {
    return kTop + plot_h * (1.0 - (y - yr.lo) / (yr.hi - yr.lo));
  };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
     << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' '
     << kHeight << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" "
        "font-family=\"sans-serif\" font-size=\"16\">"
     << title << "</text>\n";

  // axes
  os << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft
     << "\" y2=\"" << kTop + plot_h << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + plot_h << "\" x2=\""
     << kLeft + plot_w << "\" y2=\"" << kTop + plot_h
     << "\" stroke=\"black\"/>\n";

  const int ticks = 5;
  for (int i = 0; i <= ticks; ++i) {
    const double fx = xr.lo + (xr.hi - xr.lo) * i / ticks;
    const double fy = yr.lo + (yr.hi - yr.lo) * i / ticks;
    const double tx = px(fx);
    const double ty = py(fy);
    os << "<line x1=\"" << tx << "\" y1=\"" << kTop + plot_h << "\" x2=\""
       << tx << "\" y2=\"" << kTop + plot_h + 5 << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << tx << "\" y=\"" << kTop + plot_h + 20
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
          "font-size=\"11\">"
       << num(fx) << "</text>\n";
    os << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << ty << "\" x2=\"" << kLeft
       << "\" y2=\"" << ty << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << kLeft - 8 << "\" y=\"" << ty + 4
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
          "font-size=\"11\">"
       << num(fy) << "</text>\n";
  }
  os << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 12
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        "font-size=\"13\">"
     << x_label << "</text>\n";
  os << "<text x=\"16\" y=\"" << kTop + plot_h / 2
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        "font-size=\"13\" transform=\"rotate(-90 16 "
     << kTop + plot_h / 2 << ")\">" << y_label << "</text>\n";

  for (const auto& s : series) {
    os << "<polyline fill=\"none\" stroke=\"" << s.color
       << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      os << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
    }
    os << "\"/>\n";
  }

  double ly = kTop + 8;
  for (const auto& s : series) {
    os << "<line x1=\"" << kLeft + plot_w - 150 << "\" y1=\"" << ly
       << "\" x2=\"" << kLeft + plot_w - 125 << "\" y2=\"" << ly
       << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << kLeft + plot_w - 118 << "\" y=\"" << ly + 4
       << "\" font-family=\"sans-serif\" font-size=\"12\">" << s.name
       << "</text>\n";
    ly += 18;
  }
  os << "</svg>\n";

  std::ofstream out(path);
  if (!out) throw io_error("svg: cannot write " + path);
  out << os.str();
  if (!out) throw io_error("svg: write failed for " + path);
}

void emit_training_plots(const std::vector<EpochMetrics>& history,
                         const std::string& dir) {
  std::vector<double> epochs;
  epochs.reserve(history.size());
  for (const auto& m : history) epochs.push_back(m.epoch);

  auto column = [&](double EpochMetrics::*field) {
    std::vector<double> v;
    v.reserve(history.size());
    for (const auto& m : history) v.push_back(m.*field);
    return v;
  };

  write_line_chart(
      dir + "/fidelity_similarity.svg", "Fidelity and similarity", "epoch",
      "value",
      {{"fidelity", "#1f77b4", epochs, column(&EpochMetrics::fidelity)},
       {"similarity", "#d62728", epochs, column(&EpochMetrics::similarity)}});

  write_line_chart(
      dir + "/loss_components.svg", "Loss components", "epoch", "loss",
      {{"fidelity", "#1f77b4", epochs, column(&EpochMetrics::loss_fidelity)},
       {"cross-entropy", "#ff7f0e", epochs, column(&EpochMetrics::loss_ce)},
       {"smiles", "#2ca02c", epochs, column(&EpochMetrics::loss_smiles)},
       {"trash", "#9467bd", epochs, column(&EpochMetrics::loss_trash)}});
}

}  // namespace qsmiles
