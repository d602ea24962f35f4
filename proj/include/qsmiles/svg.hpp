// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "qsmiles/metrics.hpp"

namespace qsmiles {

struct Series {
  std::string name;
  std::string color;
  std::vector<double> x;
  std::vector<double> y;
};

// Standalone SVG line chart with axes, ticks and a legend.
void write_line_chart(const std::string& path, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      const std::vector<Series>& series);

// The two standard training charts: fidelity/similarity vs epoch and the
// four loss components vs epoch. Writes fidelity_similarity.svg and
// loss_components.svg under dir.
void emit_training_plots(const std::vector<EpochMetrics>& history,
                         const std::string& dir);

}  // namespace qsmiles
