// SPDX-License-Identifier: Apache-2.0
#include "qsmiles/metrics.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "qsmiles/errors.hpp"

namespace qsmiles {

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

std::string metrics_csv_header() {
  return "epoch,step,lr,loss_total,loss_fidelity,loss_ce,loss_smiles,"
         "loss_trash,fidelity,similarity,trash_zero_prob";
}

std::string metrics_csv_row(const EpochMetrics& m) {
  std::ostringstream os;
  os << m.epoch << ',' << m.step << ',' << fmt(m.lr) << ','
     << fmt(m.loss_total) << ',' << fmt(m.loss_fidelity) << ','
     << fmt(m.loss_ce) << ',' << fmt(m.loss_smiles) << ',' << fmt(m.loss_trash)
     << ',' << fmt(m.fidelity) << ',' << fmt(m.similarity) << ','
     << fmt(m.trash_zero_prob);
  return os.str();
}

std::vector<EpochMetrics> read_metrics_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("metrics: cannot read " + path);
  std::vector<EpochMetrics> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (first) {
      first = false;
      if (line != metrics_csv_header()) {
        throw io_error("metrics: unexpected header in " + path);
      }
      continue;
    }
    std::istringstream ls(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (fields.size() != 11) {
      throw io_error("metrics: malformed row '" + line + "' in " + path);
    }
    EpochMetrics m;
    try {
      m.epoch = std::stoi(fields[0]);
      m.step = std::stoull(fields[1]);
      m.lr = std::stod(fields[2]);
      m.loss_total = std::stod(fields[3]);
      m.loss_fidelity = std::stod(fields[4]);
      m.loss_ce = std::stod(fields[5]);
      m.loss_smiles = std::stod(fields[6]);
      m.loss_trash = std::stod(fields[7]);
      m.fidelity = std::stod(fields[8]);
      m.similarity = std::stod(fields[9]);
      m.trash_zero_prob = std::stod(fields[10]);
    } catch (const std::exception&) {
      throw io_error("metrics: malformed row '" + line + "' in " + path);
    }
    rows.push_back(m);
  }
  return rows;
}

}  // namespace qsmiles
