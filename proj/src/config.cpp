// SPDX-License-Identifier: Apache-2.0
#include "qsmiles/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "qsmiles/errors.hpp"

namespace qsmiles {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw config_error("config: " + key + ": cannot parse '" + v +
                       "' as a number");
  }
}

long long parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const long long x = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw config_error("config: " + key + ": cannot parse '" + v +
                       "' as an integer");
  }
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

void TrainConfig::validate() const {
  if (epochs < 1) throw config_error("config: epochs must be >= 1");
  if (batch_size < 1) throw config_error("config: batch_size must be >= 1");
  if (lr <= 0.0) throw config_error("config: lr must be positive");
  if (lr_min < 0.0 || lr_min > lr) {
    throw config_error("config: lr_min must be in [0, lr]");
  }
  if (max_len < 3) throw config_error("config: max_len must be >= 3");
  if (order < 1 || d_site < 1 || d_model < 1) {
    throw config_error("config: embedding dimensions must be positive");
  }
  if (d_token < 1) throw config_error("config: d_token must be positive");
  if (alpha_min < 0.0 || alpha_min > 1.0) {
    throw config_error("config: alpha_min outside [0, 1]");
  }
  if (t_anneal <= 0.0) throw config_error("config: t_anneal must be positive");
  qae.validate();
  weights.validate();
  if (decoder_layers < 1 || d_hidden < 1 || n_heads < 1 ||
      d_hidden % n_heads != 0) {
    throw config_error("config: d_hidden " + std::to_string(d_hidden) +
                       " not divisible by n_heads " + std::to_string(n_heads));
  }
}

std::string TrainConfig::describe() const {
  std::ostringstream os;
  os << "epochs=" << epochs << '\n'
     << "batch_size=" << batch_size << '\n'
     << "lr=" << fmt(lr) << '\n'
     << "lr_min=" << fmt(lr_min) << '\n'
     << "seed=" << seed << '\n'
     << "max_len=" << max_len << '\n'
     << "order=" << order << '\n'
     << "d_site=" << d_site << '\n'
     << "d_model=" << d_model << '\n'
     << "n_total=" << qae.n_total << '\n'
     << "n_latent=" << qae.n_latent << '\n'
     << "n_trash=" << qae.n_trash << '\n'
     << "qae_layers=" << qae.n_layers << '\n'
     << "decoder_layers=" << decoder_layers << '\n'
     << "d_hidden=" << d_hidden << '\n'
     << "n_heads=" << n_heads << '\n'
     << "d_token=" << d_token << '\n'
     << "lambda_fidelity=" << fmt(weights.fidelity) << '\n'
     << "lambda_ce=" << fmt(weights.ce) << '\n'
     << "lambda_smiles=" << fmt(weights.smiles) << '\n'
     << "lambda_trash=" << fmt(weights.trash) << '\n'
     << "alpha_min=" << fmt(alpha_min) << '\n'
     << "t_anneal=" << fmt(t_anneal) << '\n'
     << "checkpoint_path=" << checkpoint_path << '\n'
     << "metrics_path=" << metrics_path << '\n';
  return os.str();
}

void TrainConfig::set(const std::string& key, const std::string& value) {
  if (key == "epochs") epochs = static_cast<int>(parse_int(key, value));
  else if (key == "batch_size") batch_size = static_cast<int>(parse_int(key, value));
  else if (key == "lr") lr = parse_double(key, value);
  else if (key == "lr_min") lr_min = parse_double(key, value);
  else if (key == "seed") seed = static_cast<std::uint64_t>(parse_int(key, value));
  else if (key == "max_len") max_len = static_cast<std::size_t>(parse_int(key, value));
  else if (key == "order") order = static_cast<int>(parse_int(key, value));
  else if (key == "d_site") d_site = static_cast<int>(parse_int(key, value));
  else if (key == "d_model") d_model = static_cast<int>(parse_int(key, value));
  else if (key == "n_total") qae.n_total = static_cast<int>(parse_int(key, value));
  else if (key == "n_latent") qae.n_latent = static_cast<int>(parse_int(key, value));
  else if (key == "n_trash") qae.n_trash = static_cast<int>(parse_int(key, value));
  else if (key == "qae_layers") qae.n_layers = static_cast<int>(parse_int(key, value));
  else if (key == "decoder_layers") decoder_layers = static_cast<int>(parse_int(key, value));
  else if (key == "d_hidden") d_hidden = static_cast<int>(parse_int(key, value));
  else if (key == "n_heads") n_heads = static_cast<int>(parse_int(key, value));
  else if (key == "d_token") d_token = static_cast<int>(parse_int(key, value));
  else if (key == "lambda_fidelity") weights.fidelity = parse_double(key, value);
  else if (key == "lambda_ce") weights.ce = parse_double(key, value);
  else if (key == "lambda_smiles") weights.smiles = parse_double(key, value);
  else if (key == "lambda_trash") weights.trash = parse_double(key, value);
  else if (key == "alpha_min") alpha_min = parse_double(key, value);
  else if (key == "t_anneal") t_anneal = parse_double(key, value);
  else if (key == "checkpoint_path") checkpoint_path = value;
  else if (key == "metrics_path") metrics_path = value;
  else throw config_error("config: unknown key '" + key + "'");
}

void TrainConfig::apply_text(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw config_error("config: expected key=value, got '" + line + "'");
    }
    set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

void TrainConfig::apply_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("config: cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  apply_text(os.str());
}

TrainConfig TrainConfig::preset(const std::string& name) {
  TrainConfig cfg;  // defaults are the full-scale "paper" settings
  if (name == "paper") {
    return cfg;
  }
  if (name == "toy") {
    cfg.epochs = 5;
    cfg.batch_size = 8;
    cfg.lr = 1e-3;
    cfg.lr_min = 1e-4;
    cfg.max_len = 32;
    cfg.order = 2;
    cfg.d_site = 3;
    cfg.d_model = 32;
    cfg.qae = QaeConfig{4, 3, 1, 2};
    cfg.decoder_layers = 2;
    cfg.d_hidden = 32;
    cfg.n_heads = 4;
    cfg.d_token = 16;
    return cfg;
  }
  if (name == "overfit") {
    cfg.epochs = 400;
    cfg.batch_size = 8;
    cfg.lr = 1e-3;
    cfg.lr_min = 1e-4;
    cfg.max_len = 18;
    cfg.order = 2;
    cfg.d_site = 4;
    cfg.d_model = 64;
    cfg.qae = QaeConfig{6, 4, 2, 2};
    cfg.decoder_layers = 2;
    cfg.d_hidden = 64;
    cfg.n_heads = 4;
    cfg.d_token = 32;
    return cfg;
  }
  throw config_error("config: unknown preset '" + name +
                     "' (expected paper, toy or overfit)");
}

double teacher_forcing_alpha(const TrainConfig& cfg, int epoch) {
  const double a = 1.0 - static_cast<double>(epoch) / cfg.t_anneal;
  return std::max(cfg.alpha_min, a);
}

}  // namespace qsmiles
