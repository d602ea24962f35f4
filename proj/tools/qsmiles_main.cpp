// SPDX-License-Identifier: Apache-2.0
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qsmiles/checkpoint.hpp"
#include "qsmiles/corpus.hpp"
#include "qsmiles/errors.hpp"
#include "qsmiles/svg.hpp"
#include "qsmiles/trainer.hpp"

namespace {

using namespace qsmiles;

constexpr int kExitOk = 0;
constexpr int kExitUser = 1;
constexpr int kExitInternal = 2;

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

struct ConfigCli {
  std::string preset = "paper";
  std::string config_file;
  std::vector<std::string> overrides;  // key=value
  bool paper_dims = false;

  TrainConfig resolve() const {
    TrainConfig cfg = TrainConfig::preset(preset);
    if (paper_dims) {
      cfg.d_hidden = 252;
      cfg.n_heads = 4;
    }
    if (!config_file.empty()) cfg.apply_file(config_file);
    for (const auto& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) {
        throw config_error("--set expects key=value, got '" + kv + "'");
      }
      cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    return cfg;
  }
};

void add_config_options(CLI::App* cmd, ConfigCli& cc) {
  cmd->add_option("--preset", cc.preset,
                  "configuration preset: paper, toy or overfit")
      ->check(CLI::IsMember({"paper", "toy", "overfit"}));
  cmd->add_option("--config", cc.config_file,
                  "key=value config file applied over the preset");
  cmd->add_option("--set", cc.overrides,
                  "override a single config field (key=value, repeatable)");
  cmd->add_flag("--paper-dims", cc.paper_dims,
                "decoder with d_hidden=252 and 4 heads instead of 256/8");
}

Vocabulary vocab_for_corpus(const std::string& corpus_path,
                            const std::string& vocab_path) {
  if (!vocab_path.empty()) return Vocabulary::load(vocab_path);
  const std::string sidecar = corpus_path + ".vocab";
  if (std::filesystem::exists(sidecar)) return Vocabulary::load(sidecar);
  return Vocabulary::build(read_smiles_lines(corpus_path));
}

int cmd_prepare(const std::string& input, const std::string& output,
                std::size_t max_len) {
  const Vocabulary vocab = Vocabulary::build(read_smiles_lines(input));
  const Corpus corpus = load_corpus(input, vocab, max_len);
  std::ofstream out(output);
  if (!out) throw io_error("prepare: cannot write " + output);
  for (const auto& s : corpus.smiles) out << s << '\n';
  if (!out) throw io_error("prepare: write failed for " + output);
  vocab.save(output + ".vocab");
  std::cout << corpus.report.to_string();
  std::cout << "vocabulary: " << vocab.size() << '\n';
  std::cout << "corpus_file: " << output << '\n';
  std::cout << "vocab_file: " << output << ".vocab" << '\n';
  return kExitOk;
}

int cmd_train(const ConfigCli& cc, const std::string& corpus_path,
              const std::string& vocab_path, const std::string& out_dir,
              const std::string& resume_path, bool quiet) {
  std::filesystem::create_directories(out_dir);

  std::optional<Trainer> trainer;
  if (!resume_path.empty()) {
    trainer.emplace(Trainer::from_checkpoint(resume_path));
  } else {
    TrainConfig cfg = cc.resolve();
    if (cfg.checkpoint_path == "checkpoint.bin") {
      cfg.checkpoint_path = out_dir + "/checkpoint.bin";
    }
    if (cfg.metrics_path == "metrics.csv") {
      cfg.metrics_path = out_dir + "/metrics.csv";
    }
    const Vocabulary vocab = vocab_for_corpus(corpus_path, vocab_path);
    trainer.emplace(cfg, vocab);
  }

  const TrainConfig& cfg = trainer->model().cfg;
  const Corpus corpus = load_corpus(corpus_path, trainer->vocab(), cfg.max_len);

  std::cout << "# run configuration\n" << cfg.describe();
  std::cout << "vocabulary=" << trainer->vocab().size() << '\n';
  std::cout << "molecules=" << corpus.sequences.size() << '\n';
  if (cc.preset == "paper" && resume_path.empty()) {
    std::cout << "# note: a 252-wide hidden state does not split across 8 "
                 "attention heads;\n"
              << "# the default preset uses d_hidden=256 with 8 heads and "
                 "--paper-dims selects 252 with 4.\n";
  }
  if (!quiet) {
    trainer->set_observer([](const EpochMetrics& m) {
      std::cout << "epoch " << m.epoch << " step " << m.step << " lr "
                << fmt(m.lr) << " loss " << fmt(m.loss_total) << " fidelity "
                << fmt(m.fidelity) << " similarity " << fmt(m.similarity)
                << " trash_zero " << fmt(m.trash_zero_prob) << '\n';
    });
  }
  trainer->train(corpus);
  const auto history = read_metrics_csv(cfg.metrics_path);
  emit_training_plots(history, out_dir);
  std::cout << "checkpoint: " << cfg.checkpoint_path << '\n';
  std::cout << "metrics: " << cfg.metrics_path << '\n';
  return kExitOk;
}

int cmd_eval(const std::string& checkpoint_path, const std::string& corpus_path,
             std::size_t dump) {
  Trainer trainer = Trainer::from_checkpoint(checkpoint_path);
  const Corpus corpus =
      load_corpus(corpus_path, trainer.vocab(), trainer.model().cfg.max_len);
  const EvalSummary summary = trainer.evaluate(corpus);
  std::cout << "molecules: " << summary.molecules.size() << '\n';
  std::cout << "fidelity: " << fmt(summary.fidelity) << '\n';
  std::cout << "similarity: " << fmt(summary.similarity) << '\n';
  std::cout << "trash_zero_prob: " << fmt(summary.trash_zero_prob) << '\n';
  for (std::size_t i = 0; i < std::min(dump, summary.molecules.size()); ++i) {
    const auto& mol = summary.molecules[i];
    std::cout << "molecule: " << mol.smiles << " -> " << mol.reconstruction
              << " similarity " << fmt(mol.similarity) << '\n';
  }
  return kExitOk;
}

int cmd_reconstruct(const std::string& checkpoint_path,
                    const std::string& smiles) {
  if (smiles.empty()) {
    throw config_error("reconstruct: --smiles must be non-empty");
  }
  Trainer trainer = Trainer::from_checkpoint(checkpoint_path);
  const EvalMolecule mol = trainer.reconstruct(smiles);
  std::cout << "original: " << mol.smiles << '\n';
  std::cout << "reconstruction: " << mol.reconstruction << '\n';
  std::cout << "fidelity: " << fmt(mol.fidelity) << '\n';
  std::cout << "similarity: " << fmt(mol.similarity) << '\n';
  std::cout << "trash_zero_prob: " << fmt(mol.trash_zero_prob) << '\n';
  return kExitOk;
}

int cmd_inspect(const ConfigCli& cc) {
  const TrainConfig cfg = cc.resolve();
  const QaeConfig& q = cfg.qae;
  std::cout << "qubits: " << q.n_total << " (" << q.n_latent << " latent + "
            << q.n_trash << " trash)\n";
  std::cout << "data layer:\n";
  for (int qi = 0; qi < q.n_total; ++qi) {
    std::cout << "  ry  q" << qi << "  angle[" << qi << "]\n";
  }
  int p = 0;
  for (int layer = 0; layer < q.n_layers; ++layer) {
    std::cout << "layer " << layer << ":\n";
    for (int qi = 0; qi < q.n_total; ++qi) {
      std::cout << "  ry  q" << qi << "  theta[" << p++ << "]\n";
      std::cout << "  rz  q" << qi << "  theta[" << p++ << "]\n";
    }
    if (q.n_total > 1) {
      for (int qi = 0; qi < q.n_total; ++qi) {
        std::cout << "  crz q" << qi << "->q" << (qi + 1) % q.n_total
                  << "  fixed pi/2\n";
      }
    }
  }
  std::cout << "ansatz parameters: " << q.ansatz_param_count() << '\n';
  std::cout << "data angles: " << q.n_total << '\n';
  std::cout << "rotation parameters: " << q.rotation_param_count() << '\n';
  return kExitOk;
}

int cmd_plot(const std::string& metrics_path, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  const auto history = read_metrics_csv(metrics_path);
  if (history.empty()) throw io_error("plot: no rows in " + metrics_path);
  emit_training_plots(history, out_dir);
  std::cout << "plots: " << out_dir << "/fidelity_similarity.svg, " << out_dir
            << "/loss_components.svg\n";
  return kExitOk;
}

int run(int argc, char** argv) {
  CLI::App app{
      "Hybrid quantum-classical molecular autoencoder: tensor-train token "
      "embeddings, a simulated quantum autoencoder and an attention LSTM "
      "decoder for SMILES reconstruction."};
  app.require_subcommand(1);

  // prepare
  auto* prepare = app.add_subcommand(
      "prepare", "Deduplicate and length-filter a SMILES file");
  std::string prep_input, prep_output;
  std::size_t prep_max_len = 64;
  prepare->add_option("--input", prep_input, "raw SMILES file, one per line")
      ->required();
  prepare->add_option("--output", prep_output, "prepared corpus path")
      ->required();
  prepare->add_option("--max-len", prep_max_len,
                      "maximum tokens per molecule, sentinels included");

  // train
  auto* train = app.add_subcommand("train", "Train the autoencoder");
  ConfigCli train_cc;
  std::string train_corpus, train_vocab, train_out = ".", train_resume;
  std::uint64_t train_seed = 0;
  bool train_quiet = false;
  train->add_option("--corpus", train_corpus, "prepared corpus file")
      ->required();
  train->add_option("--vocab", train_vocab,
                    "vocabulary file (default: <corpus>.vocab, else rebuilt)");
  add_config_options(train, train_cc);
  train->add_option("--seed", train_seed, "RNG seed (overrides config)");
  train->add_option("--out", train_out, "output directory");
  train->add_option("--resume", train_resume, "continue from a checkpoint");
  train->add_flag("--quiet", train_quiet, "suppress per-epoch progress");

  // eval
  auto* eval = app.add_subcommand("eval", "Greedy-decode a corpus");
  std::string eval_ckpt, eval_corpus;
  std::size_t eval_dump = 0;
  eval->add_option("--checkpoint", eval_ckpt, "trained checkpoint")->required();
  eval->add_option("--corpus", eval_corpus, "corpus file")->required();
  eval->add_option("--dump", eval_dump, "print the first N reconstructions");

  // reconstruct
  auto* rec = app.add_subcommand("reconstruct",
                                 "Round-trip a single molecule");
  std::string rec_ckpt, rec_smiles;
  rec->add_option("--checkpoint", rec_ckpt, "trained checkpoint")->required();
  rec->add_option("--smiles", rec_smiles, "molecule to reconstruct")
      ->required();

  // inspect-circuit
  auto* inspect = app.add_subcommand(
      "inspect-circuit", "List the quantum circuit gates and parameters");
  ConfigCli inspect_cc;
  add_config_options(inspect, inspect_cc);

  // plot
  auto* plot = app.add_subcommand("plot", "Render SVG charts from a metrics CSV");
  std::string plot_metrics, plot_out = ".";
  plot->add_option("--metrics", plot_metrics, "metrics CSV file")->required();
  plot->add_option("--out", plot_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUser;
  }

  if (train->parsed() && train->count("--seed") > 0) {
    train_cc.overrides.push_back("seed=" + std::to_string(train_seed));
  }

  if (prepare->parsed()) return cmd_prepare(prep_input, prep_output, prep_max_len);
  if (train->parsed()) {
    return cmd_train(train_cc, train_corpus, train_vocab, train_out,
                     train_resume, train_quiet);
  }
  if (eval->parsed()) return cmd_eval(eval_ckpt, eval_corpus, eval_dump);
  if (rec->parsed()) return cmd_reconstruct(rec_ckpt, rec_smiles);
  if (inspect->parsed()) return cmd_inspect(inspect_cc);
  if (plot->parsed()) return cmd_plot(plot_metrics, plot_out);
  return kExitUser;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const qsmiles::io_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUser;
  } catch (const qsmiles::config_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUser;
  } catch (const qsmiles::reject_molecule_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUser;
  } catch (const qsmiles::empty_corpus_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUser;
  } catch (const qsmiles::load_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUser;
  } catch (const qsmiles::compat_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUser;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}
