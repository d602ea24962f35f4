// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "oracles.hpp"
#include "qsmiles/errors.hpp"
#include "qsmiles/svg.hpp"
#include "qsmiles/trainer.hpp"

using namespace qsmiles;

namespace {

namespace fs = std::filesystem;

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name)
      : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// A 6-molecule corpus and a tiny configuration that runs in milliseconds.
TrainConfig tiny_cfg(const TempDir& dir) {
  TrainConfig cfg = TrainConfig::preset("toy");
  cfg.epochs = 2;
  cfg.batch_size = 3;
  cfg.seed = 41;
  cfg.max_len = 12;
  cfg.checkpoint_path = dir.file("ckpt.bin");
  cfg.metrics_path = dir.file("metrics.csv");
  return cfg;
}

std::string tiny_corpus_file(const TempDir& dir) {
  const std::string path = dir.file("tiny.smi");
  std::ofstream out(path);
  out << "CCO\nCCN\nCC=O\nC#N\nOCO\nCCC\n";
  return path;
}

}  // namespace

TEST_CASE("cosine schedule endpoints and midpoint") {
  CHECK(cosine_lr(0, 100, 1e-3, 1e-5) == 1e-3);
  CHECK(cosine_lr(100, 100, 1e-3, 1e-5) ==
        doctest::Approx(1e-5).epsilon(1e-12));
  CHECK(cosine_lr(50, 100, 1e-3, 1e-5) ==
        doctest::Approx((1e-3 + 1e-5) / 2).epsilon(1e-12));
  CHECK_THROWS_AS(cosine_lr(0, 0, 1e-3, 1e-5), config_error);
}

TEST_CASE("teacher forcing schedule decays to the floor") {
  TrainConfig cfg;
  cfg.alpha_min = 0.5;
  cfg.t_anneal = 25.0;
  CHECK(teacher_forcing_alpha(cfg, 0) == 1.0);
  CHECK(teacher_forcing_alpha(cfg, 5) == doctest::Approx(0.8));
  CHECK(teacher_forcing_alpha(cfg, 100) == 0.5);
}

TEST_CASE("one epoch on a two-molecule corpus writes one metrics row") {
  TempDir dir("qsmiles_trainer_smoke");
  const std::string corpus_path = dir.file("two.smi");
  {
    std::ofstream out(corpus_path);
    out << "CCO\nCCN\n";
  }
  TrainConfig cfg = tiny_cfg(dir);
  cfg.epochs = 1;
  cfg.batch_size = 2;
  const Vocabulary vocab = Vocabulary::build(read_smiles_lines(corpus_path));
  const Corpus corpus = load_corpus(corpus_path, vocab, cfg.max_len);
  Trainer trainer(cfg, vocab);
  const auto history = trainer.train(corpus);
  REQUIRE(history.size() == 1);
  CHECK(history[0].epoch == 1);
  CHECK(history[0].step == 1);
  const auto rows = read_metrics_csv(cfg.metrics_path);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].lr == cfg.lr);
  CHECK(std::isfinite(rows[0].loss_total));
}

TEST_CASE("logged total equals the weighted component sum") {
  TempDir dir("qsmiles_trainer_account");
  TrainConfig cfg = tiny_cfg(dir);
  const std::string corpus_path = tiny_corpus_file(dir);
  const Vocabulary vocab = Vocabulary::build(read_smiles_lines(corpus_path));
  const Corpus corpus = load_corpus(corpus_path, vocab, cfg.max_len);
  Trainer trainer(cfg, vocab);
  trainer.train(corpus);
  for (const auto& row : read_metrics_csv(cfg.metrics_path)) {
    const double expected = cfg.weights.fidelity * row.loss_fidelity +
                            cfg.weights.ce * row.loss_ce +
                            cfg.weights.smiles * row.loss_smiles +
                            cfg.weights.trash * row.loss_trash;
    CHECK(std::abs(row.loss_total - expected) < 1e-9);
  }
}

TEST_CASE("fixed seed reproduces the metrics file bit for bit") {
  TempDir dir("qsmiles_trainer_det");
  const std::string corpus_path = tiny_corpus_file(dir);
  const Vocabulary vocab = Vocabulary::build(read_smiles_lines(corpus_path));

  auto run = [&](const std::string& tag) {
    TrainConfig cfg = tiny_cfg(dir);
    cfg.checkpoint_path = dir.file("ckpt_" + tag + ".bin");
    cfg.metrics_path = dir.file("metrics_" + tag + ".csv");
    const Corpus corpus = load_corpus(corpus_path, vocab, cfg.max_len);
    Trainer trainer(cfg, vocab);
    trainer.train(corpus);
    return slurp(cfg.metrics_path);
  };
  CHECK(run("a") == run("b"));
}

TEST_CASE("checkpoint round trip is byte identical") {
  TempDir dir("qsmiles_ckpt_rt");
  const std::string corpus_path = tiny_corpus_file(dir);
  TrainConfig cfg = tiny_cfg(dir);
  cfg.epochs = 1;
  const Vocabulary vocab = Vocabulary::build(read_smiles_lines(corpus_path));
  const Corpus corpus = load_corpus(corpus_path, vocab, cfg.max_len);
  Trainer trainer(cfg, vocab);
  trainer.train(corpus);

  const std::string once = slurp(cfg.checkpoint_path);
  const Checkpoint loaded = load_checkpoint(cfg.checkpoint_path);
  save_checkpoint(dir.file("copy.bin"), loaded);
  CHECK(slurp(dir.file("copy.bin")) == once);

  // all arrays bit-identical through the load
  Trainer again = Trainer::from_checkpoint(cfg.checkpoint_path);
  REQUIRE(again.model().store.count() == trainer.model().store.count());
  for (std::size_t i = 0; i < again.model().store.count(); ++i) {
    const auto& a = again.model().store.at(static_cast<int>(i));
    const auto& b = trainer.model().store.at(static_cast<int>(i));
    CHECK(a.name == b.name);
    CHECK(a.value == b.value);
    CHECK(a.m == b.m);
    CHECK(a.v == b.v);
  }
}

TEST_CASE("corrupt and truncated checkpoints are rejected cleanly") {
  TempDir dir("qsmiles_ckpt_bad");
  const std::string path = dir.file("bad.bin");
  {
    std::ofstream out(path, std::ios::binary);
    out << "not a checkpoint at all";
  }
  CHECK_THROWS_AS(load_checkpoint(path), load_error);

  // build a real checkpoint, then truncate it
  const std::string corpus_path = tiny_corpus_file(dir);
  TrainConfig cfg = tiny_cfg(dir);
  cfg.epochs = 1;
  const Vocabulary vocab = Vocabulary::build(read_smiles_lines(corpus_path));
  const Corpus corpus = load_corpus(corpus_path, vocab, cfg.max_len);
  Trainer trainer(cfg, vocab);
  trainer.train(corpus);
  const std::string full = slurp(cfg.checkpoint_path);
  {
    std::ofstream out(path, std::ios::binary);
    out.write(full.data(), static_cast<std::streamsize>(full.size() / 2));
  }
  CHECK_THROWS_AS(load_checkpoint(path), load_error);

  CHECK_THROWS_AS(load_checkpoint(dir.file("missing.bin")), io_error);
}

TEST_CASE("resume reproduces the uninterrupted trajectory exactly") {
  TempDir dir("qsmiles_resume");
  const std::string corpus_path = tiny_corpus_file(dir);
  const Vocabulary vocab = Vocabulary::build(read_smiles_lines(corpus_path));

  // uninterrupted: 4 epochs
  TrainConfig full_cfg = tiny_cfg(dir);
  full_cfg.epochs = 4;
  full_cfg.checkpoint_path = dir.file("full.bin");
  full_cfg.metrics_path = dir.file("full.csv");
  {
    const Corpus corpus = load_corpus(corpus_path, vocab, full_cfg.max_len);
    Trainer trainer(full_cfg, vocab);
    trainer.train(corpus);
  }

  // interrupted: 2 epochs, then resume to 4 against the same metrics file
  TrainConfig half_cfg = tiny_cfg(dir);
  half_cfg.epochs = 2;
  half_cfg.checkpoint_path = dir.file("half.bin");
  half_cfg.metrics_path = dir.file("half.csv");
  {
    const Corpus corpus = load_corpus(corpus_path, vocab, half_cfg.max_len);
    Trainer trainer(half_cfg, vocab);
    trainer.train(corpus);
  }
  {
    // extend the epoch budget inside the snapshot, then resume
    Checkpoint ckpt = load_checkpoint(dir.file("half.bin"));
    ckpt.config.epochs = 4;
    save_checkpoint(dir.file("half_ext.bin"), ckpt);
    Trainer extended = Trainer::from_checkpoint(dir.file("half_ext.bin"));
    const Corpus corpus = load_corpus(corpus_path, vocab, half_cfg.max_len);
    extended.train(corpus);
  }

  const auto full_rows = read_metrics_csv(dir.file("full.csv"));
  const auto half_rows = read_metrics_csv(dir.file("half.csv"));
  REQUIRE(full_rows.size() == 4);
  REQUIRE(half_rows.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(full_rows[i].epoch == half_rows[i].epoch);
    CHECK(full_rows[i].step == half_rows[i].step);
    CHECK(full_rows[i].loss_total == half_rows[i].loss_total);
    CHECK(full_rows[i].fidelity == half_rows[i].fidelity);
    CHECK(full_rows[i].similarity == half_rows[i].similarity);
    CHECK(full_rows[i].trash_zero_prob == half_rows[i].trash_zero_prob);
  }
}

TEST_CASE("evaluate on the training set matches the last logged metrics") {
  TempDir dir("qsmiles_eval_consistency");
  const std::string corpus_path = tiny_corpus_file(dir);
  TrainConfig cfg = tiny_cfg(dir);
  const Vocabulary vocab = Vocabulary::build(read_smiles_lines(corpus_path));
  const Corpus corpus = load_corpus(corpus_path, vocab, cfg.max_len);
  Trainer trainer(cfg, vocab);
  const auto history = trainer.train(corpus);
  const EvalSummary summary = trainer.evaluate(corpus);
  CHECK(std::abs(summary.similarity - history.back().similarity) < 1e-6);
  CHECK(std::abs(summary.fidelity - history.back().fidelity) < 1e-6);
  CHECK(summary.fidelity >= 0.0);
  CHECK(summary.fidelity <= 1.0);
}

TEST_CASE("an untrained model reconstructs near chance") {
  TempDir dir("qsmiles_untrained");
  const std::string corpus_path = tiny_corpus_file(dir);
  TrainConfig cfg = tiny_cfg(dir);
  const Vocabulary vocab = Vocabulary::build(read_smiles_lines(corpus_path));
  const Corpus corpus = load_corpus(corpus_path, vocab, cfg.max_len);
  Trainer trainer(cfg, vocab);  // never trained
  const EvalSummary summary = trainer.evaluate(corpus);
  CHECK(summary.similarity < 0.2);
}

TEST_CASE("vocabulary mismatch is a compatibility error") {
  TempDir dir("qsmiles_compat");
  const std::string corpus_path = tiny_corpus_file(dir);
  TrainConfig cfg = tiny_cfg(dir);
  const Vocabulary small = Vocabulary::build({"CCO"});
  Trainer trainer(cfg, small);
  const Vocabulary big = Vocabulary::build(read_smiles_lines(corpus_path));
  const Corpus corpus = load_corpus(corpus_path, big, cfg.max_len);
  CHECK_THROWS_AS(trainer.evaluate(corpus), compat_error);
}

TEST_CASE("training plots are written and well-formed") {
  TempDir dir("qsmiles_plots");
  std::vector<EpochMetrics> history;
  for (int e = 1; e <= 5; ++e) {
    EpochMetrics m;
    m.epoch = e;
    m.step = static_cast<std::uint64_t>(e);
    m.lr = 1e-3;
    m.loss_total = 2.0 / e;
    m.loss_fidelity = 0.5 / e;
    m.loss_ce = 1.0 / e;
    m.loss_smiles = 0.3 / e;
    m.loss_trash = 0.2 / e;
    m.fidelity = 1.0 - 0.5 / e;
    m.similarity = 1.0 - 0.8 / e;
    m.trash_zero_prob = 1.0 - 0.4 / e;
    history.push_back(m);
  }
  emit_training_plots(history, dir.path.string());
  for (const char* name : {"fidelity_similarity.svg", "loss_components.svg"}) {
    const std::string body = slurp(dir.file(name));
    CHECK(body.find("<svg") != std::string::npos);
    CHECK(body.find("<polyline") != std::string::npos);
    CHECK(body.find("</svg>") != std::string::npos);
  }
}

TEST_CASE("metrics csv round trip") {
  TempDir dir("qsmiles_metrics_rt");
  EpochMetrics m;
  m.epoch = 3;
  m.step = 12;
  m.lr = 1.25e-4;
  m.loss_total = 0.75;
  m.loss_fidelity = 0.25;
  m.loss_ce = 0.3;
  m.loss_smiles = 0.1;
  m.loss_trash = 0.1;
  m.fidelity = 0.75;
  m.similarity = 0.9;
  m.trash_zero_prob = 0.9;
  {
    std::ofstream out(dir.file("m.csv"));
    out << metrics_csv_header() << '\n' << metrics_csv_row(m) << '\n';
  }
  const auto rows = read_metrics_csv(dir.file("m.csv"));
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].epoch == 3);
  CHECK(rows[0].step == 12);
  CHECK(rows[0].lr == m.lr);
  CHECK(rows[0].loss_total == m.loss_total);
  CHECK(rows[0].similarity == m.similarity);
}
