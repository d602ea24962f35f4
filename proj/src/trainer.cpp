// SPDX-License-Identifier: Apache-2.0
#include "qsmiles/trainer.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "qsmiles/errors.hpp"

namespace qsmiles {

Trainer::Trainer(const TrainConfig& cfg, const Vocabulary& vocab)
    : cfg_(cfg),
      vocab_(vocab),
      rng_(cfg.seed),
      model_(build_model(cfg, static_cast<int>(vocab.size()), rng_)) {
  cfg_.validate();
}

Trainer::Trainer(const Checkpoint& ckpt)
    : cfg_(ckpt.config),
      vocab_(Vocabulary::from_tokens(ckpt.vocab_tokens)),
      rng_(cfg_.seed),
      model_(build_model(cfg_, static_cast<int>(vocab_.size()), rng_)) {
  ckpt.apply_to(model_.store);
  rng_.deserialize(ckpt.rng_state);
  epoch_ = ckpt.epoch;
  global_step_ = ckpt.global_step;
  adam_.set_steps_taken(static_cast<int>(ckpt.adam_steps));
}

Trainer Trainer::from_checkpoint(const std::string& path) {
  return Trainer(load_checkpoint(path));
}

void Trainer::save(const std::string& path) const {
  Checkpoint ckpt;
  ckpt.config = cfg_;
  ckpt.vocab_tokens = vocab_.regular_tokens();
  ckpt.epoch = epoch_;
  ckpt.global_step = global_step_;
  ckpt.adam_steps = static_cast<std::uint64_t>(adam_.steps_taken());
  ckpt.rng_state = rng_.serialize();
  ckpt.capture_params(model_.store);
  save_checkpoint(path, ckpt);
}

void Trainer::check_corpus(const Corpus& corpus) const {
  if (corpus.sequences.empty()) {
    throw empty_corpus_error("trainer: empty corpus");
  }
  for (const auto& seq : corpus.sequences) {
    for (TokenId t : seq) {
      if (t < 0 || t >= model_.vocab) {
        throw compat_error("trainer: corpus token id " + std::to_string(t) +
                           " outside the model vocabulary of " +
                           std::to_string(model_.vocab));
      }
    }
  }
}

std::vector<EpochMetrics> Trainer::train(const Corpus& corpus) {
  check_corpus(corpus);
  const std::size_t n = corpus.sequences.size();

  std::ofstream metrics_out;
  {
    // Append when resuming into an existing log, otherwise write the header.
    std::ifstream probe(cfg_.metrics_path);
    const bool fresh = !probe.good() || probe.peek() == EOF;
    probe.close();
    metrics_out.open(cfg_.metrics_path, fresh ? std::ios::trunc : std::ios::app);
    if (!metrics_out) {
      throw io_error("trainer: cannot write " + cfg_.metrics_path);
    }
    if (fresh) metrics_out << metrics_csv_header() << '\n';
  }

  std::vector<EpochMetrics> produced;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});

  for (; epoch_ < static_cast<std::uint64_t>(cfg_.epochs);) {
    const int epoch_index = static_cast<int>(epoch_);  // 0-based
    const double lr =
        cosine_lr(static_cast<std::size_t>(epoch_index),
                  static_cast<std::size_t>(cfg_.epochs), cfg_.lr, cfg_.lr_min);
    const double alpha = teacher_forcing_alpha(cfg_, epoch_index);

    rng_.shuffle(order);

    double sum_fid_loss = 0.0, sum_ce = 0.0, sum_smiles = 0.0, sum_trash = 0.0;
    std::size_t seen = 0;

    for (std::size_t start = 0; start < n; start += cfg_.batch_size) {
      const std::size_t stop =
          std::min(n, start + static_cast<std::size_t>(cfg_.batch_size));
      const double inv_batch = 1.0 / static_cast<double>(stop - start);
      model_.store.zero_grad();
      double batch_total = 0.0;
      for (std::size_t k = start; k < stop; ++k) {
        const std::size_t idx = order[k];
        Tape tape(&model_.store);
        SampleRun run =
            run_training_sample(tape, model_, corpus.sequences[idx],
                                corpus.smiles[idx], vocab_, alpha, rng_);
        tape.backward(run.loss, inv_batch);
        batch_total += tape.scalar_value(run.loss);
        sum_fid_loss += 1.0 - run.fidelity;
        sum_ce += run.ce;
        sum_smiles += 1.0 - run.similarity;
        sum_trash += 1.0 - run.trash_zero_prob;
        ++seen;
      }
      if (!std::isfinite(batch_total)) {
        std::ostringstream os;
        os << "trainer: non-finite loss at epoch " << epoch_ + 1 << ", step "
           << global_step_ + 1 << "; corpus indices";
        for (std::size_t k = start; k < stop; ++k) os << ' ' << order[k];
        throw train_error(os.str());
      }
      adam_.step(model_.store, lr);
      ++global_step_;
    }

    ++epoch_;

    EpochMetrics m;
    m.epoch = static_cast<int>(epoch_);
    m.step = global_step_;
    m.lr = lr;
    m.loss_fidelity = sum_fid_loss / static_cast<double>(seen);
    m.loss_ce = sum_ce / static_cast<double>(seen);
    m.loss_smiles = sum_smiles / static_cast<double>(seen);
    m.loss_trash = sum_trash / static_cast<double>(seen);
    m.loss_total = cfg_.weights.fidelity * m.loss_fidelity +
                   cfg_.weights.ce * m.loss_ce +
                   cfg_.weights.smiles * m.loss_smiles +
                   cfg_.weights.trash * m.loss_trash;

    // End-of-epoch inference pass; `eval` reproduces these numbers.
    const EvalSummary summary = evaluate(corpus);
    m.fidelity = summary.fidelity;
    m.similarity = summary.similarity;
    m.trash_zero_prob = summary.trash_zero_prob;

    metrics_out << metrics_csv_row(m) << '\n';
    metrics_out.flush();
    save(cfg_.checkpoint_path);
    produced.push_back(m);
    if (observer_) observer_(m);
  }
  return produced;
}

EvalSummary Trainer::evaluate(const Corpus& corpus) {
  check_corpus(corpus);
  EvalSummary summary;
  for (std::size_t i = 0; i < corpus.sequences.size(); ++i) {
    const InferenceRun run = run_inference_sample(
        model_, corpus.sequences[i], corpus.smiles[i], vocab_);
    EvalMolecule mol;
    mol.smiles = corpus.smiles[i];
    mol.reconstruction = run.reconstruction;
    mol.fidelity = run.fidelity;
    mol.similarity = run.similarity;
    mol.trash_zero_prob = run.trash_zero_prob;
    summary.fidelity += mol.fidelity;
    summary.similarity += mol.similarity;
    summary.trash_zero_prob += mol.trash_zero_prob;
    summary.molecules.push_back(std::move(mol));
  }
  const double inv = 1.0 / static_cast<double>(summary.molecules.size());
  summary.fidelity *= inv;
  summary.similarity *= inv;
  summary.trash_zero_prob *= inv;
  return summary;
}

EvalMolecule Trainer::reconstruct(const std::string& smiles) {
  const TokenSequence seq = tokenize(smiles, vocab_);
  const InferenceRun run = run_inference_sample(model_, seq, smiles, vocab_);
  EvalMolecule mol;
  mol.smiles = smiles;
  mol.reconstruction = run.reconstruction;
  mol.fidelity = run.fidelity;
  mol.similarity = run.similarity;
  mol.trash_zero_prob = run.trash_zero_prob;
  return mol;
}

}  // namespace qsmiles
