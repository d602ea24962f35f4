// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace qsmiles {

// Base class for everything thrown by this library.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid configuration values (qubit counts, dimensions, schedules).
struct config_error : error {
  using error::error;
};

// Tensor/state dimension mismatches.
struct shape_error : error {
  using error::error;
};

// Qubit or token index out of range, duplicate indices.
struct index_error : error {
  using error::error;
};

// File system failures.
struct io_error : error {
  using error::error;
};

// A SMILES line the tokenizer cannot accept; callers skip the molecule.
struct reject_molecule_error : error {
  using error::error;
};

// No usable lines survived loading.
struct empty_corpus_error : error {
  using error::error;
};

// Degenerate inputs: all-PAD sequences, fully masked attention memory.
struct degenerate_input_error : error {
  using error::error;
};

// Caller broke a documented precondition (e.g. PAD target in the loss).
struct contract_error : error {
  using error::error;
};

// Checkpoint deserialization failures (corrupt file, version mismatch).
struct load_error : error {
  using error::error;
};

// Checkpoint/corpus incompatibility (vocabulary or shape drift).
struct compat_error : error {
  using error::error;
};

// Training aborted (non-finite loss).
struct train_error : error {
  using error::error;
};

}  // namespace qsmiles
