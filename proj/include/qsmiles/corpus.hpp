// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace qsmiles {

using TokenId = std::int32_t;

// Reserved vocabulary slots. Everything else starts at kFirstRegularId.
inline constexpr TokenId kPadId = 0;
inline constexpr TokenId kSosId = 1;
inline constexpr TokenId kEosId = 2;
inline constexpr TokenId kUnkId = 3;
inline constexpr TokenId kFirstRegularId = 4;

using TokenSequence = std::vector<TokenId>;

// Splits a SMILES string into token strings: greedy longest match over a
// fixed table (two-letter atoms Cl/Br/Si and @@ before single characters),
// with bracket atoms [...] kept as one token. Throws reject_molecule_error
// on characters outside the accepted set or an unclosed bracket. Balance of
// parentheses and ring bonds is not this function's business.
std::vector<std::string> split_tokens(const std::string& smiles);

// Token-string <-> id map with reserved ids 0..3 (PAD, SOS, EOS, UNK).
// Regular ids are assigned in sorted token order, so rebuilding from the
// same token multiset always yields the same mapping.
class Vocabulary {
 public:
  Vocabulary() = default;

  // Builds from raw SMILES lines. Untokenizable lines are skipped; if no
  // line survives, throws empty_corpus_error.
  static Vocabulary build(const std::vector<std::string>& lines);

  // From an explicit token set (used by checkpoint/vocab-file loading).
  static Vocabulary from_tokens(std::vector<std::string> tokens);

  std::size_t size() const { return id_to_token_.size(); }

  // Unknown strings map to UNK.
  TokenId id_of(const std::string& token) const;
  const std::string& token_of(TokenId id) const;

  // Regular (non-reserved) tokens in id order.
  std::vector<std::string> regular_tokens() const;

  bool operator==(const Vocabulary& other) const {
    return id_to_token_ == other.id_to_token_;
  }

  void save(const std::string& path) const;
  static Vocabulary load(const std::string& path);

 private:
  std::map<std::string, TokenId> token_to_id_;
  std::vector<std::string> id_to_token_;
};

// SOS + token ids + EOS. Tokens absent from the vocabulary become UNK.
TokenSequence tokenize(const std::string& smiles, const Vocabulary& vocab);

// Inverse of tokenize for in-vocabulary sequences: concatenates the token
// strings, dropping PAD/SOS/EOS.
std::string detokenize(const TokenSequence& seq, const Vocabulary& vocab);

struct LoadReport {
  std::size_t input_lines = 0;  // non-comment, non-blank lines seen
  std::size_t accepted = 0;
  std::size_t duplicates = 0;
  std::size_t length_filtered = 0;
  std::size_t rejected = 0;  // untokenizable

  std::string to_string() const;
};

// Deduplicated, length-filtered token sequences from one source file.
// Immutable after construction.
struct Corpus {
  std::vector<TokenSequence> sequences;
  std::vector<std::string> smiles;  // raw strings, parallel to sequences
  std::size_t max_len = 0;          // token-count cap including SOS/EOS
  std::string source;
  LoadReport report;
};

// Reads one SMILES per line ('#' comments and blank lines ignored),
// tokenizes against vocab, drops duplicates and sequences longer than
// max_len tokens (SOS/EOS included). Throws io_error if the file cannot be
// read and empty_corpus_error if nothing survives.
Corpus load_corpus(const std::string& path, const Vocabulary& vocab,
                   std::size_t max_len);

// Raw lines of a corpus file with comments/blanks stripped.
std::vector<std::string> read_smiles_lines(const std::string& path);

}  // namespace qsmiles
