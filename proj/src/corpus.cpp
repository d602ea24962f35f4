// SPDX-License-Identifier: Apache-2.0
#include "qsmiles/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "qsmiles/errors.hpp"

namespace qsmiles {

namespace {

const char* kReservedNames[kFirstRegularId] = {"<pad>", "<sos>", "<eos>",
                                               "<unk>"};

bool is_single_token_char(char c) {
  switch (c) {
    // organic-subset and common atoms
    case 'B': case 'C': case 'N': case 'O': case 'P': case 'S':
    case 'F': case 'I': case 'H':
    // aromatic forms
    case 'b': case 'c': case 'n': case 'o': case 'p': case 's':
    // bonds, branches, rings, stereo, charge, disconnection
    case '-': case '=': case '#': case ':': case '/': case '\\':
    case '~': case '(': case ')': case '%': case '@': case '+':
    case '.':
      return true;
    default:
      return c >= '0' && c <= '9';
  }
}

bool is_two_char_token(char a, char b) {
  return (a == 'C' && b == 'l') || (a == 'B' && b == 'r') ||
         (a == 'S' && b == 'i') || (a == '@' && b == '@');
}

}  // namespace

std::vector<std::string> split_tokens(const std::string& smiles) {
  if (smiles.empty()) {
    throw reject_molecule_error("tokenize: empty SMILES string");
  }
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < smiles.size()) {
    const char c = smiles[i];
    if (c == '[') {
      const std::size_t close = smiles.find(']', i);
      if (close == std::string::npos) {
        throw reject_molecule_error("tokenize: unclosed '[' at position " +
                                    std::to_string(i) + " in \"" + smiles +
                                    "\"");
      }
      tokens.push_back(smiles.substr(i, close - i + 1));
      i = close + 1;
    } else if (i + 1 < smiles.size() && is_two_char_token(c, smiles[i + 1])) {
      tokens.push_back(smiles.substr(i, 2));
      i += 2;
    } else if (is_single_token_char(c)) {
      tokens.push_back(std::string(1, c));
      ++i;
    } else {
      throw reject_molecule_error("tokenize: character '" + std::string(1, c) +
                                  "' at position " + std::to_string(i) +
                                  " is outside the accepted set in \"" +
                                  smiles + "\"");
    }
  }
  return tokens;
}

Vocabulary Vocabulary::build(const std::vector<std::string>& lines) {
  std::set<std::string> seen;
  std::size_t tokenizable = 0;
  for (const auto& line : lines) {
    try {
      for (auto& tok : split_tokens(line)) seen.insert(std::move(tok));
      ++tokenizable;
    } catch (const reject_molecule_error&) {
      // skipped; load_corpus accounts for these separately
    }
  }
  if (tokenizable == 0) {
    throw empty_corpus_error("vocabulary: no tokenizable input lines");
  }
  return from_tokens(std::vector<std::string>(seen.begin(), seen.end()));
}

Vocabulary Vocabulary::from_tokens(std::vector<std::string> tokens) {
  std::sort(tokens.begin(), tokens.end());
  tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
  Vocabulary vocab;
  vocab.id_to_token_.reserve(tokens.size() + kFirstRegularId);
  for (TokenId r = 0; r < kFirstRegularId; ++r) {
    vocab.id_to_token_.emplace_back(kReservedNames[r]);
  }
  for (auto& tok : tokens) {
    const TokenId id = static_cast<TokenId>(vocab.id_to_token_.size());
    vocab.token_to_id_.emplace(tok, id);
    vocab.id_to_token_.push_back(std::move(tok));
  }
  return vocab;
}

TokenId Vocabulary::id_of(const std::string& token) const {
  const auto it = token_to_id_.find(token);
  return it == token_to_id_.end() ? kUnkId : it->second;
}

const std::string& Vocabulary::token_of(TokenId id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= id_to_token_.size()) {
    throw index_error("vocabulary: id " + std::to_string(id) +
                      " out of range (size " + std::to_string(size()) + ")");
  }
  return id_to_token_[static_cast<std::size_t>(id)];
}

std::vector<std::string> Vocabulary::regular_tokens() const {
  return std::vector<std::string>(id_to_token_.begin() + kFirstRegularId,
                                  id_to_token_.end());
}

void Vocabulary::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw io_error("vocabulary: cannot write " + path);
  out << "# one token per line, ids assigned from " << kFirstRegularId
      << " in file order; ids 0-3 are PAD/SOS/EOS/UNK\n";
  for (std::size_t i = kFirstRegularId; i < id_to_token_.size(); ++i) {
    out << id_to_token_[i] << '\n';
  }
  if (!out) throw io_error("vocabulary: write failed for " + path);
}

Vocabulary Vocabulary::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("vocabulary: cannot read " + path);
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    tokens.push_back(line);
  }
  return from_tokens(std::move(tokens));
}

TokenSequence tokenize(const std::string& smiles, const Vocabulary& vocab) {
  const auto parts = split_tokens(smiles);
  TokenSequence seq;
  seq.reserve(parts.size() + 2);
  seq.push_back(kSosId);
  for (const auto& part : parts) seq.push_back(vocab.id_of(part));
  seq.push_back(kEosId);
  return seq;
}

std::string detokenize(const TokenSequence& seq, const Vocabulary& vocab) {
  std::string out;
  for (TokenId id : seq) {
    if (id == kPadId || id == kSosId || id == kEosId) continue;
    out += vocab.token_of(id);
  }
  return out;
}

std::string LoadReport::to_string() const {
  std::ostringstream os;
  os << "input_lines: " << input_lines << '\n'
     << "accepted: " << accepted << '\n'
     << "duplicates: " << duplicates << '\n'
     << "length_filtered: " << length_filtered << '\n'
     << "rejected: " << rejected << '\n';
  return os.str();
}

std::vector<std::string> read_smiles_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("corpus: cannot read " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    lines.push_back(line);
  }
  return lines;
}

Corpus load_corpus(const std::string& path, const Vocabulary& vocab,
                   std::size_t max_len) {
  Corpus corpus;
  corpus.max_len = max_len;
  corpus.source = path;
  std::set<std::string> seen;
  for (const auto& line : read_smiles_lines(path)) {
    ++corpus.report.input_lines;
    if (seen.count(line)) {
      ++corpus.report.duplicates;
      continue;
    }
    TokenSequence seq;
    try {
      seq = tokenize(line, vocab);
    } catch (const reject_molecule_error&) {
      ++corpus.report.rejected;
      continue;
    }
    if (seq.size() > max_len) {
      ++corpus.report.length_filtered;
      continue;
    }
    seen.insert(line);
    corpus.sequences.push_back(std::move(seq));
    corpus.smiles.push_back(line);
    ++corpus.report.accepted;
  }
  if (corpus.sequences.empty()) {
    throw empty_corpus_error("corpus: no usable lines in " + path);
  }
  return corpus;
}

}  // namespace qsmiles
