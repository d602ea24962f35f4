// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "qsmiles/corpus.hpp"
#include "qsmiles/errors.hpp"
#include "qsmiles/rng.hpp"

using namespace qsmiles;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
  const auto path =
      (std::filesystem::temp_directory_path() / name).string();
  std::ofstream out(path);
  out << content;
  return path;
}

}  // namespace

TEST_CASE("split_tokens basics") {
  CHECK(split_tokens("CCO") == std::vector<std::string>{"C", "C", "O"});
  CHECK(split_tokens("CCl") == std::vector<std::string>{"C", "Cl"});
  CHECK(split_tokens("BrBr") == std::vector<std::string>{"Br", "Br"});
  CHECK(split_tokens("C[Si](C)C") ==
        std::vector<std::string>{"C", "[Si]", "(", "C", ")", "C"});
  CHECK(split_tokens("N[C@@H](C)O") ==
        std::vector<std::string>{"N", "[C@@H]", "(", "C", ")", "O"});
  // paren balance is not tokenization's business
  CHECK(split_tokens("C(") == std::vector<std::string>{"C", "("});
}

TEST_CASE("split_tokens rejections") {
  CHECK_THROWS_AS(split_tokens(""), reject_molecule_error);
  CHECK_THROWS_AS(split_tokens("CxO"), reject_molecule_error);
  CHECK_THROWS_AS(split_tokens("C[NH"), reject_molecule_error);
  CHECK_THROWS_WITH_AS(split_tokens("C?O"),
                       doctest::Contains("position 1"),
                       reject_molecule_error);
}

TEST_CASE("vocabulary build and determinism") {
  const Vocabulary v1 = Vocabulary::build({"CCO"});
  CHECK(v1.size() == 6);  // C, O plus 4 reserved
  CHECK(v1.id_of("C") >= kFirstRegularId);
  CHECK(v1.id_of("Z") == kUnkId);

  const Vocabulary v2 = Vocabulary::build({"CCO", "CCN"});
  CHECK(v2.size() == 7);

  const Vocabulary shuffled = Vocabulary::build({"CCN", "CCO"});
  CHECK(shuffled == v2);

  CHECK_THROWS_AS(Vocabulary::build({"??", "!!"}), empty_corpus_error);
}

TEST_CASE("tokenize produces sentinels and known ids") {
  const Vocabulary vocab = Vocabulary::build({"CCO", "CCl"});
  const TokenSequence seq = tokenize("CCl", vocab);
  REQUIRE(seq.size() == 4);
  CHECK(seq.front() == kSosId);
  CHECK(seq.back() == kEosId);
  CHECK(seq[1] == vocab.id_of("C"));
  CHECK(seq[2] == vocab.id_of("Cl"));
  for (TokenId id : seq) CHECK(id < static_cast<TokenId>(vocab.size()));
}

TEST_CASE("detokenize inverts tokenize") {
  const Vocabulary vocab =
      Vocabulary::build({"CCO", "CCl", "C[Si](C)Br", "c1ccccc1"});
  for (const std::string s : {"CCO", "CCl", "C[Si](C)Br", "c1ccccc1",
                              "ClBr", "CC(C)O"}) {
    CHECK(detokenize(tokenize(s, vocab), vocab) == s);
  }
}

TEST_CASE("round-trip over random token concatenations") {
  const std::vector<std::string> pool = {"C",  "N",  "O",  "Cl", "Br", "(",
                                         ")",  "=",  "#",  "1",  "2",  "[NH]",
                                         "c",  "n",  "@@", "/"};
  Vocabulary vocab = Vocabulary::from_tokens(pool);
  Rng rng(99);
  for (int trial = 0; trial < 1000; ++trial) {
    std::string s;
    const std::size_t len = 1 + rng.uniform_index(20);
    for (std::size_t i = 0; i < len; ++i) {
      s += pool[rng.uniform_index(pool.size())];
    }
    CHECK(detokenize(tokenize(s, vocab), vocab) == s);
  }
}

TEST_CASE("load_corpus dedups, filters and accounts for every line") {
  const auto path = write_temp("corpus_basic.smi",
                               "# header comment\n"
                               "CCO\n"
                               "CCO\n"
                               "CCN\n"
                               "\n"
                               "C?A\n"
                               "CCCCCCCCCC\n");
  const Vocabulary vocab = Vocabulary::build({"CCO", "CCN", "CCCCCCCCCC"});
  const Corpus corpus = load_corpus(path, vocab, 6);  // <= 4 raw tokens
  CHECK(corpus.report.input_lines == 5);
  CHECK(corpus.report.accepted == 2);
  CHECK(corpus.report.duplicates == 1);
  CHECK(corpus.report.rejected == 1);
  CHECK(corpus.report.length_filtered == 1);
  CHECK(corpus.sequences.size() == 2);
  CHECK(corpus.report.accepted + corpus.report.duplicates +
            corpus.report.rejected + corpus.report.length_filtered ==
        corpus.report.input_lines);
  std::remove(path.c_str());
}

TEST_CASE("load_corpus error paths") {
  const Vocabulary vocab = Vocabulary::build({"CCO"});
  CHECK_THROWS_AS(load_corpus("/nonexistent/file.smi", vocab, 10), io_error);

  const auto path = write_temp("corpus_empty.smi", "# nothing\n??\n");
  CHECK_THROWS_AS(load_corpus(path, vocab, 10), empty_corpus_error);
  std::remove(path.c_str());
}

TEST_CASE("identical input file loads to identical corpus and vocabulary") {
  const std::string body = "CCO\nCCN\nCC(C)O\nc1ccccc1\n";
  const auto p1 = write_temp("corpus_det1.smi", body);
  const auto p2 = write_temp("corpus_det2.smi", body);
  const Vocabulary v1 = Vocabulary::build(read_smiles_lines(p1));
  const Vocabulary v2 = Vocabulary::build(read_smiles_lines(p2));
  CHECK(v1 == v2);
  const Corpus c1 = load_corpus(p1, v1, 32);
  const Corpus c2 = load_corpus(p2, v2, 32);
  CHECK(c1.sequences == c2.sequences);
  CHECK(c1.smiles == c2.smiles);
  std::remove(p1.c_str());
  std::remove(p2.c_str());
}

TEST_CASE("vocabulary file round trip") {
  const Vocabulary vocab = Vocabulary::build({"CC(=O)Cl", "c1cc[nH]c1"});
  const auto path =
      (std::filesystem::temp_directory_path() / "vocab_rt.txt").string();
  vocab.save(path);
  const Vocabulary loaded = Vocabulary::load(path);
  CHECK(loaded == vocab);
  std::remove(path.c_str());
}

TEST_CASE("bundled sample corpus tokenizes without rejections") {
  const std::string path = std::string(QSMILES_DATA_DIR) + "/sample.smi";
  const auto lines = read_smiles_lines(path);
  REQUIRE(lines.size() > 30);
  const Vocabulary vocab = Vocabulary::build(lines);
  const Corpus corpus = load_corpus(path, vocab, 64);
  CHECK(corpus.report.rejected == 0);
  CHECK(corpus.report.length_filtered == 0);
  CHECK(corpus.report.accepted == lines.size());
}
