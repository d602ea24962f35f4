// SPDX-License-Identifier: Apache-2.0
#include "qsmiles/checkpoint.hpp"

#include <cstring>
#include <fstream>

#include "qsmiles/errors.hpp"

namespace qsmiles {

namespace {

constexpr char kMagic[8] = {'Q', 'S', 'M', 'C', 'K', 'P', 'T', '\n'};
constexpr char kTrailer[4] = {'E', 'N', 'D', '\n'};

void write_u32(std::ostream& os, std::uint32_t x) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(x >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 4);
}

void write_u64(std::ostream& os, std::uint64_t x) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(x >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 8);
}

void write_string(std::ostream& os, const std::string& s) {
  write_u32(os, static_cast<std::uint32_t>(s.size()));
  os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

void write_doubles(std::ostream& os, const std::vector<double>& v) {
  write_u64(os, v.size());
  for (double x : v) {
    std::uint64_t bits;
    std::memcpy(&bits, &x, 8);
    write_u64(os, bits);
  }
}

struct Reader {
  std::istream& is;
  const std::string& path;

  void raw(void* dst, std::size_t n) {
    is.read(static_cast<char*>(dst), static_cast<std::streamsize>(n));
    if (is.gcount() != static_cast<std::streamsize>(n)) {
      throw load_error("checkpoint: truncated file " + path);
    }
  }
  std::uint32_t u32() {
    unsigned char b[4];
    raw(b, 4);
    std::uint32_t x = 0;
    for (int i = 3; i >= 0; --i) x = (x << 8) | b[i];
    return x;
  }
  std::uint64_t u64() {
    unsigned char b[8];
    raw(b, 8);
    std::uint64_t x = 0;
    for (int i = 7; i >= 0; --i) x = (x << 8) | b[i];
    return x;
  }
  std::string str() {
    const std::uint32_t n = u32();
    if (n > (1u << 24)) {
      throw load_error("checkpoint: implausible string length in " + path);
    }
    std::string s(n, '\0');
    if (n) raw(s.data(), n);
    return s;
  }
  std::vector<double> doubles() {
    const std::uint64_t n = u64();
    if (n > (1ull << 32)) {
      throw load_error("checkpoint: implausible array length in " + path);
    }
    std::vector<double> v(n);
    for (std::uint64_t i = 0; i < n; ++i) {
      const std::uint64_t bits = u64();
      std::memcpy(&v[i], &bits, 8);
    }
    return v;
  }
};

}  // namespace

void Checkpoint::capture_params(const ParamStore& store) {
  params.clear();
  for (const Param& p : store.all()) {
    SavedParam sp;
    sp.name = p.name;
    sp.rows = static_cast<std::uint32_t>(p.rows);
    sp.cols = static_cast<std::uint32_t>(p.cols);
    sp.value = p.value;
    sp.m = p.m;
    sp.v = p.v;
    params.push_back(std::move(sp));
  }
}

void Checkpoint::apply_to(ParamStore& store) const {
  if (params.size() != store.count()) {
    throw compat_error("checkpoint: stores " + std::to_string(params.size()) +
                       " parameters, model has " +
                       std::to_string(store.count()));
  }
  for (const SavedParam& sp : params) {
    const int idx = store.find(sp.name);
    if (idx < 0) {
      throw compat_error("checkpoint: model has no parameter '" + sp.name +
                         "'");
    }
    Param& p = store.at(idx);
    if (p.rows != static_cast<int>(sp.rows) ||
        p.cols != static_cast<int>(sp.cols)) {
      throw compat_error("checkpoint: parameter '" + sp.name + "' is " +
                         std::to_string(sp.rows) + "x" +
                         std::to_string(sp.cols) + ", model expects " +
                         std::to_string(p.rows) + "x" +
                         std::to_string(p.cols));
    }
    p.value = sp.value;
    p.m = sp.m;
    p.v = sp.v;
  }
}

void save_checkpoint(const std::string& path, const Checkpoint& ckpt) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw io_error("checkpoint: cannot write " + path);
  os.write(kMagic, sizeof kMagic);
  write_u32(os, Checkpoint::kVersion);
  write_string(os, ckpt.config.describe());
  write_u64(os, ckpt.vocab_tokens.size());
  for (const auto& tok : ckpt.vocab_tokens) write_string(os, tok);
  write_u64(os, ckpt.epoch);
  write_u64(os, ckpt.global_step);
  write_u64(os, ckpt.adam_steps);
  write_string(os, ckpt.rng_state);
  write_u64(os, ckpt.params.size());
  for (const auto& sp : ckpt.params) {
    write_string(os, sp.name);
    write_u32(os, sp.rows);
    write_u32(os, sp.cols);
    write_doubles(os, sp.value);
    write_doubles(os, sp.m);
    write_doubles(os, sp.v);
  }
  os.write(kTrailer, sizeof kTrailer);
  if (!os) throw io_error("checkpoint: write failed for " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw io_error("checkpoint: cannot read " + path);
  Reader r{is, path};
  char magic[sizeof kMagic];
  r.raw(magic, sizeof magic);
  if (std::memcmp(magic, kMagic, sizeof kMagic) != 0) {
    throw load_error("checkpoint: bad magic in " + path);
  }
  const std::uint32_t version = r.u32();
  if (version != Checkpoint::kVersion) {
    throw load_error("checkpoint: version " + std::to_string(version) +
                     " in " + path + ", this build reads version " +
                     std::to_string(Checkpoint::kVersion));
  }
  Checkpoint ckpt;
  ckpt.config.apply_text(r.str());
  const std::uint64_t vocab_count = r.u64();
  for (std::uint64_t i = 0; i < vocab_count; ++i) {
    ckpt.vocab_tokens.push_back(r.str());
  }
  ckpt.epoch = r.u64();
  ckpt.global_step = r.u64();
  ckpt.adam_steps = r.u64();
  ckpt.rng_state = r.str();
  const std::uint64_t param_count = r.u64();
  for (std::uint64_t i = 0; i < param_count; ++i) {
    Checkpoint::SavedParam sp;
    sp.name = r.str();
    sp.rows = r.u32();
    sp.cols = r.u32();
    sp.value = r.doubles();
    sp.m = r.doubles();
    sp.v = r.doubles();
    ckpt.params.push_back(std::move(sp));
  }
  char trailer[sizeof kTrailer];
  r.raw(trailer, sizeof trailer);
  if (std::memcmp(trailer, kTrailer, sizeof kTrailer) != 0) {
    throw load_error("checkpoint: missing trailer in " + path);
  }
  return ckpt;
}

}  // namespace qsmiles
