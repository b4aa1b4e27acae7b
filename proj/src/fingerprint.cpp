#include "cfgprint/fingerprint.hpp"

#include "cfgprint/error.hpp"

#include <algorithm>
#include <array>
#include <charconv>

namespace cfgprint {

std::uint64_t simhash(std::span<const std::uint64_t> hashes, unsigned width) {
  if (width == 0 || width > 64)
    throw Error("simhash: width must be in [1, 64]");
  if (hashes.empty())
    throw Error("empty path");

  std::array<std::int64_t, 64> votes{};
  for (std::uint64_t h : hashes)
    for (unsigned i = 0; i < width; ++i)
      votes[i] += ((h >> i) & 1U) ? 1 : -1;

  std::uint64_t bits = 0;
  for (unsigned i = 0; i < width; ++i)
    if (votes[i] > 0)
      bits |= std::uint64_t{1} << i;
  return bits;
}

PathFingerprint fingerprint_path(const ExecutionPath &path,
                                 const ControlFlowGraph &cfg, unsigned width) {
  std::vector<std::uint64_t> hashes;
  for (BlockId id : path.block_ids) {
    const auto &block = cfg.block(id);
    if (block.is_virtual_exit)
      continue;
    for (const auto &s : block.statements)
      hashes.push_back(hash_statement(s));
  }
  PathFingerprint fp;
  fp.bits = simhash(hashes, width);
  fp.width = width;
  return fp;
}

ProgramFingerprint fingerprint_program(const std::vector<ExecutionPath> &paths,
                                       const ControlFlowGraph &cfg,
                                       std::string program_id, unsigned width,
                                       bool truncated) {
  ProgramFingerprint program;
  program.program_id = std::move(program_id);
  program.truncated = truncated;
  program.path_count = paths.size();
  program.width = width;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    PathFingerprint fp = fingerprint_path(paths[i], cfg, width);
    fp.program_id = program.program_id;
    fp.path_index = i;
    program.fingerprints.push_back(std::move(fp));
  }
  auto &fps = program.fingerprints;
  std::stable_sort(fps.begin(), fps.end(),
                   [](const auto &a, const auto &b) { return a.bits < b.bits; });
  fps.erase(std::unique(fps.begin(), fps.end(),
                        [](const auto &a, const auto &b) {
                          return a.bits == b.bits;
                        }),
            fps.end());
  return program;
}

int hamming(const PathFingerprint &a, const PathFingerprint &b) {
  if (a.width != b.width)
    throw Error("hamming: fingerprint widths differ (" +
                std::to_string(a.width) + " vs " + std::to_string(b.width) +
                ")");
  return hamming(a.bits, b.bits);
}

std::string to_hex(std::uint64_t bits) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[bits & 0xF];
    bits >>= 4;
  }
  return out;
}

std::uint64_t from_hex(std::string_view text) {
  const bool lower_hex = std::all_of(text.begin(), text.end(), [](char c) {
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
  });
  if (text.size() != 16 || !lower_hex)
    throw Error("malformed fingerprint '" + std::string(text) + "'");
  std::uint64_t value = 0;
  std::from_chars(text.data(), text.data() + text.size(), value, 16);
  return value;
}

} // namespace cfgprint
