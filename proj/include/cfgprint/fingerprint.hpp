#pragma once

#include "cfgprint/paths.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cfgprint {

inline constexpr unsigned kDefaultWidth = 64;
inline constexpr std::string_view kHashName = "fnv1a64";

/// 64-bit FNV-1a over the raw bytes.
constexpr std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::uint64_t hash_statement(const NormalizedStatement &stmt) {
  return fnv1a64(stmt.text);
}

/// Per-bit signed vote over the low `width` bits of every hash (weight 1):
/// bit i is set iff more hashes have it set than clear. Throws on an empty
/// input or a width outside [1, 64].
std::uint64_t simhash(std::span<const std::uint64_t> hashes,
                      unsigned width = kDefaultWidth);

struct PathFingerprint {
  std::uint64_t bits = 0;
  unsigned width = kDefaultWidth;
  std::string program_id;
  std::size_t path_index = 0;
};

/// SimHash of every statement hash in the real blocks along `path`.
/// Throws Error("empty path") if those blocks hold no statements.
PathFingerprint fingerprint_path(const ExecutionPath &path,
                                 const ControlFlowGraph &cfg,
                                 unsigned width = kDefaultWidth);

struct ProgramFingerprint {
  std::string program_id;
  /// Sorted by bits, no two with the same bits.
  std::vector<PathFingerprint> fingerprints;
  bool truncated = false;
  /// Paths fingerprinted before deduplication.
  std::size_t path_count = 0;
  unsigned width = kDefaultWidth;

  bool scoreable() const { return !fingerprints.empty(); }
};

ProgramFingerprint fingerprint_program(const std::vector<ExecutionPath> &paths,
                                       const ControlFlowGraph &cfg,
                                       std::string program_id,
                                       unsigned width = kDefaultWidth,
                                       bool truncated = false);

inline int hamming(std::uint64_t a, std::uint64_t b) {
  return __builtin_popcountll(a ^ b);
}

/// Throws Error on width mismatch.
int hamming(const PathFingerprint &a, const PathFingerprint &b);

/// 16 lowercase hex digits.
std::string to_hex(std::uint64_t bits);
/// Throws Error unless `text` is exactly 16 hex digits.
std::uint64_t from_hex(std::string_view text);

} // namespace cfgprint
