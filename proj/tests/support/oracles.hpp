// Reference implementations used only by tests. Each one is written
// directly from the definition it checks and shares no code path with the
// library routine under test.
#pragma once

#include "cfgprint/cfg.hpp"
#include "cfgprint/fingerprint.hpp"
#include "cfgprint/frontend.hpp"

#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace oracle {

inline constexpr std::size_t kExit = static_cast<std::size_t>(-1);

/// Statement-level successors obtained by walking the syntax tree with an
/// explicit continuation, ordinals numbered in emission order.
std::vector<std::set<std::size_t>>
tree_successors(const cfgprint::Statement &program);

/// Block edges implied by `tree_successors`, with blocks found by a fresh
/// leader scan. Virtual exit is block number `blocks`.
std::set<std::pair<std::size_t, std::size_t>>
tree_block_edges(const cfgprint::Statement &program, std::size_t *blocks);

/// Every simple path from 0 to n-1 in an adjacency matrix.
std::set<std::vector<std::size_t>>
simple_paths(const std::vector<std::vector<bool>> &adjacency);

/// Bitwise majority: bit i set iff strictly more ones than zeros in column i.
std::uint64_t majority_bits(const std::vector<std::uint64_t> &hashes,
                            unsigned width);

int hamming_loop(std::uint64_t a, std::uint64_t b, unsigned width = 64);

/// Score definitions evaluated straight from the all-pairs distance table.
double containment(const std::vector<std::uint64_t> &a,
                   const std::vector<std::uint64_t> &b, int alpha);
double resemblance(const std::vector<std::uint64_t> &a,
                   const std::vector<std::uint64_t> &b, int alpha);

/// Connected components by repeated flood fill over an explicit relation.
std::vector<std::vector<std::size_t>>
components(std::size_t n, const std::vector<std::vector<bool>> &linked);

} // namespace oracle
