#pragma once

#include "cfgprint/frontend.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace cfgprint {

using BlockId = std::size_t;

struct BasicBlock {
  BlockId id = 0;
  std::vector<NormalizedStatement> statements;
  bool is_virtual_exit = false;
  /// Set when the block is not on any entry -> exit walk.
  bool unreachable = false;
};

using Edge = std::pair<BlockId, BlockId>;

class ControlFlowGraph {
public:
  ControlFlowGraph() = default;

  /// Takes ownership of blocks and edges. Edges are sorted and deduplicated;
  /// `exit` must have no outgoing edge. Throws Error on dangling endpoints.
  ControlFlowGraph(std::vector<BasicBlock> blocks, std::vector<Edge> edges,
                   BlockId entry, BlockId exit);

  /// Bare graph over `block_count` statement-less blocks, e.g. for feeding
  /// path enumeration a hand-drawn shape. Entry is block 0, exit the last.
  static ControlFlowGraph from_edges(std::size_t block_count,
                                     std::vector<Edge> edges);

  const std::vector<BasicBlock> &blocks() const { return blocks_; }
  const std::vector<Edge> &edges() const { return edges_; }
  const BasicBlock &block(BlockId id) const { return blocks_.at(id); }
  /// Successor ids in ascending order.
  std::span<const BlockId> successors(BlockId id) const {
    return succ_.at(id);
  }
  BlockId entry_id() const { return entry_; }
  BlockId exit_id() const { return exit_; }
  std::size_t size() const { return blocks_.size(); }

private:
  std::vector<BasicBlock> blocks_;
  std::vector<Edge> edges_;
  std::vector<std::vector<BlockId>> succ_;
  BlockId entry_ = 0;
  BlockId exit_ = 0;

  void mark_unreachable();
};

/// Sentinel successor meaning "leaves the program".
inline constexpr std::size_t kExitTarget = static_cast<std::size_t>(-1);

/// Statement-level control successors for every ordinal, derived from the
/// control roles and nesting of the flat sequence. Throws Error if the
/// construct markers are unbalanced.
std::vector<std::vector<std::size_t>>
statement_successors(std::span<const NormalizedStatement> statements);

/// Ordinals that start a basic block: the first statement, every target of a
/// control transfer, and every statement right after a control statement.
/// Throws Error("empty program") on empty input.
std::vector<std::size_t>
find_leaders(std::span<const NormalizedStatement> statements);

std::vector<BasicBlock>
build_blocks(std::span<const NormalizedStatement> statements,
             std::span<const std::size_t> leaders);

/// Wires the blocks and appends the virtual exit block.
ControlFlowGraph build_cfg(std::vector<BasicBlock> blocks,
                           std::span<const NormalizedStatement> statements);

/// find_leaders + build_blocks + build_cfg.
ControlFlowGraph build_cfg(std::span<const NormalizedStatement> statements);

std::string export_dot(const ControlFlowGraph &cfg);

} // namespace cfgprint
