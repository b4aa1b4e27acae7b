#pragma once

#include "cfgprint/cfg.hpp"

#include <cstddef>
#include <vector>

namespace cfgprint {

struct ExecutionPath {
  std::vector<BlockId> block_ids;
  /// Blocks on the path, not counting a virtual exit.
  std::size_t real_block_count = 0;

  bool operator==(const ExecutionPath &) const = default;
};

struct PathSet {
  std::vector<ExecutionPath> paths;
  /// More than max_paths simple paths exist; `paths` holds the first ones.
  bool truncated = false;
};

inline constexpr std::size_t kDefaultMaxPaths = 10000;
inline constexpr std::size_t kDefaultMinBlocks = 3;

/// All simple entry -> exit paths by depth-first search, successors visited
/// in ascending id. A block already on the current path is never re-entered,
/// so every loop body appears at most once per path.
PathSet enumerate_paths(const ControlFlowGraph &cfg,
                        std::size_t max_paths = kDefaultMaxPaths);

/// Keeps the paths with at least `min_blocks` real blocks.
std::vector<ExecutionPath> filter_paths(const std::vector<ExecutionPath> &paths,
                                        std::size_t min_blocks);

} // namespace cfgprint
