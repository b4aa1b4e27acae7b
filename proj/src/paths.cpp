#include "cfgprint/paths.hpp"

#include "cfgprint/error.hpp"

namespace cfgprint {

namespace {

std::size_t count_real(const ControlFlowGraph &cfg,
                       const std::vector<BlockId> &ids) {
  std::size_t n = 0;
  for (BlockId id : ids)
    n += cfg.block(id).is_virtual_exit ? 0 : 1;
  return n;
}

} // namespace

PathSet enumerate_paths(const ControlFlowGraph &cfg, std::size_t max_paths) {
  if (max_paths == 0)
    throw Error("enumerate_paths: max_paths must be positive");

  PathSet result;
  const BlockId target = cfg.exit_id();
  std::vector<bool> on_path(cfg.size(), false);
  std::vector<BlockId> path{cfg.entry_id()};
  // Per depth: index of the next successor to try.
  std::vector<std::size_t> cursor{0};
  on_path[cfg.entry_id()] = true;

  auto record = [&] {
    if (result.paths.size() == max_paths) {
      result.truncated = true;
      return false;
    }
    result.paths.push_back({path, count_real(cfg, path)});
    return true;
  };

  if (cfg.entry_id() == target) {
    record();
    return result;
  }

  while (!path.empty()) {
    const BlockId current = path.back();
    const auto succ = cfg.successors(current);
    std::size_t &next = cursor.back();
    if (next == succ.size()) {
      on_path[current] = false;
      path.pop_back();
      cursor.pop_back();
      continue;
    }
    const BlockId candidate = succ[next++];
    if (on_path[candidate])
      continue;
    if (candidate == target) {
      path.push_back(candidate);
      const bool kept = record();
      path.pop_back();
      if (!kept)
        return result;
      continue;
    }
    on_path[candidate] = true;
    path.push_back(candidate);
    cursor.push_back(0);
  }
  return result;
}

std::vector<ExecutionPath> filter_paths(const std::vector<ExecutionPath> &paths,
                                        std::size_t min_blocks) {
  std::vector<ExecutionPath> kept;
  for (const auto &p : paths)
    if (p.real_block_count >= min_blocks)
      kept.push_back(p);
  return kept;
}

} // namespace cfgprint
