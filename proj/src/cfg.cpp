#include "cfgprint/cfg.hpp"

#include "cfgprint/error.hpp"

#include <algorithm>
#include <sstream>

namespace cfgprint {

ControlFlowGraph::ControlFlowGraph(std::vector<BasicBlock> blocks,
                                   std::vector<Edge> edges, BlockId entry,
                                   BlockId exit)
    : blocks_(std::move(blocks)), edges_(std::move(edges)), entry_(entry),
      exit_(exit) {
  const std::size_t n = blocks_.size();
  if (entry_ >= n || exit_ >= n)
    throw Error("cfg: entry/exit outside block range");
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  succ_.assign(n, {});
  for (const auto &[from, to] : edges_) {
    if (from >= n || to >= n)
      throw Error("cfg: dangling edge b" + std::to_string(from) + " -> b" +
                  std::to_string(to));
    if (from == exit_)
      throw Error("cfg: exit block has a successor");
    succ_[from].push_back(to);
  }
  for (std::size_t i = 0; i < n; ++i)
    blocks_[i].id = i;
  mark_unreachable();
}

ControlFlowGraph ControlFlowGraph::from_edges(std::size_t block_count,
                                              std::vector<Edge> edges) {
  if (block_count == 0)
    throw Error("cfg: empty graph");
  std::vector<BasicBlock> blocks(block_count);
  return ControlFlowGraph(std::move(blocks), std::move(edges), 0,
                          block_count - 1);
}

void ControlFlowGraph::mark_unreachable() {
  const std::size_t n = blocks_.size();
  std::vector<std::vector<BlockId>> pred(n);
  for (const auto &[from, to] : edges_)
    pred[to].push_back(from);

  auto flood = [n](BlockId start,
                   const std::vector<std::vector<BlockId>> &adj) {
    std::vector<bool> seen(n, false);
    std::vector<BlockId> work{start};
    seen[start] = true;
    while (!work.empty()) {
      const BlockId b = work.back();
      work.pop_back();
      for (BlockId next : adj[b]) {
        if (!seen[next]) {
          seen[next] = true;
          work.push_back(next);
        }
      }
    }
    return seen;
  };

  const auto forward = flood(entry_, succ_);
  const auto backward = flood(exit_, pred);
  for (std::size_t i = 0; i < n; ++i)
    blocks_[i].unreachable = !(forward[i] && backward[i]);
}

//===----------------------------------------------------------------------===//
// Statement-level control flow
//===----------------------------------------------------------------------===//

namespace {

struct ConstructLayout {
  // For every control ordinal: the matching construct-end ordinal, the
  // construct header, and the next arm (or the end) of the same construct.
  std::vector<std::size_t> end_of;
  std::vector<std::size_t> header_of;
  std::vector<std::size_t> next_arm;
};

ConstructLayout layout_constructs(std::span<const NormalizedStatement> stmts) {
  const std::size_t n = stmts.size();
  ConstructLayout layout;
  layout.end_of.assign(n, kExitTarget);
  layout.header_of.assign(n, kExitTarget);
  layout.next_arm.assign(n, kExitTarget);

  // Each open construct: header ordinal followed by its arm ordinals.
  std::vector<std::vector<std::size_t>> open;
  for (std::size_t k = 0; k < n; ++k) {
    switch (stmts[k].role) {
    case ControlRole::loop_header:
    case ControlRole::selection_header:
      open.push_back({k});
      break;
    case ControlRole::selection_alt:
      if (open.empty() ||
          stmts[open.back().front()].role != ControlRole::selection_header)
        throw Error("cfg: selection arm outside a selection at statement " +
                    std::to_string(k));
      open.back().push_back(k);
      break;
    case ControlRole::construct_end: {
      if (open.empty())
        throw Error("cfg: unmatched construct end at statement " +
                    std::to_string(k));
      std::vector<std::size_t> parts = std::move(open.back());
      open.pop_back();
      parts.push_back(k);
      for (std::size_t i = 0; i < parts.size(); ++i) {
        layout.end_of[parts[i]] = k;
        layout.header_of[parts[i]] = parts.front();
        if (i + 1 < parts.size())
          layout.next_arm[parts[i]] = parts[i + 1];
      }
      break;
    }
    case ControlRole::none:
      break;
    }
  }
  if (!open.empty())
    throw Error("cfg: construct opened at statement " +
                std::to_string(open.back().front()) + " is never closed");
  return layout;
}

} // namespace

std::vector<std::vector<std::size_t>>
statement_successors(std::span<const NormalizedStatement> stmts) {
  const std::size_t n = stmts.size();
  const ConstructLayout layout = layout_constructs(stmts);

  // Where control goes when statement k runs to completion: the next
  // statement, except that the end of one arm skips the remaining arms.
  auto fall_through = [&](std::size_t k) {
    const std::size_t next = k + 1;
    if (next >= n)
      return kExitTarget;
    if (stmts[next].role == ControlRole::selection_alt)
      return layout.end_of[next];
    return next;
  };

  std::vector<std::vector<std::size_t>> succ(n);
  for (std::size_t k = 0; k < n; ++k) {
    auto &out = succ[k];
    const auto &s = stmts[k];
    switch (s.role) {
    case ControlRole::none:
      out.push_back(fall_through(k));
      break;
    case ControlRole::loop_header:
      out.push_back(fall_through(k));
      out.push_back(layout.end_of[k]);
      break;
    case ControlRole::selection_header:
      if (s.construct != Construct::dispatch)
        out.push_back(fall_through(k));
      out.push_back(layout.next_arm[k]);
      break;
    case ControlRole::selection_alt:
      out.push_back(fall_through(k));
      if (s.conditional)
        out.push_back(layout.next_arm[k]);
      break;
    case ControlRole::construct_end:
      if (stmts[layout.header_of[k]].role == ControlRole::loop_header)
        out.push_back(layout.header_of[k]);
      out.push_back(fall_through(k));
      break;
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
  }
  return succ;
}

std::vector<std::size_t>
find_leaders(std::span<const NormalizedStatement> stmts) {
  if (stmts.empty())
    throw Error("empty program");
  const auto succ = statement_successors(stmts);
  std::vector<std::size_t> leaders{0};
  for (std::size_t k = 0; k < stmts.size(); ++k) {
    const bool control = stmts[k].is_control();
    if (control && k + 1 < stmts.size())
      leaders.push_back(k + 1);
    for (std::size_t target : succ[k]) {
      if (target == kExitTarget)
        continue;
      if (control || target != k + 1)
        leaders.push_back(target);
    }
  }
  std::sort(leaders.begin(), leaders.end());
  leaders.erase(std::unique(leaders.begin(), leaders.end()), leaders.end());
  return leaders;
}

std::vector<BasicBlock>
build_blocks(std::span<const NormalizedStatement> stmts,
             std::span<const std::size_t> leaders) {
  if (leaders.empty() || leaders.front() != 0)
    throw Error("build_blocks: leaders must start at ordinal 0");
  std::vector<BasicBlock> blocks;
  blocks.reserve(leaders.size());
  for (std::size_t i = 0; i < leaders.size(); ++i) {
    const std::size_t begin = leaders[i];
    const std::size_t end =
        i + 1 < leaders.size() ? leaders[i + 1] : stmts.size();
    if (begin >= end || end > stmts.size())
      throw Error("build_blocks: leaders not strictly ascending");
    BasicBlock b;
    b.id = i;
    b.statements.assign(stmts.begin() + static_cast<std::ptrdiff_t>(begin),
                        stmts.begin() + static_cast<std::ptrdiff_t>(end));
    blocks.push_back(std::move(b));
  }
  return blocks;
}

ControlFlowGraph build_cfg(std::vector<BasicBlock> blocks,
                           std::span<const NormalizedStatement> stmts) {
  const auto succ = statement_successors(stmts);
  const BlockId exit = blocks.size();

  // Blocks partition the sequence in order, so positions follow from sizes.
  std::vector<BlockId> block_of_leader(stmts.size(), kExitTarget);
  std::vector<std::size_t> last_of(blocks.size());
  std::size_t offset = 0;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (blocks[i].statements.empty())
      throw Error("build_cfg: empty basic block");
    block_of_leader.at(offset) = i;
    offset += blocks[i].statements.size();
    last_of[i] = offset - 1;
  }
  if (offset != stmts.size())
    throw Error("build_cfg: blocks do not cover the statement sequence");

  std::vector<Edge> edges;
  for (BlockId id = 0; id < blocks.size(); ++id) {
    for (std::size_t target : succ[last_of[id]]) {
      if (target == kExitTarget) {
        edges.emplace_back(id, exit);
        continue;
      }
      const BlockId to = block_of_leader.at(target);
      if (to == kExitTarget)
        throw Error("build_cfg: statement " + std::to_string(target) +
                    " is a jump target but not a leader");
      edges.emplace_back(id, to);
    }
  }

  BasicBlock exit_block;
  exit_block.id = exit;
  exit_block.is_virtual_exit = true;
  blocks.push_back(std::move(exit_block));
  return ControlFlowGraph(std::move(blocks), std::move(edges), 0, exit);
}

ControlFlowGraph build_cfg(std::span<const NormalizedStatement> stmts) {
  const auto leaders = find_leaders(stmts);
  return build_cfg(build_blocks(stmts, leaders), stmts);
}

//===----------------------------------------------------------------------===//
// DOT export
//===----------------------------------------------------------------------===//

namespace {

std::string node_name(const BasicBlock &b) {
  return b.is_virtual_exit ? std::string("exit") : "b" + std::to_string(b.id);
}

std::string escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (c == '"' || c == '\\')
      out += '\\';
    out += c;
  }
  return out;
}

} // namespace

std::string export_dot(const ControlFlowGraph &cfg) {
  std::ostringstream os;
  os << "digraph cfg {\n";
  os << "  node [shape=box, fontname=\"monospace\"];\n";
  for (const auto &b : cfg.blocks()) {
    os << "  " << node_name(b) << " [label=\"" << node_name(b);
    for (const auto &s : b.statements)
      os << "\\n" << escape(s.text);
    os << '"';
    if (b.unreachable)
      os << ", style=dashed";
    os << "];\n";
  }
  for (const auto &[from, to] : cfg.edges())
    os << "  " << node_name(cfg.block(from)) << " -> "
       << node_name(cfg.block(to)) << ";\n";
  os << "}\n";
  return os.str();
}

} // namespace cfgprint
