#include "oracles.hpp"

#include <algorithm>
#include <functional>

namespace oracle {

using cfgprint::Statement;
using cfgprint::StmtKind;

namespace {

bool is_simple(const Statement &s) {
  return s.kind == StmtKind::assign || s.kind == StmtKind::declare ||
         s.kind == StmtKind::call || s.kind == StmtKind::output;
}

struct Numbered {
  std::size_t header = 0;
  std::vector<Numbered> body;
  std::vector<Numbered> alts;
  std::size_t end = 0;
  const Statement *node = nullptr;
};

Numbered number(const Statement &s, std::size_t &next) {
  Numbered n;
  n.node = &s;
  n.header = next++;
  for (const auto &c : s.body)
    n.body.push_back(number(c, next));
  for (const auto &a : s.alternatives) {
    Numbered alt;
    alt.node = &a;
    alt.header = next++;
    for (const auto &c : a.body)
      alt.body.push_back(number(c, next));
    n.alts.push_back(std::move(alt));
  }
  if (!is_simple(s))
    n.end = next++;
  return n;
}

std::size_t entry(const std::vector<Numbered> &list, std::size_t otherwise) {
  return list.empty() ? otherwise : list.front().header;
}

void wire(const std::vector<Numbered> &list, std::size_t after,
          std::vector<std::set<std::size_t>> &succ);

void wire_one(const Numbered &n, std::size_t after,
              std::vector<std::set<std::size_t>> &succ) {
  const Statement &s = *n.node;
  switch (s.kind) {
  case StmtKind::while_:
  case StmtKind::for_:
    succ[n.header] = {entry(n.body, n.end), n.end};
    wire(n.body, n.end, succ);
    succ[n.end] = {n.header, after};
    return;
  case StmtKind::if_:
  case StmtKind::case_: {
    const std::size_t first_arm = n.alts.empty() ? n.end : n.alts[0].header;
    if (s.kind == StmtKind::if_) {
      succ[n.header] = {entry(n.body, n.end), first_arm};
      wire(n.body, n.end, succ);
    } else {
      succ[n.header] = {first_arm};
    }
    for (std::size_t i = 0; i < n.alts.size(); ++i) {
      const auto &alt = n.alts[i];
      const std::size_t next_arm =
          i + 1 < n.alts.size() ? n.alts[i + 1].header : n.end;
      if (alt.node->kind == StmtKind::else_)
        succ[alt.header] = {entry(alt.body, n.end)};
      else
        succ[alt.header] = {entry(alt.body, n.end), next_arm};
      wire(alt.body, n.end, succ);
    }
    succ[n.end] = {after};
    return;
  }
  default:
    succ[n.header] = {after};
  }
}

void wire(const std::vector<Numbered> &list, std::size_t after,
          std::vector<std::set<std::size_t>> &succ) {
  for (std::size_t i = 0; i < list.size(); ++i)
    wire_one(list[i], i + 1 < list.size() ? list[i + 1].header : after, succ);
}

bool is_control_ordinal(const std::vector<Numbered> &list, std::size_t k);

bool contains_control(const Numbered &n, std::size_t k) {
  if (!is_simple(*n.node) && (n.header == k || n.end == k))
    return true;
  for (const auto &alt : n.alts)
    if (alt.header == k || is_control_ordinal(alt.body, k))
      return true;
  return is_control_ordinal(n.body, k);
}

bool is_control_ordinal(const std::vector<Numbered> &list, std::size_t k) {
  return std::any_of(list.begin(), list.end(),
                     [&](const Numbered &n) { return contains_control(n, k); });
}

} // namespace

std::vector<std::set<std::size_t>> tree_successors(const Statement &program) {
  std::size_t next = 0;
  std::vector<Numbered> top;
  for (const auto &s : program.body)
    top.push_back(number(s, next));
  std::vector<std::set<std::size_t>> succ(next);
  wire(top, kExit, succ);
  return succ;
}

std::set<std::pair<std::size_t, std::size_t>>
tree_block_edges(const Statement &program, std::size_t *blocks) {
  std::size_t next = 0;
  std::vector<Numbered> top;
  for (const auto &s : program.body)
    top.push_back(number(s, next));
  std::vector<std::set<std::size_t>> succ(next);
  wire(top, kExit, succ);
  const std::size_t n = next;

  std::vector<bool> leader(n, false);
  if (n > 0)
    leader[0] = true;
  for (std::size_t k = 0; k < n; ++k) {
    const bool control = is_control_ordinal(top, k);
    if (control && k + 1 < n)
      leader[k + 1] = true;
    for (std::size_t t : succ[k])
      if (t != kExit && (control || t != k + 1))
        leader[t] = true;
  }
  std::vector<std::size_t> block_of(n);
  std::size_t count = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (leader[k])
      ++count;
    block_of[k] = count - 1;
  }
  std::set<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t k = 0; k < n; ++k) {
    const bool last_in_block = k + 1 == n || leader[k + 1];
    if (!last_in_block)
      continue;
    for (std::size_t t : succ[k])
      edges.insert({block_of[k], t == kExit ? count : block_of[t]});
  }
  if (blocks)
    *blocks = count;
  return edges;
}

std::set<std::vector<std::size_t>>
simple_paths(const std::vector<std::vector<bool>> &adj) {
  const std::size_t n = adj.size();
  std::set<std::vector<std::size_t>> out;
  std::vector<std::size_t> path{0};
  std::vector<bool> used(n, false);
  used[0] = true;
  std::function<void(std::size_t)> go = [&](std::size_t v) {
    if (v == n - 1) {
      out.insert(path);
      return;
    }
    for (std::size_t w = 0; w < n; ++w) {
      if (!adj[v][w] || used[w])
        continue;
      used[w] = true;
      path.push_back(w);
      go(w);
      path.pop_back();
      used[w] = false;
    }
  };
  go(0);
  return out;
}

std::uint64_t majority_bits(const std::vector<std::uint64_t> &hashes,
                            unsigned width) {
  std::uint64_t out = 0;
  for (unsigned bit = 0; bit < width; ++bit) {
    std::size_t ones = 0, zeros = 0;
    for (std::uint64_t h : hashes) {
      if ((h >> bit) & 1U)
        ++ones;
      else
        ++zeros;
    }
    if (ones > zeros)
      out |= std::uint64_t{1} << bit;
  }
  return out;
}

int hamming_loop(std::uint64_t a, std::uint64_t b, unsigned width) {
  int d = 0;
  for (unsigned bit = 0; bit < width; ++bit)
    if (((a >> bit) & 1U) != ((b >> bit) & 1U))
      ++d;
  return d;
}

namespace {

std::size_t matched(const std::vector<std::uint64_t> &from,
                    const std::vector<std::uint64_t> &to, int alpha) {
  std::size_t count = 0;
  for (std::uint64_t x : from) {
    int best = 65;
    for (std::uint64_t y : to)
      best = std::min(best, hamming_loop(x, y));
    if (best <= alpha)
      ++count;
  }
  return count;
}

} // namespace

double containment(const std::vector<std::uint64_t> &a,
                   const std::vector<std::uint64_t> &b, int alpha) {
  std::size_t numerator;
  if (a.size() < b.size())
    numerator = matched(a, b, alpha);
  else if (b.size() < a.size())
    numerator = matched(b, a, alpha);
  else
    numerator = std::max(matched(a, b, alpha), matched(b, a, alpha));
  return static_cast<double>(numerator) /
         static_cast<double>(std::min(a.size(), b.size()));
}

double resemblance(const std::vector<std::uint64_t> &a,
                   const std::vector<std::uint64_t> &b, int alpha) {
  return static_cast<double>(matched(a, b, alpha) + matched(b, a, alpha)) /
         static_cast<double>(a.size() + b.size());
}

std::vector<std::vector<std::size_t>>
components(std::size_t n, const std::vector<std::vector<bool>> &linked) {
  std::vector<int> label(n, -1);
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t s = 0; s < n; ++s) {
    if (label[s] >= 0)
      continue;
    std::vector<std::size_t> comp{s};
    label[s] = static_cast<int>(out.size());
    for (std::size_t i = 0; i < comp.size(); ++i)
      for (std::size_t v = 0; v < n; ++v)
        if (label[v] < 0 && linked[comp[i]][v]) {
          label[v] = static_cast<int>(out.size());
          comp.push_back(v);
        }
    std::sort(comp.begin(), comp.end());
    out.push_back(comp);
  }
  return out;
}

} // namespace oracle
