#pragma once

// Independent brute-force oracles used to freeze expected values. Everything
// here reads LevelSpec data directly and never goes through the library's
// fiber order, successor, or clopen machinery it checks.

#include <algorithm>
#include <map>
#include <optional>
#include <vector>

#include "obd/diagram.hpp"
#include "obd/paths.hpp"

namespace oracle {

using obd::EdgeSpec;
using obd::FinitePath;
using obd::LevelSpec;
using obd::OrderedDiagram;

inline std::vector<FinitePath> naive_paths(const OrderedDiagram& d, size_t n) {
  std::vector<FinitePath> cur{FinitePath{}};
  uint32_t at_count = 1;
  (void)at_count;
  for (size_t level = 1; level <= n; ++level) {
    const LevelSpec& spec = d.level(level);
    std::vector<FinitePath> next;
    for (const FinitePath& p : cur) {
      uint32_t at = 0;
      if (!p.empty()) at = d.level(p.size()).edges[p.edges.back()].dst;
      for (uint32_t id = 0; id < spec.edges.size(); ++id)
        if (spec.edges[id].src == at) {
          FinitePath q = p;
          q.edges.push_back(id);
          next.push_back(q);
        }
    }
    cur = next;
  }
  std::sort(cur.begin(), cur.end());
  return cur;
}

inline uint32_t naive_terminal(const OrderedDiagram& d, const FinitePath& p) {
  if (p.empty()) return 0;
  return d.level(p.size()).edges[p.edges.back()].dst;
}

// Deepest differing level decides, by ord.
inline bool naive_fiber_less(const OrderedDiagram& d, const FinitePath& a,
                             const FinitePath& b) {
  for (size_t i = a.size(); i >= 1; --i) {
    if (a.edges[i - 1] == b.edges[i - 1]) continue;
    const LevelSpec& spec = d.level(i);
    return spec.edges[a.edges[i - 1]].ord < spec.edges[b.edges[i - 1]].ord;
  }
  return false;
}

inline std::vector<FinitePath> naive_fiber_sorted(const OrderedDiagram& d,
                                                  uint32_t v, size_t n) {
  std::vector<FinitePath> fiber;
  for (const FinitePath& p : naive_paths(d, n))
    if (naive_terminal(d, p) == v) fiber.push_back(p);
  std::sort(fiber.begin(), fiber.end(),
            [&](const FinitePath& a, const FinitePath& b) {
              return naive_fiber_less(d, a, b);
            });
  return fiber;
}

// Successor = next element of the sorted fiber.
inline std::optional<FinitePath> naive_succ(const OrderedDiagram& d,
                                            const FinitePath& p) {
  auto fiber = naive_fiber_sorted(d, naive_terminal(d, p), p.size());
  for (size_t i = 0; i < fiber.size(); ++i)
    if (fiber[i] == p)
      return i + 1 < fiber.size() ? std::optional<FinitePath>(fiber[i + 1])
                                  : std::nullopt;
  return std::nullopt;
}

inline std::optional<FinitePath> naive_pred(const OrderedDiagram& d,
                                            const FinitePath& p) {
  auto fiber = naive_fiber_sorted(d, naive_terminal(d, p), p.size());
  for (size_t i = 0; i < fiber.size(); ++i)
    if (fiber[i] == p)
      return i > 0 ? std::optional<FinitePath>(fiber[i - 1]) : std::nullopt;
  return std::nullopt;
}

inline std::optional<FinitePath> naive_sigma(const OrderedDiagram& d,
                                             const FinitePath& p, int steps) {
  FinitePath cur = p;
  for (int k = 0; k < std::abs(steps); ++k) {
    auto next = steps > 0 ? naive_succ(d, cur) : naive_pred(d, cur);
    if (!next) return std::nullopt;
    cur = *next;
  }
  return cur;
}

// Successor lookup table over all depth-n stems; absent key = fiber-max.
struct SigmaTable {
  std::map<FinitePath, FinitePath> next;
};

inline SigmaTable build_sigma(const OrderedDiagram& d, size_t depth) {
  SigmaTable t;
  for (uint32_t v = 0; v < d.vertex_count(depth); ++v) {
    auto fiber = naive_fiber_sorted(d, v, depth);
    for (size_t i = 0; i + 1 < fiber.size(); ++i)
      t.next[fiber[i]] = fiber[i + 1];
  }
  return t;
}

// First re-entry of the stem orbit into the stem set W (all at one depth);
// the fallback value steps+1 applies when the orbit dies on the fiber-max.
inline uint64_t naive_return_value(const OrderedDiagram& d,
                                   const SigmaTable& sigma,
                                   const std::vector<FinitePath>& w_stems,
                                   uint32_t w_depth, const FinitePath& p) {
  (void)d;
  FinitePath cur = p;
  for (uint64_t steps = 1;; ++steps) {
    auto it = sigma.next.find(cur);
    if (it == sigma.next.end()) return steps;  // fiber-max after steps-1 moves
    cur = it->second;
    FinitePath prefix{std::vector<uint32_t>(cur.edges.begin(),
                                            cur.edges.begin() + w_depth)};
    if (std::binary_search(w_stems.begin(), w_stems.end(), prefix))
      return steps;
  }
}

inline std::vector<std::vector<uint64_t>> naive_matmul(
    const std::vector<std::vector<uint64_t>>& a,
    const std::vector<std::vector<uint64_t>>& b) {
  std::vector<std::vector<uint64_t>> r(a.size(),
                                       std::vector<uint64_t>(b[0].size(), 0));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t k = 0; k < b.size(); ++k)
      for (size_t j = 0; j < b[0].size(); ++j) r[i][j] += a[i][k] * b[k][j];
  return r;
}

// Exhaustive graded-order isomorphism search over all vertex bijections.
inline bool brute_force_iso_exists(const OrderedDiagram& a,
                                   const OrderedDiagram& b) {
  if (a.prefix_size() != b.prefix_size()) return false;
  size_t levels = a.prefix_size();
  std::vector<std::vector<std::vector<uint32_t>>> perms(levels + 1);
  for (size_t n = 0; n <= levels; ++n) {
    if (a.vertex_count(n) != b.vertex_count(n)) return false;
    std::vector<uint32_t> perm(a.vertex_count(n));
    for (uint32_t i = 0; i < perm.size(); ++i) perm[i] = i;
    do {
      perms[n].push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  // Depth-first over the product of per-level bijections.
  std::vector<size_t> choice(levels + 1, 0);
  for (;;) {
    bool ok = true;
    for (size_t n = 1; n <= levels && ok; ++n) {
      const LevelSpec& sa = a.level(n);
      const LevelSpec& sb = b.level(n);
      if (sa.edges.size() != sb.edges.size()) {
        ok = false;
        break;
      }
      const auto& vm_prev = perms[n - 1][choice[n - 1]];
      const auto& vm = perms[n][choice[n]];
      // Multiset of (src, dst, ord) must map exactly.
      std::vector<EdgeSpec> ea, eb = sb.edges;
      for (const EdgeSpec& e : sa.edges)
        ea.push_back(EdgeSpec{vm_prev[e.src], vm[e.dst], e.ord});
      std::sort(ea.begin(), ea.end());
      std::sort(eb.begin(), eb.end());
      ok = ea == eb;
    }
    if (ok) return true;
    size_t n = 0;
    while (n <= levels && ++choice[n] == perms[n].size()) choice[n++] = 0;
    if (n > levels) return false;
  }
}

// Copy of d with two ord values swapped inside one fiber of one level.
inline OrderedDiagram swap_ord(const OrderedDiagram& d, size_t level,
                               uint32_t dst, uint32_t ord_a, uint32_t ord_b) {
  std::vector<LevelSpec> prefix = d.prefix();
  std::vector<LevelSpec> block = d.block();
  LevelSpec* spec;
  if (level <= prefix.size()) {
    spec = &prefix[level - 1];
  } else {
    spec = &block[(level - prefix.size() - 1) % block.size()];
  }
  for (EdgeSpec& e : spec->edges) {
    if (e.dst != dst) continue;
    if (e.ord == ord_a)
      e.ord = ord_b;
    else if (e.ord == ord_b)
      e.ord = ord_a;
  }
  return OrderedDiagram(std::move(prefix), std::move(block));
}

}  // namespace oracle
