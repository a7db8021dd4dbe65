#include "obd/vershik.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace obd {

FinitePath succ_fiber(const OrderedDiagram& d, const FinitePath& p) {
  for (size_t i = 1; i <= p.size(); ++i) {
    uint32_t id = p.edges[i - 1];
    const EdgeSpec& e = d.level(i).edges[id];
    const auto& in = d.index(i).in_by_ord[e.dst];
    if (in.back() == id) continue;
    uint32_t g = in[e.ord + 1];
    FinitePath out = min_path_into(d, d.level(i).edges[g].src, i - 1);
    out.edges.push_back(g);
    out.edges.insert(out.edges.end(), p.edges.begin() + i, p.edges.end());
    return out;
  }
  throw DomainError("path " + encode_path(p) + " is fiber-maximal");
}

FinitePath pred_fiber(const OrderedDiagram& d, const FinitePath& p) {
  for (size_t i = 1; i <= p.size(); ++i) {
    uint32_t id = p.edges[i - 1];
    const EdgeSpec& e = d.level(i).edges[id];
    const auto& in = d.index(i).in_by_ord[e.dst];
    if (in.front() == id) continue;
    uint32_t g = in[e.ord - 1];
    FinitePath out = max_path_into(d, d.level(i).edges[g].src, i - 1);
    out.edges.push_back(g);
    out.edges.insert(out.edges.end(), p.edges.begin() + i, p.edges.end());
    return out;
  }
  throw DomainError("path " + encode_path(p) + " is fiber-minimal");
}

std::optional<FinitePath> try_succ(const OrderedDiagram& d,
                                   const FinitePath& p) {
  if (all_max(d, p)) return std::nullopt;
  return succ_fiber(d, p);
}

std::optional<FinitePath> try_pred(const OrderedDiagram& d,
                                   const FinitePath& p) {
  if (all_min(d, p)) return std::nullopt;
  return pred_fiber(d, p);
}

static size_t lcm_size(size_t a, size_t b) { return a / std::gcd(a, b) * b; }

// Applies the bump at level n and keeps the tail of xi.
static EventuallyPeriodicPath shift_at(const OrderedDiagram& d,
                                       const EventuallyPeriodicPath& xi,
                                       size_t n, bool forward) {
  FinitePath pre = prefix_of(d, xi, n);
  EventuallyPeriodicPath out;
  out.head = forward ? succ_fiber(d, pre) : pred_fiber(d, pre);
  if (n <= xi.head.size()) {
    out.head.edges.insert(out.head.edges.end(), xi.head.edges.begin() + n,
                          xi.head.edges.end());
    out.cycle = xi.cycle;
  } else {
    size_t shift = (n - xi.head.size()) % xi.cycle.size();
    out.cycle.assign(xi.cycle.begin() + shift, xi.cycle.end());
    out.cycle.insert(out.cycle.end(), xi.cycle.begin(),
                     xi.cycle.begin() + shift);
  }
  return out;
}

static EventuallyPeriodicPath vershik_dir(const OrderedDiagram& d,
                                          const EventuallyPeriodicPath& xi,
                                          bool forward) {
  require_valid_epp(d, xi);
  // A full lcm window past the head covers every (cycle phase, level spec)
  // pair; if no bumpable edge shows up there, none ever will.
  size_t window =
      xi.head.size() + lcm_size(xi.cycle.size(), d.block_size());
  for (size_t n = 1; n <= window; ++n) {
    uint32_t id = edge_at(d, xi, n);
    bool extreme = forward ? is_max_edge(d, n, id) : is_min_edge(d, n, id);
    if (!extreme) return shift_at(d, xi, n, forward);
  }
  throw DomainError("path " + encode_epp(xi) +
                    (forward ? " is maximal" : " is minimal"));
}

EventuallyPeriodicPath vershik(const OrderedDiagram& d,
                               const EventuallyPeriodicPath& xi) {
  return vershik_dir(d, xi, true);
}

EventuallyPeriodicPath vershik_inv(const OrderedDiagram& d,
                                   const EventuallyPeriodicPath& xi) {
  return vershik_dir(d, xi, false);
}

// Union of cylinders of possibly mixed depth, canonicalized.
static ClopenSet gather(const OrderedDiagram& d,
                        const std::vector<FinitePath>& stems) {
  uint32_t depth = 0;
  for (const FinitePath& s : stems) depth = std::max<uint32_t>(depth, s.size());
  std::vector<FinitePath> out;
  for (const FinitePath& s : stems) {
    if (s.size() == depth) {
      out.push_back(s);
    } else {
      ClopenSet cyl = refine(d, ClopenSet{uint32_t(s.size()), {s}}, depth);
      out.insert(out.end(), cyl.stems.begin(), cyl.stems.end());
    }
    if (out.size() > (1u << 22))
      throw CapExceeded("clopen image grew past the size guard");
  }
  return canonicalize(d, ClopenSet{depth, std::move(out)});
}

// One application of the Vershik map (or its inverse) to a clopen set.
// All-extreme stems are subdivided; whatever residue is still all-extreme
// at the cap is dropped, which matches restricting to the domain at that
// depth. exact stays true only when no residue was dropped.
static ClopenSet step_dir(const OrderedDiagram& d, const ClopenSet& S,
                          uint32_t cap, bool forward, bool& exact) {
  std::vector<FinitePath> queue = S.stems;
  std::vector<FinitePath> out;
  while (!queue.empty()) {
    FinitePath p = std::move(queue.back());
    queue.pop_back();
    bool extreme = forward ? all_max(d, p) : all_min(d, p);
    if (!extreme) {
      out.push_back(forward ? succ_fiber(d, p) : pred_fiber(d, p));
    } else if (p.size() < cap) {
      const LevelSpec& spec = d.level(p.size() + 1);
      uint32_t at = terminal_vertex(d, p);
      for (uint32_t id = 0; id < spec.edges.size(); ++id) {
        if (spec.edges[id].src != at) continue;
        FinitePath q = p;
        q.edges.push_back(id);
        queue.push_back(std::move(q));
      }
    } else {
      exact = false;
    }
  }
  return gather(d, out);
}

ClopenImage image_clopen(const OrderedDiagram& d, const ClopenSet& c, int n,
                         uint32_t cap) {
  if (c.depth > cap)
    throw CapExceeded("clopen set is deeper than the cap");
  ClopenImage img{c, true};
  for (int k = 0; k < std::abs(n); ++k)
    img.set = step_dir(d, img.set, cap, n > 0, img.exact);
  return img;
}

ClopenSet image_clopen_exact(const OrderedDiagram& d, const ClopenSet& c,
                             int n, uint32_t cap) {
  ClopenImage img = image_clopen(d, c, n, cap);
  if (!img.exact)
    throw CapExceeded(
        "image is not a clopen set resolvable within the cap: the argument "
        "meets the extreme paths");
  return img.set;
}

PartialActionWitness domain_of_power(const OrderedDiagram& d, int n,
                                     uint32_t cap) {
  if (n == 0) return {0, full_space(), full_space()};
  size_t m = size_t(std::abs(n));
  // Start at one full period so the extreme stems do not cover everything.
  uint32_t start = uint32_t(
      std::min<size_t>(cap, std::max<size_t>(1, d.prefix_size() +
                                                    d.block_size())));
  for (uint32_t depth = start; depth <= cap; ++depth) {
    uint32_t vcount = d.vertex_count(depth);
    std::vector<FinitePath> maxstems, minstems;
    for (uint32_t v = 0; v < vcount; ++v) {
      maxstems.push_back(max_path_into(d, v, depth));
      minstems.push_back(min_path_into(d, v, depth));
    }
    // Pre-orbit of the maximal stems under pred, forward orbit of the
    // minimal stems under succ; a broken chain means the depth is too
    // shallow to separate the orbits, so try deeper.
    bool ok = true;
    std::vector<FinitePath> neg, pos;
    std::vector<FinitePath> cur = maxstems;
    for (size_t k = 0; k < m && ok; ++k) {
      neg.insert(neg.end(), cur.begin(), cur.end());
      if (k + 1 == m) break;
      std::vector<FinitePath> next;
      for (const FinitePath& p : cur) {
        auto q = try_pred(d, p);
        if (!q) {
          ok = false;
          break;
        }
        next.push_back(std::move(*q));
      }
      cur = std::move(next);
    }
    cur = minstems;
    for (size_t k = 0; k < m && ok; ++k) {
      pos.insert(pos.end(), cur.begin(), cur.end());
      if (k + 1 == m) break;
      std::vector<FinitePath> next;
      for (const FinitePath& p : cur) {
        auto q = try_succ(d, p);
        if (!q) {
          ok = false;
          break;
        }
        next.push_back(std::move(*q));
      }
      cur = std::move(next);
    }
    if (!ok) continue;

    std::vector<FinitePath> universe = all_paths(d, depth);
    std::sort(neg.begin(), neg.end());
    neg.erase(std::unique(neg.begin(), neg.end()), neg.end());
    std::sort(pos.begin(), pos.end());
    pos.erase(std::unique(pos.begin(), pos.end()), pos.end());
    std::vector<FinitePath> dom_stems, ran_stems;
    std::set_difference(universe.begin(), universe.end(), neg.begin(),
                        neg.end(), std::back_inserter(dom_stems));
    std::set_difference(universe.begin(), universe.end(), pos.begin(),
                        pos.end(), std::back_inserter(ran_stems));
    ClopenSet not_premax = canonicalize(d, ClopenSet{depth, dom_stems});
    ClopenSet not_postmin = canonicalize(d, ClopenSet{depth, ran_stems});
    if (n > 0) return {n, not_premax, not_postmin};
    return {n, not_postmin, not_premax};
  }
  throw CapExceeded("extreme-path orbits do not separate within the cap");
}

bool check_pa_axioms(const OrderedDiagram& d, int s, int t, uint32_t cap,
                     SuccessorFn succ_override) {
  auto forward1 = [&](const FinitePath& p) -> std::optional<FinitePath> {
    if (succ_override) return succ_override(p);
    return try_succ(d, p);
  };
  // theta applied with the (possibly overridden) forward step.
  auto theta = [&](const FinitePath& p, int g) -> std::optional<FinitePath> {
    FinitePath cur = p;
    for (int k = 0; k < std::abs(g); ++k) {
      auto next = g > 0 ? forward1(cur) : try_pred(d, cur);
      if (!next) return std::nullopt;
      cur = std::move(*next);
    }
    return cur;
  };
  // Domains always come from the honest maps; they are the independent
  // route that an inconsistent successor must disagree with.
  auto real_defined = [&](const FinitePath& p, int g) {
    FinitePath cur = p;
    for (int k = 0; k < std::abs(g); ++k) {
      auto next = g > 0 ? try_succ(d, cur) : try_pred(d, cur);
      if (!next) return false;
      cur = std::move(*next);
    }
    return true;
  };

  std::vector<FinitePath> universe = all_paths(d, cap);
  auto delta = [&](int g) {
    std::vector<FinitePath> out;
    for (const FinitePath& p : universe)
      if (real_defined(p, -g)) out.push_back(p);
    return out;
  };
  auto intersect = [](const std::vector<FinitePath>& a,
                      const std::vector<FinitePath>& b) {
    std::vector<FinitePath> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                          std::back_inserter(out));
    return out;
  };

  // Axiom (2): theta_t(Delta_{-t} & Delta_s) == Delta_t & Delta_{t+s}.
  std::vector<FinitePath> lhs_in = intersect(delta(-t), delta(s));
  std::vector<FinitePath> lhs;
  for (const FinitePath& p : lhs_in) {
    auto q = theta(p, t);
    if (!q) return false;
    lhs.push_back(std::move(*q));
  }
  std::sort(lhs.begin(), lhs.end());
  lhs.erase(std::unique(lhs.begin(), lhs.end()), lhs.end());
  std::vector<FinitePath> rhs = intersect(delta(t), delta(t + s));
  if (lhs != rhs) return false;

  // Axiom (3): pointwise composition on Delta_{-s} & Delta_{-s-t}.
  for (const FinitePath& p : intersect(delta(-s), delta(-s - t))) {
    auto a = theta(p, s);
    if (!a) return false;
    auto b = theta(*a, t);
    auto c = theta(p, s + t);
    if (!b || !c || !(*b == *c)) return false;
  }
  return true;
}

bool empirical_minimality(const OrderedDiagram& d,
                          const EventuallyPeriodicPath& xi, uint32_t depth,
                          uint64_t budget) {
  auto counts = path_counts(d, depth);
  uint64_t total = std::accumulate(counts.begin(), counts.end(), uint64_t(0));
  std::set<FinitePath> visited;
  uint64_t steps = 0;
  for (int dir = 0; dir < 2; ++dir) {
    EventuallyPeriodicPath cur = xi;
    for (;;) {
      visited.insert(prefix_of(d, cur, depth));
      if (visited.size() == total) return true;
      if (steps >= budget) break;
      try {
        cur = dir == 0 ? vershik(d, cur) : vershik_inv(d, cur);
      } catch (const DomainError&) {
        break;
      }
      ++steps;
    }
  }
  return visited.size() == total;
}

}  // namespace obd
