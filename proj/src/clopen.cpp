#include "obd/clopen.hpp"

#include <algorithm>
#include <map>

namespace obd {

ClopenSet full_space() { return ClopenSet{0, {FinitePath{}}}; }
ClopenSet empty_set() { return ClopenSet{0, {}}; }

bool is_full(const ClopenSet& c) {
  return c.depth == 0 && c.stems.size() == 1;
}

ClopenSet canonicalize(const OrderedDiagram& d, ClopenSet c) {
  std::sort(c.stems.begin(), c.stems.end());
  c.stems.erase(std::unique(c.stems.begin(), c.stems.end()), c.stems.end());
  if (c.stems.empty()) {
    c.depth = 0;
    return c;
  }
  while (c.depth > 0) {
    // Mergeable only if every stem's parent has its full family present.
    std::map<FinitePath, uint32_t> families;
    for (const FinitePath& s : c.stems) {
      FinitePath parent{std::vector<uint32_t>(s.edges.begin(),
                                              s.edges.end() - 1)};
      families[parent]++;
    }
    bool complete = true;
    for (const auto& [parent, count] : families) {
      uint32_t fanout =
          d.index(c.depth).out_degree[terminal_vertex(d, parent)];
      if (count != fanout) {
        complete = false;
        break;
      }
    }
    if (!complete) break;
    std::vector<FinitePath> parents;
    parents.reserve(families.size());
    for (auto& [parent, count] : families) parents.push_back(parent);
    c.stems = std::move(parents);
    c.depth--;
  }
  return c;
}

ClopenSet make_clopen(const OrderedDiagram& d, uint32_t depth,
                      std::vector<FinitePath> stems) {
  for (const FinitePath& s : stems) {
    if (s.size() != depth)
      throw PreconditionViolation("stem depth mismatch in clopen set");
    require_valid_path(d, s);
  }
  return canonicalize(d, ClopenSet{depth, std::move(stems)});
}

ClopenSet refine(const OrderedDiagram& d, const ClopenSet& c, uint32_t depth) {
  if (depth < c.depth)
    throw PreconditionViolation("refine cannot reduce depth");
  std::vector<FinitePath> cur = c.stems;
  for (uint32_t level = c.depth + 1; level <= depth; ++level) {
    const LevelSpec& spec = d.level(level);
    std::vector<std::vector<uint32_t>> out_edges(d.vertex_count(level - 1));
    for (uint32_t id = 0; id < spec.edges.size(); ++id)
      out_edges[spec.edges[id].src].push_back(id);
    std::vector<FinitePath> next;
    for (const FinitePath& p : cur)
      for (uint32_t id : out_edges[terminal_vertex(d, p)]) {
        FinitePath q = p;
        q.edges.push_back(id);
        next.push_back(std::move(q));
      }
    cur = std::move(next);
  }
  std::sort(cur.begin(), cur.end());
  return ClopenSet{depth, std::move(cur)};
}

static std::pair<std::vector<FinitePath>, std::vector<FinitePath>> align(
    const OrderedDiagram& d, const ClopenSet& a, const ClopenSet& b,
    uint32_t& depth) {
  depth = std::max(a.depth, b.depth);
  return {refine(d, a, depth).stems, refine(d, b, depth).stems};
}

ClopenSet set_union(const OrderedDiagram& d, const ClopenSet& a,
                    const ClopenSet& b) {
  uint32_t depth;
  auto [sa, sb] = align(d, a, b, depth);
  std::vector<FinitePath> out;
  std::set_union(sa.begin(), sa.end(), sb.begin(), sb.end(),
                 std::back_inserter(out));
  return canonicalize(d, ClopenSet{depth, std::move(out)});
}

ClopenSet set_intersect(const OrderedDiagram& d, const ClopenSet& a,
                        const ClopenSet& b) {
  uint32_t depth;
  auto [sa, sb] = align(d, a, b, depth);
  std::vector<FinitePath> out;
  std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(),
                        std::back_inserter(out));
  return canonicalize(d, ClopenSet{depth, std::move(out)});
}

ClopenSet set_minus(const OrderedDiagram& d, const ClopenSet& a,
                    const ClopenSet& b) {
  uint32_t depth;
  auto [sa, sb] = align(d, a, b, depth);
  std::vector<FinitePath> out;
  std::set_difference(sa.begin(), sa.end(), sb.begin(), sb.end(),
                      std::back_inserter(out));
  return canonicalize(d, ClopenSet{depth, std::move(out)});
}

ClopenSet complement(const OrderedDiagram& d, const ClopenSet& a) {
  ClopenSet full = refine(d, full_space(), a.depth);
  return set_minus(d, full, a);
}

bool member(const OrderedDiagram& d, const EventuallyPeriodicPath& xi,
            const ClopenSet& c) {
  FinitePath p = prefix_of(d, xi, c.depth);
  return std::binary_search(c.stems.begin(), c.stems.end(), p);
}

bool contains_cylinder(const OrderedDiagram& d, const ClopenSet& c,
                       const FinitePath& p) {
  if (p.size() >= c.depth) {
    FinitePath prefix{std::vector<uint32_t>(p.edges.begin(),
                                            p.edges.begin() + c.depth)};
    return std::binary_search(c.stems.begin(), c.stems.end(), prefix);
  }
  ClopenSet cyl = refine(d, ClopenSet{uint32_t(p.size()), {p}}, c.depth);
  for (const FinitePath& s : cyl.stems)
    if (!std::binary_search(c.stems.begin(), c.stems.end(), s)) return false;
  return true;
}

bool subset(const OrderedDiagram& d, const ClopenSet& a, const ClopenSet& b) {
  uint32_t depth;
  auto [sa, sb] = align(d, a, b, depth);
  return std::includes(sb.begin(), sb.end(), sa.begin(), sa.end());
}

bool disjoint(const OrderedDiagram& d, const ClopenSet& a, const ClopenSet& b) {
  uint32_t depth;
  auto [sa, sb] = align(d, a, b, depth);
  std::vector<FinitePath> out;
  std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(),
                        std::back_inserter(out));
  return out.empty();
}

}  // namespace obd
