#include "obd/transform.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace obd {

void require_valid(const Telescoping& t) {
  if (t.levels.empty() || t.levels[0] != 0)
    throw PreconditionViolation("telescoping must start at level 0");
  for (size_t i = 1; i < t.levels.size(); ++i)
    if (t.levels[i] <= t.levels[i - 1])
      throw PreconditionViolation("telescoping must increase strictly");
}

// All paths from level `from` to level `to` grouped by terminal vertex.
static std::vector<std::vector<std::vector<uint32_t>>> span_paths(
    const OrderedDiagram& d, size_t from, size_t to) {
  std::vector<std::vector<std::vector<uint32_t>>> by_vertex(
      d.vertex_count(to));
  struct Walk {
    uint32_t at;
    std::vector<uint32_t> edges;
  };
  std::vector<Walk> cur;
  for (uint32_t v = 0; v < d.vertex_count(from); ++v) cur.push_back({v, {}});
  for (size_t level = from + 1; level <= to; ++level) {
    const LevelSpec& spec = d.level(level);
    std::vector<Walk> next;
    for (const Walk& w : cur)
      for (uint32_t id = 0; id < spec.edges.size(); ++id) {
        if (spec.edges[id].src != w.at) continue;
        Walk n = w;
        n.at = spec.edges[id].dst;
        n.edges.push_back(id);
        next.push_back(std::move(n));
      }
    cur = std::move(next);
  }
  for (Walk& w : cur) by_vertex[w.at].push_back(std::move(w.edges));
  return by_vertex;
}

TelescopeResult telescope(const OrderedDiagram& d, const Telescoping& t) {
  require_valid(t);
  for (size_t m : t.levels)
    if (m > 0 && !d.has_level(m))
      throw DepthExceedsTruncation("telescoping level " + std::to_string(m) +
                                   " is not materializable");

  TelescopeResult out;
  std::vector<LevelSpec> specs;
  out.components.emplace_back();  // level 0
  for (size_t i = 1; i < t.levels.size(); ++i) {
    size_t from = t.levels[i - 1], to = t.levels[i];
    auto by_vertex = span_paths(d, from, to);

    // Fiber order on composite paths: deepest differing component decides.
    auto less_in_fiber = [&](const std::vector<uint32_t>& x,
                             const std::vector<uint32_t>& y) {
      for (size_t k = x.size(); k >= 1; --k) {
        if (x[k - 1] == y[k - 1]) continue;
        const LevelSpec& spec = d.level(from + k);
        return spec.edges[x[k - 1]].ord < spec.edges[y[k - 1]].ord;
      }
      return false;
    };

    LevelSpec spec;
    spec.vertex_count = d.vertex_count(to);
    std::vector<std::vector<uint32_t>> comps;
    for (uint32_t v = 0; v < spec.vertex_count; ++v) {
      auto fiber = by_vertex[v];
      std::sort(fiber.begin(), fiber.end(), less_in_fiber);
      for (uint32_t rank = 0; rank < fiber.size(); ++rank) {
        uint32_t src = d.level(from + 1).edges[fiber[rank][0]].src;
        spec.edges.push_back(EdgeSpec{src, v, rank});
        comps.push_back(std::move(fiber[rank]));
      }
    }
    specs.push_back(std::move(spec));
    out.components.push_back(std::move(comps));
  }
  out.diagram = OrderedDiagram(std::move(specs), {});
  return out;
}

// In-edge profile of vertex v: sources listed in ord order.
static std::vector<uint32_t> in_profile(const OrderedDiagram& d, size_t level,
                                        uint32_t v) {
  std::vector<uint32_t> profile;
  for (uint32_t id : d.index(level).in_by_ord[v])
    profile.push_back(d.level(level).edges[id].src);
  return profile;
}

static bool extend_iso(const OrderedDiagram& a, const OrderedDiagram& b,
                       size_t level, std::vector<std::vector<uint32_t>>& vmaps) {
  size_t depth = a.prefix_size();
  if (level > depth) return true;
  uint32_t n = a.vertex_count(level);
  std::vector<uint32_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    bool fits = true;
    for (uint32_t v = 0; v < n && fits; ++v) {
      std::vector<uint32_t> pa = in_profile(a, level, v);
      std::vector<uint32_t> pb = in_profile(b, level, perm[v]);
      if (pa.size() != pb.size()) {
        fits = false;
        break;
      }
      for (size_t i = 0; i < pa.size(); ++i)
        if (vmaps[level - 1][pa[i]] != pb[i]) {
          fits = false;
          break;
        }
    }
    if (fits) {
      vmaps.push_back(perm);
      if (extend_iso(a, b, level + 1, vmaps)) return true;
      vmaps.pop_back();
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

std::optional<GradedIsomorphism> iso_check(const OrderedDiagram& a,
                                           const OrderedDiagram& b) {
  if (!a.finite() || !b.finite())
    throw PreconditionViolation("iso_check expects finite diagrams");
  if (a.prefix_size() != b.prefix_size()) return std::nullopt;
  for (size_t n = 1; n <= a.prefix_size(); ++n)
    if (a.vertex_count(n) != b.vertex_count(n)) return std::nullopt;

  std::vector<std::vector<uint32_t>> vmaps{{0}};
  if (!extend_iso(a, b, 1, vmaps)) return std::nullopt;

  GradedIsomorphism iso;
  iso.vertex_maps = vmaps;
  for (size_t level = 1; level <= a.prefix_size(); ++level) {
    const LevelSpec& sa = a.level(level);
    std::vector<uint32_t> emap(sa.edges.size());
    for (uint32_t id = 0; id < sa.edges.size(); ++id) {
      const EdgeSpec& e = sa.edges[id];
      emap[id] = b.index(level).in_by_ord[vmaps[level][e.dst]][e.ord];
    }
    iso.edge_maps.push_back(std::move(emap));
  }
  return iso;
}

OrderedDiagram apply_isomorphism(const OrderedDiagram& a,
                                 const GradedIsomorphism& iso) {
  std::vector<LevelSpec> specs;
  for (size_t level = 1; level <= a.prefix_size(); ++level) {
    const LevelSpec& sa = a.level(level);
    LevelSpec out;
    out.vertex_count = sa.vertex_count;
    out.edges.resize(sa.edges.size());
    for (uint32_t id = 0; id < sa.edges.size(); ++id) {
      const EdgeSpec& e = sa.edges[id];
      out.edges[iso.edge_maps[level - 1][id]] =
          EdgeSpec{iso.vertex_maps[level - 1][e.src],
                   iso.vertex_maps[level][e.dst], e.ord};
    }
    specs.push_back(std::move(out));
  }
  return OrderedDiagram(std::move(specs), {});
}

// All strictly increasing sequences of `len` levels drawn from 1..depth.
static void combinations(size_t depth, size_t len,
                         std::vector<std::vector<size_t>>& out) {
  if (len == 0 || len > depth) return;
  std::vector<size_t> pick(len);
  std::iota(pick.begin(), pick.end(), 1);
  for (;;) {
    out.push_back(pick);
    size_t i = len;
    while (i > 0 && pick[i - 1] == depth - (len - i)) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (size_t j = i; j < len; ++j) pick[j] = pick[j - 1] + 1;
  }
}

std::optional<EquivCertificate> equiv_search(const OrderedDiagram& a,
                                             const OrderedDiagram& b,
                                             size_t budget) {
  if (!a.finite() || !b.finite())
    throw PreconditionViolation("equiv_search expects finite diagrams");
  size_t la = a.prefix_size(), lb = b.prefix_size();
  size_t longest = std::min(budget, std::min(la, lb));
  for (size_t len = longest; len >= 1; --len) {
    std::vector<std::vector<size_t>> picks_a, picks_b;
    combinations(la, len, picks_a);
    combinations(lb, len, picks_b);
    for (const auto& pa : picks_a) {
      Telescoping t1;
      t1.levels.push_back(0);
      t1.levels.insert(t1.levels.end(), pa.begin(), pa.end());
      TelescopeResult ta = telescope(a, t1);
      for (const auto& pb : picks_b) {
        Telescoping t2;
        t2.levels.push_back(0);
        t2.levels.insert(t2.levels.end(), pb.begin(), pb.end());
        TelescopeResult tb = telescope(b, t2);
        if (auto iso = iso_check(ta.diagram, tb.diagram))
          return EquivCertificate{t1, t2, std::move(*iso)};
      }
    }
  }
  return std::nullopt;
}

}  // namespace obd
