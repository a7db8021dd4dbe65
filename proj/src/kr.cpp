#include "obd/kr.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace obd {

uint64_t table_value_on(const OrderedDiagram& d, const ReturnTimeTable& table,
                        const FinitePath& stem) {
  for (const ReturnTimePiece& piece : table.pieces)
    if (contains_cylinder(d, piece.piece, stem)) return piece.value;
  throw PreconditionViolation("stem " + encode_path(stem) +
                              " is not inside any table piece");
}

ClopenSet canonical_base(const OrderedDiagram& d, size_t n) {
  if (n == 0) return full_space();
  std::vector<FinitePath> stems;
  for (uint32_t v = 0; v < d.vertex_count(n); ++v) {
    FinitePath s = min_path_into(d, v, n);
    if (all_max(d, s))
      throw DegenerateDiagram(
          "all-min stem " + encode_path(s) +
          " is also all-max at level " + std::to_string(n) +
          "; telescope the diagram first");
    stems.push_back(std::move(s));
  }
  std::sort(stems.begin(), stems.end());
  return ClopenSet{uint32_t(n), std::move(stems)};
}

static bool stem_in(const ClopenSet& W, const FinitePath& p) {
  // p at depth >= W.depth: cylinder containment is a prefix lookup.
  FinitePath prefix{std::vector<uint32_t>(p.edges.begin(),
                                          p.edges.begin() + W.depth)};
  return std::binary_search(W.stems.begin(), W.stems.end(), prefix);
}

// Whether every branch that leaves the all-max chain rooted at
// (depth0, v0) lands in W immediately after its bump, at every deeper
// level. A branch through the non-maximal edge e maps onto the all-min
// path into the source of e's successor, so its W-membership is decided
// by the min-ancestor of that source at depth W.depth. The walk state
// (level phase, max-chain frontier, min-ancestor map) evolves
// deterministically and is finite, so one repeated state with every
// verdict passed is conclusive.
static bool closes_into(const OrderedDiagram& d, const ClopenSet& W,
                        size_t depth0, uint32_t v0) {
  size_t p = d.prefix_size(), b = std::max<size_t>(d.block_size(), 1);
  size_t level = depth0;
  uint32_t count = d.vertex_count(level);
  std::vector<uint32_t> anc(count);
  for (uint32_t v = 0; v < count; ++v) {
    uint32_t at = v;
    for (size_t l = level; l > W.depth; --l) {
      const auto& in = d.index(l).in_by_ord[at];
      at = d.level(l).edges[in.front()].src;
    }
    anc[v] = at;
  }
  std::vector<bool> frontier(count, false);
  frontier[v0] = true;

  std::set<std::tuple<size_t, std::vector<bool>, std::vector<uint32_t>>> seen;
  for (;;) {
    bool empty = true;
    for (bool f : frontier) empty = empty && !f;
    if (empty) return true;  // the all-max chain died out entirely
    if (level >= p) {
      size_t phase = p + (level - p) % b;
      if (!seen.insert({phase, frontier, anc}).second) return true;
    }
    if (!d.has_level(level + 1)) return false;

    const LevelSpec& spec = d.level(level + 1);
    std::vector<bool> next_frontier(spec.vertex_count, false);
    for (uint32_t id = 0; id < spec.edges.size(); ++id) {
      const EdgeSpec& e = spec.edges[id];
      if (!frontier[e.src]) continue;
      const auto& in = d.index(level + 1).in_by_ord[e.dst];
      if (in.back() == id) {
        next_frontier[e.dst] = true;
        continue;
      }
      uint32_t g = in[e.ord + 1];
      FinitePath landing =
          min_path_into(d, anc[d.level(level + 1).edges[g].src], W.depth);
      if (!std::binary_search(W.stems.begin(), W.stems.end(), landing))
        return false;
    }
    std::vector<uint32_t> next_anc(spec.vertex_count);
    for (uint32_t v = 0; v < spec.vertex_count; ++v) {
      const auto& in = d.index(level + 1).in_by_ord[v];
      next_anc[v] = anc[d.level(level + 1).edges[in.front()].src];
    }
    anc = std::move(next_anc);
    frontier = std::move(next_frontier);
    ++level;
  }
}

ReturnTimeTable return_time(const OrderedDiagram& d, const ClopenSet& W,
                            uint32_t cap) {
  // Preconditions: W contains every minimal path; W avoids every maximal
  // path unless it is the whole space ("return" to X is trivially 1).
  if (!d.finite()) {
    for (const auto& xi : extreme_paths(d, ExtremeKind::Min))
      if (!member(d, xi, W))
        throw PreconditionViolation("W misses the minimal path " +
                                    encode_epp(xi));
    if (!is_full(W))
      for (const auto& xi : extreme_paths(d, ExtremeKind::Max))
        if (member(d, xi, W))
          throw PreconditionViolation("W contains the maximal path " +
                                      encode_epp(xi));
  } else {
    throw DepthExceedsTruncation("return times need an infinite diagram");
  }
  if (W.depth > cap) throw CapExceeded("W is deeper than the cap");

  std::map<size_t, uint64_t> counts_cache;
  auto counts_at = [&](size_t depth) {
    auto it = counts_cache.find(depth);
    if (it != counts_cache.end()) return it->second;
    auto c = path_counts(d, depth);
    uint64_t total = std::accumulate(c.begin(), c.end(), uint64_t(0));
    counts_cache[depth] = total;
    return total;
  };

  ReturnTimeTable table;
  std::vector<FinitePath> roots = all_paths(d, W.depth);
  struct Item {
    FinitePath pre;   // original cylinder
    FinitePath cur;   // its image after `steps` applications
    uint64_t steps;
  };
  for (const FinitePath& root : roots) {
    // Per-root emissions; coalesced by value afterwards.
    std::map<uint64_t, std::vector<FinitePath>> emitted;
    std::vector<Item> work{{root, root, 0}};
    while (!work.empty()) {
      Item it = std::move(work.back());
      work.pop_back();
      if (it.steps >= 1 && stem_in(W, it.cur)) {
        emitted[it.steps].push_back(std::move(it.pre));
        continue;
      }
      if (all_max(d, it.cur)) {
        if (closes_into(d, W, it.cur.size(), terminal_vertex(d, it.cur))) {
          emitted[it.steps + 1].push_back(std::move(it.pre));
          continue;
        }
        if (it.cur.size() >= cap)
          throw CapExceeded("return-time subdivision reached the cap");
        const LevelSpec& spec = d.level(it.cur.size() + 1);
        uint32_t at = terminal_vertex(d, it.cur);
        for (uint32_t id = 0; id < spec.edges.size(); ++id) {
          if (spec.edges[id].src != at) continue;
          Item child{it.pre, it.cur, it.steps};
          child.pre.edges.push_back(id);
          child.cur.edges.push_back(id);
          work.push_back(std::move(child));
        }
        continue;
      }
      // The succ orbit of a stem revisits within the stem count or never
      // re-enters W at all.
      if (it.steps > counts_at(it.cur.size()) + 1)
        throw PreconditionViolation(
            "orbit of " + encode_path(it.pre) + " does not return to W");
      work.push_back(Item{std::move(it.pre), succ_fiber(d, it.cur),
                          it.steps + 1});
    }
    for (auto& [value, stems] : emitted) {
      uint32_t depth = 0;
      for (const FinitePath& s : stems)
        depth = std::max<uint32_t>(depth, s.size());
      std::vector<FinitePath> flat;
      for (const FinitePath& s : stems) {
        if (s.size() == depth) {
          flat.push_back(s);
        } else {
          ClopenSet cyl = refine(d, ClopenSet{uint32_t(s.size()), {s}}, depth);
          flat.insert(flat.end(), cyl.stems.begin(), cyl.stems.end());
        }
      }
      table.pieces.push_back(
          {canonicalize(d, ClopenSet{depth, std::move(flat)}), value});
    }
  }
  std::sort(table.pieces.begin(), table.pieces.end(),
            [](const ReturnTimePiece& a, const ReturnTimePiece& b) {
              if (a.value != b.value) return a.value < b.value;
              return a.piece.stems < b.piece.stems;
            });
  return table;
}

KRPartition build_kr(const OrderedDiagram& d, const ClopenSet& W,
                     uint32_t cap) {
  ReturnTimeTable table = return_time(d, W, cap);
  KRPartition P;
  P.base_union = canonicalize(d, W);
  for (const ReturnTimePiece& piece : table.pieces) {
    bool inside = true;
    ClopenSet probe = refine(d, piece.piece,
                             std::max<uint32_t>(piece.piece.depth, W.depth));
    for (const FinitePath& s : probe.stems)
      if (!stem_in(W, s)) {
        inside = false;
        break;
      }
    if (!inside) continue;
    Tower t;
    t.levels.push_back(piece.piece);
    for (uint64_t j = 1; j < piece.value; ++j)
      t.levels.push_back(image_clopen_exact(d, t.levels.back(), 1, cap));
    P.towers.push_back(std::move(t));
  }
  std::sort(P.towers.begin(), P.towers.end(),
            [](const Tower& a, const Tower& b) {
              return a.base().stems < b.base().stems;
            });
  std::vector<std::string> problems;
  if (!validate_kr(d, P, &problems))
    throw KrConditionsFailed("built partition fails KR conditions:\n" +
                             [&] {
                               std::string s;
                               for (const auto& p : problems) s += p + "\n";
                               return s;
                             }());
  return P;
}

KRPartition build_kr_canonical(const OrderedDiagram& d, size_t n) {
  KRPartition P;
  if (n == 0) {
    Tower t;
    t.levels.push_back(full_space());
    P.towers.push_back(std::move(t));
    P.base_union = full_space();
    return P;
  }
  std::vector<FinitePath> bases;
  for (uint32_t v = 0; v < d.vertex_count(n); ++v) {
    Tower t;
    for (FinitePath& q : fiber_paths(d, v, n))
      t.levels.push_back(
          canonicalize(d, ClopenSet{uint32_t(n), {std::move(q)}}));
    bases.push_back(min_path_into(d, v, n));
    P.towers.push_back(std::move(t));
  }
  std::sort(P.towers.begin(), P.towers.end(),
            [](const Tower& a, const Tower& b) {
              return a.base().stems < b.base().stems;
            });
  std::sort(bases.begin(), bases.end());
  P.base_union = canonicalize(d, ClopenSet{uint32_t(n), std::move(bases)});
  std::vector<std::string> problems;
  if (!validate_kr(d, P, &problems))
    throw KrConditionsFailed("canonical partition fails KR conditions:\n" +
                             [&] {
                               std::string s;
                               for (const auto& p : problems) s += p + "\n";
                               return s;
                             }());
  return P;
}

bool validate_kr(const OrderedDiagram& d, const KRPartition& P,
                 std::vector<std::string>* problems) {
  bool ok = true;
  auto note = [&](const std::string& s) {
    ok = false;
    if (problems) problems->push_back(s);
  };
  if (P.towers.empty()) {
    note("no towers");
    return ok;
  }

  uint32_t depth = P.base_union.depth;
  for (const Tower& t : P.towers)
    for (const ClopenSet& level : t.levels)
      depth = std::max(depth, level.depth);

  // Partition of the whole space.
  std::vector<FinitePath> everything;
  for (const Tower& t : P.towers)
    for (const ClopenSet& level : t.levels) {
      ClopenSet r = refine(d, level, depth);
      everything.insert(everything.end(), r.stems.begin(), r.stems.end());
    }
  std::sort(everything.begin(), everything.end());
  if (std::adjacent_find(everything.begin(), everything.end()) !=
      everything.end())
    note("tower levels overlap");
  if (everything != all_paths(d, depth))
    note("tower levels do not cover the space");

  // Base union is W.
  std::vector<FinitePath> bases;
  for (const Tower& t : P.towers) {
    ClopenSet r = refine(d, t.base(), depth);
    bases.insert(bases.end(), r.stems.begin(), r.stems.end());
  }
  std::sort(bases.begin(), bases.end());
  ClopenSet W = canonicalize(d, ClopenSet{depth, bases});
  if (!(W == canonicalize(d, P.base_union)))
    note("base union does not match W");

  // Condition 1: maximal paths inside the tops, minimal paths inside W.
  ClopenSet tops = empty_set();
  for (const Tower& t : P.towers) tops = set_union(d, tops, t.top());
  if (!d.finite()) {
    for (const auto& xi : extreme_paths(d, ExtremeKind::Max))
      if (!member(d, xi, tops))
        note("maximal path " + encode_epp(xi) + " escapes the tops");
    for (const auto& xi : extreme_paths(d, ExtremeKind::Min))
      if (!member(d, xi, W))
        note("minimal path " + encode_epp(xi) + " escapes the base");
  }

  // Condition 2: lambda shifts each tower level to the next. The cap
  // leaves room for all-max stems whose chain dies out before becoming a
  // maximal path.
  uint32_t slack =
      uint32_t(d.prefix_size() + std::max<size_t>(d.block_size(), 1) * 16);
  for (size_t k = 0; k < P.towers.size(); ++k) {
    const Tower& t = P.towers[k];
    for (size_t j = 0; j + 1 < t.levels.size(); ++j) {
      try {
        ClopenSet img = image_clopen_exact(d, t.levels[j], 1, depth + slack);
        if (!(img == t.levels[j + 1]))
          note("tower " + std::to_string(k) + " level " + std::to_string(j) +
               " does not map onto the next level");
      } catch (const CapExceeded&) {
        note("tower " + std::to_string(k) + " level " + std::to_string(j) +
             " meets the maximal paths below the top");
      }
    }
  }

  // Condition 3 in the depth-`depth` truncation: the successor image of the
  // tops minus the fiber-max stems, together with the all-min stems inside
  // W, is exactly W.
  ClopenSet tops_ref = refine(d, tops, depth);
  std::vector<FinitePath> shifted;
  for (const FinitePath& s : tops_ref.stems)
    if (!all_max(d, s)) shifted.push_back(succ_fiber(d, s));
  std::sort(shifted.begin(), shifted.end());
  std::vector<FinitePath> residue;
  for (uint32_t v = 0; v < d.vertex_count(depth); ++v) {
    FinitePath s = min_path_into(d, v, depth);
    if (std::binary_search(bases.begin(), bases.end(), s))
      residue.push_back(std::move(s));
  }
  std::sort(residue.begin(), residue.end());
  std::vector<FinitePath> lhs;
  std::merge(shifted.begin(), shifted.end(), residue.begin(), residue.end(),
             std::back_inserter(lhs));
  std::vector<FinitePath> overlap;
  std::set_intersection(shifted.begin(), shifted.end(), residue.begin(),
                        residue.end(), std::back_inserter(overlap));
  if (!overlap.empty())
    note("successor images meet the all-min residue");
  if (lhs != bases)
    note("h(tops minus max) plus the min residue differs from W");

  return ok;
}

bool same_partition(const KRPartition& a, const KRPartition& b) {
  if (a.towers.size() != b.towers.size()) return false;
  for (size_t k = 0; k < a.towers.size(); ++k)
    if (a.towers[k].levels != b.towers[k].levels) return false;
  return true;
}

BvModel rebuild_from_levels(const OrderedDiagram& d,
                            const std::vector<size_t>& levels) {
  if (levels.empty() || levels[0] != 0)
    throw PreconditionViolation("level sequence must start at 0");
  for (size_t i = 1; i < levels.size(); ++i)
    if (levels[i] <= levels[i - 1])
      throw PreconditionViolation("level sequence must increase strictly");

  BvModel model;
  model.source_levels = levels;
  model.partitions.reserve(levels.size());
  for (size_t n : levels)
    model.partitions.push_back(build_kr_canonical(d, n));

  // Nesting of the bases: W_{i+1} inside W_i.
  for (size_t i = 1; i < levels.size(); ++i)
    if (!subset(d, model.partitions[i].base_union,
                model.partitions[i - 1].base_union))
      throw KrConditionsFailed("canonical bases are not nested");

  // Locate each depth-levels[i] stem in partition i.
  model.locators.resize(levels.size());
  for (size_t i = 0; i < levels.size(); ++i) {
    const KRPartition& P = model.partitions[i];
    for (uint32_t k = 0; k < P.towers.size(); ++k)
      for (uint32_t j = 1; j <= P.towers[k].levels.size(); ++j) {
        ClopenSet r = refine(d, P.towers[k].levels[j - 1],
                             uint32_t(levels[i]));
        for (const FinitePath& s : r.stems) model.locators[i][s] = {k, j};
      }
  }

  std::vector<LevelSpec> specs;
  model.labels.emplace_back();  // level 0 has no edges
  for (size_t i = 1; i < levels.size(); ++i) {
    const KRPartition& prev = model.partitions[i - 1];
    const KRPartition& cur = model.partitions[i];
    size_t prev_depth = levels[i - 1];

    auto locate = [&](const ClopenSet& piece) {
      ClopenSet r = refine(
          d, piece, std::max<uint32_t>(piece.depth, uint32_t(prev_depth)));
      FinitePath key{std::vector<uint32_t>(
          r.stems.front().edges.begin(),
          r.stems.front().edges.begin() + prev_depth)};
      auto it = model.locators[i - 1].find(key);
      if (it == model.locators[i - 1].end())
        throw KrConditionsFailed("partition is not nested in the previous");
      // The whole piece must sit inside that element, not just touch it.
      if (!subset(d, piece,
                  prev.towers[it->second.first].levels[it->second.second - 1]))
        throw KrConditionsFailed("partition piece straddles two elements");
      return it->second;
    };

    std::vector<std::array<uint32_t, 4>> labels;
    std::vector<EdgeSpec> edges;
    for (uint32_t k = 0; k < cur.towers.size(); ++k) {
      const Tower& t = cur.towers[k];
      uint32_t ord = 0;
      uint32_t cur_m = 0;
      uint32_t cur_j = 0;  // 0 = expecting the base of a pass-through
      for (uint32_t jj = 1; jj <= t.levels.size(); ++jj) {
        auto [m, j] = locate(t.levels[jj - 1]);
        if (cur_j == 0) {
          if (j != 1)
            throw KrConditionsFailed(
                "tower enters a previous tower above its base");
          edges.push_back(EdgeSpec{m, k, ord++});
          labels.push_back({uint32_t(i), m, k, jj - 1});
          cur_m = m;
          cur_j = 1;
        } else {
          if (m != cur_m || j != cur_j + 1)
            throw KrConditionsFailed(
                "tower does not pass through the previous level cleanly");
          cur_j = j;
        }
        if (cur_j == prev.towers[cur_m].levels.size()) cur_j = 0;
      }
      if (cur_j != 0)
        throw KrConditionsFailed("tower top is not inside a previous top");
    }
    // Canonical edge ids: sort by (dst, ord); labels follow.
    std::vector<size_t> order(edges.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
      return std::make_pair(edges[a].dst, edges[a].ord) <
             std::make_pair(edges[b].dst, edges[b].ord);
    });
    LevelSpec spec;
    spec.vertex_count = uint32_t(cur.towers.size());
    std::vector<std::array<uint32_t, 4>> sorted_labels;
    for (size_t idx : order) {
      spec.edges.push_back(edges[idx]);
      sorted_labels.push_back(labels[idx]);
    }
    specs.push_back(std::move(spec));
    model.labels.push_back(std::move(sorted_labels));
  }
  model.diagram = OrderedDiagram(std::move(specs), {});
  return model;
}

BvModel rebuild_diagram(const OrderedDiagram& d, size_t N) {
  std::vector<size_t> levels(N + 1);
  std::iota(levels.begin(), levels.end(), 0);
  return rebuild_from_levels(d, levels);
}

std::string audit_log(const BvModel& model) {
  std::ostringstream os;
  for (size_t i = 1; i < model.partitions.size(); ++i) {
    os << "level " << i << " heights:";
    for (const Tower& t : model.partitions[i].towers)
      os << " " << t.height();
    os << "\n";
    for (const auto& lab : model.labels[i])
      os << "(" << lab[0] << "," << lab[1] << "," << lab[2] << "," << lab[3]
         << ")\n";
  }
  return os.str();
}

FinitePath model_path(const OrderedDiagram& d, const BvModel& model,
                      const EventuallyPeriodicPath& xi) {
  FinitePath out;
  uint32_t prev_tower = 0;
  uint64_t prev_j = 1;
  for (size_t i = 1; i < model.partitions.size(); ++i) {
    auto it = model.locators[i].find(
        prefix_of(d, xi, model.source_levels[i]));
    if (it == model.locators[i].end())
      throw KrConditionsFailed("point escapes the partition at level " +
                               std::to_string(i));
    auto [k, j] = it->second;
    uint32_t jprime = uint32_t(j - prev_j);
    const auto& labels = model.labels[i];
    uint32_t edge_id = UINT32_MAX;
    for (uint32_t id = 0; id < labels.size(); ++id)
      if (labels[id][1] == prev_tower && labels[id][2] == k &&
          labels[id][3] == jprime)
        edge_id = id;
    if (edge_id == UINT32_MAX)
      throw KrConditionsFailed("no rebuilt edge matches the nesting at level " +
                               std::to_string(i));
    out.edges.push_back(edge_id);
    prev_tower = k;
    prev_j = j;
  }
  return out;
}

bool verify_conjugacy_against(const OrderedDiagram& d, const BvModel& model,
                              size_t check_depth) {
  size_t L = model.partitions.size() - 1;
  if (check_depth > L)
    throw PreconditionViolation("check depth exceeds the model depth");
  const OrderedDiagram& B = model.diagram;

  for (const FinitePath& p : all_paths(d, check_depth)) {
    if (all_max(d, p)) continue;
    for (bool low : {true, false}) {
      EventuallyPeriodicPath xi = extend_path(d, p, low);
      EventuallyPeriodicPath eta = vershik(d, xi);
      FinitePath lhs = model_path(d, model, eta);
      FinitePath rhs;
      try {
        rhs = succ_fiber(B, model_path(d, model, xi));
      } catch (const DomainError&) {
        return false;
      }
      if (!(lhs == rhs)) return false;
    }
  }

  // phi is injective on depth-L cylinders.
  std::set<FinitePath> images;
  std::vector<FinitePath> source = all_paths(d, model.source_levels.back());
  for (const FinitePath& p : source)
    images.insert(model_path(d, model, extend_path(d, p, true)));
  if (images.size() != source.size()) return false;

  // Extremes map to extremes, injectively.
  std::set<FinitePath> seen_max, seen_min;
  for (const auto& xi : extreme_paths(d, ExtremeKind::Max)) {
    FinitePath q = model_path(d, model, xi);
    if (!all_max(B, q)) return false;
    seen_max.insert(q);
  }
  if (seen_max.size() != extreme_paths(d, ExtremeKind::Max).size())
    return false;
  for (const auto& xi : extreme_paths(d, ExtremeKind::Min)) {
    FinitePath q = model_path(d, model, xi);
    if (!all_min(B, q)) return false;
    seen_min.insert(q);
  }
  if (seen_min.size() != extreme_paths(d, ExtremeKind::Min).size())
    return false;
  return true;
}

bool verify_conjugacy(const OrderedDiagram& d, size_t N, size_t check_depth) {
  BvModel model = rebuild_diagram(d, N);
  return verify_conjugacy_against(d, model, check_depth);
}

}  // namespace obd
