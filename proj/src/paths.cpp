#include "obd/paths.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace obd {

uint32_t terminal_vertex(const OrderedDiagram& d, const FinitePath& p) {
  if (p.empty()) return 0;
  return d.level(p.size()).edges[p.edges.back()].dst;
}

bool is_valid_path(const OrderedDiagram& d, const FinitePath& p) {
  uint32_t at = 0;
  for (size_t i = 0; i < p.size(); ++i) {
    const LevelSpec& spec = d.level(i + 1);
    uint32_t id = p.edges[i];
    if (id >= spec.edges.size()) return false;
    if (spec.edges[id].src != at) return false;
    at = spec.edges[id].dst;
  }
  return true;
}

void require_valid_path(const OrderedDiagram& d, const FinitePath& p) {
  if (!is_valid_path(d, p))
    throw PreconditionViolation("path " + encode_path(p) +
                                " does not chain from the root");
}

static size_t lcm_size(size_t a, size_t b) { return a / std::gcd(a, b) * b; }

uint32_t edge_at(const OrderedDiagram& d, const EventuallyPeriodicPath& xi,
                 size_t level) {
  (void)d;
  size_t i = level - 1;
  if (i < xi.head.size()) return xi.head.edges[i];
  return xi.cycle[(i - xi.head.size()) % xi.cycle.size()];
}

FinitePath prefix_of(const OrderedDiagram& d, const EventuallyPeriodicPath& xi,
                     size_t depth) {
  FinitePath p;
  p.edges.reserve(depth);
  for (size_t n = 1; n <= depth; ++n) p.edges.push_back(edge_at(d, xi, n));
  return p;
}

bool is_valid_epp(const OrderedDiagram& d, const EventuallyPeriodicPath& xi) {
  if (d.finite() || xi.cycle.empty()) return false;
  if (!is_valid_path(d, xi.head)) return false;
  // One lcm window past the head covers every (cycle phase, level spec)
  // combination, plus one wrap step.
  size_t window = lcm_size(xi.cycle.size(), d.block_size());
  size_t depth = xi.head.size() + window + 1;
  return is_valid_path(d, prefix_of(d, xi, depth));
}

void require_valid_epp(const OrderedDiagram& d,
                       const EventuallyPeriodicPath& xi) {
  if (!is_valid_epp(d, xi))
    throw PreconditionViolation("path " + encode_epp(xi) +
                                " is not a valid eventually periodic path");
}

bool epp_equal(const OrderedDiagram& d, const EventuallyPeriodicPath& a,
               const EventuallyPeriodicPath& b) {
  size_t heads = std::max(a.head.size(), b.head.size());
  size_t depth = heads + lcm_size(a.cycle.size(), b.cycle.size());
  return prefix_of(d, a, depth) == prefix_of(d, b, depth);
}

bool is_max_edge(const OrderedDiagram& d, size_t level, uint32_t edge_id) {
  const EdgeSpec& e = d.level(level).edges[edge_id];
  return d.index(level).in_by_ord[e.dst].back() == edge_id;
}

bool is_min_edge(const OrderedDiagram& d, size_t level, uint32_t edge_id) {
  const EdgeSpec& e = d.level(level).edges[edge_id];
  return d.index(level).in_by_ord[e.dst].front() == edge_id;
}

bool all_max(const OrderedDiagram& d, const FinitePath& p) {
  for (size_t i = 0; i < p.size(); ++i)
    if (!is_max_edge(d, i + 1, p.edges[i])) return false;
  return true;
}

bool all_min(const OrderedDiagram& d, const FinitePath& p) {
  for (size_t i = 0; i < p.size(); ++i)
    if (!is_min_edge(d, i + 1, p.edges[i])) return false;
  return true;
}

static FinitePath extreme_path_into(const OrderedDiagram& d, uint32_t v,
                                    size_t n, ExtremeKind kind) {
  FinitePath p;
  p.edges.resize(n);
  uint32_t at = v;
  for (size_t level = n; level >= 1; --level) {
    const auto& in = d.index(level).in_by_ord[at];
    uint32_t id = kind == ExtremeKind::Min ? in.front() : in.back();
    p.edges[level - 1] = id;
    at = d.level(level).edges[id].src;
  }
  return p;
}

FinitePath min_path_into(const OrderedDiagram& d, uint32_t v, size_t n) {
  return extreme_path_into(d, v, n, ExtremeKind::Min);
}

FinitePath max_path_into(const OrderedDiagram& d, uint32_t v, size_t n) {
  return extreme_path_into(d, v, n, ExtremeKind::Max);
}

std::vector<FinitePath> fiber_paths(const OrderedDiagram& d, uint32_t v,
                                    size_t n) {
  if (n == 0) return {FinitePath{}};
  std::vector<FinitePath> out;
  // Ascending ord of the last edge, then recursively ordered prefixes:
  // exactly the fiber order.
  for (uint32_t id : d.index(n).in_by_ord[v]) {
    uint32_t src = d.level(n).edges[id].src;
    for (FinitePath& q : fiber_paths(d, src, n - 1)) {
      q.edges.push_back(id);
      out.push_back(std::move(q));
    }
  }
  return out;
}

std::vector<FinitePath> all_paths(const OrderedDiagram& d, size_t n) {
  std::vector<FinitePath> cur{FinitePath{}};
  for (size_t level = 1; level <= n; ++level) {
    const LevelSpec& spec = d.level(level);
    std::vector<std::vector<uint32_t>> out_edges(d.vertex_count(level - 1));
    for (uint32_t id = 0; id < spec.edges.size(); ++id)
      out_edges[spec.edges[id].src].push_back(id);
    std::vector<FinitePath> next;
    for (const FinitePath& p : cur) {
      for (uint32_t id : out_edges[terminal_vertex(d, p)]) {
        FinitePath q = p;
        q.edges.push_back(id);
        next.push_back(std::move(q));
      }
    }
    cur = std::move(next);
  }
  std::sort(cur.begin(), cur.end());
  return cur;
}

std::strong_ordering lex_compare(const OrderedDiagram& d, const FinitePath& p,
                                 const FinitePath& q) {
  if (p.size() != q.size())
    throw IncomparablePaths("paths of different length are incomparable");
  if (terminal_vertex(d, p) != terminal_vertex(d, q))
    throw IncomparablePaths("paths into different vertices are incomparable");
  for (size_t i = p.size(); i >= 1; --i) {
    uint32_t a = p.edges[i - 1], b = q.edges[i - 1];
    if (a == b) continue;
    const LevelSpec& spec = d.level(i);
    return spec.edges[a].ord <=> spec.edges[b].ord;
  }
  return std::strong_ordering::equal;
}

std::vector<EventuallyPeriodicPath> extreme_paths(const OrderedDiagram& d,
                                                  ExtremeKind kind) {
  if (d.finite())
    throw DepthExceedsTruncation("extreme paths need an infinite diagram");
  size_t p = d.prefix_size(), b = d.block_size();
  size_t base = p + b;  // first full block boundary
  uint32_t m = d.vertex_count(base);

  // Each vertex has a unique extreme in-edge, so walking backward is
  // deterministic. F maps a boundary vertex one period down.
  auto step_back = [&](size_t level, uint32_t v) {
    const auto& in = d.index(level).in_by_ord[v];
    uint32_t id = kind == ExtremeKind::Min ? in.front() : in.back();
    return std::pair<uint32_t, uint32_t>{id, d.level(level).edges[id].src};
  };
  std::vector<uint32_t> F(m);
  for (uint32_t v = 0; v < m; ++v) {
    uint32_t at = v;
    for (size_t level = base + b; level > base; --level)
      at = step_back(level, at).second;
    F[v] = at;
  }

  // An infinite extreme path is an anti-orbit of F, and anti-orbits live on
  // the cycles of F: one path per cyclic vertex.
  std::vector<EventuallyPeriodicPath> out;
  for (uint32_t v = 0; v < m; ++v) {
    uint32_t at = v;
    size_t cycle_len = 0;
    bool cyclic = false;
    for (uint32_t k = 1; k <= m; ++k) {
      at = F[at];
      if (at == v) {
        cyclic = true;
        cycle_len = k;
        break;
      }
    }
    if (!cyclic) continue;

    EventuallyPeriodicPath xi;
    xi.head.edges.resize(base);
    uint32_t cur = v;
    for (size_t level = base; level >= 1; --level) {
      auto [id, src] = step_back(level, cur);
      xi.head.edges[level - 1] = id;
      cur = src;
    }
    // anti^k(v) = F^{cycle_len - 1}(anti^{k-1}(v)); collect one full turn.
    std::vector<uint32_t> anti{v};
    for (size_t k = 1; k < cycle_len; ++k) {
      uint32_t w = anti.back();
      for (size_t i = 0; i + 1 < cycle_len; ++i) w = F[w];
      anti.push_back(w);
    }
    xi.cycle.resize(cycle_len * b);
    for (size_t k = 0; k < cycle_len; ++k) {
      uint32_t w = anti[(k + 1) % cycle_len];
      for (size_t level = base + (k + 1) * b; level > base + k * b; --level) {
        auto [id, src] = step_back(level, w);
        xi.cycle[level - base - 1] = id;
        w = src;
      }
    }
    out.push_back(std::move(xi));
  }
  std::sort(out.begin(), out.end());
  return out;
}

EventuallyPeriodicPath extend_path(const OrderedDiagram& d, const FinitePath& p,
                                   bool low) {
  require_valid_path(d, p);
  if (d.finite())
    throw DepthExceedsTruncation("cannot extend a path in a finite diagram");
  size_t pfx = d.prefix_size(), b = d.block_size();

  EventuallyPeriodicPath xi;
  xi.head = p;
  uint32_t at = terminal_vertex(d, p);
  size_t level = p.size();
  // Walk forward picking a deterministic out-edge until the
  // (phase, vertex) state repeats past the prefix.
  std::map<std::pair<size_t, uint32_t>, size_t> seen;
  std::vector<uint32_t> walk;
  size_t cycle_from = 0;
  for (;;) {
    if (level >= pfx) {
      auto key = std::make_pair((level - pfx) % b, at);
      auto it = seen.find(key);
      if (it != seen.end()) {
        cycle_from = it->second;
        break;
      }
      seen[key] = walk.size();
    }
    const LevelSpec& spec = d.level(level + 1);
    uint32_t pick = UINT32_MAX;
    for (uint32_t id = 0; id < spec.edges.size(); ++id) {
      if (spec.edges[id].src != at) continue;
      if (pick == UINT32_MAX) pick = id;
      else if (!low) pick = id;
    }
    if (pick == UINT32_MAX)
      throw PreconditionViolation("sink reached while extending a path");
    walk.push_back(pick);
    at = spec.edges[pick].dst;
    ++level;
  }
  xi.head.edges.insert(xi.head.edges.end(), walk.begin(),
                       walk.begin() + cycle_from);
  xi.cycle.assign(walk.begin() + cycle_from, walk.end());
  return xi;
}

std::string encode_path(const FinitePath& p) {
  std::ostringstream os;
  for (size_t i = 0; i < p.size(); ++i) {
    if (i) os << ",";
    os << p.edges[i];
  }
  return os.str();
}

std::string encode_epp(const EventuallyPeriodicPath& xi) {
  FinitePath c{xi.cycle};
  return encode_path(xi.head) + "|" + encode_path(c);
}

static std::vector<uint32_t> parse_ids(const std::string& text) {
  std::vector<uint32_t> ids;
  if (text.empty()) return ids;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t comma = text.find(',', pos);
    std::string tok = text.substr(
        pos, comma == std::string::npos ? std::string::npos : comma - pos);
    if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
      throw MalformedInput("bad edge id '" + tok + "' in path text", 1,
                           pos + 1);
    ids.push_back(static_cast<uint32_t>(std::stoul(tok)));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return ids;
}

FinitePath parse_path(const std::string& text) {
  if (text.find('|') != std::string::npos)
    throw MalformedInput("finite path must not contain '|'", 1,
                         text.find('|') + 1);
  return FinitePath{parse_ids(text)};
}

EventuallyPeriodicPath parse_epp(const std::string& text) {
  size_t bar = text.find('|');
  if (bar == std::string::npos)
    throw MalformedInput("eventually periodic path needs HEAD|CYCLE form", 1,
                         1);
  EventuallyPeriodicPath xi;
  xi.head.edges = parse_ids(text.substr(0, bar));
  xi.cycle = parse_ids(text.substr(bar + 1));
  if (xi.cycle.empty())
    throw MalformedInput("cycle part must be nonempty", 1, bar + 2);
  return xi;
}

}  // namespace obd
