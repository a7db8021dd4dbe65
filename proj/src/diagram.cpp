#include "obd/diagram.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace obd {

std::string ValidationReport::to_string() const {
  std::ostringstream os;
  for (const auto& p : problems) os << p << "\n";
  return os.str();
}

static LevelIndex build_index(const LevelSpec& spec) {
  LevelIndex idx;
  idx.in_by_ord.resize(spec.vertex_count);
  std::vector<std::vector<std::pair<uint32_t, uint32_t>>> in(spec.vertex_count);
  uint32_t max_src = 0;
  for (uint32_t id = 0; id < spec.edges.size(); ++id) {
    const EdgeSpec& e = spec.edges[id];
    if (e.dst < spec.vertex_count) in[e.dst].emplace_back(e.ord, id);
    max_src = std::max(max_src, e.src);
  }
  idx.out_degree.assign(size_t(max_src) + 1, 0);
  for (const EdgeSpec& e : spec.edges) idx.out_degree[e.src]++;
  for (uint32_t v = 0; v < spec.vertex_count; ++v) {
    std::sort(in[v].begin(), in[v].end());
    idx.in_by_ord[v].reserve(in[v].size());
    for (auto& [ord, id] : in[v]) idx.in_by_ord[v].push_back(id);
  }
  return idx;
}

OrderedDiagram::OrderedDiagram(std::vector<LevelSpec> prefix,
                               std::vector<LevelSpec> block)
    : prefix_(std::move(prefix)), block_(std::move(block)) {
  indexes_.reserve(prefix_.size() + block_.size());
  for (const auto& s : prefix_) indexes_.push_back(build_index(s));
  for (const auto& s : block_) indexes_.push_back(build_index(s));
}

size_t OrderedDiagram::slot(size_t n) const {
  if (n == 0 || !has_level(n))
    throw DepthExceedsTruncation("level " + std::to_string(n) +
                                 " exceeds truncation depth " +
                                 std::to_string(prefix_.size()));
  if (n <= prefix_.size()) return n - 1;
  return prefix_.size() + (n - prefix_.size() - 1) % block_.size();
}

const LevelSpec& OrderedDiagram::level(size_t n) const {
  size_t s = slot(n);
  return s < prefix_.size() ? prefix_[s] : block_[s - prefix_.size()];
}

const LevelIndex& OrderedDiagram::index(size_t n) const {
  return indexes_[slot(n)];
}

uint32_t OrderedDiagram::vertex_count(size_t n) const {
  if (n == 0) return 1;
  return level(n).vertex_count;
}

bool OrderedDiagram::has_level(size_t n) const {
  return n >= 1 && (!block_.empty() || n <= prefix_.size());
}

bool operator==(const OrderedDiagram& a, const OrderedDiagram& b) {
  return a.prefix_ == b.prefix_ && a.block_ == b.block_;
}

ValidationReport validate(const OrderedDiagram& d) {
  ValidationReport report;
  auto note = [&](const std::string& s) { report.problems.push_back(s); };

  size_t p = d.prefix_size(), b = d.block_size();
  if (p == 0 && b == 0) {
    note("diagram has no levels");
    return report;
  }

  // Full checks over one pass of prefix + block; a second block pass adds
  // only the wrap constraints (source ranges and sink coverage), which is
  // where block-to-block composability shows up.
  size_t full = p + b;
  size_t wrap = b > 0 ? full + b : full;
  for (size_t n = 1; n <= wrap; ++n) {
    const LevelSpec& spec = d.level(n);
    uint32_t prev = d.vertex_count(n - 1);
    bool first_pass = n <= full;

    if (first_pass && spec.vertex_count == 0) {
      note("level " + std::to_string(n) + " has no vertices");
      continue;
    }

    std::vector<uint32_t> covered_src(prev, 0);
    std::vector<std::vector<uint32_t>> ords(spec.vertex_count);
    for (uint32_t id = 0; id < spec.edges.size(); ++id) {
      const EdgeSpec& e = spec.edges[id];
      if (e.src >= prev)
        note("edge " + std::to_string(id) + " at level " + std::to_string(n) +
             " has source " + std::to_string(e.src) + " out of range " +
             std::to_string(prev));
      else
        covered_src[e.src]++;
      if (e.dst >= spec.vertex_count) {
        if (first_pass)
          note("edge " + std::to_string(id) + " at level " +
               std::to_string(n) + " has range " + std::to_string(e.dst) +
               " out of range " + std::to_string(spec.vertex_count));
      } else {
        ords[e.dst].push_back(e.ord);
      }
    }

    // No sinks: every vertex of the previous level must emit an edge.
    for (uint32_t w = 0; w < prev; ++w)
      if (covered_src[w] == 0)
        note("sink at (" + std::to_string(n - 1) + "," + std::to_string(w) +
             ")");

    if (!first_pass) continue;

    for (uint32_t v = 0; v < spec.vertex_count; ++v) {
      if (ords[v].empty()) {
        // No sources besides the root.
        note("source at (" + std::to_string(n) + "," + std::to_string(v) +
             ")");
        continue;
      }
      std::vector<uint32_t> sorted = ords[v];
      std::sort(sorted.begin(), sorted.end());
      bool perm = true;
      for (uint32_t i = 0; i < sorted.size(); ++i)
        if (sorted[i] != i) perm = false;
      if (!perm)
        note("ord not a permutation at (" + std::to_string(n) + "," +
             std::to_string(v) + ")");
    }
  }
  return report;
}

LevelSpec materialize_level(const OrderedDiagram& d, size_t n) {
  if (n == 0) throw PreconditionViolation("level must be >= 1");
  return d.level(n);
}

std::vector<std::vector<uint64_t>> incidence_matrix(const OrderedDiagram& d,
                                                    size_t n) {
  const LevelSpec& spec = d.level(n);
  uint32_t prev = d.vertex_count(n - 1);
  std::vector<std::vector<uint64_t>> m(prev,
                                       std::vector<uint64_t>(spec.vertex_count, 0));
  for (const EdgeSpec& e : spec.edges)
    if (e.src < prev && e.dst < spec.vertex_count) m[e.src][e.dst]++;
  return m;
}

std::vector<uint64_t> path_counts(const OrderedDiagram& d, size_t n) {
  std::vector<uint64_t> counts{1};
  for (size_t k = 1; k <= n; ++k) {
    auto m = incidence_matrix(d, k);
    std::vector<uint64_t> next(d.vertex_count(k), 0);
    for (uint32_t w = 0; w < counts.size(); ++w)
      for (uint32_t v = 0; v < next.size(); ++v)
        next[v] += counts[w] * m[w][v];
    counts = std::move(next);
  }
  return counts;
}

bool is_simple_heuristic(const OrderedDiagram& d) {
  if (d.finite())
    throw DepthExceedsTruncation("primitivity needs an infinite diagram");

  // Boolean product of the block's incidence matrices, one full period.
  size_t p = d.prefix_size(), b = d.block_size();
  uint32_t m = d.vertex_count(p + b);
  std::vector<std::vector<bool>> cur(m, std::vector<bool>(m, false));
  for (uint32_t i = 0; i < m; ++i) cur[i][i] = true;
  auto mul = [&](const std::vector<std::vector<bool>>& a,
                 const std::vector<std::vector<bool>>& c) {
    std::vector<std::vector<bool>> r(a.size(),
                                     std::vector<bool>(c[0].size(), false));
    for (size_t i = 0; i < a.size(); ++i)
      for (size_t k = 0; k < c.size(); ++k)
        if (a[i][k])
          for (size_t j = 0; j < c[0].size(); ++j)
            if (c[k][j]) r[i][j] = true;
    return r;
  };
  std::vector<std::vector<std::vector<bool>>> period;
  for (size_t i = 1; i <= b; ++i) {
    auto inc = incidence_matrix(d, p + b + i);
    std::vector<std::vector<bool>> bm(inc.size(),
                                      std::vector<bool>(inc[0].size(), false));
    for (size_t w = 0; w < inc.size(); ++w)
      for (size_t v = 0; v < inc[0].size(); ++v) bm[w][v] = inc[w][v] > 0;
    period.push_back(std::move(bm));
  }
  std::vector<std::vector<bool>> blockmat = period[0];
  for (size_t i = 1; i < period.size(); ++i) blockmat = mul(blockmat, period[i]);

  // Wielandt bound for primitivity of an m x m matrix.
  uint64_t bound = m <= 1 ? 1 : uint64_t(m - 1) * (m - 1) + 1;
  auto positive = [&](const std::vector<std::vector<bool>>& a) {
    for (const auto& row : a)
      for (bool x : row)
        if (!x) return false;
    return true;
  };
  auto power = blockmat;
  for (uint64_t k = 1; k <= bound; ++k) {
    if (positive(power)) return true;
    power = mul(power, blockmat);
  }
  return false;
}

}  // namespace obd
