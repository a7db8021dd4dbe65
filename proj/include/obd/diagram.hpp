#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "obd/errors.hpp"

namespace obd {

/// Position of a vertex in the graded vertex sets. Level 0 is the root level
/// and always has exactly one vertex.
struct VertexRef {
  uint32_t level = 0;
  uint32_t index = 0;
  friend auto operator<=>(const VertexRef&, const VertexRef&) = default;
};

/// One edge between consecutive levels. `ord` is the 0-based rank of the
/// edge among all edges sharing its range vertex (0 = minimal); edges with
/// distinct range vertices are never compared.
struct EdgeSpec {
  uint32_t src = 0;
  uint32_t dst = 0;
  uint32_t ord = 0;
  friend auto operator<=>(const EdgeSpec&, const EdgeSpec&) = default;
};

/// Edge list of one level. The position of an edge in `edges` is its stable
/// id; `ord` is stored explicitly rather than inferred from position.
struct LevelSpec {
  uint32_t vertex_count = 0;
  std::vector<EdgeSpec> edges;
  friend bool operator==(const LevelSpec&, const LevelSpec&) = default;
};

/// Lookup tables derived from one LevelSpec. Built leniently so that invalid
/// data can still be inspected by validate().
struct LevelIndex {
  /// in_by_ord[v] = edge ids into v, sorted by ord (ties by id).
  std::vector<std::vector<uint32_t>> in_by_ord;
  /// out_degree[w] = number of edges with source w.
  std::vector<uint32_t> out_degree;
};

struct ValidationReport {
  std::vector<std::string> problems;
  bool ok() const { return problems.empty(); }
  std::string to_string() const;
};

/// Ordered Bratteli diagram with the root level implicit. Infinite diagrams
/// are presented as a finite prefix followed by a block of levels repeated
/// forever; an empty block means a finite truncation of depth prefix size.
///
/// Diagrams are immutable after construction; every operation on them is
/// pure, so concurrent use from multiple threads is safe.
class OrderedDiagram {
 public:
  OrderedDiagram() = default;
  OrderedDiagram(std::vector<LevelSpec> prefix, std::vector<LevelSpec> block);

  bool finite() const { return block_.empty(); }
  size_t prefix_size() const { return prefix_.size(); }
  size_t block_size() const { return block_.size(); }
  const std::vector<LevelSpec>& prefix() const { return prefix_; }
  const std::vector<LevelSpec>& block() const { return block_; }

  /// Level n >= 1; throws DepthExceedsTruncation past a finite truncation.
  const LevelSpec& level(size_t n) const;
  const LevelIndex& index(size_t n) const;

  /// Number of vertices at level n (n == 0 gives the root level).
  uint32_t vertex_count(size_t n) const;

  /// True when level n can be materialized.
  bool has_level(size_t n) const;

  friend bool operator==(const OrderedDiagram&, const OrderedDiagram&);

 private:
  size_t slot(size_t n) const;  // index into specs_/indexes_ for level n

  std::vector<LevelSpec> prefix_;
  std::vector<LevelSpec> block_;
  std::vector<LevelIndex> indexes_;  // prefix slots then block slots
};

/// Checks every structural invariant and reports all violations found.
/// An empty report means the diagram is valid.
ValidationReport validate(const OrderedDiagram& d);

/// Level n as a value; from the prefix, or from the block cycled.
LevelSpec materialize_level(const OrderedDiagram& d, size_t n);

/// entry (w, v) = number of edges from vertex w of level n-1 to vertex v of
/// level n.
std::vector<std::vector<uint64_t>> incidence_matrix(const OrderedDiagram& d,
                                                    size_t n);

/// Number of root-to-v paths for each vertex v of level n.
std::vector<uint64_t> path_counts(const OrderedDiagram& d, size_t n);

/// Primitivity of the block incidence product: some power k bounded by
/// Wielandt's bound is entrywise positive. A proxy for simplicity, not a
/// proof of minimality.
bool is_simple_heuristic(const OrderedDiagram& d);

}  // namespace obd
