#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "obd/diagram.hpp"

namespace obd {

/// Finite path from the root; edges[i] is an edge id at level i+1.
struct FinitePath {
  std::vector<uint32_t> edges;
  size_t size() const { return edges.size(); }
  bool empty() const { return edges.empty(); }
  friend auto operator<=>(const FinitePath&, const FinitePath&) = default;
};

/// Infinite path presented as head followed by cycle repeated forever.
/// cycle[j] is used at levels |head|+1+j, |head|+1+j+|cycle|, ...
struct EventuallyPeriodicPath {
  FinitePath head;
  std::vector<uint32_t> cycle;
  friend auto operator<=>(const EventuallyPeriodicPath&,
                          const EventuallyPeriodicPath&) = default;
};

enum class ExtremeKind { Max, Min };

/// Range vertex of p (0 for the empty path, i.e. the root).
uint32_t terminal_vertex(const OrderedDiagram& d, const FinitePath& p);

/// Chaining from the root: every edge id in range and r(e_i) = s(e_{i+1}).
bool is_valid_path(const OrderedDiagram& d, const FinitePath& p);
void require_valid_path(const OrderedDiagram& d, const FinitePath& p);

/// Structural validity of an eventually periodic path; the cycle must chain
/// into itself through every phase of the diagram's period.
bool is_valid_epp(const OrderedDiagram& d, const EventuallyPeriodicPath& xi);
void require_valid_epp(const OrderedDiagram& d,
                       const EventuallyPeriodicPath& xi);

uint32_t edge_at(const OrderedDiagram& d, const EventuallyPeriodicPath& xi,
                 size_t level);
FinitePath prefix_of(const OrderedDiagram& d, const EventuallyPeriodicPath& xi,
                     size_t depth);

/// Semantic equality of the represented infinite paths.
bool epp_equal(const OrderedDiagram& d, const EventuallyPeriodicPath& a,
               const EventuallyPeriodicPath& b);

bool is_max_edge(const OrderedDiagram& d, size_t level, uint32_t edge_id);
bool is_min_edge(const OrderedDiagram& d, size_t level, uint32_t edge_id);
bool all_max(const OrderedDiagram& d, const FinitePath& p);
bool all_min(const OrderedDiagram& d, const FinitePath& p);

/// The unique all-min (resp. all-max) path ending at vertex v of level n.
FinitePath min_path_into(const OrderedDiagram& d, uint32_t v, size_t n);
FinitePath max_path_into(const OrderedDiagram& d, uint32_t v, size_t n);

/// All length-n paths ending at v, in ascending fiber order.
std::vector<FinitePath> fiber_paths(const OrderedDiagram& d, uint32_t v,
                                    size_t n);

/// All length-n paths from the root, sorted by edge-id sequence.
std::vector<FinitePath> all_paths(const OrderedDiagram& d, size_t n);

/// Order induced by the edge orders on a fiber: compare at the deepest
/// differing level. Requires equal length and equal range vertex.
std::strong_ordering lex_compare(const OrderedDiagram& d, const FinitePath& p,
                                 const FinitePath& q);

/// All infinite paths every edge of which is maximal (resp. minimal),
/// as eventually periodic paths. Requires an infinite diagram.
std::vector<EventuallyPeriodicPath> extreme_paths(const OrderedDiagram& d,
                                                  ExtremeKind kind);

/// Deterministic eventually periodic extension of a finite path; picks the
/// lowest (resp. highest) edge id at each level until the walk cycles.
EventuallyPeriodicPath extend_path(const OrderedDiagram& d,
                                   const FinitePath& p, bool low = true);

// Text encoding: comma-separated 0-based edge ids, "1,0,2"; eventually
// periodic paths as "HEAD|CYCLE", e.g. "1,0|1,1".
std::string encode_path(const FinitePath& p);
std::string encode_epp(const EventuallyPeriodicPath& xi);
FinitePath parse_path(const std::string& text);
EventuallyPeriodicPath parse_epp(const std::string& text);

}  // namespace obd
