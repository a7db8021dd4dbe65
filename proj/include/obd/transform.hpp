#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "obd/paths.hpp"

namespace obd {

/// Strictly increasing level sequence starting at 0.
struct Telescoping {
  std::vector<size_t> levels;
  friend bool operator==(const Telescoping&, const Telescoping&) = default;
};
void require_valid(const Telescoping& t);

/// Contraction of d to the given levels: new level i has the vertices of
/// level m_i and one edge per composite path from level m_{i-1} to m_i,
/// ordered within each fiber by the induced order (deepest component edge
/// most significant). Output is a finite diagram; `components` keeps the
/// underlying edge-id sequence of every composite edge.
struct TelescopeResult {
  OrderedDiagram diagram;
  std::vector<std::vector<std::vector<uint32_t>>> components;
};
TelescopeResult telescope(const OrderedDiagram& d, const Telescoping& t);

/// Graded isomorphism witness: per-level vertex bijections (levels 0..L)
/// and the edge bijections they force (levels 1..L).
struct GradedIsomorphism {
  std::vector<std::vector<uint32_t>> vertex_maps;
  std::vector<std::vector<uint32_t>> edge_maps;
};

/// Backtracking search for a graded order isomorphism between two finite
/// diagrams. Edge maps are forced fiber-by-fiber by order preservation, so
/// the search is over vertex bijections only. Returns the lexicographically
/// first witness, or nothing.
std::optional<GradedIsomorphism> iso_check(const OrderedDiagram& a,
                                           const OrderedDiagram& b);

/// Rebuilds b from a through the witness; the result re-serializes equal to
/// b exactly when the witness is sound.
OrderedDiagram apply_isomorphism(const OrderedDiagram& a,
                                 const GradedIsomorphism& iso);

struct EquivCertificate {
  Telescoping t1, t2;
  GradedIsomorphism iso;
};

/// Bounded search for equivalence: try all telescoping pairs with at most
/// `budget` levels, longest first. An empty result means undecided within
/// the budget, not inequivalence.
std::optional<EquivCertificate> equiv_search(const OrderedDiagram& a,
                                             const OrderedDiagram& b,
                                             size_t budget);

}  // namespace obd
