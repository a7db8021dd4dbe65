#pragma once

#include <cstdint>
#include <vector>

#include "obd/paths.hpp"

namespace obd {

/// Clopen subset of the path space in uniform-depth canonical form: a sorted
/// set of stems, all of the same length, that cannot be merged into a
/// shallower uniform representation. The empty set is depth 0 with no stems;
/// the full space is depth 0 with the single empty stem.
struct ClopenSet {
  uint32_t depth = 0;
  std::vector<FinitePath> stems;
  bool empty() const { return stems.empty(); }
  friend bool operator==(const ClopenSet&, const ClopenSet&) = default;
};

ClopenSet full_space();
ClopenSet empty_set();
bool is_full(const ClopenSet& c);

/// Sorts, deduplicates, checks stem validity, and canonicalizes.
ClopenSet make_clopen(const OrderedDiagram& d, uint32_t depth,
                      std::vector<FinitePath> stems);

/// Same point set with every stem replaced by its extensions to `depth`.
ClopenSet refine(const OrderedDiagram& d, const ClopenSet& c, uint32_t depth);

/// Merge complete sibling families down to the minimal uniform depth.
ClopenSet canonicalize(const OrderedDiagram& d, ClopenSet c);

ClopenSet set_union(const OrderedDiagram& d, const ClopenSet& a,
                    const ClopenSet& b);
ClopenSet set_intersect(const OrderedDiagram& d, const ClopenSet& a,
                        const ClopenSet& b);
ClopenSet set_minus(const OrderedDiagram& d, const ClopenSet& a,
                    const ClopenSet& b);
ClopenSet complement(const OrderedDiagram& d, const ClopenSet& a);

bool member(const OrderedDiagram& d, const EventuallyPeriodicPath& xi,
            const ClopenSet& c);

/// Whether the cylinder of p is contained in c.
bool contains_cylinder(const OrderedDiagram& d, const ClopenSet& c,
                       const FinitePath& p);

bool subset(const OrderedDiagram& d, const ClopenSet& a, const ClopenSet& b);
bool disjoint(const OrderedDiagram& d, const ClopenSet& a, const ClopenSet& b);

}  // namespace obd
