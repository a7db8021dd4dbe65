#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "obd/vershik.hpp"

namespace obd {

/// Piecewise-constant presentation of the extended first-return time to a
/// clopen set W: on each piece the value is the least n >= 1 with
/// lambda^n(x) in W, with the fallback n_U(x)+1 on points whose forward
/// orbit dies on a maximal path before returning.
struct ReturnTimePiece {
  ClopenSet piece;
  uint64_t value = 0;
};
struct ReturnTimeTable {
  std::vector<ReturnTimePiece> pieces;
};

/// Value of the table on the cylinder of `stem` (which must lie inside one
/// piece).
uint64_t table_value_on(const OrderedDiagram& d, const ReturnTimeTable& table,
                        const FinitePath& stem);

struct Tower {
  std::vector<ClopenSet> levels;  // levels[0] is the base
  size_t height() const { return levels.size(); }
  const ClopenSet& base() const { return levels.front(); }
  const ClopenSet& top() const { return levels.back(); }
};

struct KRPartition {
  std::vector<Tower> towers;
  ClopenSet base_union;  // W
};

/// Union over vertices v of level n of the cylinder of the all-min path
/// into v. Returned at uniform depth n (not merged shallower): the stems
/// seed the towers one per vertex. Throws DegenerateDiagram when an all-min
/// stem is also all-max.
ClopenSet canonical_base(const OrderedDiagram& d, size_t n);

/// First-return-time table for W. W must contain every minimal path; it
/// must avoid every maximal path unless it is the full space. Pieces refine
/// the stems of W's representation and are exact: the all-max chains are
/// closed off wholesale once one full period of their subdivision returns
/// into W.
ReturnTimeTable return_time(const OrderedDiagram& d, const ClopenSet& W,
                            uint32_t cap = kDefaultCap);

/// Kakutani-Rokhlin partition over W: one tower per return-time piece
/// inside W, levels by exact forward images. Validates the KR conditions
/// before returning.
KRPartition build_kr(const OrderedDiagram& d, const ClopenSet& W,
                     uint32_t cap = kDefaultCap);

/// Direct combinatorial construction bypassing return_time: one tower per
/// vertex v of level n, of height path_counts(n)[v], whose j-th level is
/// the cylinder of the j-th fiber path into v. Equals
/// build_kr(canonical_base(n)) and doubles as its oracle.
KRPartition build_kr_canonical(const OrderedDiagram& d, size_t n);

/// Checks the three KR conditions plus partition-ness; appends one line per
/// violation to `problems` when given.
bool validate_kr(const OrderedDiagram& d, const KRPartition& P,
                 std::vector<std::string>* problems = nullptr);

/// Same towers, same heights, same clopen levels.
bool same_partition(const KRPartition& a, const KRPartition& b);

/// Ordered diagram rebuilt from a nested sequence of canonical tower
/// partitions, with the pass-through edge labels kept for audit.
struct BvModel {
  OrderedDiagram diagram;  // finite, one level per partition past the root
  std::vector<size_t> source_levels;
  std::vector<KRPartition> partitions;
  // labels[i][edge id] = {level, m, k, j'}: tower k of partitions[i] passes
  // through tower m of partitions[i-1] at offset j'.
  std::vector<std::vector<std::array<uint32_t, 4>>> labels;
  // Derived lookup: depth-source_levels[i] stem -> (tower, level within it).
  std::vector<std::map<FinitePath, std::pair<uint32_t, uint32_t>>> locators;
};

BvModel rebuild_from_levels(const OrderedDiagram& d,
                            const std::vector<size_t>& levels);
BvModel rebuild_diagram(const OrderedDiagram& d, size_t N);

/// One line per edge "(n,m,k,j')" plus tower heights per level.
std::string audit_log(const BvModel& model);

/// The finite path of the rebuilt diagram determined by the nested
/// partition elements containing xi (the conjugacy, truncated at the model
/// depth).
FinitePath model_path(const OrderedDiagram& d, const BvModel& model,
                      const EventuallyPeriodicPath& xi);

/// Finite-depth conjugacy check: phi(lambda(xi)) == lambda'(phi(xi)) over
/// representative extensions of every depth-`check_depth` stem with a
/// non-maximal edge, plus injectivity on depth-N cylinders and the
/// extreme-path correspondence.
bool verify_conjugacy_against(const OrderedDiagram& d, const BvModel& model,
                              size_t check_depth);
bool verify_conjugacy(const OrderedDiagram& d, size_t N, size_t check_depth);

}  // namespace obd
