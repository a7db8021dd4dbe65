#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "obd/clopen.hpp"

namespace obd {

inline constexpr uint32_t kDefaultCap = 24;

/// Immediate successor of p in the order of its fiber: bump the first
/// non-maximal edge and reset everything below it to the all-min path into
/// the new edge's source. Throws DomainError when p is fiber-maximal.
FinitePath succ_fiber(const OrderedDiagram& d, const FinitePath& p);

/// Inverse of succ_fiber. Throws DomainError when p is fiber-minimal.
FinitePath pred_fiber(const OrderedDiagram& d, const FinitePath& p);

std::optional<FinitePath> try_succ(const OrderedDiagram& d,
                                   const FinitePath& p);
std::optional<FinitePath> try_pred(const OrderedDiagram& d,
                                   const FinitePath& p);

/// The Vershik map on infinite paths. Throws DomainError on maximal paths.
EventuallyPeriodicPath vershik(const OrderedDiagram& d,
                               const EventuallyPeriodicPath& xi);

/// Inverse Vershik map. Throws DomainError on minimal paths.
EventuallyPeriodicPath vershik_inv(const OrderedDiagram& d,
                                   const EventuallyPeriodicPath& xi);

/// Image of c under the n-th power of the Vershik map, restricted to the
/// domain of that power. `exact` is true when the result is the clopen image
/// itself; when c meets the extreme paths, the image is not closed and the
/// result is its restriction at the working depth `cap` (all-extreme residue
/// dropped, matching the domain exclusion at that depth).
struct ClopenImage {
  ClopenSet set;
  bool exact = true;
};
ClopenImage image_clopen(const OrderedDiagram& d, const ClopenSet& c, int n,
                         uint32_t cap = kDefaultCap);

/// As image_clopen but throws CapExceeded instead of returning an inexact
/// restriction.
ClopenSet image_clopen_exact(const OrderedDiagram& d, const ClopenSet& c,
                             int n, uint32_t cap = kDefaultCap);

/// Domains of the induced partial action: domain is dom(lambda^n) and
/// codomain its image, both as clopen sets at the smallest depth at which
/// the extreme-path pre-orbits resolve (bounded by cap).
struct PartialActionWitness {
  int n = 0;
  ClopenSet domain;
  ClopenSet codomain;
};
PartialActionWitness domain_of_power(const OrderedDiagram& d, int n,
                                     uint32_t cap = kDefaultCap);

using SuccessorFn =
    std::function<std::optional<FinitePath>(const FinitePath&)>;

/// Verifies the partial-action axioms for group elements s and t as exact
/// identities of the depth-cap truncated system: the image axiom
/// theta_t(Delta_{-t} & Delta_s) = Delta_t & Delta_{t+s} and pointwise
/// composition on Delta_{-s} & Delta_{-s-t}. succ_override replaces the
/// forward single step (domains are always computed from the real maps);
/// it exists so tests can corrupt the successor and watch the axioms fail.
bool check_pa_axioms(const OrderedDiagram& d, int s, int t,
                     uint32_t cap = 8, SuccessorFn succ_override = {});

/// True iff the forward-and-backward orbit of xi visits every depth-d
/// cylinder within `budget` Vershik steps.
bool empirical_minimality(const OrderedDiagram& d,
                          const EventuallyPeriodicPath& xi, uint32_t depth,
                          uint64_t budget);

}  // namespace obd
