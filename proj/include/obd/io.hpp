#pragma once

#include <cstdint>
#include <string>

#include "obd/diagram.hpp"

namespace obd {

/// Parses an "obd-v1" JSON document. Malformed text raises MalformedInput
/// with a position; structurally sound JSON that fails validation raises
/// InvalidDiagram carrying the report.
OrderedDiagram parse_diagram(const std::string& text);

/// As parse_diagram but skips validation, so the caller can inspect the
/// report of an invalid diagram.
OrderedDiagram parse_diagram_unchecked(const std::string& text);

/// Canonical serialization: edges sorted by (dst, ord), two-space indent,
/// trailing newline. parse(serialize(d)) == d for canonical diagrams.
std::string serialize_diagram(const OrderedDiagram& d);

/// Built-in generators:
///   odometer - one vertex per level, two edges, stationary
///   twomax   - two vertices per level, five block edges, two maximal paths
///              and one minimal path
///   random   - seeded valid stationary diagram, every vertex of indegree
///              at least two (so canonical bases never degenerate)
OrderedDiagram gen_odometer();
OrderedDiagram gen_twomax();
OrderedDiagram gen_random(uint64_t seed);
OrderedDiagram gen_named(const std::string& name, uint64_t seed);

/// Layered DOT rendering down to `depth`, one rank per level, edges labeled
/// with their ord. Deterministic output.
std::string render_dot(const OrderedDiagram& d, size_t depth);

}  // namespace obd
