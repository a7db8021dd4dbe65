#include "obd/io.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "json.hpp"

namespace obd {

using json = nlohmann::ordered_json;

static std::pair<size_t, size_t> position_of(const std::string& text,
                                             size_t byte) {
  size_t line = 1, col = 1;
  for (size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

static LevelSpec level_from_json(const json& j) {
  if (!j.is_object() || !j.contains("vertices") || !j.contains("edges"))
    throw MalformedInput("level object needs 'vertices' and 'edges'");
  LevelSpec spec;
  spec.vertex_count = j.at("vertices").get<uint32_t>();
  for (const json& e : j.at("edges")) {
    if (!e.is_object() || !e.contains("src") || !e.contains("dst") ||
        !e.contains("ord"))
      throw MalformedInput("edge record needs 'src', 'dst' and 'ord'");
    spec.edges.push_back(EdgeSpec{e.at("src").get<uint32_t>(),
                                  e.at("dst").get<uint32_t>(),
                                  e.at("ord").get<uint32_t>()});
  }
  return spec;
}

OrderedDiagram parse_diagram_unchecked(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    auto [line, col] = position_of(text, e.byte ? e.byte - 1 : 0);
    throw MalformedInput(e.what(), line, col);
  }
  try {
    if (!doc.is_object() || doc.value("format", "") != "obd-v1")
      throw MalformedInput("document is not an obd-v1 diagram");
    std::vector<LevelSpec> prefix, block;
    for (const json& j : doc.value("prefix", json::array()))
      prefix.push_back(level_from_json(j));
    for (const json& j : doc.value("block", json::array()))
      block.push_back(level_from_json(j));
    return OrderedDiagram(std::move(prefix), std::move(block));
  } catch (const nlohmann::json::exception& e) {
    throw MalformedInput(e.what());
  }
}

OrderedDiagram parse_diagram(const std::string& text) {
  OrderedDiagram d = parse_diagram_unchecked(text);
  ValidationReport report = validate(d);
  if (!report.ok())
    throw InvalidDiagram("diagram fails validation", report.problems);
  return d;
}

static json level_to_json(const LevelSpec& spec) {
  json j;
  j["vertices"] = spec.vertex_count;
  // Canonical order: (dst, ord). Generators already emit it; re-sort so
  // serialization is canonical regardless of the in-memory order.
  std::vector<EdgeSpec> edges = spec.edges;
  std::stable_sort(edges.begin(), edges.end(),
                   [](const EdgeSpec& a, const EdgeSpec& b) {
                     return std::make_pair(a.dst, a.ord) <
                            std::make_pair(b.dst, b.ord);
                   });
  j["edges"] = json::array();
  for (const EdgeSpec& e : edges)
    j["edges"].push_back({{"src", e.src}, {"dst", e.dst}, {"ord", e.ord}});
  return j;
}

std::string serialize_diagram(const OrderedDiagram& d) {
  json doc;
  doc["format"] = "obd-v1";
  doc["prefix"] = json::array();
  for (const LevelSpec& s : d.prefix()) doc["prefix"].push_back(level_to_json(s));
  doc["block"] = json::array();
  for (const LevelSpec& s : d.block()) doc["block"].push_back(level_to_json(s));
  return doc.dump(2) + "\n";
}

OrderedDiagram gen_odometer() {
  LevelSpec block;
  block.vertex_count = 1;
  block.edges = {EdgeSpec{0, 0, 0}, EdgeSpec{0, 0, 1}};
  return OrderedDiagram({}, {block});
}

OrderedDiagram gen_twomax() {
  LevelSpec root;
  root.vertex_count = 2;
  root.edges = {EdgeSpec{0, 0, 0}, EdgeSpec{0, 1, 0}};
  LevelSpec block;
  block.vertex_count = 2;
  // Left vertex: two parallel loops (ids 0 and 2, the order's ends) around
  // a middle edge from the right; right vertex: fed from the left below a
  // right loop. Exactly two maximal chains and one minimal chain survive.
  block.edges = {EdgeSpec{0, 0, 0}, EdgeSpec{1, 0, 1}, EdgeSpec{0, 0, 2},
                 EdgeSpec{0, 1, 0}, EdgeSpec{1, 1, 1}};
  return OrderedDiagram({root}, {block});
}

OrderedDiagram gen_random(uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto pick = [&](uint32_t bound) { return uint32_t(rng() % bound); };

  uint32_t m = 1 + pick(3);
  // Root level: two parallel edges to each vertex keeps every indegree at
  // least two from the start.
  LevelSpec root;
  root.vertex_count = m;
  for (uint32_t v = 0; v < m; ++v) {
    root.edges.push_back(EdgeSpec{0, v, 0});
    root.edges.push_back(EdgeSpec{0, v, 1});
  }

  for (;;) {
    std::vector<uint32_t> indeg(m, 2);
    uint32_t budget = 6 - 2 * m;
    while (budget > 0 && pick(2)) {
      indeg[pick(m)]++;
      budget--;
    }
    std::vector<EdgeSpec> edges;
    for (uint32_t v = 0; v < m; ++v)
      for (uint32_t k = 0; k < indeg[v]; ++k)
        edges.push_back(EdgeSpec{pick(m), v, k});
    // No sinks: every vertex must emit at least one edge.
    for (uint32_t w = 0; w < m; ++w) {
      bool used = false;
      for (const EdgeSpec& e : edges) used = used || e.src == w;
      if (!used) edges[pick(uint32_t(edges.size()))].src = w;
    }
    LevelSpec block;
    block.vertex_count = m;
    block.edges = std::move(edges);
    OrderedDiagram d({root}, {block});
    if (validate(d).ok()) return d;
  }
}

OrderedDiagram gen_named(const std::string& name, uint64_t seed) {
  if (name == "odometer") return gen_odometer();
  if (name == "twomax") return gen_twomax();
  if (name == "random") return gen_random(seed);
  throw MalformedInput("unknown generator '" + name +
                       "' (expected odometer, twomax or random)");
}

std::string render_dot(const OrderedDiagram& d, size_t depth) {
  for (size_t n = 1; n <= depth; ++n)
    if (!d.has_level(n))
      throw DepthExceedsTruncation("render depth exceeds truncation");
  std::ostringstream os;
  os << "digraph bratteli {\n";
  os << "  rankdir=TB;\n";
  os << "  node [shape=circle, fontsize=10];\n";
  os << "  v0_0;\n";
  for (size_t n = 1; n <= depth; ++n) {
    os << "  { rank=same;";
    for (uint32_t v = 0; v < d.vertex_count(n); ++v)
      os << " v" << n << "_" << v << ";";
    os << " }\n";
  }
  for (size_t n = 1; n <= depth; ++n) {
    const LevelSpec& spec = d.level(n);
    for (const EdgeSpec& e : spec.edges)
      os << "  v" << n - 1 << "_" << e.src << " -> v" << n << "_" << e.dst
         << " [label=\"" << e.ord << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace obd
