#include "obd/transform.hpp"

#include "doctest.h"
#include "obd/io.hpp"
#include "obd/kr.hpp"
#include "oracles.hpp"

using namespace obd;

TEST_CASE("identity telescoping materializes the truncation") {
  for (const OrderedDiagram& d : {gen_odometer(), gen_twomax(),
                                  gen_random(5)}) {
    Telescoping identity{{0, 1, 2, 3}};
    TelescopeResult r = telescope(d, identity);
    REQUIRE(r.diagram.prefix_size() == 3);
    for (size_t n = 1; n <= 3; ++n) CHECK(r.diagram.level(n) == d.level(n));
    CHECK(iso_check(r.diagram, r.diagram).has_value());
  }
}

TEST_CASE("telescoping the odometer two levels at a time") {
  OrderedDiagram odo = gen_odometer();
  TelescopeResult r = telescope(odo, Telescoping{{0, 2, 4}});
  REQUIRE(r.diagram.prefix_size() == 2);
  for (size_t n = 1; n <= 2; ++n) {
    CHECK(r.diagram.vertex_count(n) == 1);
    CHECK(r.diagram.level(n).edges.size() == 4);
  }
  // Composite order is binary with the less significant bit first.
  CHECK(r.components[1] ==
        std::vector<std::vector<uint32_t>>{{0, 0}, {1, 0}, {0, 1}, {1, 1}});
}

TEST_CASE("telescoping the two-max example meets the path counts") {
  OrderedDiagram tm = gen_twomax();
  TelescopeResult r = telescope(tm, Telescoping{{0, 2}});
  auto counts = path_counts(tm, 2);
  std::vector<uint64_t> fiber_sizes(2, 0);
  for (const EdgeSpec& e : r.diagram.level(1).edges) fiber_sizes[e.dst]++;
  CHECK(fiber_sizes == counts);
}

TEST_CASE("telescoping composes") {
  for (const OrderedDiagram& d : {gen_odometer(), gen_twomax()}) {
    TelescopeResult once = telescope(d, Telescoping{{0, 1, 2, 3, 4, 5, 6}});
    TelescopeResult nested =
        telescope(once.diagram, Telescoping{{0, 2, 4, 6}});
    TelescopeResult direct = telescope(d, Telescoping{{0, 2, 4, 6}});
    CHECK(nested.diagram == direct.diagram);

    TelescopeResult deep = telescope(d, Telescoping{{0, 2, 4, 6}});
    TelescopeResult renested = telescope(deep.diagram, Telescoping{{0, 2, 3}});
    TelescopeResult flat = telescope(d, Telescoping{{0, 4, 6}});
    CHECK(renested.diagram == flat.diagram);
  }
}

TEST_CASE("composite fiber order equals the order of component sequences") {
  for (const OrderedDiagram& d : {gen_odometer(), gen_twomax(),
                                  gen_random(21)}) {
    TelescopeResult r = telescope(d, Telescoping{{0, 3}});
    const LevelSpec& spec = r.diagram.level(1);
    for (uint32_t a = 0; a < spec.edges.size(); ++a)
      for (uint32_t b = 0; b < spec.edges.size(); ++b) {
        if (spec.edges[a].dst != spec.edges[b].dst) continue;
        bool lib_less = spec.edges[a].ord < spec.edges[b].ord;
        bool naive_less = oracle::naive_fiber_less(
            d, FinitePath{r.components[1][a]}, FinitePath{r.components[1][b]});
        CHECK(lib_less == naive_less);
      }
  }
}

TEST_CASE("iso_check finds witnesses and rejects mismatches") {
  OrderedDiagram tm = gen_twomax();
  OrderedDiagram trunc = telescope(tm, Telescoping{{0, 1, 2, 3}}).diagram;

  auto self = iso_check(trunc, trunc);
  REQUIRE(self.has_value());
  for (const auto& vm : self->vertex_maps)
    for (uint32_t i = 0; i < vm.size(); ++i) CHECK(vm[i] == i);

  // Relabel the two vertices at every level.
  std::vector<LevelSpec> specs;
  for (size_t n = 1; n <= 3; ++n) {
    LevelSpec spec = trunc.level(n);
    for (EdgeSpec& e : spec.edges) {
      if (n > 1) e.src = 1 - e.src;
      e.dst = 1 - e.dst;
    }
    std::sort(spec.edges.begin(), spec.edges.end(),
              [](const EdgeSpec& a, const EdgeSpec& b) {
                return std::make_pair(a.dst, a.ord) <
                       std::make_pair(b.dst, b.ord);
              });
    specs.push_back(spec);
  }
  OrderedDiagram relabeled(specs, {});
  REQUIRE(validate(relabeled).ok());
  auto witness = iso_check(trunc, relabeled);
  REQUIRE(witness.has_value());
  for (size_t n = 1; n < witness->vertex_maps.size(); ++n)
    CHECK(witness->vertex_maps[n] == std::vector<uint32_t>{1, 0});
  CHECK(apply_isomorphism(trunc, *witness) == relabeled);
  CHECK(oracle::brute_force_iso_exists(trunc, relabeled));

  OrderedDiagram odo_trunc =
      telescope(gen_odometer(), Telescoping{{0, 1, 2, 3}}).diagram;
  CHECK_FALSE(iso_check(odo_trunc, trunc).has_value());
  CHECK_FALSE(oracle::brute_force_iso_exists(odo_trunc, trunc));
}

TEST_CASE("iso_check agrees with brute force on small diagrams") {
  std::vector<OrderedDiagram> pool;
  for (uint64_t seed = 0; seed < 8; ++seed)
    pool.push_back(telescope(gen_random(seed), Telescoping{{0, 1, 2}}).diagram);
  for (const auto& a : pool)
    for (const auto& b : pool) {
      bool lib = iso_check(a, b).has_value();
      bool brute = oracle::brute_force_iso_exists(a, b);
      CHECK(lib == brute);
    }
}

TEST_CASE("iso witnesses are sound") {
  for (uint64_t seed = 0; seed < 8; ++seed) {
    OrderedDiagram a =
        telescope(gen_random(seed), Telescoping{{0, 1, 2, 3}}).diagram;
    auto self = iso_check(a, a);
    REQUIRE(self.has_value());
    CHECK(apply_isomorphism(a, *self) == a);
  }
}

TEST_CASE("equivalence search certifies a telescoping") {
  OrderedDiagram odo = gen_odometer();
  OrderedDiagram a = telescope(odo, Telescoping{{0, 1, 2, 3, 4}}).diagram;
  OrderedDiagram b = telescope(odo, Telescoping{{0, 2, 4}}).diagram;
  auto cert = equiv_search(a, b, 4);
  REQUIRE(cert.has_value());
  CHECK(cert->t1.levels == std::vector<size_t>{0, 2, 4});
  CHECK(cert->t2.levels == std::vector<size_t>{0, 1, 2});
}

TEST_CASE("rebuilds from shifted canonical sequences are equivalent") {
  for (const OrderedDiagram& d : {gen_odometer(), gen_twomax()}) {
    OrderedDiagram a = rebuild_from_levels(d, {0, 1, 2, 3, 4}).diagram;
    OrderedDiagram b = rebuild_from_levels(d, {0, 2, 3, 4, 5}).diagram;
    auto cert = equiv_search(a, b, 4);
    CHECK(cert.has_value());
  }
}

TEST_CASE("structurally different diagrams stay undecided") {
  OrderedDiagram a = telescope(gen_odometer(), Telescoping{{0, 1, 2, 3}}).diagram;
  OrderedDiagram b = telescope(gen_twomax(), Telescoping{{0, 1, 2, 3}}).diagram;
  CHECK_FALSE(equiv_search(a, b, 3).has_value());
  // And they are genuinely inequivalent: total path counts grow apart.
  auto ca = path_counts(gen_odometer(), 4);
  auto cb = path_counts(gen_twomax(), 4);
  uint64_t ta = 0, tb = 0;
  for (uint64_t x : ca) ta += x;
  for (uint64_t x : cb) tb += x;
  CHECK(ta != tb);
}
