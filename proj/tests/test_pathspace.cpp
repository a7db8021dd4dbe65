#include <random>

#include "doctest.h"
#include "obd/clopen.hpp"
#include "obd/io.hpp"
#include "oracles.hpp"

using namespace obd;

namespace {

// Random clopen set at depth <= 5, canonical by construction.
ClopenSet random_clopen(const OrderedDiagram& d, std::mt19937_64& rng) {
  uint32_t depth = uint32_t(rng() % 5);
  auto universe = all_paths(d, depth);
  std::vector<FinitePath> stems;
  for (const FinitePath& p : universe)
    if (rng() % 2) stems.push_back(p);
  return make_clopen(d, depth, std::move(stems));
}

EventuallyPeriodicPath random_point(const OrderedDiagram& d,
                                    std::mt19937_64& rng) {
  auto universe = all_paths(d, 1 + rng() % 4);
  return extend_path(d, universe[rng() % universe.size()], rng() % 2 == 0);
}

}  // namespace

TEST_CASE("refine examples") {
  OrderedDiagram odo = gen_odometer();
  ClopenSet c = make_clopen(odo, 1, {FinitePath{{0}}});
  ClopenSet r = refine(odo, c, 2);
  CHECK(r.stems == std::vector<FinitePath>{{{0, 0}}, {{0, 1}}});

  // Only edges leaving the right vertex continue a stem that ends there.
  OrderedDiagram tm = gen_twomax();
  ClopenSet c2 = make_clopen(tm, 2, {FinitePath{{0, 3}}});
  ClopenSet r2 = refine(tm, c2, 3);
  CHECK(r2.stems == std::vector<FinitePath>{{{0, 3, 1}}, {{0, 3, 4}}});

  CHECK(refine(tm, c2, 2) == c2);
}

TEST_CASE("boolean algebra on clopen sets") {
  OrderedDiagram odo = gen_odometer();
  ClopenSet a = make_clopen(odo, 1, {FinitePath{{0}}});
  CHECK(set_union(odo, a, complement(odo, a)) == full_space());
  ClopenSet b = make_clopen(odo, 2, {FinitePath{{0, 1}}});
  CHECK(set_intersect(odo, a, b) == b);

  OrderedDiagram tm = gen_twomax();
  ClopenSet x = make_clopen(tm, 2, {FinitePath{{0, 0}}});
  ClopenSet y = make_clopen(tm, 2, {FinitePath{{0, 3}}});
  CHECK(set_intersect(tm, x, y) == empty_set());

  std::mt19937_64 rng(42);
  for (const OrderedDiagram& d : {gen_odometer(), gen_twomax(),
                                  gen_random(1), gen_random(2)}) {
    for (int round = 0; round < 25; ++round) {
      ClopenSet p = random_clopen(d, rng);
      ClopenSet q = random_clopen(d, rng);
      CHECK(set_union(d, p, p) == p);
      CHECK(set_intersect(d, p, p) == p);
      // De Morgan
      CHECK(complement(d, set_union(d, p, q)) ==
            set_intersect(d, complement(d, p), complement(d, q)));
      // Absorption
      CHECK(set_union(d, p, set_intersect(d, p, q)) == p);
      CHECK(set_intersect(d, p, set_union(d, p, q)) == p);
      CHECK(set_minus(d, p, q) == set_intersect(d, p, complement(d, q)));
    }
  }

  // A few rounds at depth 8 where the stem sets get wide.
  for (const OrderedDiagram& d : {gen_odometer(), gen_twomax()}) {
    auto universe = all_paths(d, 8);
    std::vector<FinitePath> sa, sb;
    for (size_t i = 0; i < universe.size(); ++i) {
      if (i % 3 == 0) sa.push_back(universe[i]);
      if (i % 2 == 1) sb.push_back(universe[i]);
    }
    ClopenSet p = make_clopen(d, 8, sa);
    ClopenSet q = make_clopen(d, 8, sb);
    CHECK(complement(d, set_intersect(d, p, q)) ==
          set_union(d, complement(d, p), complement(d, q)));
    CHECK(set_union(d, p, set_intersect(d, p, q)) == p);
  }
}

TEST_CASE("membership") {
  OrderedDiagram tm = gen_twomax();
  EventuallyPeriodicPath three_inf{FinitePath{{0}}, {2}};
  CHECK_FALSE(member(tm, three_inf, make_clopen(tm, 2, {FinitePath{{0, 0}}})));
  CHECK(member(tm, three_inf, full_space()));
  EventuallyPeriodicPath one_inf{FinitePath{{0}}, {0}};
  CHECK(member(tm, one_inf,
               make_clopen(tm, 2, {FinitePath{{0, 0}}, FinitePath{{0, 3}}})));
}

TEST_CASE("refine never changes membership") {
  std::mt19937_64 rng(7);
  for (const OrderedDiagram& d : {gen_odometer(), gen_twomax(),
                                  gen_random(5)}) {
    for (int round = 0; round < 60; ++round) {
      ClopenSet c = random_clopen(d, rng);
      uint32_t deeper = c.depth + uint32_t(rng() % 3);
      ClopenSet r = refine(d, c, deeper);
      for (int k = 0; k < 6; ++k) {
        EventuallyPeriodicPath xi = random_point(d, rng);
        CHECK(member(d, xi, c) == member(d, xi, r));
      }
    }
  }
}

TEST_CASE("canonical form is a fixed point of refine + canonicalize") {
  std::mt19937_64 rng(11);
  for (const OrderedDiagram& d : {gen_odometer(), gen_twomax(),
                                  gen_random(9)}) {
    for (int round = 0; round < 40; ++round) {
      ClopenSet c = random_clopen(d, rng);
      ClopenSet back = canonicalize(d, refine(d, c, c.depth + 2));
      CHECK(back == c);
    }
  }
}

TEST_CASE("lex order on fibers") {
  OrderedDiagram odo = gen_odometer();
  // Binary with the least-significant digit first.
  CHECK(lex_compare(odo, FinitePath{{1, 0, 0}}, FinitePath{{0, 1, 0}}) ==
        std::strong_ordering::less);
  CHECK(lex_compare(odo, FinitePath{{0, 1, 0}}, FinitePath{{1, 1, 0}}) ==
        std::strong_ordering::less);
  CHECK(lex_compare(odo, FinitePath{{1, 1, 0}}, FinitePath{{0, 0, 1}}) ==
        std::strong_ordering::less);
  CHECK(lex_compare(odo, FinitePath{{1, 0, 1}}, FinitePath{{1, 0, 1}}) ==
        std::strong_ordering::equal);

  OrderedDiagram tm = gen_twomax();
  // The left fiber one level down is ordered by the block edge ranks.
  CHECK(lex_compare(tm, FinitePath{{0, 0}}, FinitePath{{1, 1}}) ==
        std::strong_ordering::less);
  CHECK(lex_compare(tm, FinitePath{{1, 1}}, FinitePath{{0, 2}}) ==
        std::strong_ordering::less);

  CHECK_THROWS_AS(lex_compare(tm, FinitePath{{0, 0}}, FinitePath{{0, 3}}),
                  IncomparablePaths);
  CHECK_THROWS_AS(lex_compare(tm, FinitePath{{0}}, FinitePath{{0, 0}}),
                  IncomparablePaths);
}

TEST_CASE("lex order matches the brute-force fiber sort exhaustively") {
  for (const OrderedDiagram& d : {gen_odometer(), gen_twomax()}) {
    for (size_t n = 1; n <= 6; ++n) {
      for (uint32_t v = 0; v < d.vertex_count(n); ++v) {
        auto sorted = oracle::naive_fiber_sorted(d, v, n);
        auto lib = fiber_paths(d, v, n);
        REQUIRE(lib == sorted);
        for (size_t i = 0; i < sorted.size(); ++i)
          for (size_t j = 0; j < sorted.size(); ++j) {
            auto cmp = lex_compare(d, sorted[i], sorted[j]);
            CHECK((i < j) == (cmp == std::strong_ordering::less));
            CHECK((i == j) == (cmp == std::strong_ordering::equal));
          }
      }
    }
  }
}

TEST_CASE("path text encoding") {
  CHECK(encode_path(parse_path("1,0,2")) == "1,0,2");
  CHECK(encode_path(parse_path("")) == "");
  EventuallyPeriodicPath xi = parse_epp("1,0|1,1");
  CHECK(xi.head.edges == std::vector<uint32_t>{1, 0});
  CHECK(xi.cycle == std::vector<uint32_t>{1, 1});
  CHECK(encode_epp(xi) == "1,0|1,1");
  CHECK(encode_epp(parse_epp("|0")) == "|0");
  CHECK_THROWS_AS(parse_path("1,,2"), MalformedInput);
  CHECK_THROWS_AS(parse_path("1|0"), MalformedInput);
  CHECK_THROWS_AS(parse_epp("1,0"), MalformedInput);
  CHECK_THROWS_AS(parse_epp("1|"), MalformedInput);
  CHECK_THROWS_AS(parse_epp("a|b"), MalformedInput);
}

TEST_CASE("eventually periodic path validity and equality") {
  OrderedDiagram tm = gen_twomax();
  EventuallyPeriodicPath one_inf{FinitePath{{0}}, {0}};
  CHECK(is_valid_epp(tm, one_inf));
  EventuallyPeriodicPath unrolled{FinitePath{{0, 0}}, {0, 0}};
  CHECK(epp_equal(tm, one_inf, unrolled));
  EventuallyPeriodicPath other{FinitePath{{0}}, {2}};
  CHECK_FALSE(epp_equal(tm, one_inf, other));
  // Edge 1 has source right but the head ends at left.
  EventuallyPeriodicPath bad{FinitePath{{0}}, {1}};
  CHECK_FALSE(is_valid_epp(tm, bad));
  CHECK_THROWS_AS(require_valid_epp(tm, bad), PreconditionViolation);
}
