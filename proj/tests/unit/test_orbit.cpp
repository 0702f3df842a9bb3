#include "absnormal/error.hpp"
#include "absnormal/orbit.hpp"
#include "support/oracles.hpp"

#include <doctest.h>

#include <random>

using namespace absnormal;
using absnormal::testing::q;
using absnormal::testing::set_of;

namespace {

BandSpec dy(std::uint64_t a, unsigned k) { return BandSpec::dyadic({a, k}); }

}  // namespace

TEST_CASE("preimage_band examples") {
  CHECK(preimage_band(2, 0, dy(1, 1)) == set_of({{"1/2", "1"}}));
  CHECK(preimage_band(2, 1, dy(0, 1)) == set_of({{"0", "1/4"}, {"1/2", "3/4"}}));
  CHECK(preimage_band(2, 2, dy(1, 2)) ==
        set_of({{"1/16", "2/16"}, {"5/16", "6/16"}, {"9/16", "10/16"}, {"13/16", "14/16"}}));
}

TEST_CASE("preimage_band preserves measure and matches the union formula") {
  for (unsigned b = 2; b <= 5; ++b)
    for (unsigned j = 0; j <= 8; ++j)
      for (unsigned k = 1; k <= 4; ++k) {
        if (ipow(BigInt(b), j) > 5000) continue;
        for (std::uint64_t a : {std::uint64_t{0}, (std::uint64_t{1} << k) - 1}) {
          const auto band = dy(a, k);
          const auto s = preimage_band(b, j, band);
          CHECK(s.measure() == Rational::pow2(-static_cast<long>(k)));
          CHECK(s == absnormal::testing::preimage_by_formula(b, j, band.lo(), band.hi()));
        }
      }
  // Large j: measure only.
  CHECK(preimage_band(5, 8, dy(3, 4)).measure() == q("1/16"));
}

TEST_CASE("f_value examples") {
  CHECK(f_value(q("2/3"), {2, 0, 4}, dy(0, 1)) == Rational(0));
  CHECK(f_value(q("0"), {2, 0, 4}, dy(0, 1)) == Rational(2));
  CHECK(f_value(q("0"), {3, 1, 3}, dy(1, 1)) == q("3/2"));
}

TEST_CASE("hit_count agrees with the naive orbit") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 300; ++i) {
    const Rational x = absnormal::testing::random_rational(rng, 200);
    const unsigned b = 2 + static_cast<unsigned>(rng() % 4);
    const std::uint64_t M = rng() % 6, N = 1 + rng() % 12;
    const unsigned k = 1 + static_cast<unsigned>(rng() % 3);
    const auto band = dy(rng() % (1u << k), k);
    const auto orbit = absnormal::testing::naive_orbit(x, b, M + N);
    std::uint64_t expect = 0;
    for (std::uint64_t j = M; j < M + N; ++j)
      if (band.lo() <= orbit[j] && orbit[j] < band.hi()) ++expect;
    CHECK(hit_count(x, {b, M, N}, band) == expect);
  }
}

TEST_CASE("breakpoints examples") {
  using V = std::vector<Rational>;
  CHECK(breakpoints({2, 0, 1}, dy(0, 1)) == V{q("0"), q("1/2"), q("1")});
  CHECK(breakpoints({2, 0, 2}, dy(0, 1)) == V{q("0"), q("1/4"), q("1/2"), q("3/4"), q("1")});
  CHECK(breakpoints({3, 0, 1}, dy(0, 1)) == V{q("0"), q("1/2"), q("1")});
}

TEST_CASE("deviation_region examples") {
  const auto r = deviation_region({2, 0, 2}, dy(0, 1), Rational(1));
  CHECK(r == set_of({{"0", "1/4"}, {"3/4", "1"}}));
  CHECK(r.measure() == q("1/2"));
  CHECK(deviation_region({3, 2, 3}, dy(1, 2), Rational(0)) == IntervalSet::unit());
  CHECK(deviation_region({2, 0, 2}, dy(0, 1), q("3/2")).empty());
  CHECK_THROWS_AS(deviation_region({2, 0, 2}, dy(0, 1), q("-1")), Error);
}

TEST_CASE("sweep cells carry the pointwise hit count") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 60; ++i) {
    const unsigned b = 2 + static_cast<unsigned>(rng() % 3);
    const Window w{b, rng() % 3, 1 + rng() % 4};
    const unsigned k = 1 + static_cast<unsigned>(rng() % 3);
    const auto band = dy(rng() % (1u << k), k);
    const auto cells = sweep_cells(w, band);
    REQUIRE(!cells.empty());
    CHECK(cells.front().lo == Rational(0));
    CHECK(cells.back().hi == Rational(1));
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c > 0) CHECK(cells[c - 1].hi == cells[c].lo);
      const Rational mid = (cells[c].lo + cells[c].hi) / Rational(2);
      CHECK(hit_count(cells[c].lo, w, band) == cells[c].count);
      CHECK(hit_count(mid, w, band) == cells[c].count);
    }
  }
}

TEST_CASE("deviation_region matches the cylinder oracle") {
  std::mt19937_64 rng(2024);
  int draws = 0;
  while (draws < 120) {
    const unsigned b = 2 + static_cast<unsigned>(rng() % 2);
    const std::uint64_t total = 1 + rng() % 7;
    const std::uint64_t N = 1 + rng() % total;
    const Window w{b, total - N, N};
    const unsigned k = 1 + static_cast<unsigned>(rng() % 3);
    const auto band = dy(rng() % (1u << k), k);
    const Rational t(BigInt(static_cast<long>(rng() % (2 * N + 2))), BigInt(2));
    CHECK(deviation_region(w, band, t) == absnormal::testing::cylinder_region(w, band, {t, false}));
    ++draws;
  }
}

TEST_CASE("deviation_region is antitone in t") {
  const Window w{3, 1, 5};
  const auto band = dy(2, 3);
  IntervalSet prev = IntervalSet::unit();
  for (int t2 = 0; t2 <= 12; ++t2) {
    const auto cur = deviation_region(w, band, Rational(BigInt(t2), BigInt(2)));
    CHECK(cur.is_subset_of(prev));
    prev = cur;
  }
}

TEST_CASE("multi-threshold sweep agrees with single sweeps") {
  const Window w{2, 2, 6};
  const auto band = dy(1, 2);
  const std::vector<Threshold> ts{{q("1/2"), false}, {q("1/2"), true}, {q("2"), false}, {q("5"), true}};
  const auto regions = deviation_regions(w, band, ts);
  for (std::size_t i = 0; i < ts.size(); ++i)
    CHECK(regions[i] == absnormal::testing::cylinder_region(w, band, ts[i]));
}

TEST_CASE("b-adic and general bands") {
  const auto band = BandSpec::badic(3, 2, 4);
  CHECK(band.lo() == q("4/9"));
  CHECK(preimage_band(3, 2, band).measure() == q("1/9"));
  const Window w{3, 1, 4};
  CHECK(deviation_region(w, band, q("1")) ==
        absnormal::testing::cylinder_region(w, band, {q("1"), false}));
  const auto odd = BandSpec::between(q("1/5"), q("2/3"));
  const Window w2{2, 0, 5};
  CHECK(deviation_region(w2, odd, q("3/2")) ==
        absnormal::testing::cylinder_region(w2, odd, {q("3/2"), false}));
  CHECK_THROWS_AS(BandSpec::dyadic({4, 2}), Error);
  CHECK_THROWS_AS(BandSpec::between(q("1/2"), q("1/2")), Error);
}

TEST_CASE("count distribution matches sweep measures") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 40; ++i) {
    const unsigned b = 2 + static_cast<unsigned>(rng() % 3);
    const std::uint64_t N = 1 + rng() % 5;
    const unsigned k = 1 + static_cast<unsigned>(rng() % 3);
    const auto band = dy(rng() % (1u << k), k);
    const Window w{b, rng() % 3, N};
    std::vector<Rational> by_sweep(N + 1, Rational(0));
    for (const auto& c : sweep_cells(w, band)) by_sweep[c.count] += c.hi - c.lo;
    const auto dist = count_distribution(b, N, band);
    CHECK(dist == by_sweep);
    Rational total(0);
    for (const auto& p : dist) total += p;
    CHECK(total == Rational(1));
    const Threshold t{q("1"), false};
    CHECK(deviation_measure(dist, band, t) == deviation_region(w, band, t.value).measure());
  }
}

TEST_CASE("budgets fail loudly") {
  Budget tiny{100};
  CHECK_THROWS_AS(deviation_region({2, 0, 10}, dy(0, 1), q("1"), tiny), Error);
  try {
    preimage_band(3, 10, dy(0, 1), tiny);
    FAIL("expected budget error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::budget);
  }
  CHECK(sweep_event_count({2, 0, 3}) == 14);
  CHECK(sweep_event_count({3, 1, 2}) == 24);
}

TEST_CASE("max_f_value bounds the attainable F") {
  CHECK(max_f_value(8, dy(0, 2)) == Rational(6));
  CHECK(max_f_value(8, dy(0, 1)) == Rational(4));
}
