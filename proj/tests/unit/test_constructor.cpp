#include "absnormal/constructor.hpp"
#include "absnormal/error.hpp"
#include "absnormal/report.hpp"
#include "support/oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace absnormal;
using absnormal::testing::q;

namespace {

void check_invariants(const Certificate& c) {
  Interval cur(Rational(0), Rational(1));
  for (std::size_t i = 0; i < c.steps.size(); ++i) {
    const StepRecord& s = c.steps[i];
    CHECK(s.n == i + 1);
    CHECK(s.p_n == p_small(s.n));
    CHECK(s.half0.lo == cur.lo);
    CHECK(s.half1.hi == cur.hi);
    CHECK(s.half0.hi == s.half1.lo);
    const Interval chosen = s.digit == 0 ? s.half0 : s.half1;
    CHECK(chosen.length() == Rational::pow2(-static_cast<long>(s.n)));
    CHECK(chosen.lo >= cur.lo);
    CHECK(chosen.hi <= cur.hi);
    const Rational m = s.digit == 0 ? s.measure0 : s.measure1;
    CHECK(m + s.tail < s.threshold);
    if (s.digit == 1) CHECK(s.measure0 + s.tail >= s.threshold);
    CHECK(c.digits[i] == char('0' + s.digit));
    cur = chosen;
  }
  CHECK(c.final_interval().lo == cur.lo);
  CHECK(c.final_interval().hi == cur.hi);
}

// Every G/H component of the levels in Delta_{p_n} at x: F below the upper
// threshold end means x lies outside the inner enclosure.
bool avoids_inner(const Rational& x, const ParamSchedule& sched, std::uint64_t pn, bool strict_outer) {
  for (const auto& [b, m] : sched.levels(pn)) {
    const std::uint64_t t = T(pow2z(m));
    for (std::uint64_t h = 1; h <= t; ++h)
      for (std::uint64_t a = 0; a < (std::uint64_t{1} << h); ++a) {
        const GIndex g{b, m, a, h};
        const auto th = g_threshold(g, sched, 64);
        const Rational f = f_value(x, g_window(g), g_band(g));
        if (!(f < (strict_outer ? th.lo : th.hi))) return false;
        for (std::uint64_t l = h_lmin(m); l <= m; ++l)
          for (std::uint64_t k = 1; k <= (std::uint64_t{1} << (m - l)); ++k) {
            const HIndex hi{b, m, a, h, l, k};
            const auto hth = h_threshold(hi, sched, 64);
            const Rational hf = f_value(x, h_window(hi), h_band(hi));
            if (!(hf < (strict_outer ? hth.lo : hth.hi))) return false;
          }
      }
  }
  return true;
}

}  // namespace

TEST_CASE("paper preset: ten zero digits with empty Delta") {
  const auto c = run(ParamSchedule::paper(), 10, 64);
  CHECK(c.digits == "0000000000");
  REQUIRE(c.steps.size() == 10);
  for (const auto& s : c.steps) {
    CHECK(s.components == 0);
    CHECK(s.measure0 == Rational(0));
    CHECK(s.measure1 == Rational(0));
    CHECK(s.tail < s.threshold);
  }
  check_invariants(c);
  CHECK(c.final_interval().hi == Rational::pow2(-10));
  CHECK(verify_certificate(c).ok);
}

TEST_CASE("toy presets: runs verify and satisfy the step invariants") {
  bool saw_one = false;
  for (const char* name : {"toy-small", "toy-mixed", "toy-deep", "toy-wide"}) {
    CAPTURE(name);
    const auto c = run(ParamSchedule::named(name), 6, 64);
    CHECK(c.digits.size() == 6);
    check_invariants(c);
    std::uint64_t comps = 0;
    for (const auto& s : c.steps) comps = std::max(comps, s.components);
    CHECK(comps > 0);
    saw_one = saw_one || c.digits.find('1') != std::string::npos;
    const auto rep = verify_certificate(c);
    CHECK(rep.ok);
    CHECK(rep.mismatches.empty());
  }
  CHECK(saw_one);
  CHECK(run(ParamSchedule::named("toy-small"), 6, 64).digits == "000100");
}

TEST_CASE("runs are deterministic and prefix-stable") {
  const auto sched = ParamSchedule::named("toy-mixed");
  const auto a = run(sched, 6, 64);
  const auto b = run(sched, 6, 64);
  CHECK(certificate_json(a) == certificate_json(b));
  const auto shorter = run(sched, 4, 64);
  CHECK(a.digits.substr(0, 4) == shorter.digits);
}

TEST_CASE("step by step matches run") {
  const auto sched = ParamSchedule::named("toy-small");
  ConstructionState st(sched);
  const auto c = run(sched, 5, 64);
  for (int i = 0; i < 5; ++i) {
    const auto rec = step(st, 64);
    CHECK(rec.digit == c.steps[i].digit);
    CHECK(rec.measure0 == c.steps[i].measure0);
  }
  CHECK(st.digits == c.digits);
  CHECK(st.n == 6);
}

TEST_CASE("tampered certificates fail verification") {
  static const auto c = run(ParamSchedule::named("toy-small"), 6, 64);
  REQUIRE(c.digits[3] == '1');

  SUBCASE("measure bumped by 2^-n") {
    auto t = c;
    t.steps[3].measure0 += t.steps[3].threshold;
    const auto rep = verify_certificate(t);
    CHECK_FALSE(rep.ok);
    REQUIRE_FALSE(rep.mismatches.empty());
    CHECK(rep.mismatches.front().step == 4);
  }
  SUBCASE("digit flipped") {
    auto t = c;
    t.digits[3] = '0';
    t.steps[3].digit = 0;
    CHECK_FALSE(verify_certificate(t).ok);
  }
  SUBCASE("digit string disagrees with the steps") {
    auto t = c;
    t.digits[0] = '1';
    CHECK_FALSE(verify_certificate(t).ok);
  }
  SUBCASE("tail altered") {
    auto t = c;
    t.steps[1].tail += t.steps[1].threshold;
    CHECK_FALSE(verify_certificate(t).ok);
  }
}

TEST_CASE("construction errors") {
  CHECK_THROWS_AS(run(ParamSchedule::paper(), 31, 64), Error);
  CHECK_THROWS_AS(run(ParamSchedule::paper(), 3, 4), Error);
  auto bad = ParamSchedule::named("toy-small");
  bad.delta = Rational(0);
  CHECK_THROWS_AS(run(bad, 3, 64), Error);
}

TEST_CASE("orbit consistency of constructed prefixes") {
  struct Case {
    const char* preset;
    std::uint64_t digits;
  };
  for (const Case& cs : {Case{"toy-small", 20}, Case{"toy-deep", 16}, Case{"toy-mixed", 8}}) {
    CAPTURE(cs.preset);
    const auto sched = ParamSchedule::named(cs.preset);
    const auto c = run(sched, cs.digits, 64);
    const Interval fin = c.final_interval();
    const std::uint64_t pn = p_small(cs.digits);
    CHECK(avoids_inner((fin.lo + fin.hi) / Rational(2), sched, pn, false));

    // A point of I_n outside the outer Delta has every F below the lower end.
    const auto delta = delta_n(pn, sched, 64);
    const auto rest = difference(IntervalSet::of(fin.lo, fin.hi), delta.outer);
    REQUIRE_FALSE(rest.empty());
    const Interval& part = rest.parts().front();
    const Rational w = (part.lo + part.hi) / Rational(2);
    CHECK(avoids_inner(w, sched, pn, true));
    CHECK_FALSE(delta.outer.contains(w));
  }
}

TEST_CASE("inequality chain under the paper preset") {
  const auto rep = inequality_chain_check(ParamSchedule::paper(), 20);
  CHECK(rep.partial_sums.size() == 20);
  CHECK(rep.below_seven_eighths);
  CHECK(rep.with_eta_below_one);
  CHECK(rep.chain_below_headroom);
  CHECK(rep.increasing);
  CHECK(rep.headroom == q("25/32"));
  CHECK(rep.headroom < q("7/8"));
  for (std::size_t i = 0; i < 20; ++i) {
    CHECK(rep.partial_sums[i] < q("7/8"));
    CHECK(rep.partial_sums[i] <= rep.chain_bounds[i]);
    CHECK(rep.partial_sums[i] + ParamSchedule::paper().eta < Rational(1));
  }
  // Oracle: 2^(j-1) r_{p_j} recomputed term by term.
  Rational sum(0);
  for (std::uint64_t j = 1; j <= 5; ++j)
    sum += Rational::pow2(static_cast<long>(j) - 1) * r_tail_upper(p_small(j), ParamSchedule::paper());
  CHECK(rep.partial_sums[4] == sum);
}

TEST_CASE("cost estimate") {
  const auto one = cost_estimate(1);
  CHECK(one.exact);
  CHECK(one.exponent == 16);
  CHECK(one.decimal == "131072");
  const auto two = cost_estimate(2);
  CHECK(two.exponent == 64);
  CHECK_FALSE(two.exact);  // log2 6 is irrational
  CHECK(two.coefficient.lo.to_double() <= std::log2(6.0) * (1 + 1e-15));
  CHECK(std::log2(6.0) * (1 - 1e-15) <= two.coefficient.hi.to_double());
  CHECK_THROWS_AS(cost_estimate(0), Error);
}
