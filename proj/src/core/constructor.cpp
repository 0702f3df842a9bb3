#include "absnormal/constructor.hpp"

#include "absnormal/error.hpp"

namespace absnormal {
namespace {

constexpr std::uint64_t kMaxDigits = 30;

struct Halves {
  Interval lo;
  Interval hi;
};

Halves split(const Interval& i) {
  const Rational mid = (i.lo + i.hi) / Rational(2);
  return {Interval(i.lo, mid), Interval(mid, i.hi)};
}

struct Evaluation {
  Rational m0;
  Rational m1;
  Rational tail;
  std::uint64_t components = 0;
  bool exact = false;
};

Evaluation evaluate(const ParamSchedule& sched, std::uint64_t pn, const Halves& h, unsigned precision,
                    const Budget& budget, LevelCache& cache) {
  const SetEnclosure delta = delta_n(pn, sched, precision, budget, &cache);
  Evaluation e;
  e.m0 = intersection_measure(delta.outer, h.lo);
  e.m1 = intersection_measure(delta.outer, h.hi);
  e.tail = r_tail_upper(pn, sched, precision, budget, &cache);
  e.components = delta.components;
  e.exact = delta.inner == delta.outer;
  return e;
}

}  // namespace

Interval Certificate::final_interval() const {
  Rational lo(0);
  for (std::size_t i = 0; i < digits.size(); ++i)
    if (digits[i] == '1') lo += Rational::pow2(-static_cast<long>(i) - 1);
  return Interval(lo, lo + Rational::pow2(-static_cast<long>(digits.size())));
}

StepRecord step(ConstructionState& state, unsigned precision, const Budget& budget) {
  require(state.n >= 1 && state.n <= kMaxDigits, "digit index must lie in [1, 30]");
  require(precision >= 8, "precision must be >= 8");
  const std::uint64_t n = state.n;
  const std::uint64_t pn = p_small(n);
  const Halves h = split(state.current);
  const Rational threshold = Rational::pow2(-static_cast<long>(n));

  unsigned p = precision;
  Evaluation e;
  for (unsigned round = 0; round <= kRefineRounds; ++round, p *= 2) {
    e = evaluate(state.sched, pn, h, p, budget, state.cache);
    int digit = -1;
    if (e.m0 + e.tail < threshold) {
      digit = 0;
    } else if (e.m1 + e.tail < threshold) {
      digit = 1;
    }
    if (digit >= 0) {
      StepRecord rec;
      rec.n = n;
      rec.p_n = pn;
      rec.b_cap = bcap(big(pn));
      rec.half0 = h.lo;
      rec.half1 = h.hi;
      rec.measure0 = e.m0;
      rec.measure1 = e.m1;
      rec.tail = e.tail;
      rec.threshold = threshold;
      rec.digit = static_cast<unsigned>(digit);
      rec.components = e.components;
      rec.precision = p;
      state.current = digit == 0 ? h.lo : h.hi;
      state.digits.push_back(static_cast<char>('0' + digit));
      ++state.n;
      return rec;
    }
    if (e.exact) break;  // no threshold ambiguity left to refine
  }
  fail(ErrorKind::indeterminate,
       "step " + std::to_string(n) + ": neither half passes at precision " + std::to_string(p) +
           ": mu(Delta n I0) = " + e.m0.str() + ", mu(Delta n I1) = " + e.m1.str() + ", r = " + e.tail.str() +
           ", threshold = " + threshold.str());
}

Certificate run(const ParamSchedule& sched, std::uint64_t digit_count, unsigned precision, const Budget& budget) {
  require(digit_count >= 1, "digit count must be >= 1 (nothing to emit)");
  require(digit_count <= kMaxDigits, "digit count must be <= 30");
  sched.validate();
  ConstructionState state(sched);
  Certificate cert;
  cert.sched = sched;
  cert.precision = precision;
  cert.max_events = budget.max_events;
  for (std::uint64_t i = 0; i < digit_count; ++i) cert.steps.push_back(step(state, precision, budget));
  cert.digits = state.digits;
  return cert;
}

VerifyReport verify_certificate(const Certificate& cert, const Budget& budget) {
  VerifyReport rep;
  auto add = [&](std::uint64_t s, std::string field, std::string msg) {
    rep.ok = false;
    rep.mismatches.push_back({s, std::move(field), std::move(msg)});
  };
  try {
    cert.sched.validate();
  } catch (const Error& e) {
    add(0, "schedule", e.what());
    return rep;
  }
  if (cert.steps.empty()) add(0, "steps", "certificate has no steps");
  if (cert.steps.size() > kMaxDigits) {
    add(0, "steps", "certificate has more than 30 steps");
    return rep;
  }
  if (cert.digits.size() != cert.steps.size())
    add(0, "digits", "digit string has " + std::to_string(cert.digits.size()) + " digits for " +
                         std::to_string(cert.steps.size()) + " steps");

  LevelCache cache;
  Interval current(Rational(0), Rational(1));
  for (std::size_t i = 0; i < cert.steps.size(); ++i) {
    const StepRecord& s = cert.steps[i];
    const std::uint64_t n = i + 1;
    const std::uint64_t pn = p_small(n);
    const Rational threshold = Rational::pow2(-static_cast<long>(n));
    if (s.n != n) add(n, "n", "recorded n = " + std::to_string(s.n));
    if (s.p_n != pn) add(n, "p_n", "recorded " + std::to_string(s.p_n) + ", expected " + std::to_string(pn));
    if (s.b_cap != bcap(big(pn))) add(n, "b_cap", "recorded " + std::to_string(s.b_cap));
    const Halves h = split(current);
    if (!(s.half0 == h.lo)) add(n, "I0", "I^0 is not the left half of I_" + std::to_string(n - 1));
    if (!(s.half1 == h.hi)) add(n, "I1", "I^1 is not the right half of I_" + std::to_string(n - 1));
    if (s.threshold != threshold) add(n, "threshold", "recorded " + s.threshold.str() + ", expected " + threshold.str());
    if (s.digit > 1) {
      add(n, "digit", "digit must be 0 or 1");
      return rep;
    }
    if (i < cert.digits.size() && cert.digits[i] != static_cast<char>('0' + s.digit))
      add(n, "digits", "digit string has '" + std::string(1, cert.digits[i]) + "', step records " +
                           std::to_string(s.digit));
    if (s.precision < 8 || s.precision > (1u << 20)) {
      add(n, "precision", "recorded precision out of range");
      return rep;
    }

    const Evaluation e = evaluate(cert.sched, pn, h, s.precision, budget, cache);
    if (e.m0 != s.measure0) add(n, "measure0", "recorded " + s.measure0.str() + ", recomputed " + e.m0.str());
    if (e.m1 != s.measure1) add(n, "measure1", "recorded " + s.measure1.str() + ", recomputed " + e.m1.str());
    if (e.tail != s.tail) add(n, "tail", "recorded " + s.tail.str() + ", recomputed " + e.tail.str());
    if (e.components != s.components)
      add(n, "components", "recorded " + std::to_string(s.components) + ", recomputed " + std::to_string(e.components));
    const Rational chosen = s.digit == 0 ? e.m0 : e.m1;
    if (!(chosen + e.tail < threshold))
      add(n, "inequality", "mu(Delta n I^" + std::to_string(s.digit) + ") + r = " + (chosen + e.tail).str() +
                               " is not below " + threshold.str());
    if (s.digit == 1 && e.m0 + e.tail < threshold) add(n, "smallest_digit", "digit 0 would have passed");

    const Interval next = s.digit == 0 ? h.lo : h.hi;
    if (!(current.lo <= next.lo && next.hi <= current.hi)) add(n, "nesting", "I_n is not inside I_(n-1)");
    if (next.length() != threshold) add(n, "length", "mu(I_n) = " + next.length().str());
    current = next;
  }
  return rep;
}

ChainReport inequality_chain_check(const ParamSchedule& sched, std::uint64_t n_max) {
  require(!sched.toy, "the inequality chain assumes the paper preset");
  require(n_max >= 1 && n_max <= kMaxDigits, "n_max must lie in [1, 30]");
  sched.validate();
  ChainReport rep;
  rep.n_max = n_max;
  rep.headroom = Rational(BigInt(3), BigInt(4)) + sched.eta / Rational(4);
  Rational sum(0), chain(0);
  for (std::uint64_t j = 1; j <= n_max; ++j) {
    const Rational weight = Rational::pow2(static_cast<long>(j) - 1);
    sum += weight * r_tail_upper(p_small(j), sched);
    const BigInt pj = p_of(j);
    chain += weight * (Rational(BigInt(2 * j + 2), BigInt(pj + 1)) + sched.eta / Rational(pj));
    rep.partial_sums.push_back(sum);
    rep.chain_bounds.push_back(chain);
  }
  const Rational seven_eighths(BigInt(7), BigInt(8));
  rep.below_seven_eighths = rep.with_eta_below_one = rep.chain_below_headroom = rep.increasing = true;
  for (std::size_t i = 0; i < rep.partial_sums.size(); ++i) {
    rep.below_seven_eighths = rep.below_seven_eighths && rep.partial_sums[i] < seven_eighths;
    rep.with_eta_below_one = rep.with_eta_below_one && sched.eta + rep.partial_sums[i] < Rational(1);
    rep.chain_below_headroom = rep.chain_below_headroom && rep.chain_bounds[i] < rep.headroom;
    if (i > 0) rep.increasing = rep.increasing && rep.partial_sums[i - 1] < rep.partial_sums[i];
  }
  return rep;
}

CostEstimate cost_estimate(std::uint64_t n, unsigned precision) {
  require(n >= 1, "cost estimate needs n >= 1");
  require(n <= 1000000, "cost estimate needs n <= 10^6");
  CostEstimate out;
  out.n = n;
  out.exponent = p_of(n);
  const BigInt base = big(2 * n + 2);
  const unsigned long lg = floor_log2(base);
  if (base == pow2z(lg)) {
    out.coefficient = RealEnclosure::exact(Rational(BigInt(static_cast<unsigned long>(lg))));
    out.exact = true;
    if (out.exponent <= 4096) out.decimal = BigInt(BigInt(static_cast<unsigned long>(lg)) << out.exponent.get_ui()).get_str();
  } else {
    out.coefficient =
        enclose([&](long wp) { return log(Ival(wp, Rational(base))) / log(Ival(wp, Rational(2))); }, precision);
  }
  return out;
}

}  // namespace absnormal
