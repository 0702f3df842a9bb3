#pragma once

#include "absnormal/bad_sets.hpp"
#include "absnormal/interval_set.hpp"
#include "absnormal/schedule.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace absnormal {

/// Audit record of one digit.
struct StepRecord {
  std::uint64_t n = 0;
  std::uint64_t p_n = 0;
  unsigned b_cap = 2;
  Interval half0;  // I^0_n
  Interval half1;  // I^1_n
  Rational measure0;  // mu(outer Delta_{p_n} n I^0_n)
  Rational measure1;
  Rational tail;       // r_tail_upper(p_n)
  Rational threshold;  // 2^-n
  unsigned digit = 0;
  std::uint64_t components = 0;
  unsigned precision = 0;  // threshold precision that decided the step
};

struct Certificate {
  ParamSchedule sched;
  unsigned precision = 64;
  std::uint64_t max_events = 0;
  std::string digits;
  std::vector<StepRecord> steps;

  Interval final_interval() const;
};

struct ConstructionState {
  ParamSchedule sched;
  std::uint64_t n = 1;  // index of the next digit
  Interval current{Rational(0), Rational(1)};
  std::string digits;
  LevelCache cache;

  explicit ConstructionState(ParamSchedule s) : sched(std::move(s)) {}
};

/// Default number of precision doublings before a step is indeterminate.
inline constexpr unsigned kRefineRounds = 8;

/// Decides digit n: the smallest d with mu(outer Delta_{p_n} n I^d_n) +
/// r_{p_n} < 2^-n. Refines precision when neither half passes.
StepRecord step(ConstructionState& state, unsigned precision, const Budget& budget = {});

Certificate run(const ParamSchedule& sched, std::uint64_t digit_count, unsigned precision, const Budget& budget = {});

struct Mismatch {
  std::uint64_t step;  // 0 for certificate-level problems
  std::string field;
  std::string message;
};

struct VerifyReport {
  bool ok = true;
  std::vector<Mismatch> mismatches;
};

/// Recomputes every step with fresh sets (no state shared with the run that
/// produced the certificate) at the recorded precision.
VerifyReport verify_certificate(const Certificate& cert, const Budget& budget = {});

struct ChainReport {
  std::uint64_t n_max = 0;
  std::vector<Rational> partial_sums;  // sum_{j<=n} 2^(j-1) r_{p_j}, n = 1..n_max
  std::vector<Rational> chain_bounds;  // sum_{j<=n} 2^(j-1) ((2j+2)/(2^(2j+2)+1) + eta/2^(2j+2))
  Rational headroom;                   // 3/4 + eta/4
  bool below_seven_eighths = false;
  bool with_eta_below_one = false;
  bool chain_below_headroom = false;
  bool increasing = false;
};
ChainReport inequality_chain_check(const ParamSchedule& sched, std::uint64_t n_max);

/// log2 of (2n+2)^(2^(2^(2n+2))) = coefficient * 2^exponent with coefficient
/// log2(2n+2) and exponent 2^(2n+2).
struct CostEstimate {
  std::uint64_t n = 0;
  RealEnclosure coefficient;
  BigInt exponent;
  bool exact = false;
  /// Decimal value of the exact log2 when the exponent is at most 4096.
  std::string decimal;
};
CostEstimate cost_estimate(std::uint64_t n, unsigned precision = 64);

}  // namespace absnormal
