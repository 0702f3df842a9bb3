#pragma once

#include "absnormal/interval_set.hpp"
#include "absnormal/rational.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace absnormal {

/// Dyadic target [a 2^-k, (a+1) 2^-k).
struct Band {
  std::uint64_t a = 0;
  unsigned k = 1;
};

/// Target [lo_num/den, hi_num/den) with integer numerators; the sweep and
/// the count distribution work on any such band. Dyadic bands have
/// den = 2^k, b-adic bands den = b^m.
struct BandSpec {
  BigInt lo_num;
  BigInt hi_num;
  BigInt den;

  static BandSpec dyadic(const Band& band);
  static BandSpec badic(unsigned base, unsigned m, std::uint64_t a);
  static BandSpec between(const Rational& lo, const Rational& hi);

  Rational lo() const { return Rational(lo_num, den); }
  Rational hi() const { return Rational(hi_num, den); }
  Rational width() const { return Rational(hi_num - lo_num, den); }
};

/// Orbit index range [offset, offset + length) of x -> {b^j x}.
struct Window {
  unsigned base = 2;
  std::uint64_t offset = 0;
  std::uint64_t length = 1;
};

/// Hard cap on the number of sweep events (or enumerated cells) an
/// operation may touch before it refuses with ErrorKind::budget.
struct Budget {
  std::uint64_t max_events = std::uint64_t{1} << 24;
};

/// |count - width * N| >= value, or > value when strict.
struct Threshold {
  Rational value;
  bool strict = false;

  bool accepts(const Rational& f) const { return strict ? value < f : value <= f; }
};

void validate(const Window& w);
void validate(const BandSpec& band);

/// {x in [0,1) : {b^j x} in band}.
IntervalSet preimage_band(unsigned base, std::uint64_t j, const BandSpec& band, const Budget& budget = {});

/// Number of j in the window with {b^j x} in the band.
std::uint64_t hit_count(const Rational& x, const Window& w, const BandSpec& band);
/// F(M, N, lo, hi, {b^j x}) = |count - (hi - lo) N|.
Rational f_value(const Rational& x, const Window& w, const BandSpec& band);

/// Number of sweep events, 2 * sum_j b^j over the window.
BigInt sweep_event_count(const Window& w);

/// Sorted distinct endpoints of all preimage parts, plus 0 and 1.
std::vector<Rational> breakpoints(const Window& w, const BandSpec& band, const Budget& budget = {});

/// {x : F >= t}.
IntervalSet deviation_region(const Window& w, const BandSpec& band, const Rational& t,
                             const Budget& budget = {});
/// One sweep, one region per threshold.
std::vector<IntervalSet> deviation_regions(const Window& w, const BandSpec& band,
                                           std::span<const Threshold> thresholds,
                                           const Budget& budget = {});

/// Elementary interval of the sweep: the hit count is constant on [lo, hi).
struct SweepCell {
  Rational lo;
  Rational hi;
  std::uint64_t count;
};
std::vector<SweepCell> sweep_cells(const Window& w, const BandSpec& band, const Budget& budget = {});

/// Exact law of the hit count under Lebesgue measure: entry c is
/// mu{x : count(x) = c}, for c = 0..N.
///
/// Computed by pushing the density through the transfer operator of
/// x -> {b x}, which maps functions constant on the band's grid (cells of
/// width 1/den) to functions constant on the same grid. Independent of the
/// sweep and of the window offset (the map preserves Lebesgue measure).
std::vector<Rational> count_distribution(unsigned base, std::uint64_t length, const BandSpec& band,
                                         const Budget& budget = {});

/// mu{x : F >= t} (or > t) from the count distribution.
Rational deviation_measure(const std::vector<Rational>& distribution, const BandSpec& band,
                           const Threshold& t);

/// Largest attainable F over a window of length N.
Rational max_f_value(std::uint64_t length, const BandSpec& band);

}  // namespace absnormal
