#pragma once

#include "absnormal/enclosure.hpp"
#include "absnormal/rational.hpp"

#include <cstdint>
#include <vector>

namespace absnormal {

/// {b^j x} for j = 0 .. N-1.
std::vector<Rational> orbit_points(const Rational& x, unsigned b, std::uint64_t N);

/// sup over 0 <= u < v <= 1 of |#{u <= x_j < v}/N - (v - u)|.
Rational extreme_discrepancy(std::vector<Rational> points);
/// Same supremum over intervals [0, v).
Rational star_discrepancy(std::vector<Rational> points);

/// D_N sqrt(N) / sqrt(log log N) for N >= 16.
RealEnclosure normality_ratio(const Rational& discrepancy, std::uint64_t N, unsigned precision);
RealEnclosure normality_ratio(const Rational& x, unsigned b, std::uint64_t N, unsigned precision);

/// 166 + 664/(sqrt b - 1).
RealEnclosure philipp_constant(unsigned b, unsigned precision);
/// sqrt(84)/9 at theta = 2; sqrt(2(theta+1)/(theta-1))/2 for odd theta;
/// sqrt(2(theta+1) theta (theta-2)/(theta-1)^3)/2 for even theta >= 4.
RealEnclosure fukuyama_constant(unsigned theta, unsigned precision);

struct RatioRow {
  std::uint64_t N = 0;
  Rational discrepancy;
  RealEnclosure ratio;
};

struct DiscrepancyReport {
  unsigned base = 2;
  std::uint64_t N = 0;
  Rational x;
  Rational extreme;
  Rational star;
  bool has_ratio = false;  // N >= 16
  RealEnclosure ratio;
  RealEnclosure philipp;  // C_b
  RealEnclosure limit;    // 3 C_b
  /// Ratio at N = 16, 32, ... up to N, with the running maximum. A
  /// diagnostic only: a finite prefix says nothing about the limsup.
  std::vector<RatioRow> grid;
  RealEnclosure running_max;
  bool running_max_below_limit = false;
};

DiscrepancyReport discrepancy_report(const Rational& x, unsigned b, std::uint64_t N, unsigned precision);

}  // namespace absnormal
