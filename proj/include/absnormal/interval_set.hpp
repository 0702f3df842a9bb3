#pragma once

#include "absnormal/rational.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace absnormal {

/// Half-open [lo, hi) inside [0, 1).
struct Interval {
  Rational lo;
  Rational hi;

  Interval() = default;
  Interval(Rational l, Rational h);

  bool empty() const { return lo == hi; }
  Rational length() const { return hi - lo; }
  bool contains(const Rational& x) const { return lo <= x && x < hi; }

  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Finite union of half-open subintervals of [0, 1), kept canonical: parts
/// are sorted, pairwise disjoint, non-empty, and no two are adjacent. Two
/// sets are equal exactly when their representations are equal.
class IntervalSet {
 public:
  IntervalSet() = default;

  static IntervalSet unit();
  static IntervalSet of(Rational lo, Rational hi);
  /// Canonicalizes arbitrary (possibly overlapping, unordered) parts.
  static IntervalSet from_parts(std::vector<Interval> parts);
  /// Adopts parts that are already sorted and disjoint; adjacent parts are
  /// still merged.
  static IntervalSet from_sorted(std::vector<Interval> parts);

  const std::vector<Interval>& parts() const { return parts_; }
  std::size_t size() const { return parts_.size(); }
  bool empty() const { return parts_.empty(); }

  Rational measure() const;
  bool contains(const Rational& x) const;
  bool is_subset_of(const IntervalSet& other) const;

  friend bool operator==(const IntervalSet&, const IntervalSet&) = default;

 private:
  std::vector<Interval> parts_;
};

IntervalSet unite(const IntervalSet& a, const IntervalSet& b);
/// Union of many sets in one merge pass.
IntervalSet unite_all(std::span<const IntervalSet> sets);
IntervalSet intersect(const IntervalSet& a, const IntervalSet& b);
IntervalSet complement_in_unit(const IntervalSet& s);
IntervalSet difference(const IntervalSet& a, const IntervalSet& b);

/// measure(a ∩ b) without materializing the intersection.
Rational intersection_measure(const IntervalSet& a, const Interval& b);

}  // namespace absnormal
