#include "absnormal/interval_set.hpp"

#include "absnormal/error.hpp"

#include <algorithm>

namespace absnormal {

Interval::Interval(Rational l, Rational h) : lo(std::move(l)), hi(std::move(h)) {
  if (lo.sign() < 0 || hi < lo || Rational(1) < hi)
    fail(ErrorKind::invalid_argument,
         "interval [" + lo.str() + ", " + hi.str() + ") outside [0,1) or reversed");
}

IntervalSet IntervalSet::unit() { return of(Rational(0), Rational(1)); }

IntervalSet IntervalSet::of(Rational lo, Rational hi) {
  return from_sorted({Interval(std::move(lo), std::move(hi))});
}

IntervalSet IntervalSet::from_parts(std::vector<Interval> parts) {
  std::sort(parts.begin(), parts.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  IntervalSet out;
  for (auto& p : parts) {
    if (p.empty()) continue;
    if (!out.parts_.empty() && p.lo <= out.parts_.back().hi) {
      if (out.parts_.back().hi < p.hi) out.parts_.back().hi = std::move(p.hi);
    } else {
      out.parts_.push_back(std::move(p));
    }
  }
  return out;
}

IntervalSet IntervalSet::from_sorted(std::vector<Interval> parts) {
  IntervalSet out;
  out.parts_.reserve(parts.size());
  for (auto& p : parts) {
    if (p.empty()) continue;
    if (!out.parts_.empty()) {
      auto& last = out.parts_.back();
      if (p.lo < last.hi) fail(ErrorKind::invalid_argument, "from_sorted: parts overlap or are unsorted");
      if (last.hi == p.lo) {
        last.hi = std::move(p.hi);
        continue;
      }
    }
    out.parts_.push_back(std::move(p));
  }
  return out;
}

Rational IntervalSet::measure() const {
  mpq_class total;
  for (const auto& p : parts_) total += p.hi.value() - p.lo.value();
  return Rational(std::move(total));
}

bool IntervalSet::contains(const Rational& x) const {
  auto it = std::upper_bound(parts_.begin(), parts_.end(), x,
                             [](const Rational& v, const Interval& p) { return v < p.lo; });
  if (it == parts_.begin()) return false;
  return (--it)->contains(x);
}

bool IntervalSet::is_subset_of(const IntervalSet& other) const {
  // Canonical parts of `other` are maximal, so each part here must sit
  // inside a single part there.
  std::size_t j = 0;
  for (const auto& p : parts_) {
    while (j < other.parts_.size() && other.parts_[j].hi <= p.lo) ++j;
    if (j == other.parts_.size()) return false;
    const auto& q = other.parts_[j];
    if (p.lo < q.lo || q.hi < p.hi) return false;
  }
  return true;
}

IntervalSet unite(const IntervalSet& a, const IntervalSet& b) {
  const IntervalSet sets[] = {a, b};
  return unite_all(sets);
}

IntervalSet unite_all(std::span<const IntervalSet> sets) {
  std::size_t total = 0;
  for (const auto& s : sets) total += s.size();
  std::vector<Interval> all;
  all.reserve(total);
  for (const auto& s : sets) all.insert(all.end(), s.parts().begin(), s.parts().end());
  return IntervalSet::from_parts(std::move(all));
}

IntervalSet intersect(const IntervalSet& a, const IntervalSet& b) {
  std::vector<Interval> out;
  const auto& pa = a.parts();
  const auto& pb = b.parts();
  std::size_t i = 0, j = 0;
  while (i < pa.size() && j < pb.size()) {
    const Rational& lo = max(pa[i].lo, pb[j].lo);
    const bool a_first = pa[i].hi < pb[j].hi;
    const Rational& hi = a_first ? pa[i].hi : pb[j].hi;
    if (lo < hi) out.emplace_back(lo, hi);
    if (a_first) ++i; else ++j;
  }
  return IntervalSet::from_sorted(std::move(out));
}

IntervalSet complement_in_unit(const IntervalSet& s) {
  std::vector<Interval> out;
  Rational cursor(0);
  for (const auto& p : s.parts()) {
    if (cursor < p.lo) out.emplace_back(cursor, p.lo);
    cursor = p.hi;
  }
  if (cursor < Rational(1)) out.emplace_back(cursor, Rational(1));
  return IntervalSet::from_sorted(std::move(out));
}

IntervalSet difference(const IntervalSet& a, const IntervalSet& b) {
  return intersect(a, complement_in_unit(b));
}

Rational intersection_measure(const IntervalSet& a, const Interval& b) {
  mpq_class total;
  for (const auto& p : a.parts()) {
    if (p.hi <= b.lo) continue;
    if (b.hi <= p.lo) break;
    const Rational& lo = max(p.lo, b.lo);
    const Rational& hi = min(p.hi, b.hi);
    total += hi.value() - lo.value();
  }
  return Rational(std::move(total));
}

}  // namespace absnormal
