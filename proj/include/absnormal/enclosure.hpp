#pragma once

#include "absnormal/rational.hpp"

#include <functional>
#include <memory>

namespace absnormal {

/// Rational bracket lo <= v <= hi around a real v.
struct RealEnclosure {
  Rational lo;
  Rational hi;

  static RealEnclosure exact(const Rational& v) { return {v, v}; }

  bool is_exact() const { return lo == hi; }
  Rational width() const { return hi - lo; }
  bool contains(const Rational& x) const { return lo <= x && x <= hi; }
  bool within(const RealEnclosure& outer) const { return outer.lo <= lo && hi <= outer.hi; }

  friend bool operator==(const RealEnclosure&, const RealEnclosure&) = default;
};

RealEnclosure operator*(const RealEnclosure& a, const Rational& c);

/// Closed interval of MPFR floats at a fixed working precision. Every
/// operation rounds the lower end down and the upper end up, so the result
/// always contains the exact value of the same expression on the exact
/// inputs.
class Ival {
 public:
  explicit Ival(long prec);
  Ival(long prec, const Rational& v);
  Ival(long prec, const Rational& lo, const Rational& hi);
  Ival(const Ival& o);
  Ival& operator=(const Ival& o);
  Ival(Ival&&) noexcept;
  Ival& operator=(Ival&&) noexcept;
  ~Ival();

  long precision() const;

  friend Ival operator+(const Ival& a, const Ival& b);
  friend Ival operator-(const Ival& a, const Ival& b);
  friend Ival operator-(const Ival& a);
  /// Both operands must be non-negative.
  friend Ival operator*(const Ival& a, const Ival& b);
  /// `a` non-negative, `b` strictly positive.
  friend Ival operator/(const Ival& a, const Ival& b);

  friend Ival sqrt(const Ival& a);
  /// Requires a strictly positive argument.
  friend Ival log(const Ival& a);
  friend Ival exp(const Ival& a);
  /// 2^a.
  friend Ival exp2(const Ival& a);

  Rational lower() const;
  Rational upper() const;
  bool positive() const;
  bool nonnegative() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

using IvalExpr = std::function<Ival(long working_precision)>;

/// Evaluates a positive real expression to relative width
/// hi - lo <= 2^-precision * hi.
///
/// Results nest under refinement: for q >= p + 1 the precision-q enclosure
/// lies inside the precision-p one. Non-positive expressions are returned
/// unsnapped at the requested working precision.
RealEnclosure enclose(const IvalExpr& expr, unsigned precision);

/// sqrt(r) for a non-negative rational; exact when r is the square of a
/// rational.
RealEnclosure sqrt_enclosure(const Rational& r, unsigned precision);

}  // namespace absnormal
