#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace absnormal {

using BigInt = mpz_class;

/// Exact arbitrary-precision rational, always in lowest terms with a
/// positive denominator.
///
/// Serialized form is "num/den" (zero is "0/1"); parsing also accepts a bare
/// integer.
class Rational {
 public:
  Rational() = default;
  Rational(long v) : q_(v) {}  // NOLINT(google-explicit-constructor)
  Rational(const BigInt& v) : q_(v) {}  // NOLINT(google-explicit-constructor)
  /// Integer-valued GMP expression, e.g. `a - 1` on BigInt.
  template <class U>
  Rational(const __gmp_expr<mpz_t, U>& e) : q_(BigInt(e)) {}  // NOLINT(google-explicit-constructor)
  Rational(const BigInt& num, const BigInt& den);
  explicit Rational(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }

  static Rational parse(std::string_view text);
  /// 2^e for any integer e.
  static Rational pow2(long e);

  BigInt num() const { return q_.get_num(); }
  BigInt den() const { return q_.get_den(); }
  const mpq_class& value() const { return q_; }

  int sign() const { return sgn(q_); }
  bool is_zero() const { return sign() == 0; }
  bool is_integer() const { return q_.get_den() == 1; }

  BigInt floor() const;
  BigInt ceil() const;
  double to_double() const { return q_.get_d(); }

  std::string str() const;

  Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
  Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
  Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.q_)); }

  friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) == 0; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = cmp(a.q_, b.q_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  mpq_class q_;
};

Rational abs(const Rational& r);
Rational min(const Rational& a, const Rational& b);
Rational max(const Rational& a, const Rational& b);

/// base^exp for a non-negative exponent.
BigInt ipow(const BigInt& base, unsigned long exp);
BigInt pow2z(unsigned long exp);
/// Exact floor(log2(v)) for v >= 1.
unsigned long floor_log2(const BigInt& v);
/// Integer square root if `v` is a perfect square, else -1.
BigInt exact_isqrt(const BigInt& v);

std::string to_string(const BigInt& v);

inline BigInt big(std::uint64_t v) { return BigInt(static_cast<unsigned long>(v)); }

}  // namespace absnormal
