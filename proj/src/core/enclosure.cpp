#include "absnormal/enclosure.hpp"

#include "absnormal/error.hpp"

#include <mpfr.h>

namespace absnormal {

struct Ival::Impl {
  mpfr_t lo;
  mpfr_t hi;

  explicit Impl(long prec) {
    mpfr_init2(lo, static_cast<mpfr_prec_t>(prec));
    mpfr_init2(hi, static_cast<mpfr_prec_t>(prec));
  }
  Impl(const Impl& o) : Impl(static_cast<long>(mpfr_get_prec(o.lo))) {
    mpfr_set(lo, o.lo, MPFR_RNDN);
    mpfr_set(hi, o.hi, MPFR_RNDN);
  }
  Impl& operator=(const Impl&) = delete;
  ~Impl() {
    mpfr_clear(lo);
    mpfr_clear(hi);
  }
};

Ival::Ival(long prec) : impl_(std::make_unique<Impl>(prec)) {
  mpfr_set_zero(impl_->lo, 1);
  mpfr_set_zero(impl_->hi, 1);
}

Ival::Ival(long prec, const Rational& v) : Ival(prec, v, v) {}

Ival::Ival(long prec, const Rational& lo, const Rational& hi) : impl_(std::make_unique<Impl>(prec)) {
  require(lo <= hi, "Ival: reversed bounds");
  mpfr_set_q(impl_->lo, lo.value().get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(impl_->hi, hi.value().get_mpq_t(), MPFR_RNDU);
}

Ival::Ival(const Ival& o) : impl_(std::make_unique<Impl>(*o.impl_)) {}
Ival& Ival::operator=(const Ival& o) {
  if (this != &o) impl_ = std::make_unique<Impl>(*o.impl_);
  return *this;
}
Ival::Ival(Ival&&) noexcept = default;
Ival& Ival::operator=(Ival&&) noexcept = default;
Ival::~Ival() = default;

long Ival::precision() const { return static_cast<long>(mpfr_get_prec(impl_->lo)); }

Ival operator+(const Ival& a, const Ival& b) {
  Ival r(a.precision());
  mpfr_add(r.impl_->lo, a.impl_->lo, b.impl_->lo, MPFR_RNDD);
  mpfr_add(r.impl_->hi, a.impl_->hi, b.impl_->hi, MPFR_RNDU);
  return r;
}

Ival operator-(const Ival& a, const Ival& b) {
  Ival r(a.precision());
  mpfr_sub(r.impl_->lo, a.impl_->lo, b.impl_->hi, MPFR_RNDD);
  mpfr_sub(r.impl_->hi, a.impl_->hi, b.impl_->lo, MPFR_RNDU);
  return r;
}

Ival operator-(const Ival& a) {
  Ival r(a.precision());
  mpfr_neg(r.impl_->lo, a.impl_->hi, MPFR_RNDD);
  mpfr_neg(r.impl_->hi, a.impl_->lo, MPFR_RNDU);
  return r;
}

Ival operator*(const Ival& a, const Ival& b) {
  require(a.nonnegative() && b.nonnegative(), "Ival multiply expects non-negative operands");
  Ival r(a.precision());
  mpfr_mul(r.impl_->lo, a.impl_->lo, b.impl_->lo, MPFR_RNDD);
  mpfr_mul(r.impl_->hi, a.impl_->hi, b.impl_->hi, MPFR_RNDU);
  return r;
}

Ival operator/(const Ival& a, const Ival& b) {
  require(a.nonnegative() && b.positive(), "Ival divide expects a >= 0 and b > 0");
  Ival r(a.precision());
  mpfr_div(r.impl_->lo, a.impl_->lo, b.impl_->hi, MPFR_RNDD);
  mpfr_div(r.impl_->hi, a.impl_->hi, b.impl_->lo, MPFR_RNDU);
  return r;
}

Ival sqrt(const Ival& a) {
  require(a.nonnegative(), "sqrt of a possibly negative interval");
  Ival r(a.precision());
  mpfr_sqrt(r.impl_->lo, a.impl_->lo, MPFR_RNDD);
  mpfr_sqrt(r.impl_->hi, a.impl_->hi, MPFR_RNDU);
  return r;
}

Ival log(const Ival& a) {
  require(a.positive(), "log of a possibly non-positive interval");
  Ival r(a.precision());
  mpfr_log(r.impl_->lo, a.impl_->lo, MPFR_RNDD);
  mpfr_log(r.impl_->hi, a.impl_->hi, MPFR_RNDU);
  return r;
}

Ival exp(const Ival& a) {
  Ival r(a.precision());
  mpfr_exp(r.impl_->lo, a.impl_->lo, MPFR_RNDD);
  mpfr_exp(r.impl_->hi, a.impl_->hi, MPFR_RNDU);
  return r;
}

Ival exp2(const Ival& a) {
  Ival r(a.precision());
  mpfr_exp2(r.impl_->lo, a.impl_->lo, MPFR_RNDD);
  mpfr_exp2(r.impl_->hi, a.impl_->hi, MPFR_RNDU);
  return r;
}

Rational Ival::lower() const {
  mpq_class q;
  mpfr_get_q(q.get_mpq_t(), impl_->lo);
  return Rational(std::move(q));
}

Rational Ival::upper() const {
  mpq_class q;
  mpfr_get_q(q.get_mpq_t(), impl_->hi);
  return Rational(std::move(q));
}

bool Ival::positive() const { return mpfr_sgn(impl_->lo) > 0; }
bool Ival::nonnegative() const { return mpfr_sgn(impl_->lo) >= 0; }

RealEnclosure operator*(const RealEnclosure& a, const Rational& c) {
  if (c.sign() >= 0) return {a.lo * c, a.hi * c};
  return {a.hi * c, a.lo * c};
}

namespace {

constexpr long kCoarsePrecision = 64;
constexpr long kGuardBits = 64;

// Smallest E with v < 2^E for positive rational v.
long upper_exponent(const Rational& v) {
  long e = static_cast<long>(mpz_sizeinbase(v.num().get_mpz_t(), 2)) -
           static_cast<long>(mpz_sizeinbase(v.den().get_mpz_t(), 2));
  while (Rational::pow2(e) <= v) ++e;
  while (v < Rational::pow2(e - 1)) --e;
  return e;
}

Rational scale2(const Rational& v, long s) { return v * Rational::pow2(s); }

}  // namespace

RealEnclosure enclose(const IvalExpr& expr, unsigned precision) {
  const Ival coarse = expr(kCoarsePrecision);
  if (!coarse.positive()) {
    const Ival fine = expr(static_cast<long>(precision) + kGuardBits);
    return {fine.lower(), fine.upper()};
  }
  const Rational coarse_lo = coarse.lower();
  const Rational coarse_hi = coarse.upper();
  if (coarse_lo == coarse_hi) return RealEnclosure::exact(coarse_lo);

  // Fixed grid 2^(E - precision - 4); one cell of outward slack on each side
  // makes successive precisions nest.
  const long E = upper_exponent(coarse_hi);
  const long s = static_cast<long>(precision) + 4 - E;
  const Rational limit = Rational::pow2(-static_cast<long>(precision));
  long working = static_cast<long>(precision) + kGuardBits;
  for (int attempt = 0; attempt < 12; ++attempt, working *= 2) {
    const Ival fine = expr(working);
    const Rational lo{BigInt(scale2(fine.lower(), s).floor() - 1)};
    const Rational hi{BigInt(scale2(fine.upper(), s).ceil() + 1)};
    RealEnclosure out{scale2(lo, -s), scale2(hi, -s)};
    if (out.width() <= limit * out.hi) return out;
  }
  fail(ErrorKind::indeterminate, "enclose: could not reach requested precision");
}

RealEnclosure sqrt_enclosure(const Rational& r, unsigned precision) {
  require(r.sign() >= 0, "sqrt of a negative rational");
  const BigInt n = exact_isqrt(r.num());
  const BigInt d = exact_isqrt(r.den());
  if (n >= 0 && d > 0) return RealEnclosure::exact(Rational(n, d));
  return enclose([&](long wp) { return sqrt(Ival(wp, r)); }, precision);
}

}  // namespace absnormal
