#include "absnormal/bad_sets.hpp"

#include "absnormal/error.hpp"

#include <algorithm>

namespace absnormal {
namespace {

Ival phi_ival(long wp, const BigInt& N, unsigned b, const Rational& delta) {
  const Ival coef(wp, Rational(2) * (Rational(1) + Rational(2) * delta));
  const Ival one(wp, Rational(1));
  const Ival ct = Ival(wp, Rational(BigInt(1), BigInt(2))) + Ival(wp, Rational(2)) / (sqrt(Ival(wp, Rational(long(b)))) - one);
  const Ival n(wp, Rational(N));
  return coef * ct * sqrt(n * log(log(n)));
}

void require_phi_domain(const BigInt& N) {
  require(N >= 3, "phi(N) needs log log N > 0, i.e. N >= 3 (got N=" + N.get_str() + ")");
}

// Guard for windows of length 2^n or offsets 2^n + m 2^l.
void require_small_level(std::uint64_t n, const char* what) {
  if (n >= 62)
    fail(ErrorKind::budget, std::string(what) + " at level n=" + std::to_string(n) +
                                " needs orbit windows beyond 2^62 and more than 2^64 sweep events");
}

// Does some |c - wN|, 0 <= c <= N, fall inside [lo, hi]?
bool attainable_inside(const BandSpec& band, std::uint64_t N, const RealEnclosure& t) {
  const Rational expected = band.width() * Rational(big(N));
  const Rational top(big(N));
  auto hits = [&](const Rational& from, const Rational& to) {
    const Rational a = max(from, Rational(0));
    const Rational b = min(to, top);
    if (b < a) return false;
    return a.ceil() <= b.floor();
  };
  return hits(expected + t.lo, expected + t.hi) || hits(expected - t.hi, expected - t.lo);
}

std::vector<BigInt> orbit_residues(const Rational& x, unsigned b, std::uint64_t N) {
  require(x.sign() >= 0 && x < Rational(1), "orbit start must lie in [0,1)");
  std::vector<BigInt> out;
  out.reserve(N);
  const BigInt q = x.den();
  BigInt r = x.num();
  for (std::uint64_t j = 0; j < N; ++j) {
    out.push_back(r);
    r = (r * b) % q;
  }
  return out;
}

}  // namespace

SetEnclosure unite(const SetEnclosure& a, const SetEnclosure& b) {
  return {unite(a.inner, b.inner), unite(a.outer, b.outer), a.components + b.components};
}

std::uint64_t T(const BigInt& N) {
  require(N >= 1, "T(N) needs N >= 1");
  return floor_log2(N) / 2 + 1;
}

RealEnclosure phi_coefficient(unsigned b, const Rational& delta, unsigned precision) {
  require(b >= 2, "base must be >= 2");
  require(delta.sign() > 0, "delta must be positive");
  const Rational outer = Rational(2) * (Rational(1) + Rational(2) * delta);
  const BigInt root = exact_isqrt(BigInt(b));
  if (root >= 0)
    return RealEnclosure::exact(outer * (Rational(BigInt(1), BigInt(2)) + Rational(2) / Rational(BigInt(root - 1))));
  return enclose(
      [&](long wp) {
        const Ival one(wp, Rational(1));
        return Ival(wp, outer) *
               (Ival(wp, Rational(BigInt(1), BigInt(2))) + Ival(wp, Rational(2)) / (sqrt(Ival(wp, Rational(long(b)))) - one));
      },
      precision);
}

RealEnclosure phi(const BigInt& N, unsigned b, const Rational& delta, unsigned precision) {
  require(b >= 2, "base must be >= 2");
  require(delta.sign() > 0, "delta must be positive");
  require_phi_domain(N);
  return enclose([&](long wp) { return phi_ival(wp, N, b, delta); }, precision);
}

unsigned g_depth(std::uint64_t n, std::uint64_t h) {
  const std::uint64_t t = T(pow2z(n));
  return static_cast<unsigned>(h < t ? h + 1 : t);
}

unsigned h_depth(std::uint64_t h, std::uint64_t l) {
  const std::uint64_t t = T(pow2z(l - 1));
  return static_cast<unsigned>(h < t ? h + 1 : h);
}

std::uint64_t h_lmin(std::uint64_t n) { return (n + 1) / 2; }

void validate(const GIndex& idx) {
  require(idx.b >= 2, "base must be >= 2 (got b=" + std::to_string(idx.b) + ")");
  require(idx.n >= 1, "level n must be >= 1");
  require_small_level(idx.n, "G");
  const std::uint64_t t = T(pow2z(idx.n));
  require(idx.h >= 1 && idx.h <= t, "h must lie in [1, T(2^n)]");
  require(idx.a < (std::uint64_t{1} << idx.h), "a must lie in [0, 2^h)");
}

void validate(const HIndex& idx) {
  require(idx.b >= 2, "base must be >= 2 (got b=" + std::to_string(idx.b) + ")");
  require(idx.n >= 1, "level n must be >= 1");
  require_small_level(idx.n, "H");
  const std::uint64_t t = T(pow2z(idx.n));
  require(idx.h >= 1 && idx.h <= t, "h must lie in [1, T(2^n)]");
  require(idx.a < (std::uint64_t{1} << idx.h), "a must lie in [0, 2^h)");
  require(idx.l >= h_lmin(idx.n) && idx.l <= idx.n, "l must lie in [ceil(n/2), n]");
  require(idx.m >= 1 && idx.m <= (std::uint64_t{1} << (idx.n - idx.l)), "m must lie in [1, 2^(n-l)]");
}

Window g_window(const GIndex& idx) { return {idx.b, 0, std::uint64_t{1} << idx.n}; }

Window h_window(const HIndex& idx) {
  return {idx.b, (std::uint64_t{1} << idx.n) + idx.m * (std::uint64_t{1} << idx.l), std::uint64_t{1} << (idx.l - 1)};
}

BandSpec g_band(const GIndex& idx) { return BandSpec::dyadic({idx.a, g_depth(idx.n, idx.h)}); }

BandSpec h_band(const HIndex& idx) { return BandSpec::dyadic({idx.a, h_depth(idx.h, idx.l)}); }

namespace {

IvalExpr g_threshold_expr(const GIndex& idx, const ParamSchedule& sched) {
  const BigInt N = pow2z(idx.n);
  const Rational e(BigInt(-static_cast<long>(idx.h)), BigInt(8));
  return [=, delta = sched.delta, scale = sched.phi_scale](long wp) {
    return exp2(Ival(wp, e)) * phi_ival(wp, N, idx.b, delta) * Ival(wp, scale);
  };
}

IvalExpr h_threshold_expr(const HIndex& idx, const ParamSchedule& sched) {
  const BigInt N = pow2z(idx.n);
  const Rational e = Rational(BigInt(-static_cast<long>(idx.h)), BigInt(8)) +
                     Rational(BigInt(static_cast<long>(idx.l) - static_cast<long>(idx.n) - 3), BigInt(6));
  return [=, delta = sched.delta, scale = sched.phi_scale](long wp) {
    return exp2(Ival(wp, e)) * phi_ival(wp, N, idx.b, delta) * Ival(wp, scale);
  };
}

}  // namespace

RealEnclosure g_threshold(const GIndex& idx, const ParamSchedule& sched, unsigned precision) {
  validate(idx);
  require_phi_domain(pow2z(idx.n));
  return enclose(g_threshold_expr(idx, sched), precision);
}

RealEnclosure h_threshold(const HIndex& idx, const ParamSchedule& sched, unsigned precision) {
  validate(idx);
  require_phi_domain(pow2z(idx.n));
  return enclose(h_threshold_expr(idx, sched), precision);
}

SetEnclosure threshold_region(const Window& w, const BandSpec& band, const IvalExpr& threshold, unsigned precision,
                              const Budget& budget, unsigned max_rounds) {
  validate(w);
  validate(band);
  unsigned p = precision;
  RealEnclosure t = enclose(threshold, p);
  for (unsigned round = 0; round < max_rounds && !t.is_exact() && attainable_inside(band, w.length, t); ++round) {
    p *= 2;
    t = enclose(threshold, p);
  }
  SetEnclosure out;
  if (t.is_exact()) {
    out.inner = out.outer = deviation_region(w, band, max(t.lo, Rational(0)), budget);
  } else {
    const Threshold ts[2] = {{max(t.lo, Rational(0)), false}, {max(t.hi, Rational(0)), false}};
    auto regions = deviation_regions(w, band, ts, budget);
    out.outer = std::move(regions[0]);
    out.inner = std::move(regions[1]);
  }
  out.components = out.outer.empty() ? 0 : 1;
  return out;
}

SetEnclosure g_set(const GIndex& idx, const ParamSchedule& sched, unsigned precision, const Budget& budget) {
  validate(idx);
  require_phi_domain(pow2z(idx.n));
  return threshold_region(g_window(idx), g_band(idx), g_threshold_expr(idx, sched), precision, budget);
}

SetEnclosure h_set(const HIndex& idx, const ParamSchedule& sched, unsigned precision, const Budget& budget) {
  validate(idx);
  require_phi_domain(pow2z(idx.n));
  return threshold_region(h_window(idx), h_band(idx), h_threshold_expr(idx, sched), precision, budget);
}

namespace {

SetEnclosure unite_parts(std::vector<IntervalSet>& inners, std::vector<IntervalSet>& outers, std::uint64_t comps) {
  SetEnclosure out;
  out.inner = unite_all(inners);
  out.outer = unite_all(outers);
  out.components = comps;
  return out;
}

}  // namespace

SetEnclosure g_union(unsigned b, std::uint64_t n, const ParamSchedule& sched, unsigned precision,
                     const Budget& budget) {
  require(b >= 2, "base must be >= 2 (got b=" + std::to_string(b) + ")");
  require(n >= 1, "level n must be >= 1");
  require_small_level(n, "G");
  std::vector<IntervalSet> inners, outers;
  std::uint64_t comps = 0;
  const std::uint64_t t = T(pow2z(n));
  for (std::uint64_t h = 1; h <= t; ++h)
    for (std::uint64_t a = 0; a < (std::uint64_t{1} << h); ++a) {
      auto s = g_set({b, n, a, h}, sched, precision, budget);
      comps += s.components;
      inners.push_back(std::move(s.inner));
      outers.push_back(std::move(s.outer));
    }
  return unite_parts(inners, outers, comps);
}

SetEnclosure h_union(unsigned b, std::uint64_t n, const ParamSchedule& sched, unsigned precision,
                     const Budget& budget) {
  require(b >= 2, "base must be >= 2 (got b=" + std::to_string(b) + ")");
  require(n >= 1, "level n must be >= 1");
  require_small_level(n, "H");
  std::vector<IntervalSet> inners, outers;
  std::uint64_t comps = 0;
  const std::uint64_t t = T(pow2z(n));
  for (std::uint64_t l = h_lmin(n); l <= n; ++l)
    for (std::uint64_t m = 1; m <= (std::uint64_t{1} << (n - l)); ++m)
      for (std::uint64_t h = 1; h <= t; ++h)
        for (std::uint64_t a = 0; a < (std::uint64_t{1} << h); ++a) {
          auto s = h_set({b, n, a, h, l, m}, sched, precision, budget);
          comps += s.components;
          inners.push_back(std::move(s.inner));
          outers.push_back(std::move(s.outer));
        }
  return unite_parts(inners, outers, comps);
}

SetEnclosure level_set(unsigned b, std::uint64_t m, const ParamSchedule& sched, unsigned precision,
                       const Budget& budget) {
  return unite(g_union(b, m, sched, precision, budget), h_union(b, m, sched, precision, budget));
}

const SetEnclosure& LevelCache::level(unsigned b, std::uint64_t m, const ParamSchedule& sched, unsigned precision,
                                      const Budget& budget) {
  const auto key = std::make_tuple(b, m, precision);
  auto it = levels_.find(key);
  if (it == levels_.end()) it = levels_.emplace(key, level_set(b, m, sched, precision, budget)).first;
  return it->second;
}

SetEnclosure delta_n(std::uint64_t n, const ParamSchedule& sched, unsigned precision, const Budget& budget,
                     LevelCache* cache) {
  require(n >= 1, "delta_n needs n >= 1");
  sched.validate();
  SetEnclosure out;
  for (const auto& [b, m] : sched.levels(n)) {
    if (cache) {
      out = unite(out, cache->level(b, m, sched, precision, budget));
    } else {
      out = unite(out, level_set(b, m, sched, precision, budget));
    }
  }
  return out;
}

Rational r_tail_upper(std::uint64_t n, const ParamSchedule& sched, unsigned precision, const Budget& budget,
                      LevelCache* cache) {
  require(n >= 1, "r_tail_upper needs n >= 1");
  sched.validate();
  Rational sum(0);
  if (sched.toy) {
    for (const auto& [b, m] : sched.excluded_levels(n)) {
      if (cache) {
        sum += cache->level(b, m, sched, precision, budget).outer.measure();
      } else {
        sum += level_set(b, m, sched, precision, budget).outer.measure();
      }
    }
    return sum;
  }
  const BigInt nn = big(n);
  const unsigned cap = bcap(nn);
  for (unsigned b = 2; b <= cap; ++b) {
    const BigInt K = std::max(BigInt(nn + 1), sched.z_of(b));
    sum += Rational(BigInt(1), BigInt(K - 1));
  }
  sum += sched.eta * Rational::pow2(-static_cast<long>(cap));
  return sum;
}

RealEnclosure lemma1_bound(unsigned b, unsigned m, std::uint64_t N, const Rational& eps, unsigned precision) {
  require(b >= 2, "base must be >= 2");
  require(m >= 1 && N >= 1, "lemma 1 needs m >= 1 and N >= 1");
  const std::uint64_t q = N / m;
  require(q >= 1, "lemma 1 hypothesis 6/floor(N/m) <= eps fails: floor(N/m) = 0");
  const Rational lower(BigInt(6), big(q));
  require(lower <= eps, "lemma 1 hypothesis 6/floor(N/m) <= eps fails: 6/floor(N/m) = " + lower.str() +
                            " > eps = " + eps.str());
  const BigInt bm = ipow(BigInt(b), m);
  require(eps <= Rational(BigInt(1), bm),
          "lemma 1 hypothesis eps <= b^-m fails: eps = " + eps.str() + " > 1/" + bm.get_str());
  const Rational coef(BigInt(2 * ipow(BigInt(b), 2 * m - 2) * m));
  const Rational expo = -(eps * eps * Rational(big(N)) * Rational(bm) / Rational(long(6 * m)));
  return enclose([&](long wp) { return Ival(wp, coef) * exp(Ival(wp, expo)); }, precision);
}

RealEnclosure lemma2_bound(unsigned b, unsigned k, std::uint64_t N, const Rational& eps, unsigned precision) {
  require(b >= 2, "base must be >= 2");
  require(k >= 1 && N >= 1, "lemma 2 needs k >= 1 and N >= 1");
  require(eps.sign() > 0, "lemma 2 needs eps > 0");
  const Rational coef(BigInt(9 * pow2z(2 * (k + 2)) * (k + 2)));
  const Rational expo =
      -(eps * eps * Rational(big(N)) * Rational(ipow(BigInt(b), k + 2)) / Rational(long(6 * (k + 2))));
  return enclose([&](long wp) { return Ival(wp, coef) * exp(Ival(wp, expo)); }, precision);
}

TailSumCheck lemma5_tail_check(const ParamSchedule& sched, std::uint64_t n0, unsigned precision) {
  require(n0 >= 2, "lemma 5 tail check needs n0 >= 2");
  const Rational d = sched.delta;
  const Rational n(big(n0));
  // sum_{n>=n0} n^-s <= n0^-s + n0^(1-s)/(s-1).
  auto tail = [&](long wp, const Rational& s) {
    const Ival ln = log(Ival(wp, n));
    const Ival head = exp(-(Ival(wp, s) * ln));
    const Ival rest = exp(-(Ival(wp, s - Rational(1)) * ln)) / Ival(wp, s - Rational(1));
    return head + rest;
  };
  TailSumCheck out;
  out.bound = enclose(
      [&](long wp) {
        return tail(wp, Rational(1) + Rational(4) * d) + Ival(wp, Rational(2)) * tail(wp, Rational(1) + Rational(3) * d);
      },
      precision);
  out.holds = out.bound.hi < sched.eta;
  return out;
}

DepthDecomposition dyadic_depth_decomposition_check(const Rational& x, unsigned b, std::uint64_t N,
                                                    const Rational& lo, const Rational& hi, unsigned k) {
  require(b >= 2, "base must be >= 2");
  require(N >= 1 && N <= (std::uint64_t{1} << 20), "N must lie in [1, 2^20]");
  require(k >= 1 && k <= 20, "depth k must lie in [1, 20]");
  require(lo.sign() >= 0 && lo < hi && hi <= Rational(1), "band must satisfy 0 <= lo < hi <= 1");
  const auto res = orbit_residues(x, b, N);
  const BigInt q = x.den();
  const Rational n(big(N));

  std::uint64_t inside = 0;
  for (const auto& r : res) {
    const Rational p(r, q);
    if (lo <= p && p < hi) ++inside;
  }
  DepthDecomposition out;
  out.lhs = abs(Rational(big(inside)) - (hi - lo) * n);
  out.rhs = n * Rational::pow2(1 - static_cast<long>(k));
  for (unsigned m = 1; m <= k; ++m) {
    std::vector<std::uint64_t> counts(std::size_t{1} << m);
    for (const auto& r : res) {
      const BigInt cell = (r << m) / q;  // floor(2^m r / q)
      ++counts[cell.get_ui()];
    }
    const Rational expected = n * Rational::pow2(-static_cast<long>(m));
    Rational best(0);
    for (auto c : counts) best = max(best, abs(Rational(big(c)) - expected));
    out.level_max.push_back(best);
    out.rhs += best;
  }
  out.holds = out.lhs <= out.rhs;
  return out;
}

BlockDecomposition block_decomposition_check(const Rational& x, unsigned b, std::uint64_t N, unsigned h,
                                             std::uint64_t a) {
  require(b >= 2, "base must be >= 2");
  require(N >= 2 && N <= (std::uint64_t{1} << 16), "N must lie in [2, 2^16]");
  require(h >= 1 && h <= 62, "h must lie in [1, 62]");
  require(a < (std::uint64_t{1} << h), "a must lie in [0, 2^h)");
  const BandSpec band = BandSpec::dyadic({a, h});
  BlockDecomposition out;
  out.n = floor_log2(big(N));
  out.odd_n = out.n % 2 == 1;
  out.lhs = f_value(x, {b, 0, N}, band);
  out.head = f_value(x, {b, 0, std::uint64_t{1} << out.n}, band);
  out.rhs_minus_cuberoot = out.head;
  for (std::uint64_t l = h_lmin(out.n); l <= out.n; ++l) {
    BlockTerm best{l, 0, Rational(-1)};
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << (out.n - l)); ++m) {
      const Rational f = f_value(x, {b, (std::uint64_t{1} << out.n) + m * (std::uint64_t{1} << l), std::uint64_t{1} << (l - 1)}, band);
      if (best.f < f) best = {l, m, f};
    }
    out.rhs_minus_cuberoot += best.f;
    out.terms.push_back(std::move(best));
  }
  const Rational gap = out.lhs - out.rhs_minus_cuberoot;
  out.holds = gap.sign() <= 0 || gap * gap * gap <= Rational(big(N));
  return out;
}

}  // namespace absnormal
