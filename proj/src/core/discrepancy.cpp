#include "absnormal/discrepancy.hpp"

#include "absnormal/error.hpp"

#include <algorithm>

namespace absnormal {
namespace {

void require_points(const std::vector<Rational>& pts) {
  require(!pts.empty(), "discrepancy needs at least one point");
  for (const auto& p : pts) require(p.sign() >= 0 && p < Rational(1), "points must lie in [0,1)");
}

Rational half() { return Rational(BigInt(1), BigInt(2)); }

}  // namespace

std::vector<Rational> orbit_points(const Rational& x, unsigned b, std::uint64_t N) {
  require(b >= 2, "base must be >= 2");
  require(N >= 1, "N must be >= 1");
  require(x.sign() >= 0 && x < Rational(1), "orbit start must lie in [0,1)");
  const BigInt q = x.den();
  BigInt r = x.num();
  std::vector<Rational> out;
  out.reserve(N);
  for (std::uint64_t j = 0; j < N; ++j) {
    out.emplace_back(r, q);
    r = (r * b) % q;
  }
  return out;
}

// Sorted x_1 <= ... <= x_N:
//   D  = max_j (j/N - x_j) + max_i (x_i - (i-1)/N)
//   D* = max_i max(i/N - x_i, x_i - (i-1)/N)
Rational extreme_discrepancy(std::vector<Rational> points) {
  require_points(points);
  std::sort(points.begin(), points.end());
  const Rational n(big(points.size()));
  Rational above = Rational(1) / n - points[0];
  Rational below = points[0];
  for (std::size_t i = 1; i < points.size(); ++i) {
    const Rational idx(big(i));
    above = max(above, (idx + Rational(1)) / n - points[i]);
    below = max(below, points[i] - idx / n);
  }
  return above + below;
}

Rational star_discrepancy(std::vector<Rational> points) {
  require_points(points);
  std::sort(points.begin(), points.end());
  const Rational n(big(points.size()));
  Rational best(0);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Rational idx(big(i));
    best = max(best, max((idx + Rational(1)) / n - points[i], points[i] - idx / n));
  }
  return best;
}

RealEnclosure normality_ratio(const Rational& discrepancy, std::uint64_t N, unsigned precision) {
  require(N >= 16, "normality ratio needs N >= 16");
  require(discrepancy.sign() >= 0, "discrepancy must be non-negative");
  const Rational n(big(N));
  return enclose([&](long wp) { return Ival(wp, discrepancy) * sqrt(Ival(wp, n)) / sqrt(log(log(Ival(wp, n)))); },
                 precision);
}

RealEnclosure normality_ratio(const Rational& x, unsigned b, std::uint64_t N, unsigned precision) {
  require(N >= 16, "normality ratio needs N >= 16");
  return normality_ratio(extreme_discrepancy(orbit_points(x, b, N)), N, precision);
}

RealEnclosure philipp_constant(unsigned b, unsigned precision) {
  require(b >= 2, "base must be >= 2");
  const BigInt root = exact_isqrt(BigInt(b));
  if (root >= 0) return RealEnclosure::exact(Rational(166) + Rational(664) / Rational(BigInt(root - 1)));
  return enclose(
      [&](long wp) {
        return Ival(wp, Rational(166)) +
               Ival(wp, Rational(664)) / (sqrt(Ival(wp, Rational(long(b)))) - Ival(wp, Rational(1)));
      },
      precision);
}

RealEnclosure fukuyama_constant(unsigned theta, unsigned precision) {
  require(theta >= 2, "theta must be >= 2");
  const Rational t(long{theta});
  Rational radicand;
  Rational outside = half();
  if (theta == 2) {
    radicand = Rational(84);
    outside = Rational(BigInt(1), BigInt(9));
  } else if (theta % 2 == 1) {
    radicand = Rational(2) * (t + Rational(1)) / (t - Rational(1));
  } else {
    const Rational tm1 = t - Rational(1);
    radicand = Rational(2) * (t + Rational(1)) * t * (t - Rational(2)) / (tm1 * tm1 * tm1);
  }
  const RealEnclosure root = sqrt_enclosure(radicand, precision + 1);
  return {root.lo * outside, root.hi * outside};
}

DiscrepancyReport discrepancy_report(const Rational& x, unsigned b, std::uint64_t N, unsigned precision) {
  require(N <= (std::uint64_t{1} << 22), "N must be <= 2^22");
  DiscrepancyReport rep;
  rep.base = b;
  rep.N = N;
  rep.x = x;
  const auto pts = orbit_points(x, b, N);
  rep.extreme = extreme_discrepancy(pts);
  rep.star = star_discrepancy(pts);
  rep.philipp = philipp_constant(b, precision);
  rep.limit = rep.philipp * Rational(3);
  if (N >= 16) {
    rep.has_ratio = true;
    rep.ratio = normality_ratio(rep.extreme, N, precision);
    for (std::uint64_t m = 16; m <= N; m *= 2) {
      const std::vector<Rational> prefix(pts.begin(), pts.begin() + static_cast<std::ptrdiff_t>(m));
      RatioRow row;
      row.N = m;
      row.discrepancy = extreme_discrepancy(prefix);
      row.ratio = normality_ratio(row.discrepancy, m, precision);
      rep.grid.push_back(std::move(row));
    }
    if (rep.grid.back().N != N) rep.grid.push_back({N, rep.extreme, rep.ratio});
    rep.running_max = rep.grid.front().ratio;
    for (const auto& row : rep.grid) {
      rep.running_max.lo = max(rep.running_max.lo, row.ratio.lo);
      rep.running_max.hi = max(rep.running_max.hi, row.ratio.hi);
    }
    rep.running_max_below_limit = rep.running_max.hi < rep.limit.lo;
  }
  return rep;
}

}  // namespace absnormal
