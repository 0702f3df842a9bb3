#pragma once

#include "absnormal/enclosure.hpp"
#include "absnormal/interval_set.hpp"
#include "absnormal/orbit.hpp"
#include "absnormal/schedule.hpp"

#include <cstdint>
#include <map>
#include <tuple>
#include <vector>

namespace absnormal {

/// inner is a subset of the true set, which is a subset of outer.
struct SetEnclosure {
  IntervalSet inner;
  IntervalSet outer;
  /// Number of component sets with a non-empty outer part.
  std::uint64_t components = 0;
};

SetEnclosure unite(const SetEnclosure& a, const SetEnclosure& b);

/// floor(log_4 N) + 1.
std::uint64_t T(const BigInt& N);

/// 2(1+2 delta)(1/2 + 2/(sqrt b - 1)) sqrt(N log log N), for N >= 3.
RealEnclosure phi(const BigInt& N, unsigned b, const Rational& delta, unsigned precision);
/// The rational part 2(1+2 delta) and the enclosed factor 1/2 + 2/(sqrt b - 1).
RealEnclosure phi_coefficient(unsigned b, const Rational& delta, unsigned precision);

struct GIndex {
  unsigned b = 2;
  std::uint64_t n = 1;
  std::uint64_t a = 0;
  std::uint64_t h = 1;
};

struct HIndex {
  unsigned b = 2;
  std::uint64_t n = 1;
  std::uint64_t a = 0;
  std::uint64_t h = 1;
  std::uint64_t l = 1;
  std::uint64_t m = 1;
};

/// Band depth: h + 1 below T(2^n), T(2^n) at h = T(2^n).
unsigned g_depth(std::uint64_t n, std::uint64_t h);
/// Band depth: h + 1 below T(2^(l-1)), h from there on.
unsigned h_depth(std::uint64_t h, std::uint64_t l);
Window g_window(const GIndex& idx);
Window h_window(const HIndex& idx);
BandSpec g_band(const GIndex& idx);
BandSpec h_band(const HIndex& idx);
/// Smallest l in the H union (ceil(n/2)).
std::uint64_t h_lmin(std::uint64_t n);

/// 2^(-h/8) phi(2^n) * phi_scale.
RealEnclosure g_threshold(const GIndex& idx, const ParamSchedule& sched, unsigned precision);
/// 2^(-h/8) 2^((l-n-3)/6) phi(2^n) * phi_scale.
RealEnclosure h_threshold(const HIndex& idx, const ParamSchedule& sched, unsigned precision);

/// Regions {F >= lo} (outer) and {F >= hi} (inner) of an enclosed threshold.
/// The threshold is refined (doubling precision, at most `max_rounds`
/// times) until no attainable value of F lies inside it.
SetEnclosure threshold_region(const Window& w, const BandSpec& band, const IvalExpr& threshold,
                              unsigned precision, const Budget& budget, unsigned max_rounds = 8);

void validate(const GIndex& idx);
void validate(const HIndex& idx);

SetEnclosure g_set(const GIndex& idx, const ParamSchedule& sched, unsigned precision, const Budget& budget = {});
SetEnclosure h_set(const HIndex& idx, const ParamSchedule& sched, unsigned precision, const Budget& budget = {});
SetEnclosure g_union(unsigned b, std::uint64_t n, const ParamSchedule& sched, unsigned precision,
                     const Budget& budget = {});
SetEnclosure h_union(unsigned b, std::uint64_t n, const ParamSchedule& sched, unsigned precision,
                     const Budget& budget = {});

/// Memo of G_{b,m} u H_{b,m} per (b, m, precision).
class LevelCache {
 public:
  const SetEnclosure& level(unsigned b, std::uint64_t m, const ParamSchedule& sched, unsigned precision,
                            const Budget& budget);

 private:
  std::map<std::tuple<unsigned, std::uint64_t, unsigned>, SetEnclosure> levels_;
};

/// G_{b,m} u H_{b,m}.
SetEnclosure level_set(unsigned b, std::uint64_t m, const ParamSchedule& sched, unsigned precision,
                       const Budget& budget = {});

/// Union over the schedule's levels (b, m) for Delta_n. Paper levels beyond
/// the budget fail with ErrorKind::budget.
SetEnclosure delta_n(std::uint64_t n, const ParamSchedule& sched, unsigned precision, const Budget& budget = {},
                     LevelCache* cache = nullptr);

/// Upper bound on mu(Delta - Delta_n).
///
/// Paper: sum_{b<=b_n} 1/(max(n+1, z_b) - 1) + eta 2^(-b_n). Toy: the sum of
/// outer measures of the universe levels left out of Delta_n.
Rational r_tail_upper(std::uint64_t n, const ParamSchedule& sched, unsigned precision = 64,
                      const Budget& budget = {}, LevelCache* cache = nullptr);

/// 2 b^(2m-2) m e^(-eps^2 N b^m/(6m)), under 6/floor(N/m) <= eps <= b^-m.
RealEnclosure lemma1_bound(unsigned b, unsigned m, std::uint64_t N, const Rational& eps, unsigned precision);
/// 9 2^(2(k+2)) (k+2) e^(-eps^2 N b^(k+2)/(6(k+2))).
RealEnclosure lemma2_bound(unsigned b, unsigned k, std::uint64_t N, const Rational& eps, unsigned precision);

/// sum_{n >= n0} (n^(-1-4 delta) + 2 n^(-1-3 delta)) bounded by integrals,
/// against eta.
struct TailSumCheck {
  RealEnclosure bound;
  bool holds = false;
};
TailSumCheck lemma5_tail_check(const ParamSchedule& sched, std::uint64_t n0, unsigned precision);

struct DepthDecomposition {
  Rational lhs;
  Rational rhs;
  std::vector<Rational> level_max;  // max_a F at depth 1..k
  bool holds = false;
};
/// |F(0,N,lo,hi)| <= N/2^(k-1) + sum_{m=1..k} max_a |F(0,N,a 2^-m,(a+1) 2^-m)|.
DepthDecomposition dyadic_depth_decomposition_check(const Rational& x, unsigned b, std::uint64_t N,
                                                    const Rational& lo, const Rational& hi, unsigned k);

struct BlockTerm {
  std::uint64_t l;
  std::uint64_t m;
  Rational f;
};
struct BlockDecomposition {
  std::uint64_t n = 0;
  bool odd_n = false;
  Rational lhs;
  Rational head;  // F(0, 2^n)
  std::vector<BlockTerm> terms;
  Rational rhs_minus_cuberoot;
  bool holds = false;
};
/// Lemma 4 for band (a 2^-h, (a+1) 2^-h) with m_l maximizing each block.
BlockDecomposition block_decomposition_check(const Rational& x, unsigned b, std::uint64_t N, unsigned h,
                                             std::uint64_t a);

}  // namespace absnormal
