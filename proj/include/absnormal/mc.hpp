#pragma once

#include "absnormal/bad_sets.hpp"
#include "absnormal/enclosure.hpp"
#include "absnormal/rational.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace absnormal {

/// Sample i of stream s under seed k is a pure function of (k, s, i).
struct SamplerSpec {
  std::uint64_t seed = 0;
  std::uint64_t samples = 10000;
  std::uint64_t stream = 0;

  SamplerSpec split(std::uint64_t counter) const;

  friend bool operator==(const SamplerSpec&, const SamplerSpec&) = default;
};

inline constexpr unsigned kSampleBits = 128;

/// SplitMix64 output word `word` of sample `index`.
std::uint64_t sample_word(const SamplerSpec& spec, std::uint64_t index, unsigned word);
/// Uniform dyadic rational k / 2^bits in [0,1).
Rational sample_point(const SamplerSpec& spec, std::uint64_t index, unsigned bits = kSampleBits);
/// Resolution for sampling orbits of length N in base b: 128 bits, or
/// N ceil(log2 b) + 64 bits rounded up to whole words when that is more,
/// so every orbit point keeps 64 random bits.
unsigned orbit_resolution(unsigned b, std::uint64_t N);

enum class Verdict { consistent, inconsistent, no_reference };
const char* verdict_name(Verdict v);

struct EstimateReport {
  SamplerSpec spec;
  std::uint64_t hits = 0;
  Rational estimate;   // hits / samples
  RealEnclosure se;    // sqrt(p(1-p)/n)
  Rational band_lo;    // estimate - 4 se.hi, clamped to 0
  Rational band_hi;    // estimate + 4 se.hi, clamped to 1
  std::optional<RealEnclosure> exact;
  Verdict verdict = Verdict::no_reference;

  friend bool operator==(const EstimateReport&, const EstimateReport&) = default;
};

using Membership = std::function<bool(const Rational&)>;

/// Consistent iff the exact value (or enclosure) meets the 4 sigma band,
/// decided exactly on squares.
EstimateReport mc_measure(const Membership& region, const SamplerSpec& spec,
                          const std::optional<RealEnclosure>& exact = std::nullopt, unsigned precision = 64);

/// Does the enclosure meet [p - 4 sqrt(p(1-p)/n), p + 4 sqrt(p(1-p)/n)]?
bool within_four_sigma(const RealEnclosure& exact, const Rational& p, std::uint64_t n);

struct BoundCheck {
  unsigned lemma = 2;
  unsigned base = 2;
  unsigned k = 1;  // k for Lemma 2, m for Lemma 1
  std::uint64_t N = 0;
  Rational eps;
  RealEnclosure bound;
  bool vacuous = false;  // bound.lo >= 1
  std::uint64_t worst_a = 0;
  Rational exact;        // worst-case-over-a measure of {F >= eps N}
  EstimateReport estimate;  // MC on the worst band
  unsigned resolution = kSampleBits;
  bool exact_below = false;
  bool estimate_below = false;  // band_lo <= bound.hi
  /// "vacuous" when bound >= 1, else "pass" iff exact_below and
  /// estimate_below. MC against exact is reported in estimate.verdict.
  std::string verdict;
};

/// Lemma 1 on b-adic bands [a b^-m, (a+1) b^-m), Lemma 2 on dyadic bands of
/// depth k. The region is {x : F(0, N, band) >= eps N}; exact measures come
/// from the count distribution, the estimate from sampled orbits at
/// orbit_resolution(b, N).
BoundCheck check_bound(unsigned lemma, unsigned b, unsigned k_or_m, std::uint64_t N, const Rational& eps,
                       const SamplerSpec& spec, unsigned precision = 64, const Budget& budget = {});

/// One BoundCheck per grid point; Lemma 1 points outside its hypothesis
/// are dropped. Row i samples with spec.split(i).
std::vector<BoundCheck> lemma_grid(unsigned lemma, const std::vector<unsigned>& bases, const std::vector<unsigned>& ks,
                                   const std::vector<std::uint64_t>& Ns, const std::vector<Rational>& eps,
                                   const SamplerSpec& spec, unsigned precision = 64, const Budget& budget = {});

/// Random instances drawn from the counter-based generator.
struct DepthCase {
  Rational x;
  unsigned base;
  std::uint64_t N;
  Rational lo;
  Rational hi;
  unsigned k;
  DepthDecomposition result;
};
std::vector<DepthCase> depth_decomposition_sweep(std::uint64_t seed, std::uint64_t cases);

struct BlockCase {
  Rational x;
  unsigned base;
  std::uint64_t N;
  unsigned h;
  std::uint64_t a;
  BlockDecomposition result;
};
std::vector<BlockCase> block_decomposition_sweep(std::uint64_t seed, std::uint64_t cases);

}  // namespace absnormal
