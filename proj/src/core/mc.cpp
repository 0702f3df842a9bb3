#include "absnormal/mc.hpp"

#include "absnormal/error.hpp"

#include <algorithm>

namespace absnormal {
namespace {

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

// Numerator of a sample with `bits` bits of resolution.
BigInt sample_numerator(const SamplerSpec& spec, std::uint64_t index, unsigned bits) {
  const unsigned words = (bits + 63) / 64;
  std::vector<std::uint64_t> w(words);
  for (unsigned i = 0; i < words; ++i) w[i] = sample_word(spec, index, i);
  BigInt r;
  mpz_import(r.get_mpz_t(), words, 1, sizeof(std::uint64_t), 0, 0, w.data());
  mpz_tdiv_r_2exp(r.get_mpz_t(), r.get_mpz_t(), bits);
  return r;
}

// Hit count of the orbit of r / 2^bits over [0, N), with the orbit
// arithmetic mod 2^bits.
class OrbitCounter {
 public:
  OrbitCounter(unsigned base, std::uint64_t N, const BandSpec& band, unsigned bits)
      : base_(base), N_(N), bits_(bits) {
    auto scaled = [&](const BigInt& num) {
      BigInt s = BigInt(num << bits);
      BigInt q;
      mpz_cdiv_q(q.get_mpz_t(), s.get_mpz_t(), band.den.get_mpz_t());
      return q;
    };
    lo_ = scaled(band.lo_num);
    hi_ = scaled(band.hi_num);
  }

  std::uint64_t count(BigInt r) const {
    std::uint64_t c = 0;
    for (std::uint64_t j = 0; j < N_; ++j) {
      if (r >= lo_ && r < hi_) ++c;
      mpz_mul_ui(r.get_mpz_t(), r.get_mpz_t(), base_);
      mpz_tdiv_r_2exp(r.get_mpz_t(), r.get_mpz_t(), bits_);
    }
    return c;
  }

 private:
  unsigned base_;
  std::uint64_t N_;
  unsigned bits_;
  BigInt lo_;
  BigInt hi_;
};

void summarize(EstimateReport& rep, const std::optional<RealEnclosure>& exact, unsigned precision) {
  const Rational n(big(rep.spec.samples));
  rep.estimate = Rational(big(rep.hits)) / n;
  rep.se = sqrt_enclosure(rep.estimate * (Rational(1) - rep.estimate) / n, precision);
  rep.band_lo = max(Rational(0), rep.estimate - Rational(4) * rep.se.hi);
  rep.band_hi = min(Rational(1), rep.estimate + Rational(4) * rep.se.hi);
  rep.exact = exact;
  if (exact)
    rep.verdict = within_four_sigma(*exact, rep.estimate, rep.spec.samples) ? Verdict::consistent
                                                                            : Verdict::inconsistent;
}

}  // namespace

SamplerSpec SamplerSpec::split(std::uint64_t counter) const {
  SamplerSpec s = *this;
  s.stream = mix64(stream * kGamma + counter + 1);
  return s;
}

std::uint64_t sample_word(const SamplerSpec& spec, std::uint64_t index, unsigned word) {
  const std::uint64_t key = mix64(spec.seed ^ mix64(spec.stream + kGamma));
  return mix64(mix64(key + kGamma * (index + 1)) + kGamma * (word + 1));
}

Rational sample_point(const SamplerSpec& spec, std::uint64_t index, unsigned bits) {
  require(bits >= 1, "sample resolution must be >= 1 bit");
  return Rational(sample_numerator(spec, index, bits), pow2z(bits));
}

unsigned orbit_resolution(unsigned b, std::uint64_t N) {
  const unsigned long digit_bits = floor_log2(BigInt(b - 1)) + 1;
  const std::uint64_t need = N * digit_bits + 64;
  return static_cast<unsigned>(std::max<std::uint64_t>(kSampleBits, (need + 63) / 64 * 64));
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::consistent: return "consistent";
    case Verdict::inconsistent: return "inconsistent";
    case Verdict::no_reference: return "no-reference";
  }
  return "?";
}

bool within_four_sigma(const RealEnclosure& exact, const Rational& p, std::uint64_t n) {
  Rational d(0);
  if (exact.hi < p) d = p - exact.hi;
  if (p < exact.lo) d = exact.lo - p;
  return d * d * Rational(big(n)) <= Rational(16) * p * (Rational(1) - p);
}

EstimateReport mc_measure(const Membership& region, const SamplerSpec& spec, const std::optional<RealEnclosure>& exact,
                          unsigned precision) {
  require(spec.samples >= 100, "sample count must be >= 100");
  EstimateReport rep;
  rep.spec = spec;
  for (std::uint64_t i = 0; i < spec.samples; ++i)
    if (region(sample_point(spec, i, kSampleBits))) ++rep.hits;
  summarize(rep, exact, precision);
  return rep;
}

BoundCheck check_bound(unsigned lemma, unsigned b, unsigned k_or_m, std::uint64_t N, const Rational& eps,
                       const SamplerSpec& spec, unsigned precision, const Budget& budget) {
  require(lemma == 1 || lemma == 2, "lemma must be 1 or 2");
  require(b >= 2 && b <= 64, "base must lie in [2, 64]");
  require(N >= 1 && N <= (std::uint64_t{1} << 16), "N must lie in [1, 2^16]");
  BoundCheck out;
  out.lemma = lemma;
  out.base = b;
  out.k = k_or_m;
  out.N = N;
  out.eps = eps;
  out.bound = lemma == 1 ? lemma1_bound(b, k_or_m, N, eps, precision) : lemma2_bound(b, k_or_m, N, eps, precision);
  out.vacuous = out.bound.lo >= Rational(1);

  std::uint64_t bands = 0;
  if (lemma == 1) {
    require(k_or_m <= 12, "m must be <= 12");
    BigInt c = BigInt(1);
    for (unsigned i = 0; i < k_or_m; ++i) c *= b;
    require(c <= 4096, "b^m must be <= 4096");
    bands = c.get_ui();
  } else {
    require(k_or_m >= 1 && k_or_m <= 12, "k must lie in [1, 12]");
    bands = std::uint64_t{1} << k_or_m;
  }
  auto band_of = [&](std::uint64_t a) {
    return lemma == 1 ? BandSpec::badic(b, k_or_m, a) : BandSpec::dyadic({a, k_or_m});
  };

  const Threshold t{eps * Rational(big(N)), false};
  bool first = true;
  for (std::uint64_t a = 0; a < bands; ++a) {
    const BandSpec band = band_of(a);
    const Rational m = deviation_measure(count_distribution(b, N, band, budget), band, t);
    if (first || out.exact < m) {
      out.exact = m;
      out.worst_a = a;
      first = false;
    }
  }

  const BandSpec band = band_of(out.worst_a);
  const unsigned bits = orbit_resolution(b, N);
  const OrbitCounter counter(b, N, band, bits);
  const Rational width = band.width();
  const Rational n(big(N));
  require(spec.samples >= 100, "sample count must be >= 100");
  EstimateReport rep;
  rep.spec = spec;
  for (std::uint64_t i = 0; i < spec.samples; ++i) {
    const Rational c(big(counter.count(sample_numerator(spec, i, bits))));
    if (t.accepts(abs(c - width * n))) ++rep.hits;
  }
  summarize(rep, RealEnclosure::exact(out.exact), precision);
  out.resolution = bits;
  out.estimate = rep;

  out.exact_below = out.exact <= out.bound.hi;
  out.estimate_below = rep.band_lo <= out.bound.hi;
  if (out.vacuous)
    out.verdict = "vacuous";
  else
    out.verdict = out.exact_below && out.estimate_below ? "pass" : "fail";
  return out;
}

std::vector<BoundCheck> lemma_grid(unsigned lemma, const std::vector<unsigned>& bases, const std::vector<unsigned>& ks,
                                   const std::vector<std::uint64_t>& Ns, const std::vector<Rational>& eps,
                                   const SamplerSpec& spec, unsigned precision, const Budget& budget) {
  std::vector<BoundCheck> rows;
  std::uint64_t index = 0;
  for (unsigned b : bases)
    for (unsigned k : ks)
      for (std::uint64_t N : Ns)
        for (const Rational& e : eps) {
          const SamplerSpec row_spec = spec.split(index++);
          if (lemma == 1) {
            try {
              lemma1_bound(b, k, N, e, 16);
            } catch (const Error& err) {
              if (err.kind() == ErrorKind::invalid_argument) continue;
              throw;
            }
          }
          rows.push_back(check_bound(lemma, b, k, N, e, row_spec, precision, budget));
        }
  return rows;
}

namespace {

// Draws from one stream of the sampler, one word per call.
class Draws {
 public:
  Draws(std::uint64_t seed, std::uint64_t stream) : spec_{seed, 100, stream} {}

  std::uint64_t below(std::uint64_t n) { return sample_word(spec_, i_++, 0) % n; }
  std::uint64_t between(std::uint64_t lo, std::uint64_t hi) { return lo + below(hi - lo + 1); }
  Rational unit(std::uint64_t max_den) {
    const std::uint64_t q = between(1, max_den);
    return Rational(big(below(q)), big(q));
  }

 private:
  SamplerSpec spec_;
  std::uint64_t i_ = 0;
};

}  // namespace

std::vector<DepthCase> depth_decomposition_sweep(std::uint64_t seed, std::uint64_t cases) {
  std::vector<DepthCase> out;
  for (std::uint64_t c = 0; c < cases; ++c) {
    Draws d(seed, c);
    DepthCase dc;
    dc.x = d.unit(97);
    dc.base = static_cast<unsigned>(d.between(2, 3));
    dc.N = d.between(1, 32);
    dc.k = static_cast<unsigned>(d.between(1, 3));
    Rational u = d.unit(16), v = d.unit(16);
    if (v < u) std::swap(u, v);
    if (u == v) v = Rational(1);
    dc.lo = u;
    dc.hi = v;
    dc.result = dyadic_depth_decomposition_check(dc.x, dc.base, dc.N, dc.lo, dc.hi, dc.k);
    out.push_back(std::move(dc));
  }
  return out;
}

std::vector<BlockCase> block_decomposition_sweep(std::uint64_t seed, std::uint64_t cases) {
  std::vector<BlockCase> out;
  for (std::uint64_t c = 0; c < cases; ++c) {
    Draws d(seed, c);
    BlockCase bc;
    bc.x = d.unit(97);
    bc.base = static_cast<unsigned>(d.between(2, 3));
    bc.N = d.between(2, 24);
    bc.h = static_cast<unsigned>(d.between(1, 3));
    bc.a = d.below(std::uint64_t{1} << bc.h);
    bc.result = block_decomposition_check(bc.x, bc.base, bc.N, bc.h, bc.a);
    out.push_back(std::move(bc));
  }
  return out;
}

}  // namespace absnormal
