#include "absnormal/orbit.hpp"

#include "absnormal/error.hpp"

#include <algorithm>
#include <optional>
#include <queue>

namespace absnormal {

namespace {

using u128 = unsigned __int128;

BigInt lcm(const BigInt& a, const BigInt& b) {
  BigInt r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

std::string budget_message(const char* what, const BigInt& need, const Budget& budget) {
  return std::string(what) + " needs " + need.get_str() + " events, budget max_events=" +
         std::to_string(budget.max_events);
}

void check_budget(const char* what, const BigInt& need, const Budget& budget) {
  if (need > big(budget.max_events))
    fail(ErrorKind::budget, budget_message(what, need, budget));
}

// Any window reaching index 64 has at least 2^64 events; refuse before
// forming b^(M+N).
void check_window_size(const char* what, const Window& w, const Budget& budget) {
  if (w.offset >= 64 || w.length > 64 - w.offset)
    fail(ErrorKind::budget, std::string(what) + " over orbit indices [" + std::to_string(w.offset) + ", " +
                                (w.offset > UINT64_MAX - w.length ? std::string("inf")
                                                                  : std::to_string(w.offset + w.length)) +
                                ") needs more than 2^64 events, budget max_events=" +
                                std::to_string(budget.max_events));
}

std::uint64_t to_u64(const BigInt& v) {
  require(v >= 0 && mpz_sizeinbase(v.get_mpz_t(), 2) <= 64, "value does not fit 64 bits");
  return mpz_get_ui(v.get_mpz_t());
}

// Integer arithmetic for sweep positions: a 128-bit fast path and a GMP
// fallback share one sweep implementation.
template <class Int>
struct Num;

template <>
struct Num<u128> {
  static u128 from(const BigInt& v) {
    BigInt hi = v >> 64;
    BigInt lo = v - (hi << 64);
    return (static_cast<u128>(mpz_get_ui(hi.get_mpz_t())) << 64) | mpz_get_ui(lo.get_mpz_t());
  }
  static BigInt to_big(u128 v) {
    BigInt hi(static_cast<unsigned long>(v >> 64));
    BigInt lo(static_cast<unsigned long>(v));
    return (hi << 64) + lo;
  }
};

template <>
struct Num<BigInt> {
  static BigInt from(const BigInt& v) { return v; }
  static BigInt to_big(const BigInt& v) { return v; }
};

// Breakpoint stream for one orbit index j: "on" at (m den + lo) s and "off"
// at (m den + hi) s for m = 0 .. b^j - 1, where s = b^(J - j).
template <class Int>
struct Stream {
  Int pos;
  Int width;   // (hi - lo) s
  Int period;  // den s
  Int remaining;
  bool on_phase;
};

template <class Int, class Visit>
void run_sweep(const Window& w, const BandSpec& band, Visit&& visit) {
  const std::uint64_t J = w.offset + w.length - 1;
  const BigInt D = band.den * ipow(BigInt(w.base), J);
  std::vector<Stream<Int>> streams;
  streams.reserve(w.length);
  for (std::uint64_t j = w.offset; j <= J; ++j) {
    const BigInt s = ipow(BigInt(w.base), J - j);
    streams.push_back(Stream<Int>{Num<Int>::from(band.lo_num * s),
                                  Num<Int>::from((band.hi_num - band.lo_num) * s),
                                  Num<Int>::from(band.den * s),
                                  Num<Int>::from(ipow(BigInt(w.base), j)), true});
  }
  auto later = [&](std::size_t a, std::size_t b) { return streams[b].pos < streams[a].pos; };
  std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(later)> heap(later);
  for (std::size_t i = 0; i < streams.size(); ++i) heap.push(i);

  const Int end = Num<Int>::from(D);
  Int cursor = 0;
  std::uint64_t count = 0;
  while (!heap.empty()) {
    const std::size_t i = heap.top();
    Stream<Int>& st = streams[i];
    if (!(st.pos < end)) break;
    if (cursor < st.pos) {
      visit(cursor, st.pos, count, D);
      cursor = st.pos;
    }
    heap.pop();
    if (st.on_phase) {
      ++count;
      st.pos += st.width;
      st.on_phase = false;
      heap.push(i);
    } else {
      --count;
      st.remaining -= 1;
      if (st.remaining != 0) {
        st.pos += st.period - st.width;
        st.on_phase = true;
        heap.push(i);
      }
    }
  }
  visit(cursor, end, count, D);
}

template <class Visit>
void sweep(const Window& w, const BandSpec& band, const Budget& budget, Visit&& visit) {
  validate(w);
  validate(band);
  check_window_size("sweep", w, budget);
  check_budget("sweep", sweep_event_count(w), budget);
  const BigInt D = band.den * ipow(BigInt(w.base), w.offset + w.length - 1);
  // Positions reach D + period; keep two bits of headroom.
  if (mpz_sizeinbase(D.get_mpz_t(), 2) <= 125)
    run_sweep<u128>(w, band, visit);
  else
    run_sweep<BigInt>(w, band, visit);
}

template <class Int>
Rational at(const Int& pos, const BigInt& D) {
  return Rational(Num<Int>::to_big(pos), D);
}

std::vector<char> classify(std::uint64_t length, const BandSpec& band, const Threshold& t) {
  std::vector<char> table(length + 1);
  const Rational expected = band.width() * Rational(big(length));
  for (std::uint64_t c = 0; c <= length; ++c)
    table[c] = t.accepts(abs(Rational(big(c)) - expected));
  return table;
}

}  // namespace

BandSpec BandSpec::dyadic(const Band& band) {
  require(band.k >= 1, "dyadic band needs depth k >= 1");
  const BigInt den = pow2z(band.k);
  const BigInt a = big(band.a);
  require(a < den, "dyadic band index a=" + std::to_string(band.a) + " outside [0, 2^" +
                       std::to_string(band.k) + ")");
  return {a, a + 1, den};
}

BandSpec BandSpec::badic(unsigned base, unsigned m, std::uint64_t a) {
  require(base >= 2 && m >= 1, "b-adic band needs b >= 2 and m >= 1");
  const BigInt den = ipow(BigInt(base), m);
  const BigInt av = big(a);
  require(av < den, "b-adic band index out of range");
  return {av, av + 1, den};
}

BandSpec BandSpec::between(const Rational& lo, const Rational& hi) {
  require(lo.sign() >= 0 && lo < hi && hi <= Rational(1), "band must satisfy 0 <= lo < hi <= 1");
  const BigInt den = lcm(lo.den(), hi.den());
  BandSpec b{lo.num() * (den / lo.den()), hi.num() * (den / hi.den()), den};
  return b;
}

void validate(const Window& w) {
  require(w.base >= 2, "base must be >= 2");
  require(w.length >= 1, "window length must be >= 1");
}

void validate(const BandSpec& band) {
  require(band.den > 0 && band.lo_num >= 0 && band.lo_num < band.hi_num && band.hi_num <= band.den,
          "band must satisfy 0 <= lo < hi <= 1");
}

IntervalSet preimage_band(unsigned base, std::uint64_t j, const BandSpec& band, const Budget& budget) {
  require(base >= 2, "base must be >= 2");
  validate(band);
  if (j >= 64)
    fail(ErrorKind::budget, "preimage_band at j=" + std::to_string(j) + " needs more than 2^64 parts");
  const BigInt scale = ipow(BigInt(base), j);
  check_budget("preimage_band", scale, budget);
  const BigInt D = scale * band.den;
  std::vector<Interval> parts;
  parts.reserve(to_u64(scale));
  for (BigInt m = 0; m < scale; ++m) {
    const BigInt base_num = m * band.den;
    parts.emplace_back(Rational(base_num + band.lo_num, D), Rational(base_num + band.hi_num, D));
  }
  return IntervalSet::from_sorted(std::move(parts));
}

std::uint64_t hit_count(const Rational& x, const Window& w, const BandSpec& band) {
  validate(w);
  validate(band);
  require(x.sign() >= 0 && x < Rational(1), "orbit start must lie in [0,1)");
  const BigInt q = x.den();
  BigInt r = x.num();
  if (w.offset > 0) {
    BigInt factor;
    const BigInt e = big(w.offset);
    mpz_powm(factor.get_mpz_t(), BigInt(w.base).get_mpz_t(), e.get_mpz_t(), q.get_mpz_t());
    r = (r * factor) % q;
  }
  // {b^j x} = r / q; in band iff lo_num q <= r den < hi_num q.
  const BigInt lo = band.lo_num * q;
  const BigInt hi = band.hi_num * q;
  std::uint64_t count = 0;
  BigInt scaled;
  for (std::uint64_t j = 0; j < w.length; ++j) {
    scaled = r * band.den;
    if (lo <= scaled && scaled < hi) ++count;
    r *= w.base;
    mpz_mod(r.get_mpz_t(), r.get_mpz_t(), q.get_mpz_t());
  }
  return count;
}

Rational f_value(const Rational& x, const Window& w, const BandSpec& band) {
  const std::uint64_t c = hit_count(x, w, band);
  return abs(Rational(big(c)) - band.width() * Rational(big(w.length)));
}

BigInt sweep_event_count(const Window& w) {
  const BigInt b(w.base);
  return 2 * ipow(b, w.offset) * (ipow(b, w.length) - 1) / (b - 1);
}

std::vector<Rational> breakpoints(const Window& w, const BandSpec& band, const Budget& budget) {
  std::vector<Rational> out;
  out.emplace_back(0);
  sweep(w, band, budget, [&](const auto&, const auto& hi, std::uint64_t, const BigInt& D) {
    out.push_back(at(hi, D));
  });
  if (out.back() != Rational(1)) out.emplace_back(1);
  return out;
}

std::vector<SweepCell> sweep_cells(const Window& w, const BandSpec& band, const Budget& budget) {
  std::vector<SweepCell> out;
  sweep(w, band, budget, [&](const auto& lo, const auto& hi, std::uint64_t count, const BigInt& D) {
    out.push_back({at(lo, D), at(hi, D), count});
  });
  return out;
}

std::vector<IntervalSet> deviation_regions(const Window& w, const BandSpec& band,
                                           std::span<const Threshold> thresholds, const Budget& budget) {
  validate(w);
  validate(band);
  std::vector<std::vector<char>> tables;
  bool all_decided = true;
  for (const auto& t : thresholds) {
    tables.push_back(classify(w.length, band, t));
    const auto& tab = tables.back();
    const bool none = std::none_of(tab.begin(), tab.end(), [](char v) { return v; });
    const bool all = std::all_of(tab.begin(), tab.end(), [](char v) { return v; });
    all_decided = all_decided && (none || all);
  }
  std::vector<IntervalSet> out(thresholds.size());
  if (all_decided) {
    // F takes one classification on every count, so no sweep is needed.
    for (std::size_t i = 0; i < tables.size(); ++i)
      if (tables[i][0]) out[i] = IntervalSet::unit();
    return out;
  }

  std::vector<std::vector<Interval>> parts(thresholds.size());
  std::vector<std::optional<Rational>> run_start(thresholds.size());
  sweep(w, band, budget, [&](const auto& lo, const auto& hi, std::uint64_t count, const BigInt& D) {
    for (std::size_t i = 0; i < tables.size(); ++i) {
      const bool in = tables[i][count];
      if (in && !run_start[i]) run_start[i] = at(lo, D);
      if (!in && run_start[i]) {
        parts[i].emplace_back(std::move(*run_start[i]), at(lo, D));
        run_start[i].reset();
      }
    }
    (void)hi;
  });
  for (std::size_t i = 0; i < tables.size(); ++i) {
    if (run_start[i]) parts[i].emplace_back(std::move(*run_start[i]), Rational(1));
    out[i] = IntervalSet::from_sorted(std::move(parts[i]));
  }
  return out;
}

IntervalSet deviation_region(const Window& w, const BandSpec& band, const Rational& t, const Budget& budget) {
  require(t.sign() >= 0, "deviation threshold must be non-negative");
  const Threshold th{t, false};
  return deviation_regions(w, band, std::span<const Threshold>(&th, 1), budget).front();
}

std::vector<Rational> count_distribution(unsigned base, std::uint64_t length, const BandSpec& band,
                                         const Budget& budget) {
  require(base >= 2, "base must be >= 2");
  require(length >= 1, "window length must be >= 1");
  validate(band);
  const BigInt work = band.den * base * big(length);
  check_budget("count_distribution", work, budget);
  const std::size_t q = to_u64(band.den);
  const std::size_t lo = to_u64(band.lo_num);
  const std::size_t hi = to_u64(band.hi_num);
  const std::size_t n = length;

  // cells[c][d]: numerator (over b^i) of the density on cell c carrying
  // z^d, i.e. d hits so far.
  std::vector<std::vector<BigInt>> cells(q, std::vector<BigInt>(n + 1));
  std::vector<std::vector<BigInt>> next(q, std::vector<BigInt>(n + 1));
  for (auto& cell : cells) cell[0] = 1;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t degree = i;  // before this step's hits
    for (std::size_t c = lo; c < hi; ++c)
      std::rotate(cells[c].begin(), cells[c].begin() + static_cast<std::ptrdiff_t>(degree) + 1,
                  cells[c].begin() + static_cast<std::ptrdiff_t>(degree) + 2);
    if (i + 1 == n) break;
    // L g(y) = (1/b) sum_r g((y + r)/b); cell c draws from cell (c + r q)/b.
    for (std::size_t c = 0; c < q; ++c) {
      auto& dst = next[c];
      for (std::size_t d = 0; d <= degree + 1; ++d) dst[d] = 0;
      for (unsigned r = 0; r < base; ++r) {
        const auto& src = cells[(c + r * q) / base];
        for (std::size_t d = 0; d <= degree + 1; ++d)
          mpz_add(dst[d].get_mpz_t(), dst[d].get_mpz_t(), src[d].get_mpz_t());
      }
    }
    std::swap(cells, next);
  }
  const BigInt denom = band.den * ipow(BigInt(base), n - 1);
  std::vector<Rational> dist(n + 1);
  for (std::size_t d = 0; d <= n; ++d) {
    BigInt total = 0;
    for (const auto& cell : cells) total += cell[d];
    dist[d] = Rational(total, denom);
  }
  return dist;
}

Rational deviation_measure(const std::vector<Rational>& distribution, const BandSpec& band,
                           const Threshold& t) {
  require(!distribution.empty(), "empty count distribution");
  const auto table = classify(distribution.size() - 1, band, t);
  mpq_class total;
  for (std::size_t c = 0; c < distribution.size(); ++c)
    if (table[c]) total += distribution[c].value();
  return Rational(std::move(total));
}

Rational max_f_value(std::uint64_t length, const BandSpec& band) {
  const Rational n(big(length));
  const Rational expected = band.width() * n;
  return max(expected, n - expected);
}

}  // namespace absnormal
