// One PASS/FAIL line per acceptance criterion. argv[1], when given, is the
// CLI executable used by criterion 6.

#include "absnormal/constructor.hpp"
#include "absnormal/discrepancy.hpp"
#include "absnormal/mc.hpp"
#include "absnormal/report.hpp"
#include "support/oracles.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

using namespace absnormal;
using absnormal::testing::q;

namespace {

int failures = 0;

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

void report(int id, bool ok, double secs, double limit, const std::string& detail) {
  const bool in_time = secs <= limit;
  if (!ok || !in_time) ++failures;
  std::printf("%s %d: %s [%.1f s, limit %.0f s]\n", ok && in_time ? "PASS" : "FAIL", id, detail.c_str(), secs,
              limit);
  std::fflush(stdout);
}

std::string run_capture(const std::string& cmd, int& rc) {
  std::string out;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) {
    rc = -1;
    return out;
  }
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  const int status = pclose(p);
  rc = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return out;
}

void criterion1() {
  Timer t;
  std::mt19937_64 rng(1);
  int draws = 0, mismatches = 0;
  for (; draws < 240; ++draws) {
    const unsigned b = 2 + static_cast<unsigned>(rng() % 2);
    const std::uint64_t total = 1 + rng() % 8;
    const std::uint64_t N = 1 + rng() % total;
    const Window w{b, total - N, N};
    const unsigned k = 1 + static_cast<unsigned>(rng() % 3);
    const auto band = BandSpec::dyadic({rng() % (1u << k), k});
    const Rational th(BigInt(static_cast<long>(rng() % (2 * N + 2))), BigInt(2));
    if (!(deviation_region(w, band, th) == absnormal::testing::cylinder_region(w, band, {th, false}))) ++mismatches;
  }
  report(1, mismatches == 0, t.seconds(), 60,
         "deviation_region equals the cylinder oracle on " + std::to_string(draws) + " draws (" +
             std::to_string(mismatches) + " mismatches)");
}

void criterion2() {
  Timer t;
  std::mt19937_64 rng(2);
  int bad = 0;
  for (int draw = 0; draw < 200; ++draw) {
    const std::size_t n = 1 + rng() % 12;
    std::vector<Rational> pts;
    for (std::size_t i = 0; i < n; ++i) pts.push_back(absnormal::testing::random_rational(rng, 30));
    const Rational d = extreme_discrepancy(pts), ds = star_discrepancy(pts);
    const Rational N(static_cast<long>(n));
    const bool ok = d == absnormal::testing::brute_extreme_discrepancy(pts, false) &&
                    ds == absnormal::testing::brute_extreme_discrepancy(pts, true) && Rational(1) / N <= d &&
                    d <= Rational(1) && ds <= d && d <= Rational(2) * ds;
    bad += !ok;
  }
  report(2, bad == 0, t.seconds(), 30,
         "discrepancy equals the O(N^2) oracles with 1/N <= D <= 1, D* <= D <= 2D* on 200 sets (" +
             std::to_string(bad) + " failures)");
}

std::vector<std::uint64_t> pow2_range(unsigned lo, unsigned hi) {
  std::vector<std::uint64_t> v;
  for (unsigned e = lo; e <= hi; ++e) v.push_back(std::uint64_t{1} << e);
  return v;
}

void criterion3() {
  Timer t;
  const std::vector<Rational> eps{q("1/4"), q("1/2"), Rational(1)};
  const auto rows = lemma_grid(2, {2, 3}, {1, 2}, pow2_range(4, 10), eps, {1, 2000, 0});
  int checked = 0, violations = 0, base2 = 0;
  const BoundCheck* first = nullptr;
  for (const auto& r : rows) {
    if (r.vacuous) continue;
    ++checked;
    if (!(r.exact <= r.bound.hi)) {
      ++violations;
      base2 += r.base == 2;
      if (!first || r.N < first->N) first = &r;
    }
  }
  const double secs = t.seconds();
  std::string detail = "Lemma 2 bound on " + std::to_string(checked) + " non-vacuous grid points, " +
                       std::to_string(violations) + " violations (" + std::to_string(base2) + " in base 2)";
  if (first) {
    std::ostringstream os;
    os << "; e.g. b=" << first->base << " k=" << first->k << " N=" << first->N << " eps=" << first->eps.str()
       << ": exact " << first->exact.to_double() << " > bound " << first->bound.hi.to_double();
    detail += os.str();
  }
  report(3, violations == 0, secs, 600, detail);

  // Same rows against the bound with 2^(k+2) in the exponent.
  int alt = 0, alt_checked = 0;
  for (const auto& r : rows) {
    const auto b2 = lemma2_bound(2, r.k, r.N, r.eps, 64);
    if (b2.lo >= Rational(1)) continue;
    ++alt_checked;
    alt += !(r.exact <= b2.hi);
  }
  std::printf("INFO 3: with 2^(k+2) in place of b^(k+2) in the exponent: %d violations on %d points\n", alt,
              alt_checked);
}

void criterion4() {
  Timer t;
  std::vector<std::uint64_t> Ns = pow2_range(4, 10);
  const std::vector<Rational> eps{q("1/64"), q("1/32"), q("1/16"), q("1/9"), q("1/8"), q("1/4"), q("1/3"), q("1/2")};
  const auto rows = lemma_grid(1, {2, 3}, {1, 2, 3}, Ns, eps, {1, 2000, 0});
  int checked = 0, violations = 0;
  for (const auto& r : rows) {
    if (r.vacuous) continue;
    ++checked;
    violations += !(r.exact <= r.bound.hi);
  }
  report(4, violations == 0 && checked > 0, t.seconds(), 600,
         "Lemma 1 bound on " + std::to_string(rows.size()) + " feasible points (" + std::to_string(checked) +
             " non-vacuous), " + std::to_string(violations) + " violations");
}

void criterion5() {
  Timer t;
  const auto rep = inequality_chain_check(ParamSchedule::paper(), 20);
  const bool ok = rep.below_seven_eighths && rep.with_eta_below_one && rep.chain_below_headroom &&
                  rep.headroom == q("25/32") && rep.headroom < q("7/8");
  report(5, ok, t.seconds(), 1,
         "partial sums below 7/8 for n <= 20, eta + sum < 1, headroom 3/4 + eta/4 = " + rep.headroom.str() +
             " < 7/8, final sum ~ " + std::to_string(rep.partial_sums.back().to_double()));
}

void criterion6(const std::string& cli) {
  Timer t;
  bool ok = true;
  std::string detail;
  Certificate cert;
  if (!cli.empty()) {
    int rc = 0;
    const std::string out =
        run_capture(cli + " digits --preset paper --count 10 --out acc_paper.txt --cert acc_paper.json", rc);
    ok = rc == 0 && out.find("\"digits\": \"0000000000\"") != std::string::npos;
    std::ifstream in("acc_paper.json");
    std::stringstream ss;
    ss << in.rdbuf();
    detail = "CLI digits";
    try {
      cert = parse_certificate(ss.str());
    } catch (const std::exception& e) {
      ok = false;
      detail += std::string(" (") + e.what() + ")";
    }
  } else {
    cert = run(ParamSchedule::paper(), 10, 64);
    detail = "library run";
  }
  ok = ok && cert.digits == "0000000000" && cert.steps.size() == 10;
  for (const auto& s : cert.steps)
    ok = ok && s.components == 0 && s.measure0.is_zero() && s.measure1.is_zero() && s.tail < s.threshold;
  ok = ok && verify_certificate(cert).ok;
  report(6, ok, t.seconds(), 5,
         detail + " emits 0000000000, every step has empty Delta_{p_n} and r_{p_n} < 2^-n, certificate verifies");
}

void criterion7() {
  bool saw_one = false;
  int schedules = 0;
  double slowest = 0;
  bool all_ok = true;
  std::string digits;
  for (const char* name : {"toy-small", "toy-mixed", "toy-deep", "toy-wide"}) {
    Timer t;
    const auto c = run(ParamSchedule::named(name), 6, 64);
    bool ok = c.digits.size() == 6;
    bool nonempty = false;
    Interval cur(Rational(0), Rational(1));
    for (const auto& s : c.steps) {
      nonempty = nonempty || s.components > 0;
      const Interval next = s.digit == 0 ? s.half0 : s.half1;
      const Rational m = s.digit == 0 ? s.measure0 : s.measure1;
      ok = ok && next.length() == Rational::pow2(-static_cast<long>(s.n)) && cur.lo <= next.lo &&
           next.hi <= cur.hi && m + s.tail < s.threshold;
      cur = next;
    }
    ok = ok && nonempty && verify_certificate(c).ok;
    // The JSON round trip re-verifies too.
    ok = ok && verify_certificate(parse_certificate(certificate_json(c))).ok;
    all_ok = all_ok && ok;
    schedules += ok;
    saw_one = saw_one || c.digits.find('1') != std::string::npos;
    slowest = std::max(slowest, t.seconds());
    digits += std::string(digits.empty() ? "" : ", ") + name + " " + c.digits;
  }
  report(7, all_ok && schedules >= 3 && saw_one, slowest, 600,
         std::to_string(schedules) + " toy schedules re-verify with nesting and avoidance (" + digits +
             "), time of the slowest schedule");
}

void criterion8() {
  Timer t;
  int depth_fail = 0, block_fail = 0;
  for (const auto& c : depth_decomposition_sweep(1, 100)) depth_fail += !c.result.holds;
  for (const auto& c : block_decomposition_sweep(1, 50)) block_fail += !c.result.holds;
  report(8, depth_fail == 0 && block_fail == 0, t.seconds(), 600,
         "depth decomposition on 100 cases (" + std::to_string(depth_fail) + " failures), Lemma 4 witnesses on 50 (" +
             std::to_string(block_fail) + " failures)");
}

void criterion9() {
  Timer t;
  const auto f2 = fukuyama_constant(2, 128);
  const bool ok = philipp_constant(4, 64) == RealEnclosure::exact(Rational(830)) &&
                  philipp_constant(9, 64) == RealEnclosure::exact(Rational(498)) && f2.lo * f2.lo <= q("84/81") &&
                  q("84/81") <= f2.hi * f2.hi && f2.width() < Rational::pow2(-100) &&
                  fukuyama_constant(3, 64) == RealEnclosure::exact(Rational(1)) &&
                  cost_estimate(1).exact && cost_estimate(1).decimal == "131072";
  report(9, ok, t.seconds(), 5,
         "C_4 = 830, C_9 = 498, fukuyama(2) encloses sqrt(84)/9, fukuyama(3) = 1, cost(1) = 131072");
}

void criterion10() {
  Timer t;
  std::mt19937_64 rng(10);
  int consistent = 0, reproducible = 0, checks = 0;
  const SamplerSpec base{2024, 4000, 0};
  while (checks < 100) {
    Membership region;
    Rational exact;
    IntervalSet set;
    Window w{2, 0, 1};
    BandSpec band = BandSpec::dyadic({0, 1});
    Rational th;
    if (checks % 2 == 0) {
      set = absnormal::testing::random_set(rng, 4, 64);
      exact = set.measure();
      region = [set](const Rational& x) { return set.contains(x); };
    } else {
      w = Window{2 + static_cast<unsigned>(rng() % 2), rng() % 3, 1 + rng() % 6};
      const unsigned k = 1 + static_cast<unsigned>(rng() % 2);
      band = BandSpec::dyadic({rng() % (1u << k), k});
      th = Rational(BigInt(static_cast<long>(rng() % (w.length + 1))), BigInt(2));
      exact = deviation_region(w, band, th).measure();
      region = [w, band, th](const Rational& x) { return th <= f_value(x, w, band); };
    }
    if (exact < q("1/20") || exact > q("19/20")) continue;
    const SamplerSpec spec = base.split(checks);
    const auto a = mc_measure(region, spec, RealEnclosure::exact(exact));
    const auto b = mc_measure(region, spec, RealEnclosure::exact(exact));
    consistent += a.verdict == Verdict::consistent;
    reproducible += a == b && estimate_json(a) == estimate_json(b);
    ++checks;
  }
  report(10, consistent >= 99 && reproducible == checks, t.seconds(), 600,
         std::to_string(consistent) + "/100 exact measures inside the 4 sigma band, " + std::to_string(reproducible) +
             "/100 reruns bit-identical");
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6(cli);
  criterion7();
  criterion8();
  criterion9();
  criterion10();
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
