#include "absnormal/report.hpp"

#include "absnormal/error.hpp"

#include "json.hpp"

#include <cctype>
#include <sstream>

namespace absnormal {
namespace {

using json = nlohmann::ordered_json;

json enc(const RealEnclosure& e) { return {{"lo", e.lo.str()}, {"hi", e.hi.str()}}; }
json iv(const Interval& i) { return json::array({i.lo.str(), i.hi.str()}); }

json header(const char* kind) { return {{"schema", kReportSchema}, {"kind", kind}}; }

std::string hex64(std::uint64_t v) {
  std::ostringstream out;
  out << "0x" << std::hex << v;
  return out.str();
}

json schedule_json(const ParamSchedule& s) {
  json z = json::object();
  for (const auto& [b, zb] : s.z) z[std::to_string(b)] = zb;
  json out = {{"preset", s.preset}, {"toy", s.toy}, {"delta", s.delta.str()}, {"eta", s.eta.str()}};
  if (s.toy) {
    out["z"] = z;
    out["horizon"] = s.horizon;
    out["phi_scale"] = s.phi_scale.str();
  } else {
    out["z_2"] = paper_z(2, s.eta).get_str();
  }
  out["config"] = s.to_config();
  out["hash"] = hex64(s.hash());
  return out;
}

Interval parse_interval(const json& j) {
  if (!j.is_array() || j.size() != 2) fail(ErrorKind::parse, "interval must be a [lo, hi] pair");
  return Interval(Rational::parse(j.at(0).get<std::string>()), Rational::parse(j.at(1).get<std::string>()));
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string certificate_json(const Certificate& cert) {
  json steps = json::array();
  for (const auto& s : cert.steps) {
    steps.push_back({{"n", s.n},
                     {"p_n", s.p_n},
                     {"b_cap", s.b_cap},
                     {"I0", iv(s.half0)},
                     {"I1", iv(s.half1)},
                     {"measure0", s.measure0.str()},
                     {"measure1", s.measure1.str()},
                     {"tail", s.tail.str()},
                     {"threshold", s.threshold.str()},
                     {"digit", s.digit},
                     {"components", s.components},
                     {"precision", s.precision}});
  }
  const Interval last = cert.final_interval();
  json out = {{"schema", kCertificateSchema},
              {"schedule", schedule_json(cert.sched)},
              {"precision", cert.precision},
              {"max_events", cert.max_events},
              {"digits", cert.digits},
              {"final_interval", iv(last)},
              {"steps", steps}};
  return dump(out);
}

Certificate parse_certificate(std::string_view text) {
  try {
    const json j = json::parse(text);
    if (j.at("schema").get<std::string>() != kCertificateSchema)
      fail(ErrorKind::parse, "unsupported certificate schema '" + j.at("schema").get<std::string>() + "'");
    Certificate cert;
    const json& sj = j.at("schedule");
    cert.sched = ParamSchedule::parse_config(sj.at("config").get<std::string>());
    cert.sched.preset = sj.at("preset").get<std::string>();
    if (hex64(cert.sched.hash()) != sj.at("hash").get<std::string>())
      fail(ErrorKind::parse, "schedule hash does not match its config");
    cert.precision = j.at("precision").get<unsigned>();
    cert.max_events = j.at("max_events").get<std::uint64_t>();
    cert.digits = j.at("digits").get<std::string>();
    for (const json& s : j.at("steps")) {
      StepRecord r;
      r.n = s.at("n").get<std::uint64_t>();
      r.p_n = s.at("p_n").get<std::uint64_t>();
      r.b_cap = s.at("b_cap").get<unsigned>();
      r.half0 = parse_interval(s.at("I0"));
      r.half1 = parse_interval(s.at("I1"));
      r.measure0 = Rational::parse(s.at("measure0").get<std::string>());
      r.measure1 = Rational::parse(s.at("measure1").get<std::string>());
      r.tail = Rational::parse(s.at("tail").get<std::string>());
      r.threshold = Rational::parse(s.at("threshold").get<std::string>());
      r.digit = s.at("digit").get<unsigned>();
      r.components = s.at("components").get<std::uint64_t>();
      r.precision = s.at("precision").get<unsigned>();
      cert.steps.push_back(std::move(r));
    }
    return cert;
  } catch (const json::exception& e) {
    fail(ErrorKind::parse, std::string("malformed certificate: ") + e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::parse) throw;
    fail(ErrorKind::parse, std::string("malformed certificate: ") + e.what());
  }
}

std::string digit_file(const Certificate& cert) {
  std::ostringstream out;
  out << "# absnormal digits\n";
  out << "# preset: " << cert.sched.preset << "\n";
  out << "# schedule-hash: " << hex64(cert.sched.hash()) << "\n";
  std::istringstream cfg(cert.sched.to_config());
  for (std::string line; std::getline(cfg, line);) out << "# " << line << "\n";
  out << "# precision: " << cert.precision << "\n";
  out << "# count: " << cert.digits.size() << "\n";
  for (std::size_t i = 0; i < cert.digits.size(); i += 64) out << cert.digits.substr(i, 64) << "\n";
  return out.str();
}

std::string parse_digit_file(std::string_view text) {
  std::string digits;
  std::istringstream in{std::string(text)};
  int lineno = 0;
  for (std::string line; std::getline(in, line);) {
    ++lineno;
    if (!line.empty() && line[0] == '#') continue;
    for (char c : line) {
      if (c == '0' || c == '1') {
        digits.push_back(c);
      } else if (!std::isspace(static_cast<unsigned char>(c))) {
        fail(ErrorKind::parse, "digit file line " + std::to_string(lineno) + ": unexpected character '" +
                                   std::string(1, c) + "'");
      }
    }
  }
  if (digits.empty()) fail(ErrorKind::parse, "digit file holds no digits");
  return digits;
}

Rational digits_value(std::string_view digits) {
  BigInt num = 0;
  for (char c : digits) {
    require(c == '0' || c == '1', "digits must be 0 or 1");
    num = num * 2 + (c - '0');
  }
  return Rational(num, pow2z(digits.size()));
}

std::string verify_json(const VerifyReport& rep) {
  json out = header("verify");
  out["ok"] = rep.ok;
  json mm = json::array();
  for (const auto& m : rep.mismatches) mm.push_back({{"step", m.step}, {"field", m.field}, {"message", m.message}});
  out["mismatches"] = mm;
  return dump(out);
}

std::string badset_json(const SetEnclosure& set, const ParamSchedule& sched, SetKind which, unsigned b,
                        std::uint64_t n, bool list_intervals) {
  json out = header("badset");
  out["which"] = which == SetKind::G ? "G" : which == SetKind::H ? "H" : "delta";
  out["schedule"] = schedule_json(sched);
  if (which != SetKind::delta) out["b"] = b;
  out["n"] = n;
  if (which != SetKind::G && n % 2 == 1) out["note"] = "odd n: the H union starts at l = ceil(n/2)";
  out["components"] = set.components;
  out["measure"] = set.outer.measure().str();
  out["inner_measure"] = set.inner.measure().str();
  out["outer_measure"] = set.outer.measure().str();
  out["inner_parts"] = set.inner.size();
  out["outer_parts"] = set.outer.size();
  if (list_intervals) {
    json in = json::array(), ou = json::array();
    for (const auto& p : set.inner.parts()) in.push_back(iv(p));
    for (const auto& p : set.outer.parts()) ou.push_back(iv(p));
    out["inner"] = in;
    out["outer"] = ou;
  }
  return dump(out);
}

std::string discrepancy_json(const DiscrepancyReport& rep) {
  json out = header("discrepancy");
  out["base"] = rep.base;
  out["N"] = rep.N;
  out["x"] = rep.x.str();
  out["D_N"] = rep.extreme.str();
  out["D_star_N"] = rep.star.str();
  if (rep.has_ratio) out["ratio"] = enc(rep.ratio);
  out["philipp_C_b"] = enc(rep.philipp);
  out["limit_3C_b"] = enc(rep.limit);
  if (rep.has_ratio) {
    json grid = json::array();
    for (const auto& row : rep.grid) grid.push_back({{"N", row.N}, {"D_N", row.discrepancy.str()}, {"ratio", enc(row.ratio)}});
    out["grid"] = grid;
    out["running_max"] = enc(rep.running_max);
    out["running_max_below_3C_b"] = rep.running_max_below_limit;
    out["diagnostic"] = "finite-N running maximum; not a certificate of the limsup";
  }
  return dump(out);
}

std::string discrepancy_csv(const DiscrepancyReport& rep) {
  std::ostringstream out;
  out << "N,D_N,ratio_lo,ratio_hi\n";
  for (const auto& row : rep.grid)
    out << row.N << "," << row.discrepancy.str() << "," << row.ratio.lo.str() << "," << row.ratio.hi.str() << "\n";
  return out.str();
}

namespace {

json estimate_object(const EstimateReport& rep) {
  json out = {{"seed", rep.spec.seed},
              {"stream", rep.spec.stream},
              {"samples", rep.spec.samples},
              {"hits", rep.hits},
              {"estimate", rep.estimate.str()},
              {"se", enc(rep.se)},
              {"band", json::array({rep.band_lo.str(), rep.band_hi.str()})}};
  if (rep.exact) out["exact"] = enc(*rep.exact);
  out["verdict"] = verdict_name(rep.verdict);
  return out;
}

}  // namespace

std::string estimate_json(const EstimateReport& rep) {
  json out = header("estimate");
  out.update(estimate_object(rep));
  return dump(out);
}

std::string lemma_grid_json(unsigned lemma, const std::vector<BoundCheck>& rows) {
  json out = header("lemma-grid");
  out["lemma"] = lemma;
  json rj = json::array();
  std::uint64_t checked = 0, failures = 0, mc_inconsistent = 0;
  for (const auto& r : rows) {
    rj.push_back({{"b", r.base},
                  {lemma == 1 ? "m" : "k", r.k},
                  {"N", r.N},
                  {"eps", r.eps.str()},
                  {"bound", enc(r.bound)},
                  {"worst_a", r.worst_a},
                  {"exact", r.exact.str()},
                  {"resolution_bits", r.resolution},
                  {"mc", estimate_object(r.estimate)},
                  {"verdict", r.verdict}});
    if (r.verdict != "vacuous") ++checked;
    if (r.verdict == "fail") ++failures;
    if (r.estimate.verdict == Verdict::inconsistent) ++mc_inconsistent;
  }
  out["rows"] = rj;
  out["checked"] = checked;
  out["violations"] = failures;
  out["mc_inconsistent"] = mc_inconsistent;
  return dump(out);
}

std::string depth_sweep_json(std::uint64_t seed, const std::vector<DepthCase>& cases) {
  json out = header("depth-decomposition");
  out["seed"] = seed;
  json rows = json::array();
  std::uint64_t failures = 0;
  for (const auto& c : cases) {
    json lm = json::array();
    for (const auto& v : c.result.level_max) lm.push_back(v.str());
    rows.push_back({{"x", c.x.str()},
                    {"b", c.base},
                    {"N", c.N},
                    {"band", json::array({c.lo.str(), c.hi.str()})},
                    {"k", c.k},
                    {"lhs", c.result.lhs.str()},
                    {"rhs", c.result.rhs.str()},
                    {"level_max", lm},
                    {"holds", c.result.holds}});
    failures += !c.result.holds;
  }
  out["cases"] = rows;
  out["failures"] = failures;
  return dump(out);
}

std::string block_sweep_json(std::uint64_t seed, const std::vector<BlockCase>& cases) {
  json out = header("block-decomposition");
  out["seed"] = seed;
  json rows = json::array();
  std::uint64_t failures = 0;
  for (const auto& c : cases) {
    json terms = json::array();
    for (const auto& t : c.result.terms) terms.push_back({{"l", t.l}, {"m", t.m}, {"F", t.f.str()}});
    rows.push_back({{"x", c.x.str()},
                    {"b", c.base},
                    {"N", c.N},
                    {"h", c.h},
                    {"a", c.a},
                    {"n", c.result.n},
                    {"odd_n", c.result.odd_n},
                    {"lhs", c.result.lhs.str()},
                    {"head", c.result.head.str()},
                    {"witness", terms},
                    {"rhs_minus_cube_root", c.result.rhs_minus_cuberoot.str()},
                    {"witness_found", c.result.holds}});
    failures += !c.result.holds;
  }
  out["cases"] = rows;
  out["failures"] = failures;
  return dump(out);
}

std::string tail_check_json(const ParamSchedule& sched, std::uint64_t n0, const TailSumCheck& check) {
  json out = header("tail-sum");
  out["delta"] = sched.delta.str();
  out["eta"] = sched.eta.str();
  out["n0"] = n0;
  out["bound"] = enc(check.bound);
  out["below_eta"] = check.holds;
  return dump(out);
}

std::string chain_json(const ChainReport& rep) {
  json out = header("inequality-chain");
  out["n_max"] = rep.n_max;
  json sums = json::array(), chain = json::array();
  for (const auto& s : rep.partial_sums) sums.push_back(s.str());
  for (const auto& s : rep.chain_bounds) chain.push_back(s.str());
  out["partial_sums"] = sums;
  out["chain_bounds"] = chain;
  out["headroom"] = rep.headroom.str();
  out["below_7_8"] = rep.below_seven_eighths;
  out["eta_plus_sum_below_1"] = rep.with_eta_below_one;
  out["chain_below_headroom"] = rep.chain_below_headroom;
  out["increasing"] = rep.increasing;
  return dump(out);
}

std::string cost_json(const CostEstimate& est) {
  json out = header("cost");
  out["n"] = est.n;
  // log2 of the count is coefficient * 2^exponent
  out["coefficient"] = enc(est.coefficient);
  out["exponent"] = est.exponent.get_str();
  out["exact"] = est.exact;
  if (est.exact) {
    out["log2_ops"] = est.decimal.empty() ? est.coefficient.lo.num().get_str() + " * 2^" + est.exponent.get_str()
                                          : est.decimal;
    out["log2_ops_form"] = est.coefficient.lo.num().get_str() + " * 2^" + est.exponent.get_str();
  }
  return dump(out);
}

}  // namespace absnormal
