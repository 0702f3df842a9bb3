#include "absnormal/schedule.hpp"

#include "absnormal/enclosure.hpp"
#include "absnormal/error.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace absnormal {
namespace {

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

std::uint64_t parse_u64(const std::string& text, const std::string& key) {
  if (text.empty() || !std::all_of(text.begin(), text.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
    fail(ErrorKind::parse, "config key '" + key + "': expected a non-negative integer, got '" + text + "'");
  try {
    return std::stoull(text);
  } catch (const std::exception&) {
    fail(ErrorKind::parse, "config key '" + key + "': integer out of range");
  }
}

std::map<unsigned, std::uint64_t> parse_z(const std::string& text) {
  std::map<unsigned, std::uint64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::string entry = trim(item);
    if (entry.empty()) continue;
    const auto colon = entry.find(':');
    if (colon == std::string::npos) fail(ErrorKind::parse, "z entry '" + entry + "' must be base:level");
    const auto b = parse_u64(trim(entry.substr(0, colon)), "z");
    const auto zb = parse_u64(trim(entry.substr(colon + 1)), "z");
    if (b < 2 || b > 64) fail(ErrorKind::parse, "z entry '" + entry + "': base must lie in [2, 64]");
    out[static_cast<unsigned>(b)] = zb;
  }
  return out;
}

ParamSchedule make_toy(std::string name, std::map<unsigned, std::uint64_t> z, std::uint64_t horizon,
                  const char* phi_scale) {
  ParamSchedule s;
  s.preset = std::move(name);
  s.toy = true;
  s.delta = Rational::parse("1/100");
  s.eta = Rational::parse("1/16");
  s.z = std::move(z);
  s.horizon = horizon;
  s.phi_scale = Rational::parse(phi_scale);
  return s;
}

}  // namespace

BigInt p_of(std::uint64_t n) { return pow2z(2 * n + 2); }

std::uint64_t p_small(std::uint64_t n) {
  require(n <= 30, "p_n = 2^(2n+2) only tabulated for n <= 30");
  return std::uint64_t{1} << (2 * n + 2);
}

unsigned bcap(const BigInt& n) {
  if (n < 4) return 2;
  return std::max(2u, static_cast<unsigned>(floor_log2(n)));
}

const BigInt& paper_z_floor() {
  static const BigInt value = [] {
    for (unsigned p = 64;; p *= 2) {
      const auto e = enclose([](long wp) { return exp(Ival(wp, Rational(12)) / log(Ival(wp, Rational(2)))); }, p);
      if (e.lo.floor() == e.hi.floor()) return BigInt(e.lo.floor() + 1);
    }
  }();
  return value;
}

BigInt paper_z(unsigned b, const Rational& eta) {
  require(eta.sign() > 0, "eta must be positive");
  // 1/(z-1) < eta/2^b  <=>  z > 1 + 2^b/eta.
  const BigInt tail_z = (Rational(1) + Rational(pow2z(b)) / eta).floor() + 1;
  return std::max(paper_z_floor(), tail_z);
}

ParamSchedule ParamSchedule::paper() { return ParamSchedule{}; }

std::vector<std::string> ParamSchedule::preset_names() {
  return {"paper", "toy-small", "toy-mixed", "toy-deep", "toy-wide"};
}

ParamSchedule ParamSchedule::named(std::string_view name) {
  if (name == "paper") return paper();
  if (name == "toy-small") return make_toy("toy-small", {{2, 2}}, 3, "1/8");
  if (name == "toy-mixed") return make_toy("toy-mixed", {{2, 2}, {3, 2}}, 2, "1/4");
  if (name == "toy-deep") return make_toy("toy-deep", {{2, 3}}, 3, "1/6");
  if (name == "toy-wide") return make_toy("toy-wide", {{2, 2}, {3, 2}, {4, 2}}, 2, "1/3");
  fail(ErrorKind::invalid_argument, "unknown preset '" + std::string(name) + "'");
}

ParamSchedule ParamSchedule::parse_config(std::string_view text) {
  std::map<std::string, std::string> kv;
  std::stringstream ss{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) fail(ErrorKind::parse, "config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(t.substr(0, eq));
    if (kv.count(key)) fail(ErrorKind::parse, "config key '" + key + "' given twice");
    kv[key] = trim(t.substr(eq + 1));
  }

  ParamSchedule s;
  bool custom = false;
  if (auto it = kv.find("preset"); it != kv.end()) {
    if (it->second == "toy") {
      s = make_toy("toy", {}, 0, "1");
    } else {
      s = named(it->second);
    }
    kv.erase(it);
  } else {
    s = make_toy("toy", {}, 0, "1");
  }
  for (const auto& [key, value] : kv) {
    if (key == "delta") {
      s.delta = Rational::parse(value);
    } else if (key == "eta") {
      s.eta = Rational::parse(value);
    } else if (key == "z") {
      s.z = parse_z(value);
    } else if (key == "horizon") {
      s.horizon = parse_u64(value, key);
    } else if (key == "phi_scale") {
      s.phi_scale = Rational::parse(value);
    } else {
      fail(ErrorKind::parse, "unknown config key '" + key + "'");
    }
    custom = true;
  }
  if (custom && !s.toy) fail(ErrorKind::invalid_argument, "the paper preset takes no overrides");
  if (custom && s.preset != "toy") s.preset += "+custom";
  s.validate();
  return s;
}

std::string ParamSchedule::to_config() const {
  std::ostringstream out;
  if (!toy) {
    out << "preset = paper\n";
    return out.str();
  }
  out << "preset = toy\n";
  out << "delta = " << delta.str() << "\n";
  out << "eta = " << eta.str() << "\n";
  out << "z = ";
  bool first = true;
  for (const auto& [b, zb] : z) {
    out << (first ? "" : ", ") << b << ":" << zb;
    first = false;
  }
  out << "\n";
  out << "horizon = " << horizon << "\n";
  out << "phi_scale = " << phi_scale.str() << "\n";
  return out.str();
}

std::uint64_t ParamSchedule::hash() const {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : to_config()) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

void ParamSchedule::validate() const {
  require(delta.sign() > 0, "delta must be positive");
  require(eta.sign() > 0 && eta <= Rational::parse("1/8"), "eta must lie in (0, 1/8]");
  if (!toy) {
    require(delta == Rational::parse("1/2") && eta == Rational::parse("1/8") && phi_scale == Rational(1),
            "paper preset is fixed at delta = 1/2, eta = 1/8");
    return;
  }
  require(!z.empty(), "toy schedule needs at least one base in z");
  require(phi_scale.sign() > 0, "phi_scale must be positive");
  require(horizon >= 2 && horizon <= 24, "toy horizon must lie in [2, 24]");
  for (const auto& [b, zb] : z) {
    require(b >= 2, "toy bases must be >= 2");
    // phi(2^m) needs log log 2^m > 0, i.e. m >= 2.
    require(zb >= 2, "toy z_b must be >= 2 (phi(2) is undefined)");
  }
}

BigInt ParamSchedule::z_of(unsigned b) const {
  if (!toy) return paper_z(b, eta);
  const auto it = z.find(b);
  return it == z.end() ? BigInt(0) : big(it->second);
}

std::vector<std::pair<unsigned, std::uint64_t>> ParamSchedule::levels(std::uint64_t n, std::size_t limit) const {
  std::vector<std::pair<unsigned, std::uint64_t>> out;
  const unsigned cap = bcap(big(n));
  if (toy) {
    for (const auto& [b, zb] : z) {
      if (b > cap) continue;
      for (std::uint64_t m = zb; m <= std::min(n, horizon); ++m) out.emplace_back(b, m);
    }
    return out;
  }
  for (unsigned b = 2; b <= cap; ++b) {
    const BigInt zb = z_of(b);
    for (BigInt m = zb; m <= big(n); ++m) {
      if (out.size() >= limit) return out;
      out.emplace_back(b, m.get_ui());
    }
  }
  return out;
}

std::vector<std::pair<unsigned, std::uint64_t>> ParamSchedule::excluded_levels(std::uint64_t n) const {
  require(toy, "excluded_levels is only finite for toy schedules");
  const auto inside = levels(n);
  std::vector<std::pair<unsigned, std::uint64_t>> out;
  for (const auto& [b, zb] : z)
    for (std::uint64_t m = zb; m <= horizon; ++m)
      if (std::find(inside.begin(), inside.end(), std::make_pair(b, m)) == inside.end()) out.emplace_back(b, m);
  return out;
}

}  // namespace absnormal
