// absnormal command line. Talks to the engine only through the C API.
#include "absnormal/absnormal.h"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

enum Exit { kOk = 0, kInternal = 1, kUsage = 2, kBudget = 3, kIndeterminate = 4, kVerify = 5, kIo = 6, kParse = 7 };

int exit_of(an_status s) {
  switch (s) {
    case AN_OK: return kOk;
    case AN_ERR_INVALID: return kUsage;
    case AN_ERR_BUDGET: return kBudget;
    case AN_ERR_INDETERMINATE: return kIndeterminate;
    case AN_ERR_PARSE: return kParse;
    case AN_ERR_IO: return kIo;
    case AN_ERR_VERIFY: return kVerify;
    case AN_ERR_INTERNAL: return kInternal;
  }
  return kInternal;
}

struct Failure {
  int code;
};

void check(an_status s, const char* what) {
  if (s == AN_OK) return;
  std::cerr << "absnormal: " << what << ": " << an_last_error() << "\n";
  throw Failure{exit_of(s)};
}

[[noreturn]] void die(int code, const std::string& msg) {
  std::cerr << "absnormal: " << msg << "\n";
  throw Failure{code};
}

struct Str {
  char* p = nullptr;
  ~Str() { an_free(p); }
  std::string str() const { return p ? std::string(p) : std::string(); }
};

using Schedule = std::unique_ptr<an_schedule, decltype(&an_schedule_free)>;
using Cert = std::unique_ptr<an_certificate, decltype(&an_certificate_free)>;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) die(kIo, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Write to a sibling temp file, then rename over the target.
void write_file(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) die(kIo, "cannot write '" + path + "'");
    out << text;
    if (!out.flush()) die(kIo, "cannot write '" + path + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) die(kIo, "cannot move '" + tmp + "' to '" + path + "': " + ec.message());
}

struct ScheduleOpts {
  std::string preset = "paper";
  std::string config;
};

Schedule load_schedule(const ScheduleOpts& o) {
  an_schedule* s = nullptr;
  if (!o.config.empty()) {
    const std::string text = read_file(o.config);
    check(an_schedule_from_config(text.c_str(), &s), "config");
  } else {
    check(an_schedule_preset(o.preset.c_str(), &s), "preset");
  }
  return Schedule(s, an_schedule_free);
}

void add_schedule(CLI::App* cmd, ScheduleOpts& o) {
  auto* p = cmd->add_option("--preset", o.preset, "paper, toy-small, toy-mixed, toy-deep or toy-wide");
  cmd->add_option("--config", o.config, "schedule config file (key = value)")->excludes(p);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Absolutely normal number construction and discrepancy tools"};
  app.require_subcommand(1);

  unsigned precision = 64;
  std::uint64_t max_events = 0;
  auto common = [&](CLI::App* cmd) {
    cmd->add_option("--precision", precision, "enclosure precision in bits")->check(CLI::Range(8u, 1u << 16));
    cmd->add_option("--max-events", max_events, "work budget (sweep events); 0 = default");
  };

  // digits
  ScheduleOpts d_sched;
  std::uint64_t d_count = 0;
  std::string d_out = "digits.txt", d_cert = "certificate.json";
  auto* digits = app.add_subcommand("digits", "emit binary digits with a certificate");
  add_schedule(digits, d_sched);
  digits->add_option("--count", d_count, "number of digits (1..30)")->required()->check(CLI::PositiveNumber);
  digits->add_option("--out", d_out, "digit file");
  digits->add_option("--cert", d_cert, "certificate file");
  common(digits);

  // badset
  ScheduleOpts b_sched;
  std::string b_which = "delta";
  unsigned b_base = 2;
  std::uint64_t b_n = 1;
  bool b_list = false;
  auto* badset = app.add_subcommand("badset", "measure the bad sets G, H or Delta_n");
  add_schedule(badset, b_sched);
  badset->add_option("--set", b_which, "G, H or delta")->check(CLI::IsMember({"G", "H", "delta"}));
  badset->add_option("--b", b_base, "base (G and H)");
  badset->add_option("--n", b_n, "level")->required();
  badset->add_flag("--intervals", b_list, "list inner and outer intervals");
  common(badset);

  // discrepancy
  std::string q_x, q_digits, q_csv;
  unsigned q_base = 2;
  std::uint64_t q_N = 0;
  auto* disc = app.add_subcommand("discrepancy", "exact discrepancy of the orbit {b^j x}");
  auto* qx = disc->add_option("--x", q_x, "starting point num/den");
  disc->add_option("--digits", q_digits, "digit file; x = 0.d1d2... in base 2")->excludes(qx);
  disc->add_option("--base", q_base, "base b")->check(CLI::Range(2u, 1u << 16));
  disc->add_option("--N", q_N, "number of orbit points")->required()->check(CLI::PositiveNumber);
  disc->add_option("--csv", q_csv, "write N, D_N, ratio_lo, ratio_hi to this file");
  common(disc);

  // verify
  std::string v_cert;
  auto* verify = app.add_subcommand("verify", "recompute a certificate from scratch");
  verify->add_option("cert", v_cert, "certificate file")->required();
  verify->add_option("--max-events", max_events, "work budget (sweep events); 0 = default");

  // lemma
  std::string l_id;
  std::uint64_t l_seed = 1, l_samples = 4000, l_cases = 0, l_n0 = 0;
  std::vector<unsigned> l_bases, l_ks;
  std::vector<std::uint64_t> l_Ns;
  std::vector<std::string> l_eps;
  auto* lemma = app.add_subcommand("lemma", "check the measure lemmas and decompositions");
  lemma->add_option("id", l_id, "1, 2, 4, depth, 5 or chain")->required();
  lemma->add_option("--bases", l_bases, "grid bases")->delimiter(',');
  lemma->add_option("--k", l_ks, "grid depths k (lemma 2) or m (lemma 1)")->delimiter(',');
  lemma->add_option("--N", l_Ns, "grid lengths")->delimiter(',');
  lemma->add_option("--eps", l_eps, "grid eps values num/den")->delimiter(',');
  lemma->add_option("--seed", l_seed, "sampler seed");
  lemma->add_option("--samples", l_samples, "Monte Carlo samples per row")->check(CLI::Range(100, 100000000));
  lemma->add_option("--cases", l_cases, "random cases (depth: 100, 4: 50)");
  lemma->add_option("--n0", l_n0, "tail start for lemma 5 (default z_2)");
  common(lemma);

  // cost
  std::uint64_t c_n = 0;
  auto* cost = app.add_subcommand("cost", "log2 of the naive operation count for digit n");
  cost->add_option("--n", c_n, "digit index")->required()->check(CLI::PositiveNumber);

  auto* presets = app.add_subcommand("presets", "list schedule presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*digits) {
      Schedule s = load_schedule(d_sched);
      an_certificate* raw = nullptr;
      check(an_run(s.get(), d_count, precision, max_events, &raw), "digits");
      Cert c(raw, an_certificate_free);
      Str file, json, ds;
      check(an_certificate_digit_file(c.get(), &file.p), "digit file");
      check(an_certificate_json(c.get(), &json.p), "certificate");
      check(an_certificate_digits(c.get(), &ds.p), "digits");
      write_file(d_out, file.str());
      write_file(d_cert, json.str());
      nlohmann::ordered_json out = {{"schema", "absnormal.report/1"},
                                    {"kind", "digits"},
                                    {"digits", ds.str()},
                                    {"count", d_count},
                                    {"digit_file", d_out},
                                    {"certificate", d_cert}};
      std::cout << out.dump(2) << "\n";
    } else if (*badset) {
      Schedule s = load_schedule(b_sched);
      Str out;
      check(an_badset_report(s.get(), b_which.c_str(), b_base, b_n, precision, max_events, b_list, &out.p), "badset");
      std::cout << out.str();
    } else if (*disc) {
      std::string x = q_x;
      if (!q_digits.empty()) {
        const std::string text = read_file(q_digits);
        Str v;
        check(an_digit_file_value(text.c_str(), &v.p), "digit file");
        x = v.str();
      }
      if (x.empty()) die(kUsage, "discrepancy needs --x or --digits");
      Str json, csv;
      check(an_discrepancy_report(x.c_str(), q_base, q_N, precision, &json.p, q_csv.empty() ? nullptr : &csv.p),
            "discrepancy");
      if (!q_csv.empty()) write_file(q_csv, csv.str());
      std::cout << json.str();
    } else if (*verify) {
      const std::string text = read_file(v_cert);
      an_certificate* raw = nullptr;
      check(an_certificate_parse(text.c_str(), &raw), "certificate");
      Cert c(raw, an_certificate_free);
      int ok = 0;
      Str report;
      check(an_verify(c.get(), max_events, &ok, &report.p), "verify");
      std::cout << report.str();
      if (!ok) {
        const auto j = nlohmann::json::parse(report.str());
        for (const auto& m : j.at("mismatches"))
          std::cerr << "absnormal: step " << m.at("step").get<std::uint64_t>() << ": "
                    << m.at("field").get<std::string>() << ": " << m.at("message").get<std::string>() << "\n";
        return kVerify;
      }
    } else if (*lemma) {
      Str out;
      bool passed = true;
      if (l_id == "1" || l_id == "2") {
        const unsigned id = l_id == "1" ? 1 : 2;
        if (l_bases.empty()) l_bases = {2, 3};
        if (l_ks.empty()) l_ks = id == 1 ? std::vector<unsigned>{1, 2, 3} : std::vector<unsigned>{1, 2};
        if (l_Ns.empty())
          for (unsigned e = 4; e <= 10; ++e) l_Ns.push_back(std::uint64_t{1} << e);
        if (l_eps.empty())
          l_eps = id == 1 ? std::vector<std::string>{"1/64", "1/32", "1/16", "1/9", "1/8", "1/4", "1/3", "1/2"}
                          : std::vector<std::string>{"1/4", "1/2", "1"};
        std::vector<const char*> eps;
        for (const auto& e : l_eps) eps.push_back(e.c_str());
        const an_grid grid{l_bases.data(), l_bases.size(), l_ks.data(), l_ks.size(),
                           l_Ns.data(),    l_Ns.size(),    eps.data(),  eps.size()};
        std::uint64_t violations = 0;
        check(an_lemma_grid(id, &grid, l_seed, l_samples, precision, max_events, &violations, &out.p), "lemma");
        passed = violations == 0;
        if (!passed) std::cerr << "absnormal: lemma " << id << ": " << violations << " grid violations\n";
      } else if (l_id == "4" || l_id == "depth") {
        const bool block = l_id == "4";
        const std::uint64_t cases = l_cases ? l_cases : (block ? 50 : 100);
        std::uint64_t failures = 0;
        check(an_decomposition_sweep(block ? "block" : "depth", l_seed, cases, &failures, &out.p), "lemma");
        passed = failures == 0;
        if (!passed) std::cerr << "absnormal: " << failures << " decomposition failures\n";
      } else if (l_id == "5") {
        ScheduleOpts paper;
        Schedule s = load_schedule(paper);
        int holds = 0;
        check(an_tail_check(s.get(), l_n0, precision, &holds, &out.p), "lemma");
        passed = holds != 0;
      } else if (l_id == "chain") {
        int holds = 0;
        check(an_chain_report(l_cases ? l_cases : 20, &holds, &out.p), "lemma");
        passed = holds != 0;
      } else {
        die(kUsage, "unknown lemma id '" + l_id + "' (expected 1, 2, 4, depth, 5 or chain)");
      }
      std::cout << out.str();
      if (!passed) return kVerify;
    } else if (*cost) {
      Str out;
      check(an_cost_report(c_n, precision, &out.p), "cost");
      std::cout << out.str();
    } else if (*presets) {
      Str out;
      check(an_preset_names(&out.p), "presets");
      std::cout << out.str();
    }
  } catch (const Failure& f) {
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << "absnormal: " << e.what() << "\n";
    return kInternal;
  }
  return kOk;
}
