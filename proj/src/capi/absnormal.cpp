#include "absnormal/absnormal.h"

#include "absnormal/constructor.hpp"
#include "absnormal/error.hpp"
#include "absnormal/report.hpp"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

using namespace absnormal;

struct an_schedule {
  ParamSchedule sched;
};

struct an_certificate {
  Certificate cert;
};

namespace {

thread_local std::string last_error;

an_status status_of(ErrorKind k) {
  switch (k) {
    case ErrorKind::invalid_argument: return AN_ERR_INVALID;
    case ErrorKind::budget: return AN_ERR_BUDGET;
    case ErrorKind::indeterminate: return AN_ERR_INDETERMINATE;
    case ErrorKind::parse: return AN_ERR_PARSE;
    case ErrorKind::io: return AN_ERR_IO;
    case ErrorKind::verification: return AN_ERR_VERIFY;
  }
  return AN_ERR_INTERNAL;
}

template <class F>
an_status guard(F&& f) {
  try {
    last_error.clear();
    f();
    return AN_OK;
  } catch (const Error& e) {
    last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return AN_ERR_BUDGET;
  } catch (const std::exception& e) {
    last_error = e.what();
    return AN_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return AN_ERR_INTERNAL;
  }
}

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

void need(const void* p, const char* what) {
  if (!p) fail(ErrorKind::invalid_argument, std::string(what) + " must not be NULL");
}

Budget budget_of(uint64_t max_events) {
  Budget b;
  if (max_events) b.max_events = max_events;
  return b;
}

}  // namespace

extern "C" {

const char* an_version(void) { return "0.1.0"; }
const char* an_last_error(void) { return last_error.c_str(); }
void an_free(char* s) { std::free(s); }

an_status an_preset_names(char** out) {
  return guard([&] {
    need(out, "out");
    std::string s;
    for (const auto& n : ParamSchedule::preset_names()) s += n + "\n";
    *out = dup(s);
  });
}

an_status an_schedule_preset(const char* name, an_schedule** out) {
  return guard([&] {
    need(name, "name");
    need(out, "out");
    *out = new an_schedule{ParamSchedule::named(name)};
  });
}

an_status an_schedule_from_config(const char* text, an_schedule** out) {
  return guard([&] {
    need(text, "text");
    need(out, "out");
    *out = new an_schedule{ParamSchedule::parse_config(text)};
  });
}

an_status an_schedule_config(const an_schedule* s, char** out) {
  return guard([&] {
    need(s, "schedule");
    need(out, "out");
    *out = dup(s->sched.to_config());
  });
}

void an_schedule_free(an_schedule* s) { delete s; }

an_status an_run(const an_schedule* s, uint64_t count, unsigned precision, uint64_t max_events,
                 an_certificate** out) {
  return guard([&] {
    need(s, "schedule");
    need(out, "out");
    *out = new an_certificate{run(s->sched, count, precision, budget_of(max_events))};
  });
}

an_status an_certificate_parse(const char* json, an_certificate** out) {
  return guard([&] {
    need(json, "json");
    need(out, "out");
    *out = new an_certificate{parse_certificate(json)};
  });
}

an_status an_certificate_json(const an_certificate* c, char** out) {
  return guard([&] {
    need(c, "certificate");
    need(out, "out");
    *out = dup(certificate_json(c->cert));
  });
}

an_status an_certificate_digit_file(const an_certificate* c, char** out) {
  return guard([&] {
    need(c, "certificate");
    need(out, "out");
    *out = dup(digit_file(c->cert));
  });
}

an_status an_certificate_digits(const an_certificate* c, char** out) {
  return guard([&] {
    need(c, "certificate");
    need(out, "out");
    *out = dup(c->cert.digits);
  });
}

void an_certificate_free(an_certificate* c) { delete c; }

an_status an_verify(const an_certificate* c, uint64_t max_events, int* ok, char** report) {
  return guard([&] {
    need(c, "certificate");
    need(ok, "ok");
    need(report, "report");
    const VerifyReport rep = verify_certificate(c->cert, budget_of(max_events));
    *ok = rep.ok ? 1 : 0;
    *report = dup(verify_json(rep));
  });
}

an_status an_badset_report(const an_schedule* s, const char* which, unsigned b, uint64_t n, unsigned precision,
                           uint64_t max_events, int list_intervals, char** out) {
  return guard([&] {
    need(s, "schedule");
    need(which, "which");
    need(out, "out");
    const std::string w = which;
    const Budget budget = budget_of(max_events);
    SetEnclosure set;
    SetKind kind;
    if (w == "G") {
      kind = SetKind::G;
      set = g_union(b, n, s->sched, precision, budget);
    } else if (w == "H") {
      kind = SetKind::H;
      set = h_union(b, n, s->sched, precision, budget);
    } else if (w == "delta") {
      kind = SetKind::delta;
      set = delta_n(n, s->sched, precision, budget);
    } else {
      fail(ErrorKind::invalid_argument, "set must be G, H or delta, not '" + w + "'");
    }
    *out = dup(badset_json(set, s->sched, kind, b, n, list_intervals != 0));
  });
}

an_status an_discrepancy_report(const char* x, unsigned b, uint64_t N, unsigned precision, char** json, char** csv) {
  return guard([&] {
    need(x, "x");
    need(json, "json");
    const DiscrepancyReport rep = discrepancy_report(Rational::parse(x), b, N, precision);
    *json = dup(discrepancy_json(rep));
    if (csv) *csv = dup(discrepancy_csv(rep));
  });
}

an_status an_digit_file_value(const char* text, char** out) {
  return guard([&] {
    need(text, "text");
    need(out, "out");
    *out = dup(digits_value(parse_digit_file(text)).str());
  });
}

an_status an_lemma_grid(unsigned lemma, const an_grid* grid, uint64_t seed, uint64_t samples, unsigned precision,
                        uint64_t max_events, uint64_t* violations, char** out) {
  return guard([&] {
    need(grid, "grid");
    need(out, "out");
    if (lemma != 1 && lemma != 2) fail(ErrorKind::invalid_argument, "lemma grid takes lemma 1 or 2");
    std::vector<unsigned> bases(grid->bases, grid->bases + grid->n_bases);
    std::vector<unsigned> ks(grid->ks, grid->ks + grid->n_ks);
    std::vector<std::uint64_t> Ns(grid->Ns, grid->Ns + grid->n_Ns);
    std::vector<Rational> eps;
    for (size_t i = 0; i < grid->n_eps; ++i) eps.push_back(Rational::parse(grid->eps[i]));
    const auto rows = lemma_grid(lemma, bases, ks, Ns, eps, SamplerSpec{seed, samples, 0}, precision,
                                 budget_of(max_events));
    if (violations) {
      *violations = 0;
      for (const auto& r : rows) *violations += r.verdict == "fail";
    }
    *out = dup(lemma_grid_json(lemma, rows));
  });
}

an_status an_decomposition_sweep(const char* kind, uint64_t seed, uint64_t cases, uint64_t* failures, char** out) {
  return guard([&] {
    need(kind, "kind");
    need(out, "out");
    const std::string k = kind;
    uint64_t f = 0;
    if (k == "depth") {
      const auto rows = depth_decomposition_sweep(seed, cases);
      for (const auto& r : rows) f += !r.result.holds;
      *out = dup(depth_sweep_json(seed, rows));
    } else if (k == "block") {
      const auto rows = block_decomposition_sweep(seed, cases);
      for (const auto& r : rows) f += !r.result.holds;
      *out = dup(block_sweep_json(seed, rows));
    } else {
      fail(ErrorKind::invalid_argument, "sweep kind must be depth or block, not '" + k + "'");
    }
    if (failures) *failures = f;
  });
}

an_status an_tail_check(const an_schedule* s, uint64_t n0, unsigned precision, int* holds, char** out) {
  return guard([&] {
    need(s, "schedule");
    need(out, "out");
    if (n0 == 0) n0 = paper_z_floor().get_ui();
    const TailSumCheck c = lemma5_tail_check(s->sched, n0, precision);
    if (holds) *holds = c.holds ? 1 : 0;
    *out = dup(tail_check_json(s->sched, n0, c));
  });
}

an_status an_chain_report(uint64_t n_max, int* holds, char** out) {
  return guard([&] {
    need(out, "out");
    const ChainReport rep = inequality_chain_check(ParamSchedule::paper(), n_max);
    if (holds)
      *holds = rep.below_seven_eighths && rep.with_eta_below_one && rep.chain_below_headroom && rep.increasing;
    *out = dup(chain_json(rep));
  });
}

an_status an_cost_report(uint64_t n, unsigned precision, char** out) {
  return guard([&] {
    need(out, "out");
    *out = dup(cost_json(cost_estimate(n, precision)));
  });
}

}  // extern "C"
