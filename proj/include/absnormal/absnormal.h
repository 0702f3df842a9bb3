/* C interface to the absnormal engine. Strings returned through char**
 * out-parameters are owned by the caller and released with an_free. On a
 * non-zero status, an_last_error() describes the failure (thread-local). */
#ifndef ABSNORMAL_H
#define ABSNORMAL_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define AN_API __declspec(dllexport)
#else
#define AN_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum an_status {
  AN_OK = 0,
  AN_ERR_INVALID = 1,       /* precondition or domain violation */
  AN_ERR_BUDGET = 2,        /* work budget would be exceeded */
  AN_ERR_INDETERMINATE = 3, /* precision refinement cap reached */
  AN_ERR_PARSE = 4,
  AN_ERR_IO = 5,
  AN_ERR_VERIFY = 6,
  AN_ERR_INTERNAL = 7
} an_status;

typedef struct an_schedule an_schedule;
typedef struct an_certificate an_certificate;

AN_API const char* an_version(void);
AN_API const char* an_last_error(void);
AN_API void an_free(char* s);

/* Newline-separated preset names. */
AN_API an_status an_preset_names(char** out);

/* Schedules. */
AN_API an_status an_schedule_preset(const char* name, an_schedule** out);
AN_API an_status an_schedule_from_config(const char* text, an_schedule** out);
AN_API an_status an_schedule_config(const an_schedule* s, char** out);
AN_API void an_schedule_free(an_schedule* s);

/* Construction. max_events = 0 selects the default budget. */
AN_API an_status an_run(const an_schedule* s, uint64_t count, unsigned precision, uint64_t max_events,
                        an_certificate** out);
AN_API an_status an_certificate_parse(const char* json, an_certificate** out);
AN_API an_status an_certificate_json(const an_certificate* c, char** out);
AN_API an_status an_certificate_digit_file(const an_certificate* c, char** out);
AN_API an_status an_certificate_digits(const an_certificate* c, char** out);
AN_API void an_certificate_free(an_certificate* c);
/* *ok is 1 when every step re-verifies; report is a JSON record either way. */
AN_API an_status an_verify(const an_certificate* c, uint64_t max_events, int* ok, char** report);

/* Bad sets: which is "G", "H" or "delta" (b ignored for delta). */
AN_API an_status an_badset_report(const an_schedule* s, const char* which, unsigned b, uint64_t n,
                                  unsigned precision, uint64_t max_events, int list_intervals, char** out);

/* Discrepancy of the orbit of x = "num/den" (or a decimal integer). csv may
 * be NULL. */
AN_API an_status an_discrepancy_report(const char* x, unsigned b, uint64_t N, unsigned precision, char** json,
                                       char** csv);
/* "num/den" value 0.d1d2... of a digit file's contents. */
AN_API an_status an_digit_file_value(const char* text, char** out);

typedef struct an_grid {
  const unsigned* bases;
  size_t n_bases;
  const unsigned* ks; /* k for Lemma 2, m for Lemma 1 */
  size_t n_ks;
  const uint64_t* Ns;
  size_t n_Ns;
  const char* const* eps; /* "num/den" */
  size_t n_eps;
} an_grid;

/* Lemma 1 or 2 bound-versus-measure table. *violations counts rows with a
 * non-vacuous bound that fail. */
AN_API an_status an_lemma_grid(unsigned lemma, const an_grid* grid, uint64_t seed, uint64_t samples,
                               unsigned precision, uint64_t max_events, uint64_t* violations, char** out);
/* kind "depth" or "block" (Lemma 4). */
AN_API an_status an_decomposition_sweep(const char* kind, uint64_t seed, uint64_t cases, uint64_t* failures,
                                        char** out);
/* Lemma 5 tail sum for the schedule from n0 (0: least integer above
 * e^(12/log 2)). */
AN_API an_status an_tail_check(const an_schedule* s, uint64_t n0, unsigned precision, int* holds, char** out);
AN_API an_status an_chain_report(uint64_t n_max, int* holds, char** out);
AN_API an_status an_cost_report(uint64_t n, unsigned precision, char** out);

#ifdef __cplusplus
}
#endif

#endif
