/*
 * epic - a workbench for the epi-calculus (pi-calculus with polyadic
 * synchronisation), its tree-shaped channel type system, the WC class
 * language, and the WC-to-epi compiler.
 *
 * C interface over the C++ core: opaque handles, status codes, and strings
 * the caller releases with epic_string_free. Every function that can fail
 * takes a char** error out-parameter (may be NULL); on failure it receives a
 * malloc'd message.
 */
#ifndef EPIC_H
#define EPIC_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum epic_status {
  EPIC_OK = 0,
  EPIC_ERR_PARSE = 1,
  EPIC_ERR_TYPE = 2,
  EPIC_ERR_EVAL = 3,
  EPIC_ERR_STATE_EXPLOSION = 4,
  EPIC_ERR_FUEL = 5,
  EPIC_ERR_STUCK = 6,
  EPIC_ERR_DECODE = 7,
  EPIC_ERR_UNTRANSLATABLE = 8,
  EPIC_ERR_INVALID = 9
} epic_status;

typedef struct epic_process epic_process;     /* an epi process term */
typedef struct epic_typeenv epic_typeenv;     /* a Gamma */
typedef struct epic_wcprogram epic_wcprogram; /* a parsed WC program */
typedef struct epic_unit epic_unit;           /* a compiled WC program */

void epic_string_free(char* s);
void epic_process_free(epic_process* p);
void epic_typeenv_free(epic_typeenv* g);
void epic_wcprogram_free(epic_wcprogram* p);
void epic_unit_free(epic_unit* u);

/* --- parsing and printing ------------------------------------------------ */

epic_status epic_process_parse(const char* text, epic_process** out, char** error);
char* epic_process_print(const epic_process* p);

epic_status epic_typeenv_parse(const char* text, epic_typeenv** out, char** error);
char* epic_typeenv_print(const epic_typeenv* g);

epic_status epic_wcprogram_parse(const char* text, epic_wcprogram** out, char** error);
char* epic_wcprogram_print(const epic_wcprogram* p);
/* newline-separated parser warnings (shadowed variables renamed); "" if none */
char* epic_wcprogram_warnings(const epic_wcprogram* p);

/* --- epi type system ----------------------------------------------------- */

/* EPIC_OK or EPIC_ERR_TYPE with newline-separated diagnostics */
epic_status epic_typeenv_wellformed(const epic_typeenv* g, char** error);
epic_status epic_check_process(const epic_typeenv* g, const epic_process* p, char** error);
/* the error predicate; 1 = wrong, 0 = now-safe */
int epic_wrong(const epic_typeenv* g, const epic_process* p);
/* frontier_cap 0 uses EPIC_FRONTIER_CAP or the built-in default */
epic_status epic_safe_bounded(const epic_typeenv* g, const epic_process* p, size_t depth,
                              size_t frontier_cap, int* is_safe, char** error);

/* --- epi semantics -------------------------------------------------------- */

/* format: 0 = text lines "<label>  ->  <process>", 1 = JSON array */
epic_status epic_step(const epic_process* p, int format, char** out, char** error);

/* strategy: 0 = deterministic, 1 = seeded random.
 * format: 0 = text ("tau: <process>" per step), 1 = JSON array of
 * {step,label,process}. final_state/quiescent may be NULL. */
epic_status epic_run_tau(const epic_process* p, int strategy, size_t max_steps, uint64_t seed,
                         int format, char** trace, epic_process** final_state, int* quiescent,
                         char** error);

/* --- WC ------------------------------------------------------------------ */

epic_status epic_wc_check(const epic_wcprogram* p, char** error);
/* runs main; output is the final field store, "A.p = v" per line, sorted */
epic_status epic_wc_run(const epic_wcprogram* p, uint64_t fuel, char** output, char** error);

/* --- compiler -------------------------------------------------------------*/

epic_status epic_compile(const epic_wcprogram* p, epic_unit** out, char** error);
epic_process* epic_unit_process(const epic_unit* u);
epic_typeenv* epic_unit_typeenv(const epic_unit* u);
/* {"A.p": "A*p", ...} */
char* epic_unit_decoder_json(const epic_unit* u);

/* --- harnesses ------------------------------------------------------------*/

enum {
  EPIC_CORRESPOND_AGREE_POSITIVE = 0,
  EPIC_CORRESPOND_AGREE_NEGATIVE = 1,
  EPIC_CORRESPOND_DISAGREE = 2,
  EPIC_CORRESPOND_UNTRANSLATABLE = 3
};
epic_status epic_correspond(const epic_wcprogram* p, int* verdict, char** report);

enum { EPIC_AGREE_MATCH = 0, EPIC_AGREE_MISMATCH = 1, EPIC_AGREE_NONTERMINATING = 2 };
epic_status epic_agree(const epic_wcprogram* p, size_t max_steps, uint64_t seed, int* verdict,
                       char** report, char** error);

/* generative soundness campaign; *failures receives the failure count */
epic_status epic_fuzz(size_t count, uint64_t seed, size_t term_depth, size_t max_vec,
                      size_t pool, size_t explore_depth, size_t* failures, char** summary);
epic_status epic_lemma_checks(size_t count, uint64_t seed, size_t* failures, char** summary);

#ifdef __cplusplus
}
#endif

#endif /* EPIC_H */
