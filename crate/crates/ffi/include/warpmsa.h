#ifndef WARPMSA_H
#define WARPMSA_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible call.
typedef enum WmStatus {
  WM_STATUS_OK = 0,
  WM_STATUS_NULL_POINTER = 1,
  WM_STATUS_INVALID_UTF8 = 2,
  WM_STATUS_PARSE = 3,
  WM_STATUS_INVALID_ARGUMENT = 4,
  WM_STATUS_ALIGNMENT = 5,
  WM_STATUS_IO = 6,
  WM_STATUS_PANIC = 7,
} WmStatus;

typedef enum WmAlphabet {
  WM_ALPHABET_DNA = 0,
  WM_ALPHABET_PROTEIN = 1,
} WmAlphabet;

typedef enum WmMode {
  WM_MODE_GLOBAL = 0,
  WM_MODE_OVERLAP = 1,
} WmMode;

// Multiple alignment.
typedef struct WmMsa WmMsa;

// Substitution matrix with gap penalties and alignment mode.
typedef struct WmScheme WmScheme;

// Sequence set.
typedef struct WmSequences WmSequences;

typedef struct WmScoreReport {
  double sp;
  double tc;
  uint64_t aligned_pairs_ref;
  uint64_t aligned_pairs_correct;
  uint64_t columns_ref;
  uint64_t columns_correct;
} WmScoreReport;

typedef struct WmSimParams {
  uintptr_t n_ancestor;
  uintptr_t k;
  double lambda;
  double mu;
  double alpha;
  double branch_length;
  uint64_t seed;
} WmSimParams;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or null. Valid until the
// next failing call on the same thread.
const char *wm_last_error(void);

// # Safety
// `s` must be null or a string returned by this library, not yet freed.
void wm_string_free(char *s);

// Parses FASTA text.
//
// # Safety
// `text` must be a NUL-terminated string; `out` must be writable.
enum WmStatus wm_sequences_from_fasta(const char *text,
                                      enum WmAlphabet alpha,
                                      struct WmSequences **out);

// # Safety
// `seqs` must be null or a live handle.
uintptr_t wm_sequences_count(const struct WmSequences *seqs);

// # Safety
// `seqs` must be null or a handle not yet freed.
void wm_sequences_free(struct WmSequences *seqs);

// Default DNA scheme: match 5, mismatch -4, gap open 10, extend 0.5.
struct WmScheme *wm_scheme_dna_default(enum WmMode m);

// BLOSUM62, gap open 10, extend 0.5.
struct WmScheme *wm_scheme_blosum62(enum WmMode m);

// # Safety
// `scheme` must be null or a handle not yet freed.
void wm_scheme_free(struct WmScheme *scheme);

// Aligns two sequences. Writes the score and the path as text, one `x,y`
// point per line; free the path with [`wm_string_free`].
//
// # Safety
// String arguments must be NUL-terminated, handles live, outputs writable.
enum WmStatus wm_align_pair(const char *x,
                            const char *y,
                            enum WmAlphabet alpha,
                            const struct WmScheme *scheme,
                            double *score_out,
                            char **path_out);

// Builds the median-warping MSA. `distances` may be null; otherwise it holds
// one distance per sequence and weighted medians are used.
//
// # Safety
// Handles must be live, `distances` null or readable for
// `wm_sequences_count(seqs)` values, `out` writable.
enum WmStatus wm_align(const struct WmSequences *seqs,
                       const struct WmScheme *scheme,
                       const double *distances,
                       double epsilon,
                       struct WmMsa **out);

// Parses aligned FASTA text.
//
// # Safety
// `text` must be NUL-terminated; `out` writable.
enum WmStatus wm_msa_from_fasta(const char *text, enum WmAlphabet alpha, struct WmMsa **out);

// Writes the alignment as aligned FASTA; free with [`wm_string_free`].
//
// # Safety
// `msa` must be live; `out` writable.
enum WmStatus wm_msa_to_fasta(const struct WmMsa *msa, char **out);

// # Safety
// `msa` must be null or live.
uintptr_t wm_msa_rows(const struct WmMsa *msa);

// # Safety
// `msa` must be null or live.
uintptr_t wm_msa_width(const struct WmMsa *msa);

// # Safety
// `msa` must be null or a handle not yet freed.
void wm_msa_free(struct WmMsa *msa);

// SP and TC of `test` against `reference`.
//
// # Safety
// Handles must be live; `out` writable.
enum WmStatus wm_score(const struct WmMsa *test,
                       const struct WmMsa *reference,
                       struct WmScoreReport *out);

// Default simulation parameters (N 100, K 10, lambda = mu = 0.03,
// alpha 0.1, t 1, seed 0).
struct WmSimParams wm_sim_params_default(void);

// Simulates descendants and their true alignment.
//
// # Safety
// `params` must be readable; outputs writable.
enum WmStatus wm_simulate(const struct WmSimParams *params,
                          struct WmSequences **descendants,
                          struct WmMsa **reference);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WARPMSA_H */
