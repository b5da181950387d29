#ifndef FROBML_H
#define FROBML_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum FmlQuestion {
  /**
   * X ∩ Γ is nonempty.
   */
  FML_QUESTION_NONEMPTY = 0,
  /**
   * X ∩ Γ is infinite.
   */
  FML_QUESTION_INFINITE = 1,
  /**
   * X ∩ Γ contains a coset of an infinite subgroup.
   */
  FML_QUESTION_INFINITE_COSET = 2,
} FmlQuestion;

/**
 * Status codes. Nonzero values agree with the command-line exit codes
 * where both exist.
 */
typedef enum FmlStatus {
  FML_STATUS_OK = 0,
  FML_STATUS_INVALID_INPUT = 2,
  FML_STATUS_CAP_EXCEEDED = 3,
  FML_STATUS_INTERNAL = 4,
  FML_STATUS_NULL_ARGUMENT = 5,
  FML_STATUS_PANIC = 6,
} FmlStatus;

/**
 * The automata for one problem.
 */
typedef struct FmlAnalysis FmlAnalysis;

/**
 * A validated problem.
 */
typedef struct FmlProblem FmlProblem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer is
 * valid until the next `fml_*` call on the same thread.
 */
const char *fml_last_error(void);

/**
 * Parses and validates a problem given as JSON. Relative digit-set paths
 * are resolved against `base_dir`, which may be null for the current
 * directory.
 *
 * # Safety
 * `json` and a non-null `base_dir` are NUL-terminated strings; `out` is
 * valid for one pointer write.
 */
enum FmlStatus fml_problem_from_json(const char *json,
                                     const char *base_dir,
                                     struct FmlProblem **out);

/**
 * # Safety
 * `problem` is null or came from [`fml_problem_from_json`] and was not freed.
 */
void fml_problem_free(struct FmlProblem *problem);

/**
 * Number of digits in the problem's digit set.
 *
 * # Safety
 * `problem` is a live handle; `out` is valid for one write.
 */
enum FmlStatus fml_problem_digit_count(const struct FmlProblem *problem, size_t *out);

/**
 * Builds the machine and both minimized languages.
 *
 * # Safety
 * `problem` is a live handle; `out` is valid for one pointer write.
 */
enum FmlStatus fml_analyze(const struct FmlProblem *problem, struct FmlAnalysis **out);

/**
 * # Safety
 * `analysis` is null or came from [`fml_analyze`] and was not freed.
 */
void fml_analysis_free(struct FmlAnalysis *analysis);

/**
 * State counts of the machine, of L and of the representative language.
 *
 * # Safety
 * `analysis` is a live handle; each out-pointer is valid for one write.
 */
enum FmlStatus fml_analysis_state_counts(const struct FmlAnalysis *analysis,
                                         size_t *machine,
                                         size_t *language,
                                         size_t *representatives);

/**
 * # Safety
 * `analysis` is a live handle; `answer` is valid for one write.
 */
enum FmlStatus fml_decide(const struct FmlAnalysis *analysis,
                          enum FmlQuestion question,
                          bool *answer);

/**
 * Orbit decomposition as a JSON array.
 *
 * # Safety
 * `analysis` is a live handle; `out` is valid for one pointer write.
 */
enum FmlStatus fml_decompose_json(const struct FmlAnalysis *analysis, char **out);

/**
 * Per-length counts of the representative language as CSV with columns
 * n, count, cumulative.
 *
 * # Safety
 * `analysis` is a live handle; `out` is valid for one pointer write.
 */
enum FmlStatus fml_census_csv(const struct FmlAnalysis *analysis, size_t max_len, char **out);

/**
 * Number of points of X ∩ Γ of height at most `height`.
 *
 * # Safety
 * `analysis` is a live handle; `out` is valid for one write.
 */
enum FmlStatus fml_count_by_height(const struct FmlAnalysis *analysis,
                                   uint64_t height,
                                   uint64_t *out);

/**
 * F-pure hull of the module generated by the problem's generators, which
 * must live in G_a. The result is JSON.
 *
 * # Safety
 * `json` is a NUL-terminated string; `out` is valid for one pointer write.
 */
enum FmlStatus fml_hull_json(const char *json, char **out);

/**
 * # Safety
 * `s` is null or a string returned by this library and not yet freed.
 */
void fml_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FROBML_H */
