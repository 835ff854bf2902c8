#ifndef ALGOPROB_H
#define ALGOPROB_H

/* Generated by cbindgen from algoprob-ffi; regenerate with cargo build, do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Outcome of every fallible call.
 */
typedef enum {
  AP_STATUS_OK = 0,
  /**
   * Machine index outside its (n,2) space.
   */
  AP_STATUS_INDEX_OUT_OF_RANGE = 1,
  /**
   * A hard capacity limit was exceeded (state count, space size).
   */
  AP_STATUS_CAPACITY = 2,
  /**
   * A parameter failed a precondition.
   */
  AP_STATUS_PARAMETER = 3,
  /**
   * The queried string is not in the distribution.
   */
  AP_STATUS_NOT_OBSERVED = 4,
  /**
   * The two distributions cannot be merged.
   */
  AP_STATUS_INCOMPATIBLE_SOURCES = 5,
  /**
   * Fewer than 3 aligned strings to correlate.
   */
  AP_STATUS_INSUFFICIENT_SUPPORT = 6,
  /**
   * A rank vector has zero variance.
   */
  AP_STATUS_UNDEFINED_CORRELATION = 7,
  /**
   * File read or write failure.
   */
  AP_STATUS_IO = 8,
  /**
   * A distribution file failed validation.
   */
  AP_STATUS_MALFORMED_FILE = 9,
  /**
   * A required pointer argument was NULL.
   */
  AP_STATUS_NULL_POINTER = 10,
  /**
   * A string argument was not valid UTF-8.
   */
  AP_STATUS_INVALID_STRING = 11,
  /**
   * A caller-supplied buffer is too short.
   */
  AP_STATUS_BUFFER_TOO_SMALL = 12,
  /**
   * Internal panic; state is unchanged but the result is lost.
   */
  AP_STATUS_PANIC = 13,
} ApStatus;

/**
 * Support alignment policy for comparisons.
 */
typedef enum {
  /**
   * Strings of length k present in both distributions.
   */
  AP_SUPPORT_POLICY_INTERSECTION = 0,
  /**
   * Strings of length k present in either; absentees count 0.
   */
  AP_SUPPORT_POLICY_UNION_WITH_ZEROS = 1,
} ApSupportPolicy;

/**
 * Opaque pattern distribution handle.
 */
typedef struct ApDistribution ApDistribution;

/**
 * Busy Beaver search result.
 */
typedef struct {
  uint32_t n_states;
  /**
   * Max ones left on the tape by a halting machine.
   */
  uint64_t sigma;
  /**
   * Max steps taken by a halting machine.
   */
  uint64_t s_max;
  uint64_t halting_count;
  uint64_t total_count;
  uint64_t cap_used;
} ApBusyBeaver;

/**
 * Result of running one machine.
 */
typedef struct {
  /**
   * True if the machine reached the halt state within the cap.
   */
  bool halted;
  uint64_t steps;
  /**
   * Ones on the tape when the run ended.
   */
  uint64_t ones_count;
  /**
   * Byte length of the output string (excluding the NUL).
   */
  size_t output_len;
} ApRunOutcome;

/**
 * Rank correlation between two distributions.
 */
typedef struct {
  double rho;
  double p_value;
  /**
   * Aligned strings the statistics were computed over.
   */
  uint64_t pair_count;
} ApCorrelation;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *ap_version(void);

/**
 * Copies the current thread's last error message into `buf` (truncating
 * if needed, always NUL-terminated when `buf_len > 0`) and returns the
 * full message length in bytes, excluding the NUL.
 */
size_t ap_last_error_message(char *buf, size_t buf_len);

/**
 * Builds the blank-tape output distribution of the (n,2) machine space.
 * `workers = 0` uses one thread per core.
 */
ApStatus ap_distribution_build_blank(uint32_t n_states,
                                     uint64_t cap,
                                     size_t workers,
                                     ApDistribution **out);

/**
 * Builds the distribution over seeded pseudorandom tape segments:
 * `samples` tapes of `seg_len` bits per machine, pooled.
 */
ApStatus ap_distribution_build_random(uint32_t n_states,
                                      uint64_t cap,
                                      uint32_t seg_len,
                                      uint32_t samples,
                                      uint64_t seed,
                                      size_t workers,
                                      ApDistribution **out);

/**
 * Loads a distribution from its canonical JSON file.
 */
ApStatus ap_distribution_load(const char *path, ApDistribution **out);

/**
 * Saves a distribution as its canonical JSON file.
 */
ApStatus ap_distribution_save(const ApDistribution *d, const char *path);

/**
 * Releases a distribution handle. NULL is a no-op; freeing twice is
 * undefined behavior.
 */
void ap_distribution_free(ApDistribution *d);

/**
 * Total runs attempted (or windows cut) when the distribution was built.
 */
ApStatus ap_distribution_total_runs(const ApDistribution *d, uint64_t *out);

/**
 * Runs that produced a string; the denominator of every frequency.
 */
ApStatus ap_distribution_contributing_runs(const ApDistribution *d, uint64_t *out);

/**
 * Number of distinct strings in the distribution.
 */
ApStatus ap_distribution_support_size(const ApDistribution *d, size_t *out);

/**
 * Occurrence count of a string; AP_STATUS_NOT_OBSERVED if absent.
 */
ApStatus ap_distribution_count(const ApDistribution *d, const char *s, uint64_t *out);

/**
 * Normalized frequency of a string; AP_STATUS_NOT_OBSERVED if absent.
 */
ApStatus ap_distribution_frequency(const ApDistribution *d, const char *s, double *out);

/**
 * Complexity estimate -log2(frequency(s)) in bits.
 */
ApStatus ap_distribution_ctm_complexity(const ApDistribution *d, const char *s, double *out);

/**
 * 1-based frequency rank of a string; with `length_restricted`, ranked
 * only among strings of the same length.
 */
ApStatus ap_distribution_rank_of(const ApDistribution *d,
                                 const char *s,
                                 bool length_restricted,
                                 uint64_t *out);

/**
 * Entry `index` in canonical order (length, then frequency descending,
 * then lexicographic). The string lands in `buf`; count and frequency in
 * the out pointers. AP_STATUS_PARAMETER if the index is past the end.
 */
ApStatus ap_distribution_entry(const ApDistribution *d,
                               size_t index,
                               char *buf,
                               size_t buf_len,
                               uint64_t *count,
                               double *frequency);

/**
 * Merges two shards of the same build into a new handle.
 */
ApStatus ap_distribution_merge(const ApDistribution *a,
                               const ApDistribution *b,
                               ApDistribution **out);

/**
 * Folds a distribution onto canonical orbit representatives under the
 * reverse/complement symmetry group.
 */
ApStatus ap_distribution_collapse(const ApDistribution *d, ApDistribution **out);

/**
 * Exhaustive Busy Beaver search over the (n,2) space with a step cap.
 */
ApStatus ap_busy_beaver(uint32_t n_states, uint64_t cap, size_t workers, ApBusyBeaver *out);

/**
 * Runs machine `index` of the (n,2) space on an initial tape (a binary
 * string; pass "" for the blank tape) with a step cap. The output string
 * lands in `output_buf`. If the buffer is too small the outcome fields
 * are still filled (`output_len` says how many bytes are needed, plus
 * one for the NUL) and AP_STATUS_BUFFER_TOO_SMALL is returned.
 */
ApStatus ap_run_machine(uint64_t index,
                        uint32_t n_states,
                        const char *initial_tape,
                        uint64_t cap,
                        ApRunOutcome *outcome,
                        char *output_buf,
                        size_t output_buf_len);

/**
 * Number of equivalence classes of length-n binary strings under the
 * reverse/complement group.
 */
ApStatus ap_burnside_count(uint32_t n, uint64_t *out);

/**
 * Canonical (lexicographically least) orbit member of a binary string.
 * The buffer needs the input's length plus one.
 */
ApStatus ap_canonical_form(const char *s, char *buf, size_t buf_len);

/**
 * First `count` decimal digits of pi ("3141..."); the buffer needs
 * `count + 1` bytes.
 */
ApStatus ap_pi_digits(size_t count, char *buf, size_t buf_len);

/**
 * Deflate-compressed size over original size for a byte buffer of at
 * least 64 bytes.
 */
ApStatus ap_compression_ratio(const uint8_t *bytes, size_t len, double *out);

/**
 * Spearman rank correlation of two equal-length vectors (at least 3
 * finite values each).
 */
ApStatus ap_spearman(const double *x, const double *y, size_t len, double *out);

/**
 * Two-sided seeded permutation p-value for the Spearman correlation.
 */
ApStatus ap_permutation_pvalue(const double *x,
                               const double *y,
                               size_t len,
                               uint32_t permutations,
                               uint64_t seed,
                               double *out);

/**
 * Aligns the length-k supports of two distributions under a policy and
 * fills rho, the seeded permutation p-value, and the pair count.
 */
ApStatus ap_compare(const ApDistribution *a,
                    const ApDistribution *b,
                    uint32_t k,
                    ApSupportPolicy policy,
                    uint32_t permutations,
                    uint64_t seed,
                    ApCorrelation *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ALGOPROB_H */
