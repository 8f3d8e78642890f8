#ifndef VARIANT_LAB_H
#define VARIANT_LAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum VlStatus {
  VL_STATUS_OK = 0,
  VL_STATUS_NULL_POINTER = 1,
  VL_STATUS_INVALID_UTF8 = 2,
  VL_STATUS_UNKNOWN_VARIANT = 3,
  VL_STATUS_BAD_FEN = 4,
  VL_STATUS_ILLEGAL_MOVE = 5,
  VL_STATUS_GAME_OVER = 6,
  VL_STATUS_INVALID_ARGUMENT = 7,
  VL_STATUS_PANIC = 8,
} VlStatus;

typedef enum VlOutcome {
  VL_OUTCOME_ONGOING = 0,
  VL_OUTCOME_WHITE_WINS = 1,
  VL_OUTCOME_BLACK_WINS = 2,
  VL_OUTCOME_DRAW = 3,
} VlOutcome;

typedef enum VlReason {
  VL_REASON_NONE = 0,
  VL_REASON_CHECKMATE = 1,
  VL_REASON_STALEMATE = 2,
  VL_REASON_FIFTY_MOVE = 3,
  VL_REASON_THREEFOLD_REPETITION = 4,
} VlReason;

// Opaque game state: the current position plus the repetition keys of
// every earlier one.
typedef struct VlPosition VlPosition;

// White-perspective result counts of one game set.
typedef struct VlCounts {
  uint64_t wins;
  uint64_t draws;
  uint64_t losses;
} VlCounts;

// Monte Carlo probability with its standard error.
typedef struct VlProbability {
  double probability;
  double std_error;
} VlProbability;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Initial position of `variant` (an id such as `"torpedo"`).
//
// # Safety
// `variant` must be a NUL-terminated string; `out` must be writable.
enum VlStatus vl_position_new(const char *variant, struct VlPosition **out);

// Position from a standard or extended FEN. The game history starts empty.
//
// # Safety
// `fen` must be a NUL-terminated string; `out` must be writable.
enum VlStatus vl_position_from_fen(const char *fen, struct VlPosition **out);

// Releases a position. Null is ignored.
//
// # Safety
// `p` must come from this library and not be used afterwards.
void vl_position_free(struct VlPosition *p);

// Extended FEN of the current position.
//
// # Safety
// `p` must be a live position; `out` must be writable.
enum VlStatus vl_position_to_fen(const struct VlPosition *p, char **out);

// Legal moves as space-separated LAN in canonical order; empty when none.
//
// # Safety
// `p` must be a live position; `out` must be writable.
enum VlStatus vl_position_legal_moves(const struct VlPosition *p, char **out);

// Plays one LAN move in place. Fails on illegal moves and finished games;
// the position is unchanged on failure.
//
// # Safety
// `p` must be a live position; `lan` must be a NUL-terminated string.
enum VlStatus vl_position_apply(struct VlPosition *p, const char *lan);

// Result of the game so far, including repetitions since creation.
//
// # Safety
// `p` must be a live position; `outcome` and `reason` must be writable.
enum VlStatus vl_position_status(const struct VlPosition *p,
                                 enum VlOutcome *outcome,
                                 enum VlReason *reason);

// Leaf count of the legal move tree below `p`.
//
// # Safety
// `p` must be a live position; `out` must be writable.
enum VlStatus vl_perft(const struct VlPosition *p, uint32_t depth, uint64_t *out);

// Posterior probability that set A draws less often than set B.
//
// # Safety
// `out` must be writable.
enum VlStatus vl_draw_rate_comparison(struct VlCounts a,
                                      struct VlCounts b,
                                      uint64_t samples,
                                      uint64_t seed,
                                      struct VlProbability *out);

// Posterior probability that White's expected score is higher in set A.
//
// # Safety
// `out` must be writable.
enum VlStatus vl_expected_score_comparison(struct VlCounts a,
                                           struct VlCounts b,
                                           uint64_t samples,
                                           uint64_t seed,
                                           struct VlProbability *out);

// Copy of this thread's last error message, or null if there was none.
// Free it with [`vl_string_free`].
char *vl_last_error_message(void);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not be used afterwards.
void vl_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* VARIANT_LAB_H */
