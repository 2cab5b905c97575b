#ifndef PARITY_JUSTIFY_H
#define PARITY_JUSTIFY_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes.
typedef enum PgStatus {
  PG_STATUS_OK = 0,
  PG_STATUS_VERIFICATION_FAILED = 1,
  PG_STATUS_INVALID_ARGUMENT = 2,
  PG_STATUS_PARSE_ERROR = 3,
  PG_STATUS_BOUND_EXCEEDED = 4,
  PG_STATUS_INTERNAL = 5,
} PgStatus;

// Values accepted for the `algorithm` argument of [`pg_solve`].
typedef enum PgAlgorithm {
  PG_ALGORITHM_FIXPOINT = 0,
  PG_ALGORITHM_ZIELONKA = 1,
  PG_ALGORITHM_PRIORITY_PROMOTION = 2,
} PgAlgorithm;

// Values accepted for the `reset` argument of [`pg_solve`].
typedef enum PgReset {
  PG_RESET_MINIMAL = 0,
  PG_RESET_AGGRESSIVE = 1,
} PgReset;

// A parity game.
typedef struct PgGame PgGame;

// A solution of a parity game.
typedef struct PgSolution PgSolution;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last error on this thread. The pointer stays valid until
// the next failing call on the same thread.
const char *pg_last_error_message(void);

// Parses a game in PGSolver format.
//
// # Safety
// `text` must be a NUL-terminated string and `out` a valid pointer.
enum PgStatus pg_game_parse(const char *text, struct PgGame **out);

// # Safety
// `game` must come from [`pg_game_parse`] and not be freed already.
void pg_game_free(struct PgGame *game);

// Number of nodes, or 0 for a null game.
//
// # Safety
// `game` must be null or a live game handle.
uintptr_t pg_game_node_count(const struct PgGame *game);

// The id a node has in the game file, or `u64::MAX` if `node` is out of
// range.
//
// # Safety
// `game` must be null or a live game handle.
uint64_t pg_game_external_id(const struct PgGame *game, uintptr_t node);

// Writes the game in PGSolver format. Release the string with
// [`pg_string_free`].
//
// # Safety
// `game` must be a live game handle and `out` a valid pointer.
enum PgStatus pg_game_emit(const struct PgGame *game, char **out);

// # Safety
// `s` must be null or a string returned by this library.
void pg_string_free(char *s);

// Solves `game`. `algorithm` is a [`PgAlgorithm`] and `reset` a
// [`PgReset`] value.
//
// # Safety
// `game` must be a live game handle and `out` a valid pointer.
enum PgStatus pg_solve(const struct PgGame *game,
                       uint32_t algorithm,
                       uint32_t reset,
                       struct PgSolution **out);

// Solves `game` by strategy enumeration, refusing games with more than
// `bound` nodes.
//
// # Safety
// `game` must be a live game handle and `out` a valid pointer.
enum PgStatus pg_oracle_solve(const struct PgGame *game, uintptr_t bound, struct PgSolution **out);

// Parses a solution file of `game`.
//
// # Safety
// `game` must be a live game handle, `text` a NUL-terminated string and
// `out` a valid pointer.
enum PgStatus pg_solution_parse(const struct PgGame *game,
                                const char *text,
                                struct PgSolution **out);

// Writes a solution file. Release the string with [`pg_string_free`].
//
// # Safety
// `game` and `solution` must be live handles and `out` a valid pointer.
enum PgStatus pg_solution_emit(const struct PgGame *game,
                               const struct PgSolution *solution,
                               char **out);

// Winner (0 or 1) of `node`, or -1 if the node is out of range.
//
// # Safety
// `solution` must be null or a live solution handle.
int32_t pg_solution_winner(const struct PgSolution *solution, uintptr_t node);

// Successor chosen by the winner at `node`, or -1 if the winner does not
// move there or the node is out of range.
//
// # Safety
// `solution` must be null or a live solution handle.
int64_t pg_solution_strategy(const struct PgSolution *solution, uintptr_t node);

// Checks `solution` against `game`. Returns [`PgStatus::VerificationFailed`]
// with a description of the counterexample when it does not hold.
//
// # Safety
// `game` and `solution` must be live handles.
enum PgStatus pg_solution_verify(const struct PgGame *game, const struct PgSolution *solution);

// # Safety
// `solution` must come from this library and not be freed already.
void pg_solution_free(struct PgSolution *solution);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PARITY_JUSTIFY_H */
