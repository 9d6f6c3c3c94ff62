#ifndef MUCB_H
#define MUCB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stddef.h>
#include <stdint.h>

typedef enum MucbPolicyKind {
  MUCB_POLICY_KIND_MUCB_INTERVALS = 0,
  MUCB_POLICY_KIND_CENTRALIZED_UCB = 1,
  MUCB_POLICY_KIND_ETC_DSEE_STYLE = 2,
} MucbPolicyKind;

typedef enum MucbDeltaMode {
  // `delta = 1/T^2`.
  MUCB_DELTA_MODE_INVERSE_T_SQUARED = 0,
  // `delta = T^(-2/gamma)`.
  MUCB_DELTA_MODE_PROOF_SCHEDULE = 1,
  // Use `MucbPolicy::delta` as given.
  MUCB_DELTA_MODE_EXPLICIT = 2,
} MucbDeltaMode;

// Result of every fallible call.
typedef enum MucbStatus {
  MUCB_STATUS_OK = 0,
  MUCB_STATUS_NULL_POINTER = 1,
  // An argument is outside its domain.
  MUCB_STATUS_INVALID_ARGUMENT = 2,
  // A configuration (file or policy) is not runnable.
  MUCB_STATUS_CONFIG = 3,
  MUCB_STATUS_IO = 4,
  MUCB_STATUS_BUFFER_TOO_SMALL = 5,
  // The requested data does not exist for this run (for example the
  // desired set of a baseline policy).
  MUCB_STATUS_UNAVAILABLE = 6,
  // A bug inside the library; the handle arguments are still valid.
  MUCB_STATUS_PANIC = 7,
  // Any other library error.
  MUCB_STATUS_INTERNAL = 8,
} MucbStatus;

// Opaque reward environment.
typedef struct MucbEnvironment MucbEnvironment;

// Opaque record of one finished episode.
typedef struct MucbRun MucbRun;

// Policy parameters. Start from [`mucb_policy_default`] and override
// fields; fields that do not apply to `kind` are ignored.
typedef struct MucbPolicy {
  enum MucbPolicyKind kind;
  double gamma;
  enum MucbDeltaMode delta_mode;
  double delta;
  double explore_growth;
  double commit_growth;
} MucbPolicy;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *mucb_version(void);

// Message for the last failed call on this thread, or null if none.
// Valid until the next failing call on the same thread.
const char *mucb_last_error(void);

// Default parameters for `kind`: gamma 0.5, delta 1/T^2, ETC growth 2 and 4.
struct MucbPolicy mucb_policy_default(enum MucbPolicyKind kind);

// Samples Gaussian means from U(mean_low, mean_high) and standard
// deviations from U(sd_low, sd_high) for every joint action.
//
// # Safety
// `arms_per_player` must point to `num_players` values; `out` must be a
// valid pointer.
enum MucbStatus mucb_environment_random(size_t num_players,
                                        const size_t *arms_per_player,
                                        double mean_low,
                                        double mean_high,
                                        double sd_low,
                                        double sd_high,
                                        uint64_t seed,
                                        struct MucbEnvironment **out);

// Environment with given means and standard deviations, both indexed by
// joint-action id (lexicographic order, first player slowest).
//
// # Safety
// `arms_per_player` must point to `num_players` values, `means` and `sds`
// to one value per joint action; `out` must be a valid pointer.
enum MucbStatus mucb_environment_fixed(size_t num_players,
                                       const size_t *arms_per_player,
                                       const double *means,
                                       const double *sds,
                                       struct MucbEnvironment **out);

// # Safety
// `env` must be null or a handle from this library not yet freed.
void mucb_environment_free(struct MucbEnvironment *env);

// Number of joint actions, or 0 for a null handle.
//
// # Safety
// `env` must be null or a live handle.
size_t mucb_environment_num_actions(const struct MucbEnvironment *env);

// Copies the mean table (one entry per joint action).
//
// # Safety
// `env` must be a live handle; `buf` must hold `cap` values.
enum MucbStatus mucb_environment_means(const struct MucbEnvironment *env,
                                       double *buf,
                                       size_t cap,
                                       size_t *len_out);

// Copies the gap table `mu_star - mean`.
//
// # Safety
// `env` must be a live handle; `buf` must hold `cap` values.
enum MucbStatus mucb_environment_gaps(const struct MucbEnvironment *env,
                                      double *buf,
                                      size_t cap,
                                      size_t *len_out);

// # Safety
// `env` must be a live handle; `out` must be a valid pointer.
enum MucbStatus mucb_environment_optimal_action(const struct MucbEnvironment *env, size_t *out);

// Plays `policy` for `horizon` rounds with reward seed `seed`.
//
// # Safety
// `env` and `policy` must be live; `out` must be a valid pointer.
enum MucbStatus mucb_run_episode(const struct MucbEnvironment *env,
                                 const struct MucbPolicy *policy,
                                 uint64_t horizon,
                                 uint64_t seed,
                                 struct MucbRun **out);

// # Safety
// `run` must be null or a handle from this library not yet freed.
void mucb_run_free(struct MucbRun *run);

// Rounds played, or 0 for a null handle.
//
// # Safety
// `run` must be null or a live handle.
uint64_t mucb_run_horizon(const struct MucbRun *run);

// # Safety
// `run` must be a live handle; `out` must be a valid pointer.
enum MucbStatus mucb_run_final_regret(const struct MucbRun *run, double *out);

// Cumulative pseudo-regret after each round.
//
// # Safety
// `run` must be a live handle; `buf` must hold `cap` values.
enum MucbStatus mucb_run_regret_trace(const struct MucbRun *run,
                                      double *buf,
                                      size_t cap,
                                      size_t *len_out);

// Joint-action id taken in each round.
//
// # Safety
// `run` must be a live handle; `buf` must hold `cap` values.
enum MucbStatus mucb_run_actions(const struct MucbRun *run,
                                 size_t *buf,
                                 size_t cap,
                                 size_t *len_out);

// Pull count of each joint action.
//
// # Safety
// `run` must be a live handle; `buf` must hold `cap` values.
enum MucbStatus mucb_run_pull_counts(const struct MucbRun *run,
                                     uint64_t *buf,
                                     size_t cap,
                                     size_t *len_out);

// Eliminations as parallel arrays of one-based rounds and action ids.
// Both buffers must hold `cap` values.
//
// # Safety
// `run` must be a live handle; `rounds` and `actions` must hold `cap`
// values each.
enum MucbStatus mucb_run_eliminations(const struct MucbRun *run,
                                      uint64_t *rounds,
                                      size_t *actions,
                                      size_t cap,
                                      size_t *len_out);

// Surviving candidates at the horizon in agreed order. Only mUCB-Intervals
// runs have one; others return `MUCB_STATUS_UNAVAILABLE`.
//
// # Safety
// `run` must be a live handle; `buf` must hold `cap` values.
enum MucbStatus mucb_run_final_desired(const struct MucbRun *run,
                                       size_t *buf,
                                       size_t cap,
                                       size_t *len_out);

// `|R_T - sum over actions of gap * pulls|` for a run played on `env`.
//
// # Safety
// `run` and `env` must be live; `out` must be a valid pointer.
enum MucbStatus mucb_run_decomposition_residual(const struct MucbRun *run,
                                                const struct MucbEnvironment *env,
                                                double *out);

// Runs the experiment described by a TOML config file, writing its CSV,
// summary and plot files under the config's `output_dir`.
//
// # Safety
// `config_path` must be a NUL-terminated UTF-8 path.
enum MucbStatus mucb_run_experiment_file(const char *config_path);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MUCB_H */
