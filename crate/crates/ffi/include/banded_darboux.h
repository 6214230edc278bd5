#ifndef BANDED_DARBOUX_H
#define BANDED_DARBOUX_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define BD_COMMAND_GEN 0

#define BD_COMMAND_FACTORIZE 1

#define BD_COMMAND_TRANSFORM 2

#define BD_COMMAND_POLYS 3

#define BD_COMMAND_VERIFY 4

typedef enum BdStatus {
  BD_STATUS_OK = 0,
  BD_STATUS_CONFIG = 1,
  BD_STATUS_HYPOTHESIS = 2,
  BD_STATUS_SINGULAR_MINOR = 3,
  BD_STATUS_INTERNAL = 4,
  /**
   * Null pointer, invalid UTF-8 or unknown command.
   */
  BD_STATUS_INVALID_ARGUMENT = 5,
  /**
   * A panic was caught at the boundary.
   */
  BD_STATUS_PANIC = 6,
} BdStatus;

/**
 * Parsed instance configuration.
 */
typedef struct BdConfig BdConfig;

/**
 * Result of one command run.
 */
typedef struct BdReport BdReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version, a static string.
 */
const char *bd_version(void);

/**
 * Message of the last failure on this thread, or null. Valid until the
 * next call into the library from the same thread.
 */
const char *bd_last_error(void);

/**
 * Parse a JSON configuration into `*out`.
 *
 * # Safety
 * `json` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum BdStatus bd_config_from_json(const char *json, struct BdConfig **out);

/**
 * Override the seed.
 *
 * # Safety
 * `config` must come from [`bd_config_from_json`] and not be freed.
 */
enum BdStatus bd_config_set_seed(struct BdConfig *config, uint64_t seed);

/**
 * Override the shift `C`, given as `"num/den"`.
 *
 * # Safety
 * `config` must come from [`bd_config_from_json`]; `shift` must be a valid
 * NUL-terminated string.
 */
enum BdStatus bd_config_set_shift(struct BdConfig *config, const char *shift);

/**
 * # Safety
 * `config` must come from [`bd_config_from_json`] or be null.
 */
void bd_config_free(struct BdConfig *config);

/**
 * Run `command` (one of the `BD_COMMAND_*` values). `j < 0` selects all
 * stages for transform and polys. On statuses 0 to 4 a report is stored in
 * `*out` and must be released with [`bd_report_free`].
 *
 * # Safety
 * `config` must come from [`bd_config_from_json`]; `out` must be valid.
 */
enum BdStatus bd_run(const struct BdConfig *config,
                     uint32_t command,
                     int64_t j,
                     struct BdReport **out);

/**
 * Exit code of the run, as the CLI would return it.
 *
 * # Safety
 * `report` must come from [`bd_run`] and not be freed.
 */
int32_t bd_report_exit_code(const struct BdReport *report);

/**
 * JSON report, borrowed from `report`.
 *
 * # Safety
 * `report` must come from [`bd_run`] and not be freed.
 */
const char *bd_report_json(const struct BdReport *report);

/**
 * Human-readable table, borrowed from `report`.
 *
 * # Safety
 * `report` must come from [`bd_run`] and not be freed.
 */
const char *bd_report_table(const struct BdReport *report);

/**
 * # Safety
 * `report` must come from [`bd_run`] or be null.
 */
void bd_report_free(struct BdReport *report);

/**
 * One-shot `verify`: parse `config_json`, run, and store an owned copy of
 * the JSON report in `*report_json` (release with [`bd_string_free`]).
 *
 * # Safety
 * `config_json` must be a valid NUL-terminated string and `report_json` a
 * valid pointer.
 */
enum BdStatus bd_verify_json(const char *config_json, char **report_json);

/**
 * # Safety
 * `s` must come from [`bd_verify_json`] or be null.
 */
void bd_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BANDED_DARBOUX_H */
