#ifndef BAC_H
#define BAC_H

/* This header is generated by cbindgen from the bac-ffi crate; edit the Rust source instead. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Error category of the most recent failing call on this thread.
 */
typedef enum BacErrorCode {
  BacOk = 0,
  BacInvalidArgument = 1,
  BacParseError = 2,
  BacIoError = 3,
} BacErrorCode;

/**
 * Opaque catalog handle.
 */
typedef struct BacCatalog BacCatalog;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Returns a handle to the embedded default catalog. Never fails.
 */
struct BacCatalog *bac_catalog_default(void);

/**
 * Loads a catalog file. Returns NULL on failure.
 *
 * # Safety
 * `path` must be a NUL-terminated C string valid for the call.
 */
struct BacCatalog *bac_catalog_open(const char *path);

/**
 * Frees a catalog handle. NULL is ignored.
 *
 * # Safety
 * `catalog` must be NULL or a pointer returned by a `bac_catalog_*`
 * constructor, not yet freed.
 */
void bac_catalog_free(struct BacCatalog *catalog);

/**
 * Number of behavior records in the catalog; 0 for NULL.
 *
 * # Safety
 * `catalog` must be NULL or a live catalog handle.
 */
uintptr_t bac_catalog_behavior_count(const struct BacCatalog *catalog);

/**
 * Lints story source text against the catalog. Returns a JSON array of
 * findings (`file`, `line`, `step`, `reason`), or NULL on parse failure.
 *
 * # Safety
 * `catalog` must be a live handle; `source` and `name` valid C strings
 * (`name` may be NULL).
 */
char *bac_lint_story(const struct BacCatalog *catalog, const char *source, const char *name);

/**
 * Assesses task-model scenarios. `models_path` may be NULL when every
 * scenario file is already enriched. Returns the JSON report or NULL.
 *
 * # Safety
 * `catalog` must be a live handle; paths valid C strings.
 */
char *bac_check_tasks(const struct BacCatalog *catalog,
                      const char *story_path,
                      const char *scenarios_path,
                      const char *models_path);

/**
 * Assesses a prototype file. `mapping_path` may be NULL for the embedded
 * mapping; `fail_fast` 0 assesses every step. Returns the JSON report or
 * NULL.
 *
 * # Safety
 * `catalog` must be a live handle; paths valid C strings.
 */
char *bac_check_prototype(const struct BacCatalog *catalog,
                          const char *story_path,
                          const char *prototype_path,
                          const char *mapping_path,
                          int fail_fast);

/**
 * Assesses a final GUI behind a page map. `fail_fast` 0 assesses every
 * step; `seed` drives the data-generation behaviors. Returns the JSON
 * report or NULL.
 *
 * # Safety
 * `catalog` must be a live handle; paths valid C strings.
 */
char *bac_check_gui(const struct BacCatalog *catalog,
                    const char *story_path,
                    const char *page_map_path,
                    uint64_t seed,
                    int fail_fast);

/**
 * Exit-code semantics over a JSON report produced by the check functions:
 * 0 consistent, 1 inconsistencies present, 2 unparsable report.
 *
 * # Safety
 * `report_json` must be a valid C string.
 */
int bac_report_exit_code(const char *report_json);

/**
 * Error category of the most recent failing call on this thread.
 */
enum BacErrorCode bac_last_error_code(void);

/**
 * Message of the most recent failing call on this thread, or NULL. The
 * pointer is valid until the next failing call on the same thread.
 */
const char *bac_last_error_message(void);

/**
 * Frees a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must be NULL or a pointer returned by one of the JSON-returning
 * functions, not yet freed.
 */
void bac_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BAC_H */
