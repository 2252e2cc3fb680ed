#ifndef FIBERCHECK_H
#define FIBERCHECK_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Output flavour of text reports.
 */
typedef enum FcFormat {
  FC_FORMAT_TEXT = 0,
  FC_FORMAT_MACHINE = 1,
} FcFormat;

/*
 Result of every call.
 */
typedef enum FcStatus {
  FC_STATUS_OK = 0,
  /*
   The call ran and a checked property does not hold.
   */
  FC_STATUS_FAILED = 1,
  /*
   Malformed model text, unknown identifiers, or invalid models.
   */
  FC_STATUS_INVALID_INPUT = 2,
  FC_STATUS_NULL_ARGUMENT = 3,
  FC_STATUS_NOT_FOUND = 4,
  /*
   A bug inside the library; the handle arguments stay valid.
   */
  FC_STATUS_PANIC = 5,
} FcStatus;

/*
 The classification of one functor.
 */
typedef struct FcClassification FcClassification;

/*
 A parsed and resolved model file.
 */
typedef struct FcModel FcModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Library version as a static NUL-terminated string.
 */
const char *fc_version(void);

/*
 A copy of the last error message on this thread, or null. Free with
 [`fc_string_free`].
 */
char *fc_last_error(void);

/*
 Releases a string returned by this library. Null is ignored.

 # Safety
 `s` must come from this library and not have been freed.
 */
void fc_string_free(char *s);

/*
 Parses model text.

 # Safety
 `text` must be a NUL-terminated string; `out` must be writable.
 */
enum FcStatus fc_model_parse(const char *text, struct FcModel **out);

/*
 Reads and parses a model file.

 # Safety
 `path` must be a NUL-terminated string; `out` must be writable.
 */
enum FcStatus fc_model_read(const char *path, struct FcModel **out);

/*
 # Safety
 `model` must come from [`fc_model_parse`] or [`fc_model_read`] and not
 have been freed. Null is ignored.
 */
void fc_model_free(struct FcModel *model);

/*
 Number of functor sections.

 # Safety
 `model` must be a live handle; `out` must be writable.
 */
enum FcStatus fc_model_functor_count(const struct FcModel *model, size_t *out);

/*
 Name of the functor section at `index`.

 # Safety
 `model` must be a live handle; `out` must be writable.
 */
enum FcStatus fc_model_functor_name(const struct FcModel *model, size_t index, char **out);

/*
 Checks every section against the axioms. Returns `FC_STATUS_FAILED` when
 some section is invalid; the report lists the violations.

 # Safety
 `model` must be a live handle; `report` must be writable or null.
 */
enum FcStatus fc_validate(const struct FcModel *model, char **report);

/*
 Classifies the functor named `functor`, or the only functor when
 `functor` is null. `max_family_size` bounds the enumerated families;
 zero means every family.

 # Safety
 `model` must be a live handle; `functor` null or NUL-terminated; `out`
 writable.
 */
enum FcStatus fc_classify(const struct FcModel *model,
                          const char *functor,
                          size_t max_family_size,
                          struct FcClassification **out);

/*
 # Safety
 `cl` must come from [`fc_classify`] and not have been freed. Null is
 ignored.
 */
void fc_classification_free(struct FcClassification *cl);

/*
 Value of a named flag: faithful, prefibration, fibration,
 pretopological, topological, e-functor or m-functor.

 # Safety
 `cl` must be a live handle; `flag` NUL-terminated; `out` writable.
 */
enum FcStatus fc_classification_flag(const struct FcClassification *cl,
                                     const char *flag,
                                     bool *out);

/*
 The classification report, as printed by `fibercheck classify`.

 # Safety
 `cl` must be a live handle; `out` writable.
 */
enum FcStatus fc_classification_report(const struct FcClassification *cl,
                                       enum FcFormat format,
                                       bool routes,
                                       char **out);

/*
 Runs every invariant suite on the model's functors and pseudofunctors.
 Returns `FC_STATUS_FAILED` when some check fails.

 # Safety
 `model` must be a live handle; `report` writable or null.
 */
enum FcStatus fc_verify(const struct FcModel *model, char **report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FIBERCHECK_H */
