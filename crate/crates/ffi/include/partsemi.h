#ifndef PARTSEMI_H
#define PARTSEMI_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes returned by every entry point.
typedef enum PsStatus {
  PS_STATUS_OK = 0,
  PS_STATUS_NULL_POINTER = 1,
  PS_STATUS_INVALID_UTF8 = 2,
  PS_STATUS_INVALID_ARGUMENT = 3,
  PS_STATUS_PRECONDITION = 4,
  PS_STATUS_RESOURCE_LIMIT = 5,
  PS_STATUS_PARSE = 6,
  PS_STATUS_VALIDATION = 7,
  PS_STATUS_MODE_MISMATCH = 8,
  PS_STATUS_INTERNAL = 9,
  PS_STATUS_PANIC = 10,
} PsStatus;

typedef enum PsMode {
  PS_MODE_ORACLE = 0,
  PS_MODE_THEOREM = 1,
  PS_MODE_BOTH = 2,
} PsMode;

typedef enum PsSemigroupProperty {
  PS_SEMIGROUP_PROPERTY_REGULAR = 0,
  PS_SEMIGROUP_PROPERTY_INVERSE = 1,
  PS_SEMIGROUP_PROPERTY_UNIT_REGULAR = 2,
} PsSemigroupProperty;

typedef enum PsRelation {
  PS_RELATION_L = 0,
  PS_RELATION_R = 1,
  PS_RELATION_D = 2,
  PS_RELATION_J = 3,
} PsRelation;

// Opaque handle: an instance with its members enumerated.
typedef struct PsInstance PsInstance;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failure on this thread; empty after a success.
// The pointer stays valid until the next call on the same thread.
const char *ps_last_error_message(void);

// Parses a JSON instance and enumerates its members.
// `element_cap` bounds the enumeration; 0 selects the default cap.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a writable pointer.
enum PsStatus ps_instance_from_json(const char *json, size_t element_cap, struct PsInstance **out);

// Releases a handle. Null is ignored.
//
// # Safety
// `inst` must come from `ps_instance_from_json` and not be used afterwards.
void ps_instance_free(struct PsInstance *inst);

// Ground-set size, which is the length of every map argument.
//
// # Safety
// Pointers must be valid.
enum PsStatus ps_instance_degree(const struct PsInstance *inst, size_t *out);

// # Safety
// Pointers must be valid.
enum PsStatus ps_instance_member_count(const struct PsInstance *inst, size_t *out);

// Copies member `index` (enumeration order) into `buf`, which holds `len` entries.
//
// # Safety
// `buf` must be writable for `len` entries.
enum PsStatus ps_instance_member(const struct PsInstance *inst,
                                 size_t index,
                                 size_t *buf,
                                 size_t len);

// Whether member `f` is regular.
//
// # Safety
// `f` must be readable for `len` entries and `out` writable.
enum PsStatus ps_is_regular(const struct PsInstance *inst,
                            const size_t *f,
                            size_t len,
                            enum PsMode mode,
                            bool *out);

// Whether member `f` is idempotent.
//
// # Safety
// `f` must be readable for `len` entries and `out` writable.
enum PsStatus ps_is_idempotent(const struct PsInstance *inst,
                               const size_t *f,
                               size_t len,
                               enum PsMode mode,
                               bool *out);

// Whether member `f` is unit-regular. Fails with `PS_STATUS_PRECONDITION`
// when the index semigroup lacks the identity.
//
// # Safety
// `f` must be readable for `len` entries and `out` writable.
enum PsStatus ps_is_unit_regular(const struct PsInstance *inst,
                                 const size_t *f,
                                 size_t len,
                                 enum PsMode mode,
                                 bool *out);

// # Safety
// Pointers must be valid.
enum PsStatus ps_semigroup_property(const struct PsInstance *inst,
                                    enum PsSemigroupProperty property,
                                    enum PsMode mode,
                                    bool *out);

// Whether members `f` and `g` are related by Green's relation `rel`.
// Needs the identity in the index semigroup.
//
// # Safety
// `f` and `g` must be readable for `len` entries and `out` writable.
enum PsStatus ps_green_related(const struct PsInstance *inst,
                               enum PsRelation rel,
                               const size_t *f,
                               const size_t *g,
                               size_t len,
                               enum PsMode mode,
                               bool *out);

// Runs the verification harness over the catalog for `max_n` and `seed`.
// `suite` may be null to run every suite. The report is newline-delimited
// JSON in `*report`, to be released with `ps_string_free`.
//
// # Safety
// `suite` must be null or NUL-terminated; out pointers must be writable.
enum PsStatus ps_verify(size_t max_n,
                        uint64_t seed,
                        const char *suite,
                        char **report,
                        bool *passed);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not be used afterwards.
void ps_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PARTSEMI_H */
