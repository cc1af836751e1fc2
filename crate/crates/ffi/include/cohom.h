#ifndef COHOM_H
#define COHOM_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Result code of every fallible call.
 */
typedef enum CohomStatus {
  COHOM_STATUS_OK = 0,
  COHOM_STATUS_NULL_POINTER = 1,
  COHOM_STATUS_INVALID_INPUT = 2,
  COHOM_STATUS_DIMENSION_MISMATCH = 3,
  COHOM_STATUS_INADMISSIBLE = 4,
  COHOM_STATUS_UNSUPPORTED = 5,
  COHOM_STATUS_PANIC = 6,
} CohomStatus;

/**
 * Verdict class of a classification record.
 */
typedef enum CohomVerdict {
  COHOM_VERDICT_TRANSITIVE = 0,
  COHOM_VERDICT_FOLIATION_HOROSPHERE = 1,
  COHOM_VERDICT_FOLIATION_SOLVABLE = 2,
  COHOM_VERDICT_TOTALLY_GEODESIC = 3,
  COHOM_VERDICT_NON_TOTALLY_GEODESIC = 4,
  COHOM_VERDICT_NOT_COHOMOGENEITY_ONE = 5,
  COHOM_VERDICT_UNKNOWN_CONSTANT_ANGLE = 6,
} CohomVerdict;

/**
 * A space `𝔽Hⁿ` given by its solvable model.
 */
typedef struct CohomModel CohomModel;

/**
 * Classification record of the action induced by a subspace.
 */
typedef struct CohomRecord CohomRecord;

/**
 * A subspace `W` of `𝔳`, read as the normal space `𝔳₀^⊥` when classifying.
 */
typedef struct CohomSubspace CohomSubspace;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next call into the library on the same thread.
 */
const char *cohom_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *cohom_version(void);

/**
 * Parses a space such as `"H:3"`.
 *
 * # Safety
 * `space` must be a NUL-terminated string and `out` valid for writes.
 */
enum CohomStatus cohom_model_new(const char *space, struct CohomModel **out);

/**
 * # Safety
 * `model` must be null or a handle from `cohom_model_new` not yet freed.
 */
void cohom_model_free(struct CohomModel *model);

/**
 * Real dimension of `𝔳`, the length of a basis row; 0 for a null handle.
 *
 * # Safety
 * `model` must be null or a live handle.
 */
size_t cohom_model_dim_v(const struct CohomModel *model);

/**
 * Subspace spanned by `count` rows of length `row_len`, stored row-major.
 * Rows that are not orthonormal are orthonormalized.
 *
 * # Safety
 * `rows` must point to `count * row_len` doubles (or be null when `count`
 * is 0); `model` must be a live handle and `out` valid for writes.
 */
enum CohomStatus cohom_subspace_new(const struct CohomModel *model,
                                    const double *rows,
                                    size_t count,
                                    size_t row_len,
                                    struct CohomSubspace **out);

/**
 * Subspace of a named family (`"complex"`, `"real"`, `"kangle"`, `"a"` to
 * `"f"`). Pass NaN as `phi` for families without an angle.
 *
 * # Safety
 * `model` must be a live handle, `label` NUL-terminated, `out` valid for writes.
 */
enum CohomStatus cohom_subspace_from_family(const struct CohomModel *model,
                                            const char *label,
                                            size_t k,
                                            double phi,
                                            struct CohomSubspace **out);

/**
 * # Safety
 * `sub` must be null or a handle not yet freed.
 */
void cohom_subspace_free(struct CohomSubspace *sub);

/**
 * Dimension of the subspace; 0 for a null handle.
 *
 * # Safety
 * `sub` must be null or a live handle.
 */
size_t cohom_subspace_dim(const struct CohomSubspace *sub);

/**
 * Copies the orthonormal basis, row-major, into `rows` (room for
 * `dim * dim_v` doubles).
 *
 * # Safety
 * `sub` must be a live handle and `rows` valid for `capacity` doubles.
 */
enum CohomStatus cohom_subspace_basis(const struct CohomSubspace *sub,
                                      double *rows,
                                      size_t capacity);

/**
 * Kahler angle of a subspace of a complex model.
 *
 * # Safety
 * `sub` must be a live handle; the out pointers valid for writes.
 */
enum CohomStatus cohom_kahler_angle(const struct CohomSubspace *sub,
                                    double tol,
                                    double *phi,
                                    bool *constant,
                                    double *defect);

/**
 * Quaternionic Kahler angle triple of a subspace of a quaternionic model,
 * with the sampled constancy defect.
 *
 * # Safety
 * `sub` must be a live handle; `phi` valid for three doubles.
 */
enum CohomStatus cohom_qk_angle(const struct CohomSubspace *sub,
                                size_t samples,
                                uint64_t seed,
                                double *phi,
                                double *defect);

/**
 * Cayley modulus of a 4-dimensional subspace of `𝕆`.
 *
 * # Safety
 * `sub` must be a live handle; `tau` valid for writes.
 */
enum CohomStatus cohom_cayley_modulus(const struct CohomSubspace *sub, double *tau);

/**
 * Classifies the action whose singular orbit has normal space `sub`.
 *
 * # Safety
 * `sub` must be a live handle and `out` valid for writes.
 */
enum CohomStatus cohom_classify(const struct CohomSubspace *sub,
                                double tol,
                                size_t samples,
                                uint64_t seed,
                                struct CohomRecord **out);

/**
 * # Safety
 * `rec` must be null or a handle not yet freed.
 */
void cohom_record_free(struct CohomRecord *rec);

/**
 * Codimension recorded in `rec`.
 *
 * # Safety
 * `rec` must be a live handle.
 */
enum CohomStatus cohom_record_codim(const struct CohomRecord *rec, size_t *codim);

/**
 * Verdict class of `rec`.
 *
 * # Safety
 * `rec` must be a live handle.
 */
enum CohomStatus cohom_record_verdict(const struct CohomRecord *rec, enum CohomVerdict *verdict);

/**
 * Moduli coordinate of a non-totally-geodesic verdict; `has_coord` is set
 * to false when the verdict carries none.
 *
 * # Safety
 * `rec` must be a live handle; the out pointers valid for writes.
 */
enum CohomStatus cohom_record_moduli_coord(const struct CohomRecord *rec,
                                           double *coord,
                                           bool *has_coord);

/**
 * JSON rendering of `rec`; free with `cohom_string_free`.
 *
 * # Safety
 * `rec` must be a live handle and `out` valid for writes.
 */
enum CohomStatus cohom_record_to_json(const struct CohomRecord *rec, char **out);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void cohom_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* COHOM_H */
