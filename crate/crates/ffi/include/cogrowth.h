#ifndef COGROWTH_H
#define COGROWTH_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CgStatus {
  CG_STATUS_OK = 0,
  CG_STATUS_NULL_POINTER = 1,
  CG_STATUS_INVALID_ARGUMENT = 2,
  CG_STATUS_PARSE = 3,
  CG_STATUS_UNSUPPORTED = 4,
  CG_STATUS_BUDGET = 5,
  CG_STATUS_DOMAIN = 6,
  CG_STATUS_INSUFFICIENT_RADIUS = 7,
  CG_STATUS_INTERNAL = 8,
} CgStatus;

// A ball in a Cayley graph.
typedef struct CgBall CgBall;

// A group presentation.
typedef struct CgPresentation CgPresentation;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread; empty after a success.
// Valid until the next call on this thread.
const char *cg_last_error_message(void);

// Library version as a static string.
const char *cg_version(void);

// Releases a string returned by the library. Null is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void cg_string_free(char *s);

// Parses the text format: `m=<int>` then one relator per line.
//
// # Safety
// `src` must be a NUL-terminated string; `out` must be writable.
enum CgStatus cg_presentation_parse(const char *src, struct CgPresentation **out);

// The free group on `m` generators.
//
// # Safety
// `out` must be writable.
enum CgStatus cg_presentation_free_group(size_t m, struct CgPresentation **out);

// Samples a presentation in the density model with at most
// `relator_budget` relators.
//
// # Safety
// `out` must be writable.
enum CgStatus cg_presentation_sample_density(size_t m,
                                             double d,
                                             size_t ell,
                                             bool reduced,
                                             uint64_t seed,
                                             size_t relator_budget,
                                             struct CgPresentation **out);

// # Safety
// `p` must be null or a live handle; it is invalid afterwards.
void cg_presentation_destroy(struct CgPresentation *p);

// Text form of a presentation; release with [`cg_string_free`].
//
// # Safety
// `p` must be a live handle; `out` must be writable.
enum CgStatus cg_presentation_to_text(const struct CgPresentation *p, char **out);

// # Safety
// `p` must be a live handle; `out` must be writable.
enum CgStatus cg_presentation_relator_count(const struct CgPresentation *p, size_t *out);

// Length of the longest piece.
//
// # Safety
// `p` must be a live handle; `out` must be writable.
enum CgStatus cg_max_piece(const struct CgPresentation *p, size_t *out);

// Whether C'(num/den) holds.
//
// # Safety
// `p` must be a live handle; `out` must be writable.
enum CgStatus cg_small_cancellation(const struct CgPresentation *p,
                                    uint64_t num,
                                    uint64_t den,
                                    bool *out);

// Dehn's algorithm; fails with `Unsupported` outside C'(1/6).
//
// # Safety
// `p` must be a live handle, `w` a NUL-terminated word, `out` writable.
enum CgStatus cg_dehn_is_trivial(const struct CgPresentation *p, const char *w, bool *out);

// Diagram search with at most `max_faces` faces. Writes 1 when a diagram
// was found, 0 when none exists within the face bound, -1 when the budget
// ran out.
//
// # Safety
// `p` must be a live handle, `w` a NUL-terminated word, `out` writable.
enum CgStatus cg_vk_search(const struct CgPresentation *p,
                           const char *w,
                           size_t max_faces,
                           uint64_t budget,
                           int32_t *out);

// Builds the ball of the given radius, using the free-group oracle when
// there are no relators and Dehn's algorithm otherwise.
//
// # Safety
// `p` must be a live handle; `out` must be writable.
enum CgStatus cg_ball_build(const struct CgPresentation *p,
                            size_t radius,
                            size_t budget,
                            struct CgBall **out);

// # Safety
// `b` must be null or a live handle; it is invalid afterwards.
void cg_ball_destroy(struct CgBall *b);

// # Safety
// `b` must be a live handle; `out` must be writable.
enum CgStatus cg_ball_size(const struct CgBall *b, size_t *out);

// Exact number of trivial words of length `len` as a decimal string;
// release with [`cg_string_free`].
//
// # Safety
// `b` must be a live handle; `out` must be writable.
enum CgStatus cg_count_trivial_words(const struct CgBall *b, size_t len, bool reduced, char **out);

// Lower bound for the spectral radius of the simple random walk.
//
// # Safety
// `b` must be a live handle; `out` must be writable.
enum CgStatus cg_spectral_radius_lower_bound(const struct CgBall *b,
                                             size_t iterations,
                                             double tolerance,
                                             double *out);

// # Safety
// `out` must be writable.
enum CgStatus cg_grigorchuk_theta_from_eta(double eta, size_t m, double *out);

// # Safety
// `out` must be writable.
enum CgStatus cg_grigorchuk_eta_from_theta(double theta, size_t m, double *out);

// `α = −1 / ln(1 − C)`.
//
// # Safety
// `out` must be writable.
enum CgStatus cg_locality_alpha(double c, double *out);

// Smallest `B` satisfying the locality inequality in base `2m − 1`.
//
// # Safety
// `out` must be writable.
enum CgStatus cg_locality_min_b(double c, size_t m, double eta, double *out);

// The product factor of the locality bound at `(C, A)`.
//
// # Safety
// `out` must be writable.
enum CgStatus cg_locality_factor(double c, double a, size_t m, double eta, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* COGROWTH_H */
