/* SPDX-License-Identifier: Apache-2.0
 *
 * C interface of the tightembed shared library.
 *
 * All functions return te_status; TE_OK means success. On failure,
 * te_last_error() describes what went wrong (thread-local). Objects are
 * opaque handles released with the matching *_free; strings returned through
 * char** out-parameters are owned by the caller and released with
 * te_string_free.
 *
 * Structured data crosses this boundary as JSON documents:
 *   modulus curves   {"family":"power_rho","alpha":0.5} | {"family":"exp_floor"}
 *                    | {"family":"pl","points":[[t,v],...],
 *                       "tail":{"kind":"affine","slope":s}|{"kind":"power","alpha":a}}
 *   point sets       {"type":"points","p":2,"coords":[[...],...],"basepoint":0}
 *                    (p = inf encoded as "inf")
 *   metric matrices  {"type":"matrix","d":[[...],...]}
 */
#ifndef TIGHTEMBED_H
#define TIGHTEMBED_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum te_status {
  TE_OK = 0,
  TE_ERR_INVALID = 1, /* invalid argument or failed validation */
  TE_ERR_PARSE = 2,   /* malformed input document */
  TE_ERR_INTERNAL = 3
} te_status;

/* Message for the most recent failure on this thread. */
const char* te_last_error(void);
void te_string_free(char* s);

typedef struct te_curve te_curve;
typedef struct te_space te_space;
typedef struct te_lp_embedding te_lp_embedding;
typedef struct te_stable_embedding te_stable_embedding;

/* ---- modulus curves ---------------------------------------------------- */

te_status te_curve_parse(const char* spec_json, te_curve** out);
void te_curve_free(te_curve* curve);
te_status te_curve_eval(const te_curve* curve, double t, double* out);
/* cls is "Phi", "P" or "Omega"; pass and report_json may be NULL. */
te_status te_curve_check_class(const te_curve* curve, const char* cls,
                               int grid_density, int* pass, char** report_json);
/* Dominating log-modulus of a Phi curve (log2 of its monotone envelope). */
te_status te_curve_exp_dominate(const te_curve* phi, te_curve** mu);
/* sigma(y) = inf{x > 0 : mu(x) >= y}, y < 0; +inf when the set is empty. */
te_status te_curve_generalized_inverse(const te_curve* mu, double y, double* out);
te_status te_curve_regularize_rho(const te_curve* rho, te_curve** out);
te_status te_curve_regularize_omega(const te_curve* omega, te_curve** out);
te_status te_curve_to_json(const te_curve* curve, char** json);

/* ---- spaces and fixtures ------------------------------------------------ */

te_status te_space_parse(const char* space_json, te_space** out);
void te_space_free(te_space* space);
te_status te_space_size(const te_space* space, int* n);
te_status te_space_distance(const te_space* space, int i, int j, double* d);
te_status te_space_to_json(const te_space* space, char** json);

/* Seeded samples of the compact diagonal image in l_p^truncation; weights
 * may be NULL for the default a_n = 4^-n. */
te_status te_fixture_kalton(double p, int truncation, const double* weights,
                            int weight_count, int sample_count, uint64_t seed,
                            te_space** out);
/* Greedy delta-net with nearest-point assignment, as a JSON document. */
te_status te_fixture_net(const te_space* space, double delta, char** net_json);

/* ---- block embedding of l_p point sets --------------------------------- */

/* modulus: either a Phi curve (exp-dominated automatically) or an already
 * negative non-decreasing log-modulus. The source space must be a point set.
 * Requires eta > 2 and 0 < r < 1/16; outer_s >= 1 picks the block-sum
 * exponent. */
te_status te_lp_embed(const te_space* points, const te_curve* modulus,
                      double eta, double r, double outer_s,
                      te_lp_embedding** out);
te_status te_lp_embedding_parse(const char* embedding_json,
                                te_lp_embedding** out);
void te_lp_embedding_free(te_lp_embedding* embedding);
te_status te_lp_embedding_to_json(const te_lp_embedding* embedding, char** json);
/* Exhaustive pairwise certification of the two-sided bound
 * 2^mu(d) r d <= image distance <= 9 d plus the per-case constants 3 and 5.
 * Any of pass / report_json / report_csv may be NULL. */
te_status te_lp_embedding_verify(const te_lp_embedding* embedding, int* pass,
                                 char** report_json, char** report_csv);
/* The embedded image as a metric space, paired with the source by index. */
te_status te_lp_embedding_image(const te_lp_embedding* embedding, te_space** out);

/* ---- coordinate embedding of finite metric spaces ----------------------- */

/* rho and omega must already satisfy the regularized hypotheses
 * (non-decreasing with v(t)/t non-increasing); regularize first. */
te_status te_stable_embed(const te_space* space, int basepoint,
                          const te_curve* rho, const te_curve* omega,
                          te_stable_embedding** out);
te_status te_stable_embedding_parse(const char* embedding_json,
                                    te_stable_embedding** out);
void te_stable_embedding_free(te_stable_embedding* embedding);
te_status te_stable_embedding_to_json(const te_stable_embedding* embedding,
                                      char** json);
/* Certifies rho(d) <= sup-coordinate distance <= omega(d), the exact
 * attainment of the lower bound, and N_omega <= 1 per coordinate. */
te_status te_stable_embedding_verify(const te_stable_embedding* embedding,
                                     int* pass, char** report_json,
                                     char** report_csv);
te_status te_stable_embedding_image(const te_stable_embedding* embedding,
                                    te_space** out);

/* ---- map-agnostic certification (spaces paired by index) ---------------- */

te_status te_measure_moduli(const te_space* source, const te_space* image,
                            char** profile_csv, char** profile_json);
/* Two-sided bound r d <= image d <= D r d on pairs with d in [s1, s2]; pass
 * s2 = INFINITY for an unbounded range. Isometric mode is r = D = 1. */
te_status te_range_check(const te_space* source, const te_space* image,
                         double s1, double s2, double r, double distortion,
                         int* pass, char** report_json);
te_status te_snowflake_check(const te_space* source, const te_space* image,
                             double s, int* pass, char** report_json);
te_status te_compression_exponent(const te_space* source, const te_space* image,
                                  double tau, double* alpha, double* scale,
                                  char** report_json);

#ifdef __cplusplus
}
#endif

#endif /* TIGHTEMBED_H */
