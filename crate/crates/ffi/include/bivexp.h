/* C ABI for the bivexp series-system reliability library. */

#ifndef BIVEXP_H
#define BIVEXP_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Measure selector matching the library's four reliability measures.
typedef enum BivexpMeasure {
  BIVEXP_MEASURE_RELIABILITY = 0,
  BIVEXP_MEASURE_HAZARD = 1,
  BIVEXP_MEASURE_MRL = 2,
  BIVEXP_MEASURE_RHR = 3,
} BivexpMeasure;

// Status code of every C entry point.
typedef enum BivexpStatus {
  // Success.
  BIVEXP_STATUS_OK = 0,
  // A required pointer argument was null.
  BIVEXP_STATUS_NULL_POINTER = 1,
  // A string argument was not valid UTF-8.
  BIVEXP_STATUS_INVALID_UTF8 = 2,
  // Parameter or argument outside its documented domain.
  BIVEXP_STATUS_DOMAIN = 3,
  // Root bracket without a sign change.
  BIVEXP_STATUS_BRACKET = 4,
  // Iteration budget exhausted.
  BIVEXP_STATUS_CONVERGENCE = 5,
  // Curve is constant on the bracket; no extremum exists.
  BIVEXP_STATUS_FLAT = 6,
  // The requested limit diverges (no finite asymptote).
  BIVEXP_STATUS_DIVERGENT = 7,
} BivexpStatus;

// Sign-verdict discriminant; threshold-carrying variants store the
// switch time in `BivexpVerdict::threshold`.
typedef enum BivexpVerdictKind {
  // The relative error is identically zero.
  BIVEXP_VERDICT_KIND_ZERO = 0,
  // Independence over-assesses the measure for all t.
  BIVEXP_VERDICT_KIND_ALWAYS_OVER_ASSESS = 1,
  // Independence under-assesses the measure for all t.
  BIVEXP_VERDICT_KIND_ALWAYS_UNDER_ASSESS = 2,
  // Under-assessment before the threshold, over-assessment after.
  BIVEXP_VERDICT_KIND_SWITCH_UNDER_TO_OVER = 3,
  // Over-assessment before the threshold, under-assessment after.
  BIVEXP_VERDICT_KIND_SWITCH_OVER_TO_UNDER = 4,
  // Verdict depends on the sign of a parameter (Gumbel II
  // reliability: the sign of alpha).
  BIVEXP_VERDICT_KIND_PARAM_DEPENDENT = 5,
} BivexpVerdictKind;

// Opaque handle around validated model parameters.
typedef struct BivexpModel BivexpModel;

// Sign classification of one relative-error curve.
typedef struct BivexpVerdict {
  enum BivexpVerdictKind kind;
  // Switch time for the two switch kinds, NaN otherwise.
  double threshold;
} BivexpVerdict;

// Root or extremum report. For roots `residual` is |f(root)|, for
// extrema it is the final bracketing-interval width.
typedef struct BivexpRootReport {
  double t;
  double value;
  double bracket_lo;
  double bracket_hi;
  uint64_t iterations;
  double residual;
} BivexpRootReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failure on this thread. The pointer stays valid
// until the next failing call on the same thread. Never null.
const char *bivexp_last_error_message(void);

// Parses a flat JSON model document, e.g.
// `{"model":"gumbel2","lambda1":1.0,"lambda2":1.0,"alpha":0.5}`.
// Unknown fields are an error.
enum BivexpStatus bivexp_model_parse_json(const char *json, struct BivexpModel **out);

// Serializes the model back to its flat JSON document. The returned
// string is owned by the caller; free it with `bivexp_string_free`.
enum BivexpStatus bivexp_model_to_json(const struct BivexpModel *model, char **out);

// Frees a string returned by this library.
void bivexp_string_free(char *s);

// Releases a model handle.
void bivexp_model_free(struct BivexpModel *model);

enum BivexpStatus bivexp_model_independent(double lambda1,
                                           double lambda2,
                                           struct BivexpModel **out);

enum BivexpStatus bivexp_model_gumbel1(double lambda1,
                                       double lambda2,
                                       double lambda12,
                                       struct BivexpModel **out);

enum BivexpStatus bivexp_model_gumbel2(double lambda1,
                                       double lambda2,
                                       double alpha,
                                       struct BivexpModel **out);

enum BivexpStatus bivexp_model_gumbel3(double lambda1,
                                       double lambda2,
                                       double m,
                                       struct BivexpModel **out);

enum BivexpStatus bivexp_model_freund(double lambda1,
                                      double lambda2,
                                      double theta1,
                                      double theta2,
                                      struct BivexpModel **out);

enum BivexpStatus bivexp_model_marshall_olkin(double lambda1,
                                              double lambda2,
                                              double lambda12,
                                              struct BivexpModel **out);

enum BivexpStatus bivexp_model_block_basu(double lambda1,
                                          double lambda2,
                                          double lambda12,
                                          struct BivexpModel **out);

enum BivexpStatus bivexp_model_cowan(double lambda1,
                                     double lambda2,
                                     double theta,
                                     struct BivexpModel **out);

enum BivexpStatus bivexp_model_sarkar(double lambda1,
                                      double lambda2,
                                      double lambda12,
                                      struct BivexpModel **out);

// Joint survival P(X1 > x1, X2 > x2).
enum BivexpStatus bivexp_joint_survival(const struct BivexpModel *model,
                                        double x1,
                                        double x2,
                                        double *out);

// Series-system measure at time t (t > 0 for the reversed hazard rate).
enum BivexpStatus bivexp_measure(const struct BivexpModel *model,
                                 enum BivexpMeasure kind,
                                 double t,
                                 double *out);

// Relative error of the measure under a false independence assumption.
enum BivexpStatus bivexp_relative_error(const struct BivexpModel *model,
                                        enum BivexpMeasure kind,
                                        double t,
                                        double *out);

// Finite t -> infinity limit of the relative error; `Divergent` when
// the error grows without bound.
enum BivexpStatus bivexp_error_asymptote(const struct BivexpModel *model,
                                         enum BivexpMeasure kind,
                                         double *out);

// Sign classification (over/under-assessment) of the error curve.
enum BivexpStatus bivexp_classify_sign(const struct BivexpModel *model,
                                       enum BivexpMeasure kind,
                                       struct BivexpVerdict *out);

// Zero crossing of the error curve inside [lo, hi]; the bracket ends
// must differ in sign.
enum BivexpStatus bivexp_find_crossing(const struct BivexpModel *model,
                                       enum BivexpMeasure kind,
                                       double lo,
                                       double hi,
                                       struct BivexpRootReport *out);

// Interior extremum of the error curve inside [lo, hi].
enum BivexpStatus bivexp_find_extremum(const struct BivexpModel *model,
                                       enum BivexpMeasure kind,
                                       double lo,
                                       double hi,
                                       struct BivexpRootReport *out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* BIVEXP_H */
