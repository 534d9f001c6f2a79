#ifndef LADDEROPS_LADDEROPS_H
#define LADDEROPS_LADDEROPS_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(LADDEROPS_BUILDING)
#    define LOP_API __declspec(dllexport)
#  else
#    define LOP_API __declspec(dllimport)
#  endif
#else
#  define LOP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. 1..14 mirror the library's error kinds. */
enum {
  LOP_OK = 0,
  LOP_EXPONENT_OUT_OF_RANGE = 1,
  LOP_NEGATIVE_WEIGHT = 2,
  LOP_BAD_SUPPORT_POINT = 3,
  LOP_INVALID_ATOM = 4,
  LOP_OUT_OF_SUPPORT = 5,
  LOP_SINGULAR_POINT = 6,
  LOP_Z_ON_SUPPORT = 7,
  LOP_BAD_NODE_COUNT = 8,
  LOP_DEGREE_OUT_OF_RANGE = 9,
  LOP_FAMILY_MISMATCH = 10,
  LOP_BAD_CONFIG = 11,
  LOP_EVALUATION_FAILURE = 12,
  LOP_PRECISION_EXHAUSTED = 13,
  LOP_STEP_TOO_LARGE = 14,
  LOP_INTERNAL = 100,
  LOP_BAD_ARGUMENT = 101
};

enum { LOP_FORMAT_JSON = 0, LOP_FORMAT_CSV = 1 };

typedef struct lop_weight lop_weight;
typedef struct lop_context lop_context;

/* Message of the last failing call on this thread; never NULL. */
LOP_API const char* lop_last_error(void);
LOP_API const char* lop_error_name(int code);
/* Frees strings returned through char** out parameters. */
LOP_API void lop_string_free(char* s);

LOP_API int lop_weight_parse(const char* json, lop_weight** out);
LOP_API void lop_weight_free(lop_weight* w);
LOP_API int lop_weight_to_json(const lop_weight* w, char** out);

/* Defaults: 256 bits, 200 nodes per segment, seed 42, 1 thread. */
LOP_API int lop_context_new(lop_context** out);
LOP_API void lop_context_free(lop_context* ctx);
LOP_API int lop_context_set_precision(lop_context* ctx, unsigned bits);
LOP_API int lop_context_set_nodes(lop_context* ctx, unsigned nodes);
LOP_API int lop_context_set_seed(lop_context* ctx, uint64_t seed);
LOP_API int lop_context_set_threads(lop_context* ctx, unsigned threads);
/* check is a sub-check ("ladder.lowering") or a group ("ladder"). */
LOP_API int lop_context_set_tolerance(lop_context* ctx, const char* check, double tol);
/* beta_k *= 1 + rel on every table built afterwards; rel == 0 clears it. */
LOP_API int lop_context_set_perturbation(lop_context* ctx, int k, double rel);

/* alpha, beta, h, p for n = 0..n_max. */
LOP_API int lop_recurrence(const lop_context* ctx, const lop_weight* w, int n_max, int format,
                           char** out);
/* Hankel determinants D_1..D_{n_max} from the table (and the closed product for
   classical Laguerre weights). */
LOP_API int lop_hankel(const lop_context* ctx, const lop_weight* w, int n_max, int format,
                       char** out);
/* A_n, B_n and their parts at each z. */
LOP_API int lop_ladder(const lop_context* ctx, const lop_weight* w, int n, const double* z_re,
                       const double* z_im, size_t nz, int format, char** out);
/* Y-frame residuals for n = 1..n_max at each z; nz == 0 uses 10 seeded samples. */
LOP_API int lop_rhp(const lop_context* ctx, const lop_weight* w, int n_max, const double* z_re,
                    const double* z_im, size_t nz, int format, char** out);
/* Full campaign. checks is a comma list of group names or NULL for all;
   nz == 0 uses 20 seeded samples. *passed receives 1 or 0. */
LOP_API int lop_verify(const lop_context* ctx, const lop_weight* w, int n_max, const double* z_re,
                       const double* z_im, size_t nz, const char* checks, int include_timing,
                       int format, char** out, int* passed);
/* t-derivative identities; step <= 0 picks the default. */
LOP_API int lop_diff_check(const lop_context* ctx, const lop_weight* w, int n_max, double step,
                           int format, char** out, int* passed);

#ifdef __cplusplus
}
#endif

#endif
