#ifndef HECKEOPS_H
#define HECKEOPS_H

/* C interface to the exact power-operation engine. All functions return a
 * status code; text results (and error messages on failure) come back as
 * malloc'd NUL-terminated strings released with ho_string_free. A context
 * is not internally synchronized: use one per thread or guard it. */

#ifdef __cplusplus
extern "C" {
#endif

#define HO_OK 0
#define HO_ERR_INVALID 1     /* bad argument */
#define HO_ERR_PARSE 2       /* malformed expression or model text */
#define HO_ERR_MODEL 3       /* model data fails validation */
#define HO_ERR_PRECISION 4   /* not representable at the working precision */
#define HO_ERR_UNSUPPORTED 5 /* outside the supported surface */
#define HO_ERR_VERIFY 6      /* golden check failed */
#define HO_ERR_INTERNAL 7    /* engine invariant breach; report a bug */

typedef struct ho_ctx ho_ctx;

void ho_string_free(char* s);

/* Loads a model file and prepares the power operation at working precision
 * (h-adic truncation h_prec, p-adic precision p_prec). path == NULL loads
 * the built-in level-4 model at p = 5. On failure *out_err (if non-NULL)
 * receives the message. */
int ho_ctx_open(const char* path, int h_prec, int p_prec, ho_ctx** out_ctx, char** out_err);
void ho_ctx_close(ho_ctx* ctx);

/* Prime, level, modulus, precision and provenance of the loaded model. */
int ho_model_info(ho_ctx* ctx, int as_json, char** out);

/* Runs the curve pipeline for a built-in curve family ("c4") at the given
 * prime (decimal string), writes the resulting model file to out_path, and
 * reports the derived data. */
int ho_derive_model(const char* curve, const char* prime, const char* out_path, char** out);

/* Total power operation on a series expression; one coordinate per line. */
int ho_psi(ho_ctx* ctx, const char* expr, int as_json, char** out);

/* Averaged operators; op is "t1", "t2" or "weighted" (with weight >= 0,
 * ignored for the other two). */
int ho_hecke(ho_ctx* ctx, const char* op, int weight, const char* expr, int as_json,
             char** out);

/* Unit-group logarithm of a series expression. */
int ho_log_op(ho_ctx* ctx, const char* expr, int as_json, char** out);

/* Generated presentation report (commutation, degree-lowering and mixing
 * sections), the admissible normal form of a word expression, and the
 * centrality table for the averaged elements ("t1" or "t2"). */
int ho_gamma_presentation(ho_ctx* ctx, int as_json, char** out);
int ho_gamma_rewrite(ho_ctx* ctx, const char* word, int as_json, char** out);
int ho_gamma_center(ho_ctx* ctx, const char* which, int as_json, char** out);

/* q-expansion surface; model-free. op is "delta", "e2", "log-delta",
 * "hecke", "serre" or "f1"; prime (decimal string) is used by the operator
 * ops and may be NULL for the expansions. */
int ho_qseries(const char* op, const char* prime, int trunc, int as_json, char** out);

/* Golden verification suite at the given precisions; *failures (if
 * non-NULL) receives the number of failing checks. The report itself comes
 * back HO_OK even when checks fail; inspect *failures. */
int ho_verify(int h_prec, int p_prec, int q_prec, int concurrent, int as_json, char** out,
              int* failures);

#ifdef __cplusplus
}
#endif

#endif /* HECKEOPS_H */
