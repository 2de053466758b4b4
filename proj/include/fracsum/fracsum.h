/* C API for the fracsum library: exact fractional finite sums
 * sum_{n<=x} f(floor(x/n)) for f = phi, psi, sigma (plus mu and mu^2 as
 * building blocks), their x log x main terms, error terms, the S1..S6
 * sub-sum decomposition, and the supporting series constants.
 *
 * Conventions: every fallible call returns a fracsum_status and writes its
 * results through out-pointers.  Handles are opaque and freed with the
 * matching _free call.  All functions are thread-safe; tables are immutable
 * once built.
 */
#ifndef FRACSUM_H
#define FRACSUM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define FRACSUM_API __declspec(dllexport)
#else
#define FRACSUM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fracsum_status {
    FRACSUM_OK = 0,
    FRACSUM_ERR_INVALID = 1,  /* precondition violated */
    FRACSUM_ERR_OVERFLOW = 2, /* value does not fit the result type */
    FRACSUM_ERR_BUDGET = 3,   /* quadratic-time budget exceeded */
    FRACSUM_ERR_RESOURCE = 4, /* allocation failure */
    FRACSUM_ERR_NUMERIC = 5,  /* float path unstable (exponential-sum indicator) */
    FRACSUM_ERR_INTERNAL = 6
} fracsum_status;

typedef enum fracsum_fn {
    FRACSUM_FN_PHI = 0,
    FRACSUM_FN_PSI = 1,
    FRACSUM_FN_SIGMA = 2,
    FRACSUM_FN_MU = 3,
    FRACSUM_FN_MU_SQUARED = 4
} fracsum_fn;

typedef enum fracsum_strategy {
    FRACSUM_STRATEGY_NAIVE = 0,
    FRACSUM_STRATEGY_BLOCKS = 1,
    FRACSUM_STRATEGY_DECOMPOSITION = 2
} fracsum_strategy;

typedef enum fracsum_sub_sum_label {
    FRACSUM_S1 = 0,
    FRACSUM_S2 = 1,
    FRACSUM_S3 = 2,
    FRACSUM_S4 = 3,
    FRACSUM_S5 = 4,
    FRACSUM_S6 = 5
} fracsum_sub_sum_label;

typedef enum fracsum_sub_sum_variant {
    FRACSUM_VARIANT_QUOTIENT_CONGRUENCE = 0, /* d | floor(x/n), the definition */
    FRACSUM_VARIANT_INDEX_DIVISOR = 1        /* d | n, the substituted form */
} fracsum_sub_sum_variant;

typedef enum fracsum_series_kind {
    FRACSUM_SERIES_MU_OVER_N2 = 0,
    FRACSUM_SERIES_MU2_OVER_N2 = 1,
    FRACSUM_SERIES_ONE_OVER_N2 = 2,
    FRACSUM_SERIES_LOG_OVER_N2 = 3,
    FRACSUM_SERIES_MU_LOG_OVER_N2 = 4,
    FRACSUM_SERIES_MU_OVER_N = 5,
    FRACSUM_SERIES_HARMONIC = 6
} fracsum_series_kind;

typedef enum fracsum_step_rule {
    FRACSUM_STEP_LINEAR = 0,
    FRACSUM_STEP_GEOMETRIC = 1
} fracsum_step_rule;

/* Opaque sieved table of f(1..limit). */
typedef struct fracsum_table fracsum_table;

typedef struct fracsum_result {
    int fn;
    uint64_t x;
    uint64_t exact_sum;
    double main_term;       /* NaN for mu / mu^2 */
    double error_term;      /* exact_sum - main_term */
    double normalized_error; /* error_term / x */
    int strategy;
} fracsum_result;

typedef struct fracsum_block {
    uint64_t q;
    uint64_t n_lo;
    uint64_t n_hi;
} fracsum_block;

typedef struct fracsum_constants {
    double inv_zeta2;        /* 6/pi^2 */
    double zeta2_over_zeta4; /* 15/pi^2 */
    double zeta2;            /* pi^2/6 */
    double euler_gamma;
    double neg_zeta_prime_2; /* 0.937548... */
    double mu_log_over_n2;   /* -zeta'(2)/zeta(2)^2 */
} fracsum_constants;

FRACSUM_API const char* fracsum_version(void);
FRACSUM_API const char* fracsum_status_str(fracsum_status status);
FRACSUM_API const char* fracsum_fn_name(fracsum_fn fn);

/* --- sieved tables ----------------------------------------------------- */

/* Builds f(1..limit).  Budget: 2e8 entries (8 B/entry for phi/psi/sigma,
 * 1 B/entry for mu/mu^2); limits above 1e7 use the segmented sieve. */
FRACSUM_API fracsum_status fracsum_table_build(fracsum_fn fn, uint64_t limit,
                                               fracsum_table** out);
FRACSUM_API void fracsum_table_free(fracsum_table* table);
FRACSUM_API fracsum_status fracsum_table_value(const fracsum_table* table, uint64_t n,
                                               int64_t* out);
FRACSUM_API uint64_t fracsum_table_limit(const fracsum_table* table);
FRACSUM_API fracsum_fn fracsum_table_fn(const fracsum_table* table);

/* --- pointwise evaluation ---------------------------------------------- */

FRACSUM_API fracsum_status fracsum_eval_point(fracsum_fn fn, uint64_t n, int64_t* out);
FRACSUM_API fracsum_status fracsum_divisor_sum_identity(fracsum_fn fn, uint64_t n,
                                                        int64_t* out);

/* Writes up to cap (prime, exponent) pairs; *count is always set to the
 * number of distinct primes.  cap smaller than that is FRACSUM_ERR_INVALID. */
FRACSUM_API fracsum_status fracsum_factorize(uint64_t n, uint64_t* primes,
                                             uint32_t* exponents, size_t cap,
                                             size_t* count);
FRACSUM_API int fracsum_is_prime(uint64_t n);

/* --- fractional sums ---------------------------------------------------- */

/* Count query: blocks == NULL / cap == 0 sets *count only. */
FRACSUM_API fracsum_status fracsum_quotient_blocks(uint64_t x, fracsum_block* blocks,
                                                   size_t cap, size_t* count);

FRACSUM_API fracsum_status fracsum_sum_naive(fracsum_fn fn, uint64_t x,
                                             const fracsum_table* table,
                                             fracsum_result* out);

/* threads = 0 sizes the pool from the input, 1 forces serial. */
FRACSUM_API fracsum_status fracsum_sum_blocks(fracsum_fn fn, uint64_t x, unsigned threads,
                                              fracsum_result* out);

FRACSUM_API fracsum_status fracsum_indicator(uint64_t d, uint64_t m, int* out);
/* Float path only; FRACSUM_ERR_NUMERIC when the sum is > 1e-6 from both 0
 * and 1 (callers then use the exact fallback, which fracsum_indicator does
 * automatically). */
FRACSUM_API fracsum_status fracsum_indicator_exponential(uint64_t d, uint64_t m, int* out);

/* table_mu: a FRACSUM_FN_MU table with limit >= x.  budget = 0 means the
 * default (1e5). */
FRACSUM_API fracsum_status fracsum_sub_sum(fracsum_sub_sum_label label, uint64_t x,
                                           const fracsum_table* table_mu, uint64_t budget,
                                           fracsum_sub_sum_variant variant,
                                           unsigned threads, double* out);
FRACSUM_API fracsum_status fracsum_sub_sums_all(uint64_t x, const fracsum_table* table_mu,
                                                uint64_t budget,
                                                fracsum_sub_sum_variant variant,
                                                unsigned threads, double out[6]);
FRACSUM_API fracsum_status fracsum_decomposition_check(fracsum_fn fn, uint64_t x,
                                                       const fracsum_table* table_mu,
                                                       uint64_t budget, unsigned threads,
                                                       double* out);

/* --- asymptotics --------------------------------------------------------- */

FRACSUM_API fracsum_status fracsum_main_term(fracsum_fn fn, uint64_t x, double* out);
FRACSUM_API void fracsum_get_constants(fracsum_constants* out);
/* Field order matches fracsum_constants; returns NULL out of range. */
FRACSUM_API const char* fracsum_constant_name(int index);
FRACSUM_API const char* fracsum_constant_provenance(int index);

FRACSUM_API fracsum_status fracsum_partial_series(fracsum_series_kind kind, uint64_t limit,
                                                  double* value, double* tail_bound);

FRACSUM_API fracsum_status fracsum_bound_fit(fracsum_fn fn, const uint64_t* xs, size_t n,
                                             unsigned threads, double* a_hat,
                                             double* b_hat);

/* Grid of Linear(param): param, 2*param, ... <= x_max, or Geometric(param):
 * 10, 10*param, ... <= x_max.  Returns the full count; fills min(cap, count). */
FRACSUM_API size_t fracsum_scan_grid(fracsum_step_rule rule, double param, uint64_t x_max,
                                     uint64_t* xs, size_t cap);

/* Error scan over the grid.  xs/errors/normalized hold one entry per grid
 * point (cap must cover the grid size from fracsum_scan_grid); sign-change
 * intervals are optional (sc_cap may be 0). */
FRACSUM_API fracsum_status fracsum_error_scan(fracsum_fn fn, uint64_t x_max,
                                              fracsum_step_rule rule, double param,
                                              unsigned threads, uint64_t* xs,
                                              double* errors, double* normalized,
                                              size_t cap, size_t* count,
                                              double* max_abs_normalized, uint64_t* sc_lo,
                                              uint64_t* sc_hi, size_t sc_cap,
                                              size_t* sc_count);

#ifdef __cplusplus
}
#endif

#endif /* FRACSUM_H */
