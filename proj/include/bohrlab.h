/* bohr-lab C API: recurrence and density experiments on non-lacunary
 * multiplicative semigroups.
 *
 * Conventions:
 *   - Every function returns a bohr_status code (BOHR_OK == 0 on success).
 *   - Output strings are heap-allocated; release them with bohr_string_free.
 *   - Opaque handles are released with their matching *_free function.
 *   - Exact values cross the boundary as decimal strings or "num/den"
 *     rationals, never as floating point.
 */
#ifndef BOHRLAB_H
#define BOHRLAB_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bohr_status {
    BOHR_OK = 0,
    BOHR_ERR_INTERNAL = 1,
    BOHR_ERR_BUDGET_EXHAUSTED = 2,
    BOHR_ERR_INVALID_INPUT = 3,
    BOHR_ERR_PRECISION_EXHAUSTED = 4,
    BOHR_ERR_NOT_COPRIME = 5,
    BOHR_ERR_EMPTY_WINDOW = 6,
    BOHR_ERR_NO_CANDIDATE = 7,
    BOHR_ERR_NO_RATIONAL_POINT = 8,
    BOHR_ERR_CONFIG_MISMATCH = 9,
    BOHR_ERR_ZERO_COMPONENT = 10,
    BOHR_ERR_EMPTY = 11,
    BOHR_ERR_DIMENSION_MISMATCH = 12
} bohr_status;

typedef struct bohr_torus_point bohr_torus_point;
typedef struct bohr_semigroup bohr_semigroup;

const char* bohr_version(void);
const char* bohr_status_name(int status);
void bohr_string_free(char* s);

/* --- torus points ---------------------------------------------------------
 * Coordinate grammar: "a/b" | "sqrt:n" | "phi" | "dec:0.123456789±1e-9"
 * (ASCII "+-" is accepted for "±"); points are comma-separated coordinates.
 */
int bohr_torus_point_parse(const char* text, bohr_torus_point** out, char** err);
void bohr_torus_point_free(bohr_torus_point* pt);
int bohr_torus_point_dim(const bohr_torus_point* pt);
int bohr_torus_point_format(const bohr_torus_point* pt, char** out);

/* Coordinate-wise multiplication by the integers in k_csv ("2,3"). */
int bohr_torus_point_scalar_mul(const bohr_torus_point* pt, const char* k_csv, bohr_torus_point** out,
                                char** err);

/* Certified bounds on ||x||_T (max over coordinates), as "num/den" strings. */
int bohr_torus_point_dist(const bohr_torus_point* pt, char** lo, char** hi);

/* --- semigroups ------------------------------------------------------------
 * Spec grammar: "gens=2,3;mode=all" (every nonempty product) or ";mode=pos"
 * (every generator appears at least once).
 */
int bohr_semigroup_parse(const char* text, bohr_semigroup** out, char** err);
void bohr_semigroup_free(bohr_semigroup* sg);
int bohr_semigroup_format(const bohr_semigroup* sg, char** out);
int bohr_semigroup_is_nonlacunary(const bohr_semigroup* sg, int* out);

/* CSV with header "index,value,ratio_to_previous"; horizon is a decimal or
 * scientific integer like "1e6". */
int bohr_semigroup_enumerate_csv(const bohr_semigroup* sg, const char* horizon, char** csv, char** err);

/* Subsemigroup of elements == 1 (mod modulus), generated by g^{ord_m(g)}. */
int bohr_semigroup_congruence(const bohr_semigroup* sg, const char* modulus, bohr_semigroup** out,
                              char** err);

/* Least t >= 1 with g^t == 1 (mod m); BOHR_ERR_NOT_COPRIME when gcd(g,m)>1. */
int bohr_multiplicative_order(const char* g, const char* modulus, char** order, char** err);

/* --- runner ------------------------------------------------------------------
 * Executes one run configuration (JSON; see README for the schemas shared
 * with the CLI) and returns the result document. Soft outcomes (budget
 * exhausted, no candidate, interrupted-with-checkpoint) still produce a
 * result document: the return code is the matching bohr_status and
 * *result_json is set. Hard failures return a code with *err set and no
 * result.
 */
int bohr_run_json(const char* config_json, char** result_json, char** err);

#ifdef __cplusplus
}
#endif

#endif /* BOHRLAB_H */
