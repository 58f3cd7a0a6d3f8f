/* jumpmil — strong-approximation toolkit for scalar jump-diffusion SDEs.
 *
 * C interface of the shared library: opaque handles plus status codes.
 * All functions are thread-safe; handles are immutable after creation and
 * may be shared across threads. On failure a human-readable message is
 * available from jm_last_error() (thread-local).
 */
#ifndef JUMPMIL_H
#define JUMPMIL_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(JUMPMIL_BUILD)
#define JUMPMIL_API __declspec(dllexport)
#else
#define JUMPMIL_API __declspec(dllimport)
#endif
#else
#define JUMPMIL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum jm_status {
    JM_OK = 0,
    JM_ERR_INVALID_ARGUMENT = 1, /* bad parameter or precondition violated */
    JM_ERR_NUMERICAL = 2,        /* non-finite state during a simulation */
    JM_ERR_DATA = 3,             /* corrupted or inconsistent path data */
    JM_ERR_IO = 4,               /* file could not be written or read */
    JM_ERR_INTERNAL = 5
} jm_status;

JUMPMIL_API const char* jm_version(void);

/* Message for the most recent failing call on this thread. */
JUMPMIL_API const char* jm_last_error(void);

/* ---------------------------------------------------------------------- */
/* Problems                                                                */

typedef struct jm_problem jm_problem;

/* The trigonometric benchmark problem on [0,1] with X(0) = 1:
 * drift sin(M y (1+t)^rho1), diffusion cos(M y (1+t)^rho2), jump
 * -y + pi/(2M(1+t)^rho2). Satisfies the jump-commutativity condition. */
JUMPMIL_API jm_status jm_problem_create_example(double M, double rho1, double rho2,
                                                double lambda, jm_problem** out);

/* dX = a X dt + b X dW + c X dN with known terminal solution. */
JUMPMIL_API jm_status jm_problem_create_linear(double a, double b, double c, double x0,
                                               double horizon, double lambda, jm_problem** out);

/* Sine instance of the commutative family sigma = F(alpha(t) y + beta(t)),
 * rho = -y + gamma(t), with F = sin and alpha(t) = M (1+t)^rho2. */
JUMPMIL_API jm_status jm_problem_create_jcc_family(double M, double rho1, double rho2,
                                                   double lambda, jm_problem** out);

JUMPMIL_API void jm_problem_free(jm_problem* problem);

JUMPMIL_API const char* jm_problem_name(const jm_problem* problem);

/* Max |L_{-1} sigma - L_1 rho| over a (t_samples x y_samples) lattice on
 * [0,T] x [y_lo, y_hi]. *passed is 1 iff the residual stays within
 * tolerance. Pass t_samples <= 0 to use the default 41 x 201 lattice on
 * y in [-5, 5] with tolerance 1e-9. */
JUMPMIL_API jm_status jm_problem_check_jcc(const jm_problem* problem, int t_samples,
                                           int y_samples, double y_lo, double y_hi,
                                           double tolerance, int* passed,
                                           double* max_abs_residual);

/* ---------------------------------------------------------------------- */
/* Levy-area mean-square-error experiment                                  */

typedef struct jm_levy_result {
    double empirical_mse;        /* Monte Carlo E|J - trapezoid|^2 */
    double theoretical_mse;      /* lambda T^2/(4n) + lambda^2 T^3/(12 n^2) */
    double mc_standard_error;
    double left_empirical_mse;   /* left-point comparator */
    double left_mc_standard_error;
    uint64_t n_paths;
    uint64_t n;                  /* 2^level cells */
} jm_levy_result;

JUMPMIL_API jm_status jm_levy_mse_run(double lambda, double horizon, int level,
                                      uint64_t n_paths, uint64_t master_seed, int threads,
                                      jm_levy_result* out);

JUMPMIL_API jm_status jm_trapezoid_mse_theoretical(double lambda, double horizon, uint64_t n,
                                                   double* out);

/* ---------------------------------------------------------------------- */
/* Strong-convergence experiment                                           */

typedef struct jm_convergence jm_convergence;

/* Scheme names: "euler", "rand-euler", "milstein", "rand-milstein",
 * "rand-milstein-jcc".
 *
 * Successive mode (exact_error_mode == 0) estimates
 *   error(k) = mean(|X^(k)(T) - X^(k-1)(T)|^p)^(1/p)
 * for k_min < k <= k_max on coupled paths; exact mode compares against the
 * problem's terminal solution for k_min <= k <= k_max. fit_k_min <= 0 uses
 * the default regression window (k >= 4); threads <= 0 resolves from
 * JUMPMIL_THREADS or the hardware. */
JUMPMIL_API jm_status jm_convergence_run(const jm_problem* problem, const char* scheme,
                                         const double* p_values, size_t p_count, int k_min,
                                         int k_max, uint64_t n_paths, uint64_t master_seed,
                                         int exact_error_mode, int fit_k_min, int threads,
                                         jm_convergence** out);

/* View of one per-p result block. Array pointers stay valid until the
 * report handle is freed. */
typedef struct jm_convergence_block {
    double p;
    size_t n_levels;
    const int* levels;
    const double* deltas;
    const double* errors;
    const double* std_errors;
    uint64_t n_paths;
    uint64_t aborted_paths;
    double fitted_slope;
    double slope_std_error;
    double theoretical_rate;
    int slope_defined;      /* 0 when the fit was degenerate */
    int zero_error_levels;  /* levels dropped from the log fit */
} jm_convergence_block;

JUMPMIL_API size_t jm_convergence_block_count(const jm_convergence* report);

JUMPMIL_API jm_status jm_convergence_get_block(const jm_convergence* report, size_t index,
                                               jm_convergence_block* out);

JUMPMIL_API void jm_convergence_free(jm_convergence* report);

/* Theoretical rate law. variant: "jump" for min{2/p, rho1+1/p, rho2, rho3},
 * "jump-free" for min{rho1+1/2, rho2}, "milstein" for
 * min{2/p, rho1, rho2, rho3}. p in [1,2) maps to the p = 2 rate. */
JUMPMIL_API jm_status jm_theoretical_rate(double p, double rho1, double rho2, double rho3,
                                          const char* variant, double* out);

/* ---------------------------------------------------------------------- */
/* Path dump                                                               */

/* Samples one path of driving noise and writes the binary dump:
 * little-endian; magic "JMPD", version u32, level u32, n u64, lambda f64,
 * T f64; per cell: dW f64, dN u32, dN x (jump time f64, bridge value f64),
 * xi f64. */
JUMPMIL_API jm_status jm_path_dump(double horizon, int level, double lambda,
                                   uint64_t master_seed, uint64_t path_index,
                                   const char* filename);

#ifdef __cplusplus
}
#endif

#endif /* JUMPMIL_H */
