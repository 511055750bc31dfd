/*
 * mlab: a numerical laboratory for multilinear Fourier multiplier operators.
 *
 * C API over the core library: opaque handles, integer status codes, and a
 * per-thread error message. Every function returns MLAB_OK on success; on
 * failure the out-parameters are untouched and mlab_last_error() describes
 * what went wrong.
 *
 * Conventions: periodic grids over [-L, L)^d with N samples per axis,
 * centered frequency lattice {-N/2,...,N/2-1}^d, physical frequency k/(2L),
 * transforms normalized as integrals with the e^{-2 pi i x.xi} kernel.
 * Complex buffers are interleaved re/im doubles in row-major index order.
 * Axes are 1-based in this interface.
 */

#ifndef MLAB_H
#define MLAB_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mlab_status {
    MLAB_OK = 0,
    MLAB_ERR_INVALID_ARGUMENT = 1,
    MLAB_ERR_DIMENSION_MISMATCH = 2,
    MLAB_ERR_DOMAIN = 3,
    MLAB_ERR_SINGULAR_POINT = 4,
    MLAB_ERR_EVALUATION = 5,
    MLAB_ERR_UNKNOWN_ID = 6,
    MLAB_ERR_IO = 7,
    MLAB_ERR_CONFIG = 8,
    MLAB_ERR_TOLERANCE = 9,
    MLAB_ERR_INTERNAL = 10
} mlab_status;

const char* mlab_version(void);
/* Message for the most recent failure on this thread; never NULL. */
const char* mlab_last_error(void);

/* ------------------------------------------------------------------ grid */

typedef struct mlab_grid mlab_grid;
typedef struct mlab_field mlab_field;
typedef struct mlab_spectrum mlab_spectrum;

mlab_status mlab_grid_create(int dim, int samples_per_axis, double box_half_length,
                             mlab_grid** out);
void mlab_grid_destroy(mlab_grid* g);
int mlab_grid_dim(const mlab_grid* g);
int mlab_grid_samples(const mlab_grid* g);
double mlab_grid_half_length(const mlab_grid* g);
size_t mlab_grid_total_points(const mlab_grid* g);

/* values: 2 * N^d doubles, interleaved re/im; copied in. */
mlab_status mlab_field_create(const mlab_grid* g, const double* values,
                              mlab_field** out);
void mlab_field_destroy(mlab_field* f);
size_t mlab_field_size(const mlab_field* f);
mlab_status mlab_field_values(const mlab_field* f, double* out_values);
mlab_status mlab_field_grid(const mlab_field* f, mlab_grid** out);

/* Unit-width Gaussian exp(-pi |x - c|^2) with center c on every axis. */
mlab_status mlab_field_gaussian(const mlab_grid* g, double center, mlab_field** out);

mlab_status mlab_forward_transform(const mlab_field* f, mlab_spectrum** out);
mlab_status mlab_inverse_transform(const mlab_spectrum* F, mlab_field** out);
void mlab_spectrum_destroy(mlab_spectrum* F);
size_t mlab_spectrum_size(const mlab_spectrum* F);
mlab_status mlab_spectrum_values(const mlab_spectrum* F, double* out_values);

/* p > 0, may be HUGE_VAL for the max norm. */
mlab_status mlab_norm_lp(const mlab_field* f, double p, double* out);
mlab_status mlab_norm_weak_lp(const mlab_field* f, double p, double* out);
mlab_status mlab_boundary_mass_fraction(const mlab_field* f, double* out);

/* Binary container: magic "MLAB1", d/N/L as f64, interleaved re/im. */
mlab_status mlab_field_write(const mlab_field* f, const char* path);
mlab_status mlab_field_read(const char* path, mlab_field** out);
mlab_status mlab_field_export_csv(const mlab_field* f, const char* path);

/* -------------------------------------------------- littlewood-paley */

/* Radial profile of the dyadic partition of unity (supported in [1/2, 2]). */
double mlab_dyadic_profile(double r);

mlab_status mlab_delta_full(const mlab_field* f, int j, mlab_field** out);
/* axis is 1-based. */
mlab_status mlab_delta_coord(const mlab_field* f, int j, int axis, mlab_field** out);
mlab_status mlab_square_function(const mlab_field* f, const int* axes, int n_axes,
                                 int jmin, int jmax, mlab_field** out);

/* --------------------------------------------------------------- symbols */

typedef struct mlab_symbol mlab_symbol;

/* Catalog ids: "one", "calderon", "cm-ratio", "cm-ratio-2d",
 * "calderon-tensor", "cone-phi:<k>:<l>", "cone-psi:<k>:<l>" (1-based). */
mlab_status mlab_symbol_create(const char* id, int arity, int dim, mlab_symbol** out);
void mlab_symbol_destroy(mlab_symbol* s);
int mlab_symbol_arity(const mlab_symbol* s);
int mlab_symbol_dim(const mlab_symbol* s);
/* xi: arity*dim doubles, variable-major. */
mlab_status mlab_symbol_eval(const mlab_symbol* s, const double* xi, double* out_re,
                             double* out_im);

double mlab_calderon_phi(double s);
double mlab_h_profile(double t);

/* --------------------------------------------------------------- sobolev */

typedef enum mlab_family {
    MLAB_FAMILY_COORDINATEWISE = 0,
    MLAB_FAMILY_PER_VARIABLE = 1,
    MLAB_FAMILY_FULL = 2
} mlab_family;

/* gamma length: m*n (coordinatewise), m (per-variable), 1 (full). */
typedef struct mlab_smoothness_spec {
    mlab_family family;
    int arity;
    int dim;
    const double* gamma;
    size_t gamma_len;
    double r;
} mlab_smoothness_spec;

mlab_status mlab_fractional_apply(const mlab_field* f,
                                  const mlab_smoothness_spec* spec, mlab_field** out);
mlab_status mlab_localized_norm(const mlab_symbol* sigma, int j,
                                const mlab_smoothness_spec* spec, int samples,
                                double box_half_length, double* out);
/* profile may be NULL; otherwise it receives jmax-jmin+1 entries. */
mlab_status mlab_hormander_constant(const mlab_symbol* sigma,
                                    const mlab_smoothness_spec* spec, int samples,
                                    double box_half_length, int jmin, int jmax,
                                    double* out_max, double* profile);
mlab_status mlab_multiparameter_constant(const mlab_symbol* sigma,
                                         const mlab_smoothness_spec* spec,
                                         int samples, double box_half_length,
                                         int kmin, int kmax, double* out_max);
mlab_status mlab_stein_ialpha(const mlab_field* f, double alpha, mlab_field** out);

/* ------------------------------------------------------------ multiplier */

typedef struct mlab_plan mlab_plan;

typedef enum mlab_singular_policy {
    MLAB_SINGULAR_ERROR = 0,
    MLAB_SINGULAR_ZERO = 1
} mlab_singular_policy;

/* dealias_factor 0 selects the default m+1; trunc_radius is the per-axis
 * frequency cut K, 1 <= K <= N/2. */
mlab_status mlab_plan_create(const mlab_symbol* sigma, const mlab_grid* g,
                             int trunc_radius, int dealias_factor,
                             mlab_singular_policy policy, int jobs,
                             mlab_plan** out);
void mlab_plan_destroy(mlab_plan* p);

mlab_status mlab_apply(const mlab_plan* plan, const mlab_field* const* inputs,
                       int n_inputs, mlab_field** out);
/* ratios receives `trials` entries when non-NULL. */
mlab_status mlab_estimate_operator_norm(const mlab_plan* plan, const double* p_list,
                                        int n_p, int trials, uint64_t seed,
                                        double* ratios, double* out_max);

/* ------------------------------------------------------------ commutator */

mlab_status mlab_antiderivative(const mlab_field* a, mlab_field** out);
/* eps: decreasing exclusion radii in grid cells; use_richardson != 0
 * extrapolates the radius to zero. */
mlab_status mlab_calderon_c1_direct(const mlab_field* f, const mlab_field* a,
                                    const double* eps, int n_eps,
                                    int use_richardson, int jobs, mlab_field** out);
/* trunc_radius 0 picks min(N/4, 128). */
mlab_status mlab_calderon_c1_multiplier(const mlab_field* f, const mlab_field* a,
                                        int trunc_radius, int jobs,
                                        mlab_field** out);

typedef enum mlab_commutator_mode {
    MLAB_COMMUTATOR_DIRECT = 0,
    MLAB_COMMUTATOR_MULTIPLIER = 1
} mlab_commutator_mode;

mlab_status mlab_calderon_cn(const mlab_field* f, const mlab_field* a,
                             mlab_commutator_mode mode, const double* eps,
                             int n_eps, int use_richardson, int trunc_radius,
                             int jobs, mlab_field** out);

/* ------------------------------------------------------------ validation */

mlab_status mlab_phi_transform_check(double gamma, int samples,
                                     double box_half_length, double* out_fitted_c,
                                     double* out_residual);
mlab_status mlab_phi_derivative_check(int samples, double box_half_length,
                                      double* out_max_error);
/* errors may be NULL; otherwise it receives n_ladder entries. */
mlab_status mlab_refinement_study(const char* experiment_id, const double* ladder,
                                  int n_ladder, double* out_order, double* errors);

/* ------------------------------------------------------------ experiments */

int mlab_command_count(void);
const char* mlab_command_id(int index);
const char* mlab_command_help(const char* id);

/* Runs one experiment from its key-value config text (INI-like; must set
 * `command`). out_root may be NULL (MLAB_OUT_ROOT or ./mlab-out applies).
 * exit_code: 0 pass, 1 tolerance breach. The one-line JSON summary is
 * copied into summary (truncated to cap). Config problems return
 * MLAB_ERR_CONFIG. */
mlab_status mlab_run_experiment(const char* config_text, const char* out_root,
                                int* exit_code, char* summary, size_t cap);

#ifdef __cplusplus
}
#endif

#endif /* MLAB_H */
