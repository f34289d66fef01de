/* trelax: time-relaxation flow model with iterative deconvolution.
 *
 * C interface over the spectral core.  All functions return trx_status;
 * outputs are written through pointers.  On failure, trx_last_error() gives
 * a thread-local description of what went wrong.  Objects returned through
 * trx_*_create/open must be released with the matching _destroy.
 */
#ifndef TRELAX_H
#define TRELAX_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum trx_status {
  TRX_OK = 0,
  TRX_ERR_INVALID = 1, /* bad arguments or malformed input */
  TRX_ERR_BLOWUP = 2,  /* solution became non-finite */
  TRX_ERR_IO = 3,      /* filesystem / serialization failure */
  TRX_ERR_INTERNAL = 4
} trx_status;

const char* trx_version(void);

/* Description of the most recent failure on this thread ("" if none). */
const char* trx_last_error(void);

/* Non-fatal advisories (CFL margin, disabled regularization).  NULL restores
 * the default stderr handler. */
typedef void (*trx_warning_fn)(const char* message, void* ctx);
void trx_set_warning_handler(trx_warning_fn fn, void* ctx);

/* Atomic text-file write (temp file + rename). */
trx_status trx_write_text_file(const char* path, const char* content);

/* Trapezoid-rule finite-horizon average (1/T) * integral v dt.
 * Needs count >= 2 and strictly increasing times. */
trx_status trx_time_average(const double* t, const double* v, int count,
                            double* out);

/* ---------------------------------------------------------------- filters */

typedef struct trx_filter_params {
  double delta; /* filter radius, >= 0 (0 = identity filter) */
  double alpha; /* regularization weight in [0,1] */
  int order;    /* deconvolution iterations N >= 0 */
} trx_filter_params;

/* Fill g_hat/d0_hat/h_hat (any may be NULL) for `count` wavenumbers. */
trx_status trx_transfer_table(const trx_filter_params* p,
                              const double* wavenumbers, int count,
                              double* g_hat, double* d0_hat, double* h_hat);

/* Same table as CSV (header k,g_hat,d0_hat,h_hat), written atomically. */
trx_status trx_transfer_table_write_csv(const trx_filter_params* p,
                                        const double* wavenumbers, int count,
                                        const char* path);

/* A-priori relative consistency error at wavenumber k > 0:
 * (alpha delta^2 k^2 / (1 + alpha delta^2 k^2))^{N+1}. */
trx_status trx_consistency_error(const trx_filter_params* p, double k,
                                 double* out);

/* Relative L2 error |u - D_N(G u)| / |u| of the iterative deconvolution on a
 * fixed smooth three-mode scalar field over an n^dim box of size box_length.
 * The scaling of this error in delta and alpha is the subject of the
 * accuracy studies. */
trx_status trx_deconv_error(int dim, int n, double box_length,
                            const trx_filter_params* p, double* out);

/* ----------------------------------------------------------- simulations */

typedef enum trx_forcing_kind {
  TRX_FORCING_NONE = 0,
  TRX_FORCING_STEADY_LOW_MODE = 1 /* A sin(2 pi x_last / L) e_1 */
} trx_forcing_kind;

typedef enum trx_ic_kind {
  TRX_IC_TAYLOR_GREEN = 0,
  TRX_IC_RANDOM_SPECTRUM = 1
} trx_ic_kind;

typedef struct trx_sim_spec {
  int dim;           /* 2 or 3 */
  int n;             /* even, >= 4 */
  double box_length; /* > 0 */
  double nu;         /* viscosity >= 0 */
  double chi;        /* relaxation coefficient >= 0 */
  trx_filter_params filter;
  int forcing; /* trx_forcing_kind */
  double forcing_amplitude;
  int ic; /* trx_ic_kind */
  double ic_amplitude;
  double ic_slope;
  int ic_shell_lo;
  int ic_shell_hi;
  uint64_t seed;
  double dt; /* > 0 */
  int dealias;      /* 2/3-rule truncation of the quadratic term */
  int nonlinear;    /* 0 drops advection (linear decay runs) */
  int exact_linear; /* integrating-factor treatment of the linear symbol */
} trx_sim_spec;

/* Defaults: 2D 64^2 unit-velocity Taylor-Green decay, no relaxation. */
void trx_sim_spec_init(trx_sim_spec* spec);

typedef struct trx_sim trx_sim;

trx_status trx_sim_create(const trx_sim_spec* spec, trx_sim** out);

/* Restore a checkpoint.  `runtime`, when non-NULL, supplies the non-state
 * run configuration (dt, flags, forcing); grid/filter/nu/chi/t/field come
 * from the file. */
trx_status trx_sim_open(const char* checkpoint_path,
                        const trx_sim_spec* runtime, trx_sim** out);

void trx_sim_destroy(trx_sim* sim);

/* Advance `steps` steps of spec.dt.  TRX_ERR_BLOWUP freezes time at the last
 * finite state; further calls keep failing. */
trx_status trx_sim_advance(trx_sim* sim, long long steps);

double trx_sim_time(const trx_sim* sim);

typedef struct trx_energy_row {
  double t;
  double e_model;       /* sum |u_hat|^2 / 2 */
  double eps_model;     /* relaxation drain (chi/delta) sum (1-h_N)|u_hat|^2 */
  double viscous;       /* nu sum k^2 |u_hat|^2 */
  double forcing_input; /* power injected by the body force */
  double max_div;       /* max_k |k . u_hat| */
} trx_energy_row;

trx_status trx_sim_energy(const trx_sim* sim, trx_energy_row* out);

/* |u - H_N u|^2: energy carried by scales the model suppresses. */
trx_status trx_sim_fluctuation(const trx_sim* sim, double* out);

/* Shell spectrum: shells() entries of E at k = s * 2pi/L. */
int trx_sim_shells(const trx_sim* sim);
trx_status trx_sim_spectrum(const trx_sim* sim, double* k, double* e,
                            int capacity);

/* Number of complex velocity coefficients (components * n^dim). */
int64_t trx_sim_coeff_count(const trx_sim* sim);
/* Copy coefficients as interleaved re,im pairs (2 * coeff_count doubles). */
trx_status trx_sim_copy_coeffs(const trx_sim* sim, double* out,
                               int64_t capacity_doubles);

/* Binary checkpoint; exact round-trip through trx_sim_open. */
trx_status trx_sim_save(const trx_sim* sim, const char* path);

/* ------------------------------------------------------------ similarity */

/* Inputs follow the calculators' domain: everything positive where present.
 * Optional entries use <= 0 (or NaN) for "absent".  Exactly one of nu / re
 * must be given. */
typedef struct trx_similarity_inputs {
  double u_ref; /* U */
  double l_ref; /* L */
  double nu;
  double re;
  double delta;
  double alpha;
  int order;
  double chi;
  double u_small;
  double eta_model;
} trx_similarity_inputs;

typedef struct trx_similarity_report {
  double re;
  double re_n;
  double re_n_small; /* NaN when u_small was not given */
  double eta_resolved; /* candidate micro-scales with consistency flags */
  int eta_resolved_consistent;
  double eta_large_alpha;
  int eta_large_alpha_consistent;
  char case_label[40];
  double eta_selected; /* NaN when indeterminate */
  double chi;
  int chi_given; /* 0: chi selected via the eta = delta scaling */
  double consistency_error; /* chi alpha^{N+1} delta^{2N+1} */
  double case3_error;       /* (1+alpha)^{N+1} delta^{2N+7/3}; NaN otherwise */
  double eta_kolmogorov;
  double chi_bound_kolmogorov;
  double chi_bound_microscale; /* NaN when no micro-scale is available */
  int chi_satisfies_bounds;
  double n_dof;
  double n_dof_nse;
  double speedup;
} trx_similarity_report;

trx_status trx_similarity_classify(const trx_similarity_inputs* in,
                                   trx_similarity_report* out);

/* Individual calculators. */
trx_status trx_reynolds_n(double u_ref, double l_ref, double chi, double alpha,
                          double delta, int order, double* out);
trx_status trx_reynolds_n_small(double u_small, double eta, double chi,
                                double alpha, double delta, int order,
                                double* out);
trx_status trx_microscale_resolved(double u_ref, double l_ref, double chi,
                                   double alpha, double delta, int order,
                                   double* eta, int* consistent);
trx_status trx_microscale_large_alpha(double u_ref, double l_ref, double chi,
                                      double alpha, double delta, double* eta,
                                      int* consistent);
trx_status trx_chi_critical_alpha(double u_ref, double l_ref, double delta,
                                  double alpha, int order, double* chi,
                                  double* consistency_error);
trx_status trx_chi_perfectly_resolved(double u_ref, double l_ref, double delta,
                                      double alpha, int order, double* chi,
                                      double* consistency_error);
trx_status trx_chi_lower_bound_kolmogorov(double u_ref, double l_ref,
                                          double re, double alpha,
                                          double delta, int order,
                                          double* out);
trx_status trx_chi_lower_bound_microscale(double nu, double delta, double eta,
                                          double alpha, int order,
                                          double* out);
trx_status trx_kolmogorov_scale(double l_ref, double re, double* out);
trx_status trx_dof_speedup(double l_ref, double delta, double re,
                           double* n_dof, double* n_dof_nse, double* speedup);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* TRELAX_H */
