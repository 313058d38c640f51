#ifndef GIE_H
#define GIE_H

/* C interface to the gravitationally-induced-entanglement estimator library.
 * All functions return GIE_OK on success; on failure gie_last_error() holds a
 * thread-local description of what went wrong. Strings returned through char**
 * out-parameters are heap-allocated and must be released with
 * gie_string_free(). */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define GIE_OK 0
#define GIE_ERR_NUMERIC 1
#define GIE_ERR_INVALID 2

const char* gie_last_error(void);
void gie_string_free(char* s);

/* ---- analytic engine (dimensionless couplings) ---- */

typedef struct {
  double signal;
  double variance;
  double snr;
  int log_domain; /* 1 when the log-domain large-N path was used */
} gie_snr_report;

int gie_snr_open(uint64_t atoms, double gamma, double lambda, double delta,
                 uint64_t reps, gie_snr_report* out);
int gie_snr_closed(uint64_t atoms, double gamma, double lambda, double mu,
                   double nu, uint64_t reps, gie_snr_report* out);
int gie_purity(uint64_t atoms, double lambda, double* purity, double* renyi2);
int gie_snr_single(uint64_t atoms, double gamma, double delta, uint64_t reps,
                   double* out);

/* ---- exact Fock oracle (atoms <= 64) ---- */

int gie_oracle_open(int atoms, double gamma, double lambda, double delta,
                    long long reps, double* signal, double* variance);
int gie_oracle_closed(int atoms, double gamma, double lambda, double mu,
                      double nu, long long reps, double* signal,
                      double* variance);
int gie_oracle_purity(int atoms, double lambda, double* purity);

/* Table of |analytic - oracle| per quantity; *pass = 1 when every row is
 * within 1e-9 relative or 1e-10 absolute. */
int gie_compare(int atoms, double gamma, double lambda, double delta, double mu,
                double nu, long long reps, char** table, int* pass);

/* ---- spheroid gravity ---- */

int gie_cross_coupling(double m_atom_kg, double a_m, double c_m, double d_m,
                       double rel_tol, double* value_j, double* abs_err_j);
int gie_self_coupling(double m_atom_kg, double a_m, double c_m,
                      double* value_j);
int gie_optimal_ellipticity(double d_over_c, double volume_m3,
                            double m_atom_kg, double rel_tol, double* e_star,
                            double* enhancement, double* coupling_j);

/* ---- experiment configuration ---- */

typedef struct gie_config gie_config;

/* Flat `key = value` text (NULL or "" for none) plus `key=value` overrides. */
int gie_config_parse(const char* text, const char* const* overrides,
                     size_t n_overrides, gie_config** out);
int gie_config_load(const char* path, const char* const* overrides,
                    size_t n_overrides, gie_config** out);
/* "headline" (unsqueezed 1e16-atom reference) or "sphere" (two erbium
 * unit spheres; set d via overrides on top). */
int gie_config_preset(const char* name, const char* const* overrides,
                      size_t n_overrides, gie_config** out);
void gie_config_free(gie_config* cfg);
int gie_config_echo(const gie_config* cfg, char** out);

typedef struct {
  double lp_cross_j; /* lambda'_cross, J */
  double lp_self_j;  /* lambda'_self, J */
  double kp_self_j;  /* kappa'_self, J */
  double lambda;     /* dimensionless, 2 lambda' t / hbar */
  double lambda_s;
  double kappa_s;
  double kappa_d;
  double gamma;
} gie_couplings;

typedef struct {
  gie_snr_report base; /* unsqueezed, at M_eff = reps * setups */
  gie_couplings couplings;
  double gain;
  double snr;
  double density_cm3;
  double lifetime_s;
  int density_ok;
  int lifetime_ok;
  int perturbative_ok;
} gie_eval;

int gie_couplings_eval(const gie_config* cfg, gie_couplings* out);
int gie_evaluate(const gie_config* cfg, gie_eval* out);
int gie_report(const gie_config* cfg, char** out);
int gie_scattering_suppression(const gie_config* cfg, double threshold,
                               double* orders);
int gie_three_body_lifetime(double n0_cm3, double loss_cm6_s,
                            double decay_factor, double* lifetime_s);

/* ---- scans ---- */

typedef struct gie_scan gie_scan;

int gie_scan_create(const gie_config* base, gie_scan** out);
/* "figure3" (3 axes) or "figure3-contour" (d x t at 1e16 atoms). */
int gie_scan_preset(const char* name, gie_scan** out);
void gie_scan_free(gie_scan* scan);

/* axis names: d_m, time_s, atoms, squeeze_db, a_s_m, reps */
int gie_scan_add_axis(gie_scan* scan, const char* axis, double min, double max,
                      int points, int log_scale);
int gie_scan_clear_axes(gie_scan* scan);
int gie_scan_set_density_cap(gie_scan* scan, double cap_cm3);
int gie_scan_set_total_time(gie_scan* scan, double t_total_s);
int gie_scan_set_touching_density(gie_scan* scan, double n_target_cm3);
/* c = d/2, a = c / sqrt(1 - e^2); density then follows N / d^3 */
int gie_scan_set_touching_aspect(gie_scan* scan, double ellipticity);

int gie_scan_run(gie_scan* scan);
/* format: "csv", "json" or "svg"; requires a completed gie_scan_run */
int gie_scan_export(const gie_scan* scan, const char* format, char** out);
/* SNR = target contour of a 2-axis scan, as CSV (line,x,y) */
int gie_scan_contour(const gie_scan* scan, double target, char** csv_out);

#ifdef __cplusplus
}
#endif

#endif /* GIE_H */
