#ifndef HALPHEN_LAB_H
#define HALPHEN_LAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define HL_API __declspec(dllexport)
#else
#define HL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hl_status {
    HL_OK = 0,
    HL_INVALID_ARGUMENT = 1,
    HL_TRUNCATION_NOT_REACHED = 2,
    HL_POLE_HIT = 3,
    HL_DOMAIN_ERROR = 4,
    HL_DIVERGENT_PARAMETER = 5,
    HL_POLE_AT_S = 6,
    HL_STEP_TOO_LARGE = 7,
    HL_STEP_UNDERFLOW = 8,
    HL_DEGENERATE_METRIC = 9,
    HL_INSUFFICIENT_DATA = 10,
    HL_THETA_ZERO_DIVISION = 11,
    HL_SINGULAR_LAMBDA = 12,
    HL_KINEMATICS_DEGENERATE = 13,
    HL_NOT_CONVERGED = 14,
    HL_LATTICE_POINT_HIT = 15,
    HL_WEIGHT_TOO_LARGE = 16,
    HL_DISCONNECTED_GRAPH = 17,
    HL_FIT_ILL_CONDITIONED = 18,
    HL_OUT_OF_RANGE = 19,
    HL_IO_ERROR = 20,
    HL_PARSE_ERROR = 21,
    HL_INTERNAL = 99
} hl_status;

typedef enum hl_system { HL_SYSTEM_DARBOUX_HALPHEN = 0, HL_SYSTEM_LAGRANGE = 1 } hl_system;

typedef enum hl_cp_field { HL_CP_FIELD_CP2 = 0, HL_CP_FIELD_HEISENBERG = 1, HL_CP_FIELD_EISENSTEIN = 2 } hl_cp_field;

typedef struct hl_trajectory hl_trajectory;
typedef struct hl_flow hl_flow;

HL_API const char* hl_version(void);
HL_API const char* hl_status_name(hl_status status);
/* Message of the last failing call on this thread. */
HL_API const char* hl_last_error(void);

/* 0 restores the default (HALPHEN_LAB_THREADS, then hardware concurrency). */
HL_API void hl_set_threads(int n);
HL_API int hl_get_threads(void);

/* Strings returned through char** are malloc'd; release with hl_string_free. */
HL_API void hl_string_free(char* s);

/* Modular forms. Complex numbers are passed as (re, im) pairs. */
HL_API hl_status hl_theta(int j, double v_re, double v_im, double tau_re, double tau_im, double out[2]);
HL_API hl_status hl_theta_char(const double a[2], const double b[2], double v_re, double v_im, double tau_re,
                               double tau_im, double out[2]);
HL_API hl_status hl_dedekind_eta(double tau_re, double tau_im, double out[2]);
HL_API hl_status hl_eisenstein_holo(int k, double tau_re, double tau_im, double out[2]);

/* Non-holomorphic Eisenstein series. n_max = 0 picks the mode count automatically. */
HL_API hl_status hl_eisenstein_lattice(double s, double tau_re, double tau_im, double cutoff, double* value,
                                       double* est_error);
HL_API hl_status hl_eisenstein_fourier(double s, double tau_re, double tau_im, int n_max, double* value,
                                       double* est_error);
HL_API hl_status hl_laplacian_eigencheck(double s, double tau_re, double tau_im, double h, double* residual);

/* Trajectories of the Darboux-Halphen and Lagrange systems. */
HL_API hl_status hl_trajectory_integrate(hl_system system, const double init[3], double T0, double T_end, double tol,
                                         int stop_on_root, hl_trajectory** out);
HL_API hl_status hl_trajectory_halphen(double T0, double T1, size_t n, hl_trajectory** out);
HL_API hl_status hl_trajectory_from_csv(const char* text, hl_system system, hl_trajectory** out);
HL_API size_t hl_trajectory_length(const hl_trajectory* traj);
HL_API hl_status hl_trajectory_sample(const hl_trajectory* traj, size_t i, double* T, double Omega[3],
                                      double Omega_dot[3], double* tau);
HL_API hl_status hl_trajectory_csv(const hl_trajectory* traj, char** out);
HL_API hl_status hl_trajectory_json(const hl_trajectory* traj, char** out);
HL_API hl_status hl_curvature_report(const hl_trajectory* traj, char** out);
HL_API void hl_trajectory_free(hl_trajectory* traj);

/* Closed-form Halphen solution and its checks. */
HL_API hl_status hl_halphen_real(double T, double Omega[3]);
HL_API hl_status hl_halphen_dh_residual(double T, double* residual);
HL_API hl_status hl_reflection_check(double T, double residual[3]);

/* Ricci flow on Bianchi IX spheres. */
HL_API hl_status hl_flow_run(const double init[3], double T0, double T_end, double tol, hl_flow** out);
HL_API hl_status hl_flow_isotropy(const hl_flow* run, double T, double* ratio);
HL_API hl_status hl_flow_volume_rate(const hl_flow* run, double T, double* numeric, double* formula,
                                     double* residual);
HL_API hl_status hl_flow_summary_json(const hl_flow* run, char** out);
HL_API hl_status hl_flow_csv(const hl_flow* run, char** out);
HL_API void hl_flow_free(hl_flow* run);
/* count runs with initial data uniform in [lo, hi]^3 at T0, seeded. */
HL_API hl_status hl_flow_batch_json(size_t count, double lo, double hi, double T0, double T_end, double tol,
                                    uint64_t seed, char** out);

/* Conformal sector. w holds three complex numbers as six doubles. */
HL_API hl_status hl_w_theta(const double a[2], const double b[2], double z_re, double z_im, double w[6],
                            double lambda[2]);
HL_API hl_status hl_w_ah_limit(double z0_re, double z0_im, double z_re, double z_im, double w[6], double lambda[2]);
HL_API hl_status hl_w_ode_residual(const double a[2], const double b[2], double z_re, double z_im, double h,
                                   double* residual);
HL_API hl_status hl_cp_harmonic_check(hl_cp_field field, double param, double rho, double eta, double h,
                                      double* residual);

/* Amplitudes. */
HL_API hl_status hl_tree_amplitude_gamma(double s, double t, double alpha_prime, double* out);
HL_API hl_status hl_tree_amplitude_series(double s, double t, double alpha_prime, int N, double* out);
HL_API hl_status hl_sigma_n(double s, double t, double alpha_prime, int n, double* direct, double* from_basis);
HL_API hl_status hl_dimension_dn(int n, int* out);
HL_API hl_status hl_genus_one_propagator(double z_re, double z_im, double tau_re, double tau_im, double* out);
HL_API hl_status hl_genus_one_propagator_momentum(double z_re, double z_im, double tau_re, double tau_im, int cutoff,
                                                  double* out);
HL_API hl_status hl_kronecker_eisenstein_dn(int n, double tau_re, double tau_im, double cutoff, double* value,
                                            double* est_error);
HL_API hl_status hl_graph_d(const int mult[6], double tau_re, double tau_im, double cutoff, double* value,
                            double* est_error, int* forced_zero, int* loops);
/* taus holds count (re, im) pairs. */
HL_API hl_status hl_decomposition_probe_json(int n, const double* taus, size_t count, double cutoff, char** out);

#ifdef __cplusplus
}
#endif

#endif
