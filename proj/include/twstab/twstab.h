#ifndef TWSTAB_TWSTAB_H
#define TWSTAB_TWSTAB_H

/* C interface to the travelling-wave stability library. Every function
 * returns a status code; on failure twstab_last_error() holds a message for
 * the calling thread. Handles are opaque and released with their _free
 * function (NULL is accepted). */

#include <stddef.h>

#if defined(_WIN32)
#  if defined(TWSTAB_BUILDING_LIBRARY)
#    define TWSTAB_API __declspec(dllexport)
#  else
#    define TWSTAB_API __declspec(dllimport)
#  endif
#else
#  define TWSTAB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum twstab_status {
  TWSTAB_OK = 0,
  TWSTAB_E_DOMAIN,
  TWSTAB_E_SINGULAR_POINT,
  TWSTAB_E_DEGENERATE_EIGENVALUE,
  TWSTAB_E_PARAMETER,
  TWSTAB_E_SOLVER_FAILURE,
  TWSTAB_E_BRACKET,
  TWSTAB_E_INSUFFICIENT_TAIL,
  TWSTAB_E_ESCAPE,
  TWSTAB_E_SPECTRAL_REGION,
  TWSTAB_E_STIFFNESS,
  TWSTAB_E_ON_ZERO,
  TWSTAB_E_ALIASING,
  TWSTAB_E_INSTABILITY,
  TWSTAB_E_CONFIG,
  TWSTAB_E_IO,
  TWSTAB_E_MISMATCH,
  TWSTAB_E_NULL_ARGUMENT,
  TWSTAB_E_INTERNAL
} twstab_status;

typedef struct twstab_params {
  double F;
  double mu;
  double s_h;
  double alpha;
  double rho;
  double c;
} twstab_params;

typedef struct twstab_profile twstab_profile;
typedef struct twstab_evans_scan twstab_evans_scan;
typedef struct twstab_contour_result twstab_contour_result;
typedef struct twstab_simulation twstab_simulation;
typedef struct twstab_decay twstab_decay;

TWSTAB_API const char* twstab_version(void);
TWSTAB_API const char* twstab_last_error(void);
TWSTAB_API const char* twstab_status_name(twstab_status status);

/* Parameters */
TWSTAB_API twstab_status twstab_params_default(twstab_params* out);
TWSTAB_API twstab_status twstab_params_validate(const twstab_params* params);
TWSTAB_API twstab_status twstab_params_load(const char* path, twstab_params* out);
/* buf receives 16 hex digits and a terminator (len >= 17). */
TWSTAB_API twstab_status twstab_params_hash(const twstab_params* params, char* buf, size_t len);

/* Spectrum of the asymptotic operators */
TWSTAB_API twstab_status twstab_rightmost_essential(const twstab_params* params, double c, double* out);
TWSTAB_API twstab_status twstab_absolute_edge(const twstab_params* params, double c, double* out);
TWSTAB_API twstab_status twstab_dispersion(const twstab_params* params, double c, double k, double re[4],
                                           double im[4]);
/* verdict: 0 resolvent, 1 essential, 2 absolute */
TWSTAB_API twstab_status twstab_classify(const twstab_params* params, double c, double re, double im, int* i_minus,
                                         int* i_plus, int* verdict);
TWSTAB_API twstab_status twstab_write_dispersion_csv(const twstab_params* params, double c, double k_max, int n_k,
                                                     const char* path);
TWSTAB_API twstab_status twstab_write_spectrum_map(const twstab_params* params, double c, double re_min,
                                                   double re_max, double im_min, double im_max, int n_re, int n_im,
                                                   const char* path);

/* Travelling-wave profile */
TWSTAB_API twstab_status twstab_profile_solve(const twstab_params* params, double L, int n_nodes,
                                              twstab_profile** out);
/* expected may be NULL; otherwise a parameter-hash mismatch gives TWSTAB_E_MISMATCH. */
TWSTAB_API twstab_status twstab_profile_load(const char* csv_path, const twstab_params* expected,
                                             twstab_profile** out);
TWSTAB_API twstab_status twstab_profile_save(const twstab_profile* profile, const char* csv_path);
TWSTAB_API twstab_status twstab_profile_info(const twstab_profile* profile, double* c_star, double* L,
                                             double* residual_norm, size_t* n_nodes);
/* rates: u at -inf, v at -inf, u at +inf, v at +inf */
TWSTAB_API twstab_status twstab_profile_decay_rates(const twstab_profile* profile, double rates[4]);
TWSTAB_API void twstab_profile_free(twstab_profile* profile);

/* Signed manifold gap per trial speed; ok[i] = 0 where that speed failed. */
TWSTAB_API twstab_status twstab_miss_distance(const twstab_params* params, const double* c_values, size_t n,
                                              double* distance, int* ok);

/* Evans function */
TWSTAB_API twstab_status twstab_evans(const twstab_profile* profile, double re, double im, double* d_re,
                                      double* d_im);
TWSTAB_API twstab_status twstab_evans_scan_run(const twstab_profile* profile, const double* re, const double* im,
                                               size_t n, unsigned threads, twstab_evans_scan** out);
TWSTAB_API size_t twstab_evans_scan_size(const twstab_evans_scan* scan);
TWSTAB_API twstab_status twstab_evans_scan_get(const twstab_evans_scan* scan, size_t i, double* lambda_re,
                                               double* lambda_im, double* d_re, double* d_im, int* ok);
TWSTAB_API twstab_status twstab_evans_scan_max_plucker(const twstab_evans_scan* scan, double* out);
/* Writes up to cap crossings; count receives the total number found. */
TWSTAB_API twstab_status twstab_evans_scan_crossings(const twstab_evans_scan* scan, double* out, size_t cap,
                                                     size_t* count);
TWSTAB_API twstab_status twstab_evans_scan_write_csv(const twstab_evans_scan* scan, const char* path);
TWSTAB_API void twstab_evans_scan_free(twstab_evans_scan* scan);

TWSTAB_API twstab_status twstab_branch_probe(const twstab_profile* profile, unsigned threads, int* detected,
                                             double* location, double* gamma_a, char* message, size_t message_len);

/* Winding number of D along the indented semicircle */
TWSTAB_API twstab_status twstab_count_roots(const twstab_profile* profile, double r_s, double r_b, size_t n_points,
                                            unsigned threads, twstab_contour_result** out);
TWSTAB_API twstab_status twstab_contour_result_info(const twstab_contour_result* result, int* winding,
                                                    double* total_arg_change, double* residual,
                                                    double* max_step_arg, size_t* n_points_final,
                                                    int* refinement_rounds);
TWSTAB_API twstab_status twstab_contour_result_write(const twstab_contour_result* result, const char* csv_path,
                                                     const char* summary_path);
TWSTAB_API void twstab_contour_result_free(twstab_contour_result* result);

/* PDE simulation */
typedef enum twstab_frame { TWSTAB_FRAME_LAB = 0, TWSTAB_FRAME_COMOVING = 1 } twstab_frame;
typedef enum twstab_initial { TWSTAB_INITIAL_TANH = 0, TWSTAB_INITIAL_PROFILE = 1 } twstab_initial;
typedef enum twstab_perturbation {
  TWSTAB_PERTURB_NONE = 0,
  TWSTAB_PERTURB_GAUSSIAN = 1,
  TWSTAB_PERTURB_TRANSLATION = 2
} twstab_perturbation;

typedef struct twstab_sim_config {
  double half_width;
  int n_cells;
  double dt; /* 0: 0.4 dx^2 */
  double t_end;
  twstab_frame frame;
  double frame_speed;
  twstab_initial initial;
  twstab_perturbation perturbation;
  double amplitude;
  double width;
  double track_interval;
  const double* snapshot_times;
  size_t n_snapshots;
} twstab_sim_config;

TWSTAB_API twstab_status twstab_sim_config_default(twstab_sim_config* out);
/* profile may be NULL unless the initial data or perturbation uses it. */
TWSTAB_API twstab_status twstab_simulate(const twstab_params* params, const twstab_sim_config* config,
                                         const twstab_profile* profile, twstab_simulation** out);
/* drift: last minus first tracked front position */
TWSTAB_API twstab_status twstab_simulation_info(const twstab_simulation* sim, double* speed, double* fit_residual,
                                                double* dx, double* dt, double* min_value, double* max_value,
                                                double* drift);
/* Writes snapshot_<k>.csv for each requested time and front_track.csv into dir. */
TWSTAB_API twstab_status twstab_simulation_write(const twstab_simulation* sim, const char* dir);
TWSTAB_API void twstab_simulation_free(twstab_simulation* sim);

TWSTAB_API twstab_status twstab_perturbation_decay(const twstab_profile* profile, double amplitude, double width,
                                                   twstab_perturbation shape, double t_end,
                                                   twstab_decay** out);
TWSTAB_API size_t twstab_decay_size(const twstab_decay* decay);
TWSTAB_API twstab_status twstab_decay_get(const twstab_decay* decay, size_t i, double* t, double* deviation,
                                          double* shift);
TWSTAB_API twstab_status twstab_decay_write_csv(const twstab_decay* decay, const char* path);
TWSTAB_API void twstab_decay_free(twstab_decay* decay);

#ifdef __cplusplus
}
#endif

#endif
