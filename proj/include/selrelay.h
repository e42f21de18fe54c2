/*
 * C API of the selective-relaying analysis library.
 *
 * The library evaluates closed-form relay switching rates and activation
 * times for opportunistic relaying (OR) and the DSSC-B switch-and-stay
 * scheme over time-varying Rayleigh fading, and runs the matching
 * Monte-Carlo experiments. Objects are opaque handles; every function
 * returns a status code and writes results through out-parameters. On any
 * failure sr_last_error() describes the problem for the calling thread.
 */
#ifndef SELRELAY_H
#define SELRELAY_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SELRELAY_API __declspec(dllexport)
#else
#define SELRELAY_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sr_status {
    SR_OK = 0,
    SR_ERR_INVALID_ARG = 1,       /* null pointer, bad handle, out-of-range value */
    SR_ERR_DOMAIN = 2,            /* numeric argument outside the operation's domain */
    SR_ERR_CONFIG = 3,            /* inconsistent configuration */
    SR_ERR_RESOLUTION = 4,        /* sample rate below 32x a hop's Doppler frequency */
    SR_ERR_INSUFFICIENT_DATA = 5, /* too few samples for the estimator */
    SR_ERR_TOPOLOGY = 6,          /* relay count unsupported by the operation */
    SR_ERR_IO = 7,                /* file output failed */
    SR_ERR_RUNTIME = 8            /* anything else */
} sr_status;

typedef enum sr_scheme { SR_SCHEME_OR = 0, SR_SCHEME_DSSC_B = 1 } sr_scheme;

typedef enum sr_metric {
    SR_METRIC_MIN_EQUIVALENT = 0,
    SR_METRIC_HALF_HARMONIC_MEAN = 1
} sr_metric;

typedef enum sr_direction {
    SR_CROSSING_UP = 0,
    SR_CROSSING_DOWN = 1,
    SR_CROSSING_BOTH = 2
} sr_direction;

typedef enum sr_sweep_axis {
    SR_AXIS_DOPPLER_RATIO = 0,
    SR_AXIS_RELAY_COUNT = 1,
    SR_AXIS_THRESHOLD = 2,
    SR_AXIS_GAMMA = 3
} sr_sweep_axis;

typedef struct sr_topology sr_topology;
typedef struct sr_trace sr_trace;
typedef struct sr_experiment sr_experiment;
typedef struct sr_result sr_result;
typedef struct sr_sweep sr_sweep;

/* One simulated quantity with its closed-form counterpart. Fields with no
 * defined value (e.g. analytic where no formula applies) are NaN. */
typedef struct sr_report {
    double analytic;
    double sim_mean;
    double sim_stderr;
    double rel_deviation;
    uint64_t n_events;
    int low_power; /* nonzero when no events were observed */
} sr_report;

/* ---- library info ---- */

SELRELAY_API const char* sr_version(void);
SELRELAY_API const char* sr_rng_name(void);
/* Message for the most recent failure on this thread; empty string if none. */
SELRELAY_API const char* sr_last_error(void);

/* ---- topology ---- */

/* Arrays are indexed by relay: omegas are linear average squared gains,
 * dopplers in Hz, gamma the common unfaded SNR (linear). */
SELRELAY_API sr_status sr_topology_create(const double* omega_sr, const double* doppler_sr_hz,
                                          const double* omega_rd, const double* doppler_rd_hz,
                                          size_t num_relays, double gamma, sr_topology** out);
SELRELAY_API void sr_topology_destroy(sr_topology* topology);

/* ---- closed forms ---- */

SELRELAY_API sr_status sr_min_equiv_omega(double omega_sr, double omega_rd, double* out);
SELRELAY_API sr_status sr_min_equiv_pdf(double x, double omega_sr, double f_sr_hz,
                                        double omega_rd, double f_rd_hz, double* out);
SELRELAY_API sr_status sr_min_equiv_cdf(double x, double omega_sr, double f_sr_hz,
                                        double omega_rd, double f_rd_hz, double* out);
SELRELAY_API sr_status sr_metric_gap_pdf_at_zero(double omega1, double omega2, double* out);
SELRELAY_API sr_status sr_or_steady_state(double omega1, double omega2, double* rho1,
                                          double* rho2);

SELRELAY_API sr_status sr_or_switch_rate(const sr_topology* topology, double* hz);
SELRELAY_API sr_status sr_or_switch_rate_iid2(double f_sr1_hz, double f_r1d_hz, double f_sr2_hz,
                                              double f_r2d_hz, double* hz);
SELRELAY_API sr_status sr_or_switch_rate_iid(int num_relays, double doppler_hz, double* hz);
SELRELAY_API sr_status sr_or_activation_times(const sr_topology* topology, double* at1_s,
                                              double* at2_s);
SELRELAY_API sr_status sr_or_activation_time_iid(int num_relays, double doppler_hz, double* s);

SELRELAY_API sr_status sr_dssc_crossing_rate(const sr_topology* topology, int relay_index,
                                             double threshold, double* hz);
SELRELAY_API sr_status sr_dssc_stationary(const sr_topology* topology, double threshold,
                                          double pi_out[6], double* rho1, double* rho2);
SELRELAY_API sr_status sr_dssc_switch_rate(const sr_topology* topology, double threshold,
                                           double* hz);
/* Activation time may be +infinity when the switch rate is zero. */
SELRELAY_API sr_status sr_dssc_activation_time(const sr_topology* topology, int relay_index,
                                               double threshold, double* s);
SELRELAY_API sr_status sr_worst_case_threshold(const sr_topology* topology, double t_lo,
                                               double t_hi, double* t_star);

/* ---- fading traces ---- */

SELRELAY_API sr_status sr_trace_generate(double omega, double doppler_hz, double sample_rate_hz,
                                         double duration_s, unsigned num_sinusoids, uint64_t seed,
                                         sr_trace** out);
SELRELAY_API void sr_trace_destroy(sr_trace* trace);
SELRELAY_API sr_status sr_trace_length(const sr_trace* trace, size_t* out);
/* Copies min(capacity, length) samples; writes the copied count. */
SELRELAY_API sr_status sr_trace_samples(const sr_trace* trace, double* dst, size_t capacity,
                                        size_t* copied);
SELRELAY_API sr_status sr_trace_export_csv(const sr_trace* trace, const char* path);
SELRELAY_API sr_status sr_trace_validate_rayleigh(const sr_trace* trace, double tolerance,
                                                  double* mean_sq, double* mean_sq_rel_dev,
                                                  double* ks_distance, int* passed);
SELRELAY_API sr_status sr_measure_lcr(const double* samples, size_t n, double sample_rate_hz,
                                      double level, sr_direction direction, double* hz);

/* ---- experiments ---- */

/* threshold is ignored for OR; sample_rate_hz = 0 selects 64x the largest
 * Doppler frequency; period_samples applies to DSSC-B decisions. */
SELRELAY_API sr_status sr_experiment_create(const sr_topology* topology, sr_scheme scheme,
                                            sr_metric metric, double threshold,
                                            double sample_rate_hz, double duration_s,
                                            unsigned num_sinusoids, unsigned replications,
                                            uint64_t base_seed, int period_samples,
                                            sr_experiment** out);
SELRELAY_API void sr_experiment_destroy(sr_experiment* experiment);
SELRELAY_API sr_status sr_experiment_run(const sr_experiment* experiment, sr_result** out);

SELRELAY_API void sr_result_destroy(sr_result* result);
SELRELAY_API sr_status sr_result_switch_rate(const sr_result* result, sr_report* out);
SELRELAY_API sr_status sr_result_num_relays(const sr_result* result, size_t* out);
SELRELAY_API sr_status sr_result_activation_time(const sr_result* result, int relay_index,
                                                 sr_report* out);
SELRELAY_API sr_status sr_result_occupancy(const sr_result* result, int relay_index,
                                           sr_report* out);
/* DSSC-B only: marginal threshold down-crossing rate of one relay's
 * min-equivalent envelope. */
SELRELAY_API sr_status sr_result_crossing_rate(const sr_result* result, int relay_index,
                                               sr_report* out);
SELRELAY_API sr_status sr_result_sample_rate(const sr_result* result, double* hz);

/* ---- sweeps and worst-case comparison ---- */

SELRELAY_API sr_status sr_sweep_run(const sr_experiment* experiment_template, sr_sweep_axis axis,
                                    const double* values, size_t num_values, sr_sweep** out);
SELRELAY_API void sr_sweep_destroy(sr_sweep* sweep);
SELRELAY_API sr_status sr_sweep_size(const sr_sweep* sweep, size_t* out);
SELRELAY_API sr_status sr_sweep_param_value(const sr_sweep* sweep, size_t row, double* out);
/* Borrowed pointer, valid while the sweep handle lives. */
SELRELAY_API sr_status sr_sweep_result(const sr_sweep* sweep, size_t row,
                                       const sr_result** out);

/* Runs worst_case_threshold, then both schemes at the optimum. or_result and
 * dssc_result are owned by the caller. */
SELRELAY_API sr_status sr_compare_worst_case(const sr_experiment* experiment_template,
                                             double* t_star, double* analytic_or_hz,
                                             double* analytic_dssc_hz, sr_result** or_result,
                                             sr_result** dssc_result);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SELRELAY_H */
