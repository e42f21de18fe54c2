#include "selrelay.h"

#include <cstring>
#include <string>

#include "selrelay/closedform.hpp"
#include "selrelay/fading.hpp"
#include "selrelay/montecarlo.hpp"
#include "selrelay/rng.hpp"

using namespace selrelay;
namespace cf = selrelay::closedform;
namespace mc = selrelay::montecarlo;

struct sr_topology {
    RelayTopology value;
};
struct sr_trace {
    FadingTrace value;
};
struct sr_experiment {
    ExperimentConfig value;
};
struct sr_result {
    ExperimentResult value;
};
struct sr_sweep {
    std::vector<double> params;
    std::vector<sr_result> rows;
};

namespace {

thread_local std::string g_last_error;

sr_status fail(sr_status code, const char* what) {
    g_last_error = what ? what : "";
    return code;
}

template <class Fn>
sr_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return SR_OK;
    } catch (const domain_error& e) {
        return fail(SR_ERR_DOMAIN, e.what());
    } catch (const resolution_error& e) {
        return fail(SR_ERR_RESOLUTION, e.what());
    } catch (const unsupported_topology_error& e) {
        return fail(SR_ERR_TOPOLOGY, e.what());
    } catch (const insufficient_data_error& e) {
        return fail(SR_ERR_INSUFFICIENT_DATA, e.what());
    } catch (const config_error& e) {
        return fail(SR_ERR_CONFIG, e.what());
    } catch (const std::exception& e) {
        return fail(SR_ERR_RUNTIME, e.what());
    }
}

sr_status require(bool ok, const char* what) {
    return ok ? SR_OK : fail(SR_ERR_INVALID_ARG, what);
}

sr_report to_c(const RateReport& r) {
    sr_report out;
    out.analytic = r.analytic;
    out.sim_mean = r.sim_mean;
    out.sim_stderr = r.sim_stderr;
    out.rel_deviation = r.rel_deviation;
    out.n_events = r.n_events;
    out.low_power = r.low_power ? 1 : 0;
    return out;
}

sr_status pick_report(const std::vector<RateReport>& reports, int relay_index, sr_report* out) {
    if (!out) return fail(SR_ERR_INVALID_ARG, "null output pointer");
    if (relay_index < 1 || static_cast<std::size_t>(relay_index) > reports.size())
        return fail(SR_ERR_INVALID_ARG, "relay_index out of range");
    *out = to_c(reports[static_cast<std::size_t>(relay_index - 1)]);
    return SR_OK;
}

} // namespace

extern "C" {

const char* sr_version(void) { return "1.0.0"; }
const char* sr_rng_name(void) { return rng_algorithm_name(); }
const char* sr_last_error(void) { return g_last_error.c_str(); }

sr_status sr_topology_create(const double* omega_sr, const double* doppler_sr_hz,
                             const double* omega_rd, const double* doppler_rd_hz,
                             size_t num_relays, double gamma, sr_topology** out) {
    if (auto s = require(out && omega_sr && doppler_sr_hz && omega_rd && doppler_rd_hz,
                         "sr_topology_create: null pointer argument"))
        return s;
    return guarded([&] {
        std::vector<RelayTopology::RelayLinks> relays;
        relays.reserve(num_relays);
        for (size_t i = 0; i < num_relays; ++i)
            relays.push_back({LinkParams(omega_sr[i], doppler_sr_hz[i]),
                              LinkParams(omega_rd[i], doppler_rd_hz[i])});
        *out = new sr_topology{RelayTopology(std::move(relays), gamma)};
    });
}

void sr_topology_destroy(sr_topology* topology) { delete topology; }

sr_status sr_min_equiv_omega(double omega_sr, double omega_rd, double* out) {
    if (auto s = require(out != nullptr, "null output pointer")) return s;
    return guarded([&] {
        *out = cf::min_equiv_omega(LinkParams(omega_sr, 1.0), LinkParams(omega_rd, 1.0)).omega;
    });
}

sr_status sr_min_equiv_pdf(double x, double omega_sr, double f_sr_hz, double omega_rd,
                           double f_rd_hz, double* out) {
    if (auto s = require(out != nullptr, "null output pointer")) return s;
    return guarded([&] {
        *out = cf::min_equiv_pdf(x, LinkParams(omega_sr, f_sr_hz), LinkParams(omega_rd, f_rd_hz));
    });
}

sr_status sr_min_equiv_cdf(double x, double omega_sr, double f_sr_hz, double omega_rd,
                           double f_rd_hz, double* out) {
    if (auto s = require(out != nullptr, "null output pointer")) return s;
    return guarded([&] {
        *out = cf::min_equiv_cdf(x, LinkParams(omega_sr, f_sr_hz), LinkParams(omega_rd, f_rd_hz));
    });
}

sr_status sr_metric_gap_pdf_at_zero(double omega1, double omega2, double* out) {
    if (auto s = require(out != nullptr, "null output pointer")) return s;
    return guarded([&] {
        *out = cf::metric_gap_pdf_at_zero(MinEquivalentParams(omega1),
                                          MinEquivalentParams(omega2));
    });
}

sr_status sr_or_steady_state(double omega1, double omega2, double* rho1, double* rho2) {
    if (auto s = require(rho1 && rho2, "null output pointer")) return s;
    return guarded([&] {
        const auto rho =
            cf::or_steady_state(MinEquivalentParams(omega1), MinEquivalentParams(omega2));
        *rho1 = rho.first;
        *rho2 = rho.second;
    });
}

sr_status sr_or_switch_rate(const sr_topology* topology, double* hz) {
    if (auto s = require(topology && hz, "null argument")) return s;
    return guarded([&] { *hz = cf::or_switch_rate(topology->value); });
}

sr_status sr_or_switch_rate_iid2(double f_sr1_hz, double f_r1d_hz, double f_sr2_hz,
                                 double f_r2d_hz, double* hz) {
    if (auto s = require(hz != nullptr, "null output pointer")) return s;
    return guarded([&] { *hz = cf::or_switch_rate_iid2(f_sr1_hz, f_r1d_hz, f_sr2_hz, f_r2d_hz); });
}

sr_status sr_or_switch_rate_iid(int num_relays, double doppler_hz, double* hz) {
    if (auto s = require(hz != nullptr, "null output pointer")) return s;
    return guarded([&] { *hz = cf::or_switch_rate_iid(num_relays, doppler_hz); });
}

sr_status sr_or_activation_times(const sr_topology* topology, double* at1_s, double* at2_s) {
    if (auto s = require(topology && at1_s && at2_s, "null argument")) return s;
    return guarded([&] {
        const auto at = cf::or_activation_times(topology->value);
        *at1_s = at.first;
        *at2_s = at.second;
    });
}

sr_status sr_or_activation_time_iid(int num_relays, double doppler_hz, double* s_out) {
    if (auto s = require(s_out != nullptr, "null output pointer")) return s;
    return guarded([&] { *s_out = cf::or_activation_time_iid(num_relays, doppler_hz); });
}

sr_status sr_dssc_crossing_rate(const sr_topology* topology, int relay_index, double threshold,
                                double* hz) {
    if (auto s = require(topology && hz, "null argument")) return s;
    return guarded([&] {
        *hz = cf::dssc_crossing_rate(topology->value, relay_index, SwitchThreshold(threshold));
    });
}

sr_status sr_dssc_stationary(const sr_topology* topology, double threshold, double pi_out[6],
                             double* rho1, double* rho2) {
    if (auto s = require(topology && pi_out && rho1 && rho2, "null argument")) return s;
    return guarded([&] {
        const auto st = cf::dssc_stationary(topology->value, SwitchThreshold(threshold));
        for (int i = 0; i < 6; ++i) pi_out[i] = st.pi[static_cast<std::size_t>(i)];
        *rho1 = st.rho1;
        *rho2 = st.rho2;
    });
}

sr_status sr_dssc_switch_rate(const sr_topology* topology, double threshold, double* hz) {
    if (auto s = require(topology && hz, "null argument")) return s;
    return guarded([&] {
        *hz = cf::dssc_switch_rate(topology->value, SwitchThreshold(threshold));
    });
}

sr_status sr_dssc_activation_time(const sr_topology* topology, int relay_index, double threshold,
                                  double* s_out) {
    if (auto s = require(topology && s_out, "null argument")) return s;
    return guarded([&] {
        *s_out = cf::dssc_activation_time(topology->value, relay_index,
                                          SwitchThreshold(threshold));
    });
}

sr_status sr_worst_case_threshold(const sr_topology* topology, double t_lo, double t_hi,
                                  double* t_star) {
    if (auto s = require(topology && t_star, "null argument")) return s;
    return guarded([&] {
        *t_star = cf::worst_case_threshold(topology->value, t_lo, t_hi).t;
    });
}

sr_status sr_trace_generate(double omega, double doppler_hz, double sample_rate_hz,
                            double duration_s, unsigned num_sinusoids, uint64_t seed,
                            sr_trace** out) {
    if (auto s = require(out != nullptr, "null output pointer")) return s;
    return guarded([&] {
        *out = new sr_trace{generate_trace(
            LinkParams(omega, doppler_hz),
            TraceConfig(sample_rate_hz, duration_s, num_sinusoids, seed))};
    });
}

void sr_trace_destroy(sr_trace* trace) { delete trace; }

sr_status sr_trace_length(const sr_trace* trace, size_t* out) {
    if (auto s = require(trace && out, "null argument")) return s;
    *out = trace->value.samples.size();
    return SR_OK;
}

sr_status sr_trace_samples(const sr_trace* trace, double* dst, size_t capacity, size_t* copied) {
    if (auto s = require(trace && dst && copied, "null argument")) return s;
    const size_t n = std::min(capacity, trace->value.samples.size());
    std::memcpy(dst, trace->value.samples.data(), n * sizeof(double));
    *copied = n;
    return SR_OK;
}

sr_status sr_trace_export_csv(const sr_trace* trace, const char* path) {
    if (auto s = require(trace && path, "null argument")) return s;
    const sr_status st = guarded([&] { export_trace_csv(trace->value, path); });
    return st == SR_ERR_CONFIG ? SR_ERR_IO : st;
}

sr_status sr_trace_validate_rayleigh(const sr_trace* trace, double tolerance, double* mean_sq,
                                     double* mean_sq_rel_dev, double* ks_distance, int* passed) {
    if (auto s = require(trace && mean_sq && mean_sq_rel_dev && ks_distance && passed,
                         "null argument"))
        return s;
    return guarded([&] {
        const auto rep = validate_rayleigh(trace->value, tolerance);
        *mean_sq = rep.sample_mean_sq;
        *mean_sq_rel_dev = rep.mean_sq_rel_dev;
        *ks_distance = rep.ks_distance;
        *passed = rep.passed ? 1 : 0;
    });
}

sr_status sr_measure_lcr(const double* samples, size_t n, double sample_rate_hz, double level,
                         sr_direction direction, double* hz) {
    if (auto s = require(samples && hz, "null argument")) return s;
    return guarded([&] {
        const CrossingDirection dir = direction == SR_CROSSING_UP ? CrossingDirection::Up
                                      : direction == SR_CROSSING_DOWN ? CrossingDirection::Down
                                                                      : CrossingDirection::Both;
        *hz = measure_lcr(std::span<const double>(samples, n), sample_rate_hz, level, dir);
    });
}

sr_status sr_experiment_create(const sr_topology* topology, sr_scheme scheme, sr_metric metric,
                               double threshold, double sample_rate_hz, double duration_s,
                               unsigned num_sinusoids, unsigned replications, uint64_t base_seed,
                               int period_samples, sr_experiment** out) {
    if (auto s = require(topology && out, "null argument")) return s;
    return guarded([&] {
        ExperimentConfig cfg{topology->value};
        cfg.scheme = scheme == SR_SCHEME_OR ? Scheme::OR : Scheme::DsscB;
        cfg.metric = metric == SR_METRIC_MIN_EQUIVALENT ? SelectionMetric::MinEquivalent
                                                        : SelectionMetric::HalfHarmonicMean;
        if (cfg.scheme == Scheme::DsscB) cfg.threshold = SwitchThreshold(threshold);
        cfg.trace.sample_rate_hz = sample_rate_hz;
        cfg.trace.duration_s = duration_s;
        cfg.trace.num_sinusoids = num_sinusoids;
        cfg.replications = replications;
        cfg.base_seed = base_seed;
        cfg.dssc_period_samples = period_samples;
        *out = new sr_experiment{std::move(cfg)};
    });
}

void sr_experiment_destroy(sr_experiment* experiment) { delete experiment; }

sr_status sr_experiment_run(const sr_experiment* experiment, sr_result** out) {
    if (auto s = require(experiment && out, "null argument")) return s;
    return guarded([&] { *out = new sr_result{mc::run_experiment(experiment->value)}; });
}

void sr_result_destroy(sr_result* result) { delete result; }

sr_status sr_result_switch_rate(const sr_result* result, sr_report* out) {
    if (auto s = require(result && out, "null argument")) return s;
    *out = to_c(result->value.switch_rate);
    return SR_OK;
}

sr_status sr_result_num_relays(const sr_result* result, size_t* out) {
    if (auto s = require(result && out, "null argument")) return s;
    *out = result->value.occupancy.size();
    return SR_OK;
}

sr_status sr_result_activation_time(const sr_result* result, int relay_index, sr_report* out) {
    if (auto s = require(result != nullptr, "null result")) return s;
    return pick_report(result->value.activation_time, relay_index, out);
}

sr_status sr_result_occupancy(const sr_result* result, int relay_index, sr_report* out) {
    if (auto s = require(result != nullptr, "null result")) return s;
    return pick_report(result->value.occupancy, relay_index, out);
}

sr_status sr_result_crossing_rate(const sr_result* result, int relay_index, sr_report* out) {
    if (auto s = require(result != nullptr, "null result")) return s;
    if (result->value.crossing_rate.empty())
        return fail(SR_ERR_CONFIG, "crossing rates are reported for DSSC-B experiments only");
    return pick_report(result->value.crossing_rate, relay_index, out);
}

sr_status sr_result_sample_rate(const sr_result* result, double* hz) {
    if (auto s = require(result && hz, "null argument")) return s;
    *hz = result->value.sample_rate_hz;
    return SR_OK;
}

sr_status sr_sweep_run(const sr_experiment* experiment_template, sr_sweep_axis axis,
                       const double* values, size_t num_values, sr_sweep** out) {
    if (auto s = require(experiment_template && values && out, "null argument")) return s;
    if (axis != SR_AXIS_DOPPLER_RATIO && axis != SR_AXIS_RELAY_COUNT &&
        axis != SR_AXIS_THRESHOLD && axis != SR_AXIS_GAMMA)
        return fail(SR_ERR_INVALID_ARG, "unknown sweep axis");
    return guarded([&] {
        const SweepAxis ax = axis == SR_AXIS_DOPPLER_RATIO  ? SweepAxis::DopplerRatio
                             : axis == SR_AXIS_RELAY_COUNT  ? SweepAxis::RelayCount
                             : axis == SR_AXIS_THRESHOLD    ? SweepAxis::Threshold
                                                            : SweepAxis::Gamma;
        auto rows = mc::sweep(experiment_template->value, ax,
                              std::vector<double>(values, values + num_values));
        auto* sweep = new sr_sweep;
        for (auto& row : rows) {
            sweep->params.push_back(row.param_value);
            sweep->rows.push_back(sr_result{std::move(row.result)});
        }
        *out = sweep;
    });
}

void sr_sweep_destroy(sr_sweep* sweep) { delete sweep; }

sr_status sr_sweep_size(const sr_sweep* sweep, size_t* out) {
    if (auto s = require(sweep && out, "null argument")) return s;
    *out = sweep->rows.size();
    return SR_OK;
}

sr_status sr_sweep_param_value(const sr_sweep* sweep, size_t row, double* out) {
    if (auto s = require(sweep && out, "null argument")) return s;
    if (row >= sweep->params.size()) return fail(SR_ERR_INVALID_ARG, "sweep row out of range");
    *out = sweep->params[row];
    return SR_OK;
}

sr_status sr_sweep_result(const sr_sweep* sweep, size_t row, const sr_result** out) {
    if (auto s = require(sweep && out, "null argument")) return s;
    if (row >= sweep->rows.size()) return fail(SR_ERR_INVALID_ARG, "sweep row out of range");
    *out = &sweep->rows[row];
    return SR_OK;
}

sr_status sr_compare_worst_case(const sr_experiment* experiment_template, double* t_star,
                                double* analytic_or_hz, double* analytic_dssc_hz,
                                sr_result** or_result, sr_result** dssc_result) {
    if (auto s = require(experiment_template && t_star && analytic_or_hz && analytic_dssc_hz &&
                             or_result && dssc_result,
                         "null argument"))
        return s;
    return guarded([&] {
        auto rep = mc::compare_worst_case(experiment_template->value);
        *t_star = rep.t_star;
        *analytic_or_hz = rep.analytic_or_rate_hz;
        *analytic_dssc_hz = rep.analytic_dssc_rate_hz;
        *or_result = new sr_result{std::move(rep.or_result)};
        *dssc_result = new sr_result{std::move(rep.dssc_result)};
    });
}

} // extern "C"
