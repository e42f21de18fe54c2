#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <numbers>
#include <string>
#include <vector>

#include "selrelay.h"
#include "selrelay/closedform.hpp"
#include "selrelay/montecarlo.hpp"

namespace {

constexpr double kPi = std::numbers::pi;

struct Topo {
    sr_topology* ptr = nullptr;
    ~Topo() { sr_topology_destroy(ptr); }
};

void make_iid(Topo& topo, double omega = 1.0, double doppler = 10.0, double gamma = 1.0) {
    const double o[2] = {omega, omega};
    const double f[2] = {doppler, doppler};
    REQUIRE(sr_topology_create(o, f, o, f, 2, gamma, &topo.ptr) == SR_OK);
}

} // namespace

TEST_CASE("library metadata") {
    CHECK(std::string(sr_version()).size() > 0);
    CHECK(std::string(sr_rng_name()) == "splitmix64+mt19937_64");
}

TEST_CASE("status codes and error messages") {
    CHECK(sr_topology_create(nullptr, nullptr, nullptr, nullptr, 2, 1.0, nullptr) ==
          SR_ERR_INVALID_ARG);

    const double o[2] = {1.0, 1.0};
    const double f[2] = {10.0, 10.0};
    sr_topology* topo = nullptr;
    CHECK(sr_topology_create(o, f, o, f, 1, 1.0, &topo) == SR_ERR_DOMAIN); // L < 2
    CHECK(std::string(sr_last_error()).find("2 relays") != std::string::npos);

    const double bad_o[2] = {-1.0, 1.0};
    CHECK(sr_topology_create(bad_o, f, o, f, 2, 1.0, &topo) == SR_ERR_DOMAIN);

    double hz = 0.0;
    CHECK(sr_or_switch_rate_iid(1, 10.0, &hz) == SR_ERR_DOMAIN);
    CHECK(sr_or_switch_rate_iid2(0.0, 1.0, 1.0, 1.0, &hz) == SR_ERR_DOMAIN);

    // Three relays: the two-relay closed form refuses.
    const double o3[3] = {1, 1, 1};
    const double f3[3] = {10, 10, 10};
    sr_topology* three = nullptr;
    REQUIRE(sr_topology_create(o3, f3, o3, f3, 3, 1.0, &three) == SR_OK);
    CHECK(sr_or_switch_rate(three, &hz) == SR_ERR_TOPOLOGY);
    sr_topology_destroy(three);
}

TEST_CASE("closed forms through the C surface match the core") {
    Topo topo;
    make_iid(topo);

    double hz = 0.0;
    REQUIRE(sr_or_switch_rate(topo.ptr, &hz) == SR_OK);
    CHECK(hz == doctest::Approx(kPi * 10.0).epsilon(1e-12));

    REQUIRE(sr_or_switch_rate_iid(3, 10.0, &hz) == SR_OK);
    CHECK(hz == doctest::Approx(42.945786401219245).epsilon(1e-12));

    double at1 = 0, at2 = 0;
    REQUIRE(sr_or_activation_times(topo.ptr, &at1, &at2) == SR_OK);
    CHECK(at1 == doctest::Approx(1.0 / (kPi * 10.0)).epsilon(1e-12));

    double omega_i = 0;
    REQUIRE(sr_min_equiv_omega(1.0, 3.0, &omega_i) == SR_OK);
    CHECK(omega_i == doctest::Approx(0.75).epsilon(1e-12));

    double cdf = 0;
    REQUIRE(sr_min_equiv_cdf(std::sqrt(0.5), 1.0, 10.0, 1.0, 10.0, &cdf) == SR_OK);
    CHECK(cdf == doctest::Approx(-std::expm1(-1.0)).epsilon(1e-12));

    double gap0 = 0;
    REQUIRE(sr_metric_gap_pdf_at_zero(1.0, 1.0, &gap0) == SR_OK);
    CHECK(gap0 == doctest::Approx(0.6266570686577501).epsilon(1e-12));

    double rho1 = 0, rho2 = 0;
    REQUIRE(sr_or_steady_state(3.0, 1.0, &rho1, &rho2) == SR_OK);
    CHECK(rho1 == doctest::Approx(0.75).epsilon(1e-12));

    REQUIRE(sr_dssc_crossing_rate(topo.ptr, 1, 1.0, &hz) == SR_OK);
    CHECK(hz == doctest::Approx(6.784704950321764).epsilon(1e-12));
    CHECK(sr_dssc_crossing_rate(topo.ptr, 5, 1.0, &hz) == SR_ERR_DOMAIN);
    CHECK(sr_dssc_crossing_rate(topo.ptr, 1, -1.0, &hz) == SR_ERR_DOMAIN);

    double pi_out[6];
    REQUIRE(sr_dssc_stationary(topo.ptr, 0.7, pi_out, &rho1, &rho2) == SR_OK);
    CHECK(rho1 == doctest::Approx(0.5).epsilon(1e-12));
    double sum = 0;
    for (double p : pi_out) sum += p;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));

    double rate = 0;
    REQUIRE(sr_dssc_switch_rate(topo.ptr, 1.0, &rate) == SR_OK);
    CHECK(rate == doctest::Approx(6.784704950321764).epsilon(1e-9));

    double at = 0;
    REQUIRE(sr_dssc_activation_time(topo.ptr, 1, 0.0, &at) == SR_OK);
    CHECK(std::isinf(at));

    double t_star = 0;
    REQUIRE(sr_worst_case_threshold(topo.ptr, 1e-3, 1e2, &t_star) == SR_OK);
    const auto core_t = selrelay::closedform::worst_case_threshold(
        selrelay::RelayTopology({{selrelay::LinkParams(1, 10), selrelay::LinkParams(1, 10)},
                                 {selrelay::LinkParams(1, 10), selrelay::LinkParams(1, 10)}},
                                1.0),
        1e-3, 1e2);
    CHECK(t_star == doctest::Approx(core_t.t).epsilon(1e-9));
}

TEST_CASE("traces through the C surface") {
    sr_trace* trace = nullptr;
    REQUIRE(sr_trace_generate(1.0, 10.0, 640.0, 2.0, 64, 99, &trace) == SR_OK);
    size_t n = 0;
    REQUIRE(sr_trace_length(trace, &n) == SR_OK);
    CHECK(n == 1280);

    std::vector<double> samples(n);
    size_t copied = 0;
    REQUIRE(sr_trace_samples(trace, samples.data(), samples.size(), &copied) == SR_OK);
    CHECK(copied == n);

    sr_trace* again = nullptr;
    REQUIRE(sr_trace_generate(1.0, 10.0, 640.0, 2.0, 64, 99, &again) == SR_OK);
    std::vector<double> samples2(n);
    REQUIRE(sr_trace_samples(again, samples2.data(), samples2.size(), &copied) == SR_OK);
    CHECK(samples == samples2);
    sr_trace_destroy(again);

    double hz = 0;
    REQUIRE(sr_measure_lcr(samples.data(), samples.size(), 640.0, 1.0, SR_CROSSING_DOWN, &hz) ==
            SR_OK);
    CHECK(hz > 0.0);
    CHECK(sr_measure_lcr(samples.data(), 1, 640.0, 1.0, SR_CROSSING_DOWN, &hz) ==
          SR_ERR_INSUFFICIENT_DATA);

    // Undersampled request carries the resolution code.
    sr_trace* bad = nullptr;
    CHECK(sr_trace_generate(1.0, 100.0, 640.0, 1.0, 64, 1, &bad) == SR_ERR_RESOLUTION);

    double mean_sq = 0, dev = 0, ks = 0;
    int passed = 0;
    CHECK(sr_trace_validate_rayleigh(trace, 0.02, &mean_sq, &dev, &ks, &passed) ==
          SR_ERR_INSUFFICIENT_DATA); // only 1280 samples
    sr_trace_destroy(trace);

    sr_trace* longtrace = nullptr;
    REQUIRE(sr_trace_generate(2.0, 10.0, 640.0, 200.0, 64, 5, &longtrace) == SR_OK);
    REQUIRE(sr_trace_validate_rayleigh(longtrace, 0.02, &mean_sq, &dev, &ks, &passed) == SR_OK);
    CHECK(passed == 1);
    CHECK(mean_sq == doctest::Approx(2.0).epsilon(0.02));
    sr_trace_destroy(longtrace);
}

TEST_CASE("experiments through the C surface agree with the core") {
    Topo topo;
    make_iid(topo);

    sr_experiment* exp = nullptr;
    REQUIRE(sr_experiment_create(topo.ptr, SR_SCHEME_OR, SR_METRIC_MIN_EQUIVALENT, 0.0, 0.0, 5.0,
                                 64, 4, 2024, 1, &exp) == SR_OK);
    sr_result* result = nullptr;
    REQUIRE(sr_experiment_run(exp, &result) == SR_OK);

    sr_report rep;
    REQUIRE(sr_result_switch_rate(result, &rep) == SR_OK);
    CHECK(rep.analytic == doctest::Approx(kPi * 10.0).epsilon(1e-12));
    CHECK(rep.n_events > 0);

    // Same run through the C++ core gives bit-identical estimates.
    selrelay::ExperimentConfig cfg{selrelay::RelayTopology(
        {{selrelay::LinkParams(1, 10), selrelay::LinkParams(1, 10)},
         {selrelay::LinkParams(1, 10), selrelay::LinkParams(1, 10)}},
        1.0)};
    cfg.trace.duration_s = 5.0;
    cfg.replications = 4;
    cfg.base_seed = 2024;
    const auto core = selrelay::montecarlo::run_experiment(cfg);
    CHECK(rep.sim_mean == core.switch_rate.sim_mean);
    CHECK(rep.sim_stderr == core.switch_rate.sim_stderr);

    size_t relays = 0;
    REQUIRE(sr_result_num_relays(result, &relays) == SR_OK);
    CHECK(relays == 2);
    REQUIRE(sr_result_activation_time(result, 1, &rep) == SR_OK);
    CHECK(rep.sim_mean == core.activation_time[0].sim_mean);
    REQUIRE(sr_result_occupancy(result, 2, &rep) == SR_OK);
    CHECK(rep.sim_mean == core.occupancy[1].sim_mean);
    CHECK(sr_result_occupancy(result, 3, &rep) == SR_ERR_INVALID_ARG);
    CHECK(sr_result_crossing_rate(result, 1, &rep) == SR_ERR_CONFIG); // OR run

    double fs = 0;
    REQUIRE(sr_result_sample_rate(result, &fs) == SR_OK);
    CHECK(fs == doctest::Approx(640.0));

    sr_result_destroy(result);
    sr_experiment_destroy(exp);
}

TEST_CASE("experiment validation surfaces config errors") {
    Topo topo;
    make_iid(topo);
    sr_experiment* exp = nullptr;
    // DSSC-B with the wrong metric.
    REQUIRE(sr_experiment_create(topo.ptr, SR_SCHEME_DSSC_B, SR_METRIC_HALF_HARMONIC_MEAN, 1.0,
                                 0.0, 2.0, 64, 1, 7, 1, &exp) == SR_OK);
    sr_result* result = nullptr;
    CHECK(sr_experiment_run(exp, &result) == SR_ERR_CONFIG);
    CHECK(std::string(sr_last_error()).find("min-equivalent") != std::string::npos);
    sr_experiment_destroy(exp);
}

TEST_CASE("sweep through the C surface") {
    Topo topo;
    make_iid(topo);
    sr_experiment* exp = nullptr;
    REQUIRE(sr_experiment_create(topo.ptr, SR_SCHEME_OR, SR_METRIC_MIN_EQUIVALENT, 0.0, 0.0, 2.0,
                                 64, 2, 7, 1, &exp) == SR_OK);
    const double values[2] = {2.0, 3.0};
    sr_sweep* sweep = nullptr;
    REQUIRE(sr_sweep_run(exp, SR_AXIS_RELAY_COUNT, values, 2, &sweep) == SR_OK);
    size_t rows = 0;
    REQUIRE(sr_sweep_size(sweep, &rows) == SR_OK);
    CHECK(rows == 2);
    double v = 0;
    REQUIRE(sr_sweep_param_value(sweep, 1, &v) == SR_OK);
    CHECK(v == 3.0);
    const sr_result* row = nullptr;
    REQUIRE(sr_sweep_result(sweep, 1, &row) == SR_OK);
    sr_report rep;
    REQUIRE(sr_result_switch_rate(row, &rep) == SR_OK);
    CHECK(rep.analytic == doctest::Approx(42.945786401219245).epsilon(1e-12));
    CHECK(sr_sweep_param_value(sweep, 5, &v) == SR_ERR_INVALID_ARG);
    sr_sweep_destroy(sweep);
    sr_experiment_destroy(exp);
}

TEST_CASE("worst-case comparison through the C surface") {
    const double o_sr[2] = {10.0, 10.0}, f_sr[2] = {20.0, 20.0};
    const double o_rd[2] = {1.0, 1.0}, f_rd[2] = {10.0, 10.0};
    Topo topo;
    REQUIRE(sr_topology_create(o_sr, f_sr, o_rd, f_rd, 2, 1.0, &topo.ptr) == SR_OK);
    sr_experiment* exp = nullptr;
    REQUIRE(sr_experiment_create(topo.ptr, SR_SCHEME_DSSC_B, SR_METRIC_MIN_EQUIVALENT, 1.0, 0.0,
                                 5.0, 64, 4, 99, 1, &exp) == SR_OK);
    double t_star = 0, or_hz = 0, dssc_hz = 0;
    sr_result* or_result = nullptr;
    sr_result* dssc_result = nullptr;
    REQUIRE(sr_compare_worst_case(exp, &t_star, &or_hz, &dssc_hz, &or_result, &dssc_result) ==
            SR_OK);
    CHECK(t_star > 0.0);
    CHECK(dssc_hz < or_hz);
    sr_report rep_or, rep_dssc;
    REQUIRE(sr_result_switch_rate(or_result, &rep_or) == SR_OK);
    REQUIRE(sr_result_switch_rate(dssc_result, &rep_dssc) == SR_OK);
    CHECK(rep_dssc.sim_mean < rep_or.sim_mean);
    sr_result_destroy(or_result);
    sr_result_destroy(dssc_result);
    sr_experiment_destroy(exp);
}
