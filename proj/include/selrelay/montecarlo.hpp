#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "selrelay/closedform.hpp"
#include "selrelay/protocol.hpp"

namespace selrelay {

enum class Scheme { OR, DsscB };

/// Trace plan shared by every hop of an experiment. A zero sample rate means
/// "choose 64 x the largest Doppler frequency in the topology".
struct TraceParams {
    double sample_rate_hz = 0.0;
    double duration_s = 10.0;
    unsigned num_sinusoids = 64;
};

struct ExperimentConfig {
    explicit ExperimentConfig(RelayTopology topology_) : topology(std::move(topology_)) {}

    RelayTopology topology;
    Scheme scheme = Scheme::OR;
    SelectionMetric metric = SelectionMetric::MinEquivalent;
    std::optional<SwitchThreshold> threshold; // required iff scheme is DSSC-B
    TraceParams trace;
    unsigned replications = 20;
    std::uint64_t base_seed = 0;
    int dssc_period_samples = 1;
};

/// One estimated quantity next to its closed-form value. `analytic` is NaN
/// when no closed form covers the configuration.
struct RateReport {
    std::string quantity;
    double analytic = std::numeric_limits<double>::quiet_NaN();
    double sim_mean = std::numeric_limits<double>::quiet_NaN();
    double sim_stderr = std::numeric_limits<double>::quiet_NaN();
    double rel_deviation = std::numeric_limits<double>::quiet_NaN();
    std::uint64_t n_events = 0;
    bool low_power = false;
};

struct ExperimentResult {
    RateReport switch_rate;
    std::vector<RateReport> activation_time;      // one per relay
    std::vector<RateReport> occupancy;            // one per relay
    std::vector<RateReport> crossing_rate;        // DSSC-B only: threshold down-crossings per relay
    std::vector<double> per_rep_switch_rate_hz;   // replication diagnostics
    double sample_rate_hz = 0.0;
    double total_duration_s = 0.0;
    std::uint64_t base_seed = 0;
    std::string rng_name;
};

enum class SweepAxis { DopplerRatio, RelayCount, Threshold, Gamma };

struct SweepRow {
    double param_value;
    ExperimentResult result;
};

struct WorstCaseReport {
    double t_star;
    double analytic_or_rate_hz;
    double analytic_dssc_rate_hz;
    ExperimentResult or_result;
    ExperimentResult dssc_result;
    bool analytic_dssc_below_or;
    bool simulated_dssc_below_or;
};

namespace montecarlo {

/// Replicated simulation of the configured scheme. Replication k derives its
/// seed as base_seed XOR k; hop h of a replication uses the h-th SplitMix64
/// output of that seed. Estimates are across-replication means with standard
/// errors; analytic columns come from the closedform module where a formula
/// applies. Deterministic for fixed (config, base_seed); replications run in
/// parallel and reduce by index, so thread scheduling cannot change results.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Run one experiment per value of the swept parameter. Rows reuse the
/// template's base_seed and are mutually independent.
std::vector<SweepRow> sweep(const ExperimentConfig& config_template, SweepAxis axis,
                            const std::vector<double>& values);

/// Locate the threshold maximizing the DSSC-B switch rate, then simulate
/// both schemes there and compare against opportunistic relaying.
WorstCaseReport compare_worst_case(const ExperimentConfig& config_template);

const char* axis_name(SweepAxis axis);
const char* scheme_name(Scheme scheme);

} // namespace montecarlo
} // namespace selrelay
