#pragma once

#include <span>
#include <string>
#include <vector>

#include "selrelay/errors.hpp"
#include "selrelay/fading.hpp"

namespace selrelay {

enum class SelectionMetric { MinEquivalent, HalfHarmonicMean };

/// DSSC-B state carried between decision periods: the active relay (1-based)
/// and whether its metric exceeded the envelope threshold last period.
struct DsscState {
    int active = 1;
    bool prev_above = false;
};

struct SwitchEvent {
    double t_s;
    int from_relay;
    int to_relay;
};

/// Per-sample selection decisions plus the switch log derived from them.
/// activation_intervals() are durations between consecutive switch events;
/// the leading segment (before the first switch) and the trailing open
/// segment are censored.
struct SelectionTrace {
    std::vector<int> active_index;    // 1-based relay per sample
    std::vector<SwitchEvent> events;  // strictly increasing timestamps
    double sample_rate_hz = 0.0;

    double duration_s() const {
        return static_cast<double>(active_index.size()) / sample_rate_hz;
    }
    std::vector<double> switch_times() const;
    std::vector<double> activation_intervals() const;
};

namespace protocol {

/// End-to-end metric of one relay from its two hop envelopes.
double metric_value(SelectionMetric metric, double a_sr, double a_rd);

/// Index (1-based) of the largest metric; ties go to the lowest index.
int or_select(std::span<const double> metrics);

struct DsscStepResult {
    DsscState state;
    bool switched;
};

/// One DSSC-B decision: switch exactly when the active metric was above the
/// envelope threshold last period and is below it now. On a switch the
/// caller must reseed prev_above from the newly active relay's metric.
DsscStepResult dssc_step(const DsscState& state, double metric_active, double threshold_env);

/// Run opportunistic relaying over per-hop traces laid out as
/// [sr1, rd1, sr2, rd2, ...]. All traces must share sample rate and length.
SelectionTrace run_or(std::span<const FadingTrace> traces, SelectionMetric metric);

/// Run DSSC-B (two relays, four traces) against an envelope threshold,
/// advancing the state machine every `period_samples` samples. The
/// min-equivalent metric is used, matching the switching rule's definition.
SelectionTrace run_dssc(std::span<const FadingTrace> traces, double threshold_env,
                        int period_samples = 1);

struct SelectionSummary {
    double switch_rate_hz = 0.0;
    double mean_activation_s = 0.0;         // mean of completed activation intervals
    bool censored = false;                   // true when no completed interval exists
    std::vector<double> occupancy;           // per-relay fraction of samples
    std::vector<double> mean_activation_per_relay_s; // NaN where a relay has no completed interval
    std::size_t num_switches = 0;
};

SelectionSummary summarize(const SelectionTrace& trace, double duration_s, int num_relays);

/// Write `t_s,from_relay,to_relay` rows for every switch event.
void export_events_csv(const SelectionTrace& trace, const std::string& path);

} // namespace protocol
} // namespace selrelay
