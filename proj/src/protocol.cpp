#include "selrelay/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace selrelay {

std::vector<double> SelectionTrace::switch_times() const {
    std::vector<double> out;
    out.reserve(events.size());
    for (const auto& e : events) out.push_back(e.t_s);
    return out;
}

std::vector<double> SelectionTrace::activation_intervals() const {
    std::vector<double> out;
    if (events.size() < 2) return out;
    out.reserve(events.size() - 1);
    for (std::size_t k = 0; k + 1 < events.size(); ++k)
        out.push_back(events[k + 1].t_s - events[k].t_s);
    return out;
}

namespace protocol {

namespace {

void check_aligned(std::span<const FadingTrace> traces, const char* where) {
    if (traces.empty()) throw config_error(std::string(where) + ": no traces given");
    const double fs = traces[0].config.sample_rate_hz;
    const std::size_t n = traces[0].samples.size();
    for (const auto& t : traces) {
        if (t.config.sample_rate_hz != fs)
            throw config_error(std::string(where) + ": traces disagree on sample rate");
        if (t.samples.size() != n)
            throw config_error(std::string(where) + ": traces disagree on length");
    }
    if (n < 2) throw insufficient_data_error(std::string(where) + ": traces too short");
}

} // namespace

double metric_value(SelectionMetric metric, double a_sr, double a_rd) {
    if (a_sr < 0.0 || a_rd < 0.0) throw domain_error("metric_value: envelopes must be >= 0");
    if (metric == SelectionMetric::MinEquivalent) return std::min(a_sr, a_rd);
    const double sum = a_sr + a_rd;
    return sum == 0.0 ? 0.0 : a_sr * a_rd / sum;
}

int or_select(std::span<const double> metrics) {
    if (metrics.empty()) throw domain_error("or_select: empty metric list");
    std::size_t best = 0;
    for (std::size_t i = 1; i < metrics.size(); ++i)
        if (metrics[i] > metrics[best]) best = i;
    return static_cast<int>(best) + 1;
}

DsscStepResult dssc_step(const DsscState& state, double metric_active, double threshold_env) {
    const bool below = metric_active < threshold_env;
    if (state.prev_above && below) {
        DsscState next{state.active == 1 ? 2 : 1, false};
        return {next, true};
    }
    return {DsscState{state.active, metric_active > threshold_env}, false};
}

SelectionTrace run_or(std::span<const FadingTrace> traces, SelectionMetric metric) {
    if (traces.size() < 4 || traces.size() % 2 != 0)
        throw config_error("run_or: expected 2 traces per relay for at least 2 relays");
    check_aligned(traces, "run_or");

    const std::size_t num_relays = traces.size() / 2;
    const std::size_t n = traces[0].samples.size();
    const double fs = traces[0].config.sample_rate_hz;

    SelectionTrace out;
    out.sample_rate_hz = fs;
    out.active_index.resize(n);

    std::vector<double> metrics(num_relays);
    int prev = 0;
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < num_relays; ++i)
            metrics[i] = metric_value(metric, traces[2 * i].samples[k],
                                      traces[2 * i + 1].samples[k]);
        const int sel = or_select(metrics);
        out.active_index[k] = sel;
        if (k > 0 && sel != prev)
            out.events.push_back({static_cast<double>(k) / fs, prev, sel});
        prev = sel;
    }
    return out;
}

SelectionTrace run_dssc(std::span<const FadingTrace> traces, double threshold_env,
                        int period_samples) {
    if (traces.size() != 4) throw config_error("run_dssc: expected 4 traces (2 relays)");
    if (period_samples < 1) throw config_error("run_dssc: period_samples must be >= 1");
    if (threshold_env < 0.0) throw domain_error("run_dssc: threshold must be >= 0");
    check_aligned(traces, "run_dssc");

    const std::size_t n = traces[0].samples.size();
    const double fs = traces[0].config.sample_rate_hz;
    const auto metric_at = [&](int relay, std::size_t k) {
        return metric_value(SelectionMetric::MinEquivalent, traces[2 * (relay - 1)].samples[k],
                            traces[2 * (relay - 1) + 1].samples[k]);
    };

    SelectionTrace out;
    out.sample_rate_hz = fs;
    out.active_index.resize(n);

    DsscState state; // relay 1 active, previous metric treated as below threshold
    std::size_t next_decision = 0;
    for (std::size_t k = 0; k < n; ++k) {
        if (k == next_decision) {
            const auto step = dssc_step(state, metric_at(state.active, k), threshold_env);
            if (step.switched) {
                out.events.push_back({static_cast<double>(k) / fs, state.active,
                                      step.state.active});
                // The new relay's metric this period seeds the next decision.
                state = {step.state.active, metric_at(step.state.active, k) > threshold_env};
            } else {
                state = step.state;
            }
            next_decision += static_cast<std::size_t>(period_samples);
        }
        out.active_index[k] = state.active;
    }
    return out;
}

SelectionSummary summarize(const SelectionTrace& trace, double duration_s, int num_relays) {
    if (!(duration_s > 0.0)) throw domain_error("summarize: duration must be > 0");

    SelectionSummary s;
    s.num_switches = trace.events.size();
    s.switch_rate_hz = static_cast<double>(trace.events.size()) / duration_s;

    const auto intervals = trace.activation_intervals();
    if (intervals.empty()) {
        s.censored = true;
        s.mean_activation_s = duration_s;
    } else {
        double acc = 0.0;
        for (double v : intervals) acc += v;
        s.mean_activation_s = acc / static_cast<double>(intervals.size());
    }

    s.occupancy.assign(static_cast<std::size_t>(num_relays), 0.0);
    for (int idx : trace.active_index)
        if (idx >= 1 && idx <= num_relays) s.occupancy[static_cast<std::size_t>(idx - 1)] += 1.0;
    for (double& o : s.occupancy) o /= static_cast<double>(trace.active_index.size());

    s.mean_activation_per_relay_s.assign(static_cast<std::size_t>(num_relays),
                                         std::numeric_limits<double>::quiet_NaN());
    std::vector<double> acc(static_cast<std::size_t>(num_relays), 0.0);
    std::vector<std::size_t> cnt(static_cast<std::size_t>(num_relays), 0);
    for (std::size_t k = 0; k + 1 < trace.events.size(); ++k) {
        const int relay = trace.events[k].to_relay;
        if (relay >= 1 && relay <= num_relays) {
            acc[static_cast<std::size_t>(relay - 1)] +=
                trace.events[k + 1].t_s - trace.events[k].t_s;
            ++cnt[static_cast<std::size_t>(relay - 1)];
        }
    }
    for (int i = 0; i < num_relays; ++i)
        if (cnt[static_cast<std::size_t>(i)] > 0)
            s.mean_activation_per_relay_s[static_cast<std::size_t>(i)] =
                acc[static_cast<std::size_t>(i)] / static_cast<double>(cnt[static_cast<std::size_t>(i)]);
    return s;
}

void export_events_csv(const SelectionTrace& trace, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw config_error("export_events_csv: cannot open " + path);
    std::fputs("t_s,from_relay,to_relay\n", f);
    for (const auto& e : trace.events)
        std::fprintf(f, "%.17g,%d,%d\n", e.t_s, e.from_relay, e.to_relay);
    std::fclose(f);
}

} // namespace protocol
} // namespace selrelay
