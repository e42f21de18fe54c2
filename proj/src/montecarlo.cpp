#include "selrelay/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

#include "selrelay/rng.hpp"

namespace selrelay::montecarlo {

namespace {

namespace cf = selrelay::closedform;

struct RepStats {
    double switch_rate = 0.0;
    std::vector<double> dwell;       // per relay, NaN if no completed interval
    std::vector<std::size_t> dwell_n;
    std::vector<double> occupancy;
    std::vector<double> crossings;   // per relay (DSSC only)
    std::vector<std::size_t> crossing_n;
    std::size_t switches = 0;
};

std::string hop_label(std::size_t relay, bool sr) {
    return "relay " + std::to_string(relay + 1) + (sr ? " S-R hop" : " R-D hop");
}

double resolve_sample_rate(const ExperimentConfig& cfg) {
    const double fs = cfg.trace.sample_rate_hz > 0.0
                          ? cfg.trace.sample_rate_hz
                          : kDefaultSamplesPerDoppler * cfg.topology.max_doppler();
    for (std::size_t i = 0; i < cfg.topology.size(); ++i) {
        const auto& r = cfg.topology.relays[i];
        if (fs < kMinSamplesPerDoppler * r.sr.doppler_hz)
            throw resolution_error(hop_label(i, true) + ": sample rate " + std::to_string(fs) +
                                   " Hz below " + std::to_string(kMinSamplesPerDoppler) +
                                   " x doppler (" + std::to_string(r.sr.doppler_hz) + " Hz)");
        if (fs < kMinSamplesPerDoppler * r.rd.doppler_hz)
            throw resolution_error(hop_label(i, false) + ": sample rate " + std::to_string(fs) +
                                   " Hz below " + std::to_string(kMinSamplesPerDoppler) +
                                   " x doppler (" + std::to_string(r.rd.doppler_hz) + " Hz)");
    }
    return fs;
}

void validate(const ExperimentConfig& cfg) {
    if (cfg.replications < 1) throw config_error("run_experiment: replications must be >= 1");
    if (cfg.scheme == Scheme::DsscB) {
        if (!cfg.threshold)
            throw config_error("run_experiment: DSSC-B requires a switching threshold");
        if (cfg.metric != SelectionMetric::MinEquivalent)
            throw config_error("run_experiment: DSSC-B uses the min-equivalent metric only");
        if (cfg.topology.size() != 2)
            throw unsupported_topology_error("run_experiment: DSSC-B is a two-relay scheme");
        if (cfg.dssc_period_samples < 1)
            throw config_error("run_experiment: dssc_period_samples must be >= 1");
    } else if (cfg.threshold) {
        throw config_error("run_experiment: threshold is only meaningful for DSSC-B");
    }
}

RepStats run_replication(const ExperimentConfig& cfg, double fs, std::uint64_t rep_index) {
    const std::uint64_t rep_seed = cfg.base_seed ^ rep_index;
    const std::size_t num_relays = cfg.topology.size();

    std::vector<FadingTrace> traces;
    traces.reserve(2 * num_relays);
    std::uint64_t stream = rep_seed;
    for (std::size_t i = 0; i < num_relays; ++i) {
        const auto& r = cfg.topology.relays[i];
        traces.push_back(generate_trace(
            r.sr, TraceConfig(fs, cfg.trace.duration_s, cfg.trace.num_sinusoids,
                              splitmix64(stream)),
            hop_label(i, true)));
        traces.push_back(generate_trace(
            r.rd, TraceConfig(fs, cfg.trace.duration_s, cfg.trace.num_sinusoids,
                              splitmix64(stream)),
            hop_label(i, false)));
    }

    SelectionTrace sel;
    double threshold_env = 0.0;
    if (cfg.scheme == Scheme::OR) {
        sel = protocol::run_or(traces, cfg.metric);
    } else {
        threshold_env = std::sqrt(cfg.threshold->t / cfg.topology.gamma);
        sel = protocol::run_dssc(traces, threshold_env, cfg.dssc_period_samples);
    }

    const double duration = sel.duration_s();
    const auto summary = protocol::summarize(sel, duration, static_cast<int>(num_relays));

    RepStats st;
    st.switch_rate = summary.switch_rate_hz;
    st.switches = summary.num_switches;
    st.occupancy = summary.occupancy;
    st.dwell = summary.mean_activation_per_relay_s;
    st.dwell_n.assign(num_relays, 0);
    for (std::size_t k = 0; k + 1 < sel.events.size(); ++k) {
        const int to = sel.events[k].to_relay;
        if (to >= 1 && to <= static_cast<int>(num_relays)) ++st.dwell_n[to - 1];
    }

    if (cfg.scheme == Scheme::DsscB) {
        st.crossings.resize(num_relays);
        st.crossing_n.assign(num_relays, 0);
        std::vector<double> min_env(traces[0].samples.size());
        for (std::size_t i = 0; i < num_relays; ++i) {
            for (std::size_t k = 0; k < min_env.size(); ++k)
                min_env[k] = std::min(traces[2 * i].samples[k], traces[2 * i + 1].samples[k]);
            const double rate = measure_lcr(min_env, fs, threshold_env, CrossingDirection::Down);
            st.crossings[i] = rate;
            st.crossing_n[i] = static_cast<std::size_t>(std::llround(rate * duration));
        }
    }
    return st;
}

struct Moments {
    double mean = std::numeric_limits<double>::quiet_NaN();
    double stderr_ = std::numeric_limits<double>::quiet_NaN();
    std::size_t n = 0;
};

Moments reduce(const std::vector<double>& xs) {
    Moments m;
    std::vector<double> kept;
    kept.reserve(xs.size());
    for (double x : xs)
        if (!std::isnan(x)) kept.push_back(x);
    m.n = kept.size();
    if (kept.empty()) return m;
    double acc = 0.0;
    for (double x : kept) acc += x;
    m.mean = acc / static_cast<double>(kept.size());
    if (kept.size() > 1) {
        double ss = 0.0;
        for (double x : kept) ss += (x - m.mean) * (x - m.mean);
        m.stderr_ = std::sqrt(ss / static_cast<double>(kept.size() - 1) /
                              static_cast<double>(kept.size()));
    } else {
        m.stderr_ = 0.0;
    }
    return m;
}

RateReport make_report(std::string quantity, double analytic, const Moments& m,
                       std::uint64_t n_events) {
    RateReport r;
    r.quantity = std::move(quantity);
    r.analytic = analytic;
    r.sim_mean = m.mean;
    r.sim_stderr = m.stderr_;
    r.n_events = n_events;
    r.low_power = n_events == 0;
    if (analytic > 0.0 && !std::isnan(m.mean))
        r.rel_deviation = std::abs(m.mean - analytic) / analytic;
    return r;
}

bool topology_is_iid(const RelayTopology& t) {
    const double o = t.relays[0].sr.omega, f = t.relays[0].sr.doppler_hz;
    for (const auto& r : t.relays)
        if (r.sr.omega != o || r.rd.omega != o || r.sr.doppler_hz != f || r.rd.doppler_hz != f)
            return false;
    return true;
}

struct Analytic {
    double switch_rate = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> activation;
    std::vector<double> occupancy;
    std::vector<double> crossing;
};

Analytic analytic_values(const ExperimentConfig& cfg) {
    Analytic a;
    const auto& topo = cfg.topology;
    const std::size_t num_relays = topo.size();
    a.activation.assign(num_relays, std::numeric_limits<double>::quiet_NaN());
    a.occupancy.assign(num_relays, std::numeric_limits<double>::quiet_NaN());

    if (cfg.scheme == Scheme::OR) {
        if (cfg.metric != SelectionMetric::MinEquivalent) return a; // no closed form
        if (num_relays == 2) {
            a.switch_rate = cf::or_switch_rate(topo);
            const auto at = cf::or_activation_times(topo);
            a.activation = {at.first, at.second};
            const auto rho = cf::or_steady_state(
                cf::min_equiv_omega(topo.relays[0].sr, topo.relays[0].rd),
                cf::min_equiv_omega(topo.relays[1].sr, topo.relays[1].rd));
            a.occupancy = {rho.first, rho.second};
        } else if (topology_is_iid(topo)) {
            const double f = topo.relays[0].sr.doppler_hz;
            a.switch_rate = cf::or_switch_rate_iid(static_cast<int>(num_relays), f);
            std::fill(a.activation.begin(), a.activation.end(),
                      cf::or_activation_time_iid(static_cast<int>(num_relays), f));
            std::fill(a.occupancy.begin(), a.occupancy.end(),
                      1.0 / static_cast<double>(num_relays));
        }
        return a;
    }

    const SwitchThreshold& thr = *cfg.threshold;
    a.switch_rate = cf::dssc_switch_rate(topo, thr);
    const auto st = cf::dssc_stationary(topo, thr);
    a.occupancy = {st.rho1, st.rho2};
    a.activation = {cf::dssc_activation_time(topo, 1, thr),
                    cf::dssc_activation_time(topo, 2, thr)};
    a.crossing = {cf::dssc_crossing_rate(topo, 1, thr), cf::dssc_crossing_rate(topo, 2, thr)};
    return a;
}

} // namespace

const char* axis_name(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::DopplerRatio: return "doppler_ratio";
        case SweepAxis::RelayCount: return "L";
        case SweepAxis::Threshold: return "threshold";
        case SweepAxis::Gamma: return "gamma";
    }
    return "?";
}

const char* scheme_name(Scheme scheme) {
    return scheme == Scheme::OR ? "OR" : "DSSC_B";
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    validate(cfg);
    const double fs = resolve_sample_rate(cfg);
    const std::size_t reps = cfg.replications;
    const std::size_t num_relays = cfg.topology.size();

    std::vector<RepStats> stats(reps);
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(hw, reps));
    if (workers <= 1) {
        for (std::size_t k = 0; k < reps; ++k) stats[k] = run_replication(cfg, fs, k);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        std::exception_ptr error;
        std::mutex error_mu;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t k = next.fetch_add(1);
                    if (k >= reps) return;
                    try {
                        stats[k] = run_replication(cfg, fs, k);
                    } catch (...) {
                        std::lock_guard<std::mutex> lock(error_mu);
                        if (!error) error = std::current_exception();
                        return;
                    }
                }
            });
        for (auto& t : pool) t.join();
        if (error) std::rethrow_exception(error);
    }

    const Analytic analytic = analytic_values(cfg);

    ExperimentResult out;
    out.sample_rate_hz = fs;
    out.total_duration_s = cfg.trace.duration_s * static_cast<double>(reps);
    out.base_seed = cfg.base_seed;
    out.rng_name = rng_algorithm_name();

    std::vector<double> rates(reps);
    std::uint64_t total_switches = 0;
    for (std::size_t k = 0; k < reps; ++k) {
        rates[k] = stats[k].switch_rate;
        total_switches += stats[k].switches;
    }
    out.per_rep_switch_rate_hz = rates;
    out.switch_rate = make_report("switch_rate", analytic.switch_rate, reduce(rates),
                                  total_switches);

    for (std::size_t i = 0; i < num_relays; ++i) {
        std::vector<double> dwell(reps), occ(reps);
        std::uint64_t intervals = 0;
        for (std::size_t k = 0; k < reps; ++k) {
            dwell[k] = stats[k].dwell[i];
            occ[k] = stats[k].occupancy[i];
            intervals += stats[k].dwell_n[i];
        }
        const std::string suffix = "_r" + std::to_string(i + 1);
        out.activation_time.push_back(make_report("activation_time" + suffix,
                                                  analytic.activation[i], reduce(dwell),
                                                  intervals));
        out.occupancy.push_back(make_report("occupancy" + suffix, analytic.occupancy[i],
                                            reduce(occ), total_switches));
    }

    if (cfg.scheme == Scheme::DsscB) {
        for (std::size_t i = 0; i < num_relays; ++i) {
            std::vector<double> xr(reps);
            std::uint64_t n = 0;
            for (std::size_t k = 0; k < reps; ++k) {
                xr[k] = stats[k].crossings[i];
                n += stats[k].crossing_n[i];
            }
            out.crossing_rate.push_back(make_report("crossing_rate_r" + std::to_string(i + 1),
                                                    analytic.crossing[i], reduce(xr), n));
        }
    }
    return out;
}

std::vector<SweepRow> sweep(const ExperimentConfig& config_template, SweepAxis axis,
                            const std::vector<double>& values) {
    if (values.empty()) throw config_error("sweep: no values given");
    std::vector<SweepRow> rows;
    rows.reserve(values.size());
    for (double v : values) {
        ExperimentConfig cfg = config_template;
        switch (axis) {
            case SweepAxis::DopplerRatio: {
                if (!(v > 0.0)) throw config_error("sweep: doppler_ratio must be > 0");
                std::vector<RelayTopology::RelayLinks> relays;
                for (const auto& r : config_template.topology.relays)
                    relays.push_back({LinkParams(r.sr.omega, v * r.rd.doppler_hz), r.rd});
                cfg.topology = RelayTopology(std::move(relays), config_template.topology.gamma);
                break;
            }
            case SweepAxis::RelayCount: {
                const double rounded = std::round(v);
                if (rounded < 2.0 || rounded != v)
                    throw config_error("sweep: L values must be integers >= 2");
                std::vector<RelayTopology::RelayLinks> relays(
                    static_cast<std::size_t>(rounded), config_template.topology.relays[0]);
                cfg.topology = RelayTopology(std::move(relays), config_template.topology.gamma);
                break;
            }
            case SweepAxis::Threshold: {
                if (cfg.scheme != Scheme::DsscB)
                    throw config_error("sweep: threshold axis applies to DSSC-B only");
                cfg.threshold = SwitchThreshold(v);
                break;
            }
            case SweepAxis::Gamma: {
                cfg.topology = RelayTopology(config_template.topology.relays, v);
                break;
            }
        }
        rows.push_back({v, run_experiment(cfg)});
    }
    return rows;
}

WorstCaseReport compare_worst_case(const ExperimentConfig& config_template) {
    const auto& topo = config_template.topology;
    if (topo.size() != 2)
        throw unsupported_topology_error("compare_worst_case: two-relay topologies only");

    const double o1 = cf::min_equiv_omega(topo.relays[0].sr, topo.relays[0].rd).omega;
    const double o2 = cf::min_equiv_omega(topo.relays[1].sr, topo.relays[1].rd).omega;
    const double scale = topo.gamma * std::min(o1, o2);
    const auto t_star =
        cf::worst_case_threshold(topo, 1e-4 * scale, 1e3 * topo.gamma * std::max(o1, o2));

    WorstCaseReport rep;
    rep.t_star = t_star.t;
    rep.analytic_dssc_rate_hz = cf::dssc_switch_rate(topo, t_star);
    rep.analytic_or_rate_hz = cf::or_switch_rate(topo);

    ExperimentConfig or_cfg = config_template;
    or_cfg.scheme = Scheme::OR;
    or_cfg.metric = SelectionMetric::MinEquivalent;
    or_cfg.threshold.reset();
    rep.or_result = run_experiment(or_cfg);

    ExperimentConfig dssc_cfg = config_template;
    dssc_cfg.scheme = Scheme::DsscB;
    dssc_cfg.metric = SelectionMetric::MinEquivalent;
    dssc_cfg.threshold = t_star;
    rep.dssc_result = run_experiment(dssc_cfg);

    rep.analytic_dssc_below_or = rep.analytic_dssc_rate_hz < rep.analytic_or_rate_hz;
    rep.simulated_dssc_below_or =
        rep.dssc_result.switch_rate.sim_mean < rep.or_result.switch_rate.sim_mean;
    return rep;
}

} // namespace selrelay::montecarlo
