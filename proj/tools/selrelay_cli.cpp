// Command-line front end: parses JSON experiment configs, drives the shared
// library through its C API, and writes CSV reports.
//
// Exit codes: 0 success, 2 configuration error, 3 runtime error.

#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "selrelay.h"

using nlohmann::json;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct cli_error : std::runtime_error {
    int code;
    cli_error(int code_, const std::string& what) : std::runtime_error(what), code(code_) {}
};

[[noreturn]] void config_fail(const std::string& what) { throw cli_error(kExitConfig, what); }

void check(sr_status status) {
    if (status == SR_OK) return;
    const std::string what = sr_last_error();
    switch (status) {
        case SR_ERR_IO:
        case SR_ERR_RUNTIME:
            throw cli_error(kExitRuntime, what);
        default:
            throw cli_error(kExitConfig, what);
    }
}

// ---- JSON config ----

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                         const std::string& where) {
    for (const auto& [key, _] : obj.items()) {
        bool ok = false;
        for (const char* a : allowed)
            if (key == a) ok = true;
        if (!ok) config_fail("unknown key \"" + key + "\" in " + where);
    }
}

// {"value": x, "unit": "linear"|"db"} -> linear value
double parse_tagged_value(const json& j, const std::string& where) {
    if (!j.is_object()) config_fail(where + " must be an object {\"value\", \"unit\"}");
    reject_unknown_keys(j, {"value", "unit"}, where);
    if (!j.contains("value") || !j.contains("unit"))
        config_fail(where + " needs both \"value\" and \"unit\"");
    const double v = j.at("value").get<double>();
    const std::string unit = j.at("unit").get<std::string>();
    if (unit == "linear") return v;
    if (unit == "db") return db_to_linear(v);
    config_fail(where + ": unit must be \"linear\" or \"db\"");
}

struct HopConfig {
    double omega = 1.0;
    double doppler_hz = 10.0;
};

struct Config {
    std::string scheme = "or";
    std::string metric = "min_equivalent";
    double gamma = 1.0;
    std::optional<double> threshold;
    std::vector<std::pair<HopConfig, HopConfig>> relays;
    double sample_rate_hz = 0.0; // 0 = auto (64 x max Doppler)
    double duration_s = 10.0;
    unsigned num_sinusoids = 64;
    unsigned replications = 20;
    std::uint64_t seed = 0;
    int dssc_period_samples = 1;
    std::optional<std::string> sweep_axis;
    std::vector<double> sweep_values;
};

HopConfig parse_hop(const json& j, const std::string& where) {
    if (!j.is_object()) config_fail(where + " must be an object");
    reject_unknown_keys(j, {"omega", "doppler_hz"}, where);
    if (!j.contains("omega") || !j.contains("doppler_hz"))
        config_fail(where + " needs \"omega\" and \"doppler_hz\"");
    HopConfig hop;
    hop.omega = parse_tagged_value(j.at("omega"), where + ".omega");
    hop.doppler_hz = j.at("doppler_hz").get<double>();
    return hop;
}

Config parse_config(const json& j) {
    reject_unknown_keys(j,
                        {"scheme", "metric", "gamma", "threshold", "relays", "trace",
                         "replications", "seed", "dssc_period_samples", "sweep"},
                        "config");
    Config cfg;
    if (!j.contains("scheme")) config_fail("config needs \"scheme\"");
    cfg.scheme = j.at("scheme").get<std::string>();
    if (cfg.scheme != "or" && cfg.scheme != "dssc_b")
        config_fail("scheme must be \"or\" or \"dssc_b\"");
    if (j.contains("metric")) {
        cfg.metric = j.at("metric").get<std::string>();
        if (cfg.metric != "min_equivalent" && cfg.metric != "half_harmonic_mean")
            config_fail("metric must be \"min_equivalent\" or \"half_harmonic_mean\"");
    }
    if (!j.contains("gamma")) config_fail("config needs \"gamma\"");
    cfg.gamma = parse_tagged_value(j.at("gamma"), "gamma");
    if (j.contains("threshold"))
        cfg.threshold = parse_tagged_value(j.at("threshold"), "threshold");
    if (cfg.scheme == "dssc_b" && !cfg.threshold)
        config_fail("dssc_b requires \"threshold\"");
    if (cfg.scheme == "or" && cfg.threshold)
        config_fail("\"threshold\" is only meaningful for dssc_b");

    if (!j.contains("relays") || !j.at("relays").is_array() || j.at("relays").size() < 2)
        config_fail("config needs \"relays\": an array of at least 2 entries");
    std::size_t idx = 0;
    for (const auto& r : j.at("relays")) {
        const std::string where = "relays[" + std::to_string(idx) + "]";
        if (!r.is_object()) config_fail(where + " must be an object");
        reject_unknown_keys(r, {"sr", "rd"}, where);
        if (!r.contains("sr") || !r.contains("rd"))
            config_fail(where + " needs \"sr\" and \"rd\"");
        cfg.relays.emplace_back(parse_hop(r.at("sr"), where + ".sr"),
                                parse_hop(r.at("rd"), where + ".rd"));
        ++idx;
    }

    if (j.contains("trace")) {
        const auto& t = j.at("trace");
        reject_unknown_keys(t, {"sample_rate_hz", "duration_s", "num_sinusoids"}, "trace");
        if (t.contains("sample_rate_hz")) cfg.sample_rate_hz = t.at("sample_rate_hz").get<double>();
        if (t.contains("duration_s")) cfg.duration_s = t.at("duration_s").get<double>();
        if (t.contains("num_sinusoids")) cfg.num_sinusoids = t.at("num_sinusoids").get<unsigned>();
    }
    if (j.contains("replications")) cfg.replications = j.at("replications").get<unsigned>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("dssc_period_samples"))
        cfg.dssc_period_samples = j.at("dssc_period_samples").get<int>();
    if (j.contains("sweep")) {
        const auto& s = j.at("sweep");
        reject_unknown_keys(s, {"axis", "values"}, "sweep");
        if (!s.contains("axis") || !s.contains("values"))
            config_fail("sweep needs \"axis\" and \"values\"");
        cfg.sweep_axis = s.at("axis").get<std::string>();
        cfg.sweep_values = s.at("values").get<std::vector<double>>();
    }
    return cfg;
}

Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) config_fail("cannot open config file " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        config_fail(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_config(j);
}

json tagged(double v) { return json{{"value", v}, {"unit", "linear"}}; }

json dump_config(const Config& cfg) {
    json relays = json::array();
    for (const auto& [sr, rd] : cfg.relays)
        relays.push_back({{"sr", {{"omega", tagged(sr.omega)}, {"doppler_hz", sr.doppler_hz}}},
                          {"rd", {{"omega", tagged(rd.omega)}, {"doppler_hz", rd.doppler_hz}}}});
    json j{{"scheme", cfg.scheme},
           {"metric", cfg.metric},
           {"gamma", tagged(cfg.gamma)},
           {"relays", relays},
           {"trace",
            {{"sample_rate_hz", cfg.sample_rate_hz},
             {"duration_s", cfg.duration_s},
             {"num_sinusoids", cfg.num_sinusoids}}},
           {"replications", cfg.replications},
           {"seed", cfg.seed},
           {"dssc_period_samples", cfg.dssc_period_samples}};
    if (cfg.threshold) j["threshold"] = tagged(*cfg.threshold);
    if (cfg.sweep_axis) j["sweep"] = {{"axis", *cfg.sweep_axis}, {"values", cfg.sweep_values}};
    return j;
}

// ---- C API helpers ----

struct TopologyHandle {
    sr_topology* ptr = nullptr;
    ~TopologyHandle() { sr_topology_destroy(ptr); }
};

struct ExperimentHandle {
    sr_experiment* ptr = nullptr;
    ~ExperimentHandle() { sr_experiment_destroy(ptr); }
};

struct ResultHandle {
    sr_result* ptr = nullptr;
    ~ResultHandle() { sr_result_destroy(ptr); }
};

struct SweepHandle {
    sr_sweep* ptr = nullptr;
    ~SweepHandle() { sr_sweep_destroy(ptr); }
};

void make_topology(const Config& cfg, TopologyHandle& out) {
    std::vector<double> o_sr, f_sr, o_rd, f_rd;
    for (const auto& [sr, rd] : cfg.relays) {
        o_sr.push_back(sr.omega);
        f_sr.push_back(sr.doppler_hz);
        o_rd.push_back(rd.omega);
        f_rd.push_back(rd.doppler_hz);
    }
    check(sr_topology_create(o_sr.data(), f_sr.data(), o_rd.data(), f_rd.data(),
                             cfg.relays.size(), cfg.gamma, &out.ptr));
}

void make_experiment(const Config& cfg, const TopologyHandle& topo, ExperimentHandle& out) {
    check(sr_experiment_create(
        topo.ptr, cfg.scheme == "or" ? SR_SCHEME_OR : SR_SCHEME_DSSC_B,
        cfg.metric == "min_equivalent" ? SR_METRIC_MIN_EQUIVALENT : SR_METRIC_HALF_HARMONIC_MEAN,
        cfg.threshold.value_or(0.0), cfg.sample_rate_hz, cfg.duration_s, cfg.num_sinusoids,
        cfg.replications, cfg.seed, cfg.dssc_period_samples, &out.ptr));
}

// ---- CSV output ----

struct CsvWriter {
    std::FILE* f = nullptr;
    explicit CsvWriter(const std::string& path, const std::string& comment = {}) {
        f = path == "-" ? stdout : std::fopen(path.c_str(), "wb");
        if (!f) throw cli_error(kExitRuntime, "cannot open output file " + path);
        if (!comment.empty()) std::fprintf(f, "# %s\n", comment.c_str());
        std::fputs("scheme,quantity,param_name,param_value,analytic,sim_mean,sim_stderr,"
                   "n_events,seed\n",
                   f);
    }
    ~CsvWriter() {
        if (f && f != stdout) std::fclose(f);
    }
    void row(const std::string& scheme, const std::string& quantity,
             const std::string& param_name, double param_value, double analytic, double sim_mean,
             double sim_stderr, std::uint64_t n_events, std::uint64_t seed) {
        std::fprintf(f, "%s,%s,%s,%.17e,%.17e,%.17e,%.17e,%" PRIu64 ",%" PRIu64 "\n",
                     scheme.c_str(), quantity.c_str(), param_name.c_str(), param_value, analytic,
                     sim_mean, sim_stderr, n_events, seed);
    }
};

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void write_result_rows(CsvWriter& csv, const std::string& scheme, const sr_result* result,
                       const std::string& param_name, double param_value, std::uint64_t seed) {
    sr_report rep;
    check(sr_result_switch_rate(result, &rep));
    csv.row(scheme, "switch_rate", param_name, param_value, rep.analytic, rep.sim_mean,
            rep.sim_stderr, rep.n_events, seed);
    std::size_t num_relays = 0;
    check(sr_result_num_relays(result, &num_relays));
    for (std::size_t i = 1; i <= num_relays; ++i) {
        check(sr_result_activation_time(result, static_cast<int>(i), &rep));
        csv.row(scheme, "activation_time_r" + std::to_string(i), param_name, param_value,
                rep.analytic, rep.sim_mean, rep.sim_stderr, rep.n_events, seed);
        check(sr_result_occupancy(result, static_cast<int>(i), &rep));
        csv.row(scheme, "occupancy_r" + std::to_string(i), param_name, param_value, rep.analytic,
                rep.sim_mean, rep.sim_stderr, rep.n_events, seed);
    }
    if (scheme == "dssc_b")
        for (std::size_t i = 1; i <= num_relays; ++i) {
            check(sr_result_crossing_rate(result, static_cast<int>(i), &rep));
            csv.row(scheme, "crossing_rate_r" + std::to_string(i), param_name, param_value,
                    rep.analytic, rep.sim_mean, rep.sim_stderr, rep.n_events, seed);
        }
}

// ---- analytic values through the C API ----

struct AnalyticValues {
    double switch_rate = kNaN;
    std::vector<double> activation;
    std::vector<double> occupancy;
    std::vector<double> crossing;
};

bool config_is_iid(const Config& cfg) {
    const double o = cfg.relays[0].first.omega, f = cfg.relays[0].first.doppler_hz;
    for (const auto& [sr, rd] : cfg.relays)
        if (sr.omega != o || rd.omega != o || sr.doppler_hz != f || rd.doppler_hz != f)
            return false;
    return true;
}

AnalyticValues analytic_values(const Config& cfg, const TopologyHandle& topo) {
    AnalyticValues a;
    const std::size_t n = cfg.relays.size();
    a.activation.assign(n, kNaN);
    a.occupancy.assign(n, kNaN);
    if (cfg.scheme == "or") {
        if (cfg.metric != "min_equivalent") return a;
        if (n == 2) {
            check(sr_or_switch_rate(topo.ptr, &a.switch_rate));
            check(sr_or_activation_times(topo.ptr, &a.activation[0], &a.activation[1]));
            double o1 = 0, o2 = 0;
            check(sr_min_equiv_omega(cfg.relays[0].first.omega, cfg.relays[0].second.omega, &o1));
            check(sr_min_equiv_omega(cfg.relays[1].first.omega, cfg.relays[1].second.omega, &o2));
            check(sr_or_steady_state(o1, o2, &a.occupancy[0], &a.occupancy[1]));
        } else if (config_is_iid(cfg)) {
            check(sr_or_switch_rate_iid(static_cast<int>(n), cfg.relays[0].first.doppler_hz,
                                        &a.switch_rate));
            double at = 0;
            check(sr_or_activation_time_iid(static_cast<int>(n), cfg.relays[0].first.doppler_hz,
                                            &at));
            std::fill(a.activation.begin(), a.activation.end(), at);
            std::fill(a.occupancy.begin(), a.occupancy.end(), 1.0 / static_cast<double>(n));
        } else {
            config_fail("no closed form for OR with more than 2 relays unless hops are i.i.d.");
        }
        return a;
    }
    check(sr_dssc_switch_rate(topo.ptr, *cfg.threshold, &a.switch_rate));
    double pi[6];
    check(sr_dssc_stationary(topo.ptr, *cfg.threshold, pi, &a.occupancy[0], &a.occupancy[1]));
    a.crossing.assign(n, kNaN);
    for (std::size_t i = 1; i <= n; ++i) {
        check(sr_dssc_activation_time(topo.ptr, static_cast<int>(i), *cfg.threshold,
                                      &a.activation[i - 1]));
        check(sr_dssc_crossing_rate(topo.ptr, static_cast<int>(i), *cfg.threshold,
                                    &a.crossing[i - 1]));
    }
    return a;
}

// ---- commands ----

int cmd_analytic(const Config& cfg, const std::string& out_path) {
    TopologyHandle topo;
    make_topology(cfg, topo);
    const AnalyticValues a = analytic_values(cfg, topo);

    std::printf("scheme: %s\n", cfg.scheme.c_str());
    std::printf("relays: %zu, gamma: %.17g (linear)\n", cfg.relays.size(), cfg.gamma);
    if (cfg.threshold) std::printf("threshold: %.17g (linear)\n", *cfg.threshold);
    std::printf("switch_rate_hz: %.10g\n", a.switch_rate);
    for (std::size_t i = 0; i < cfg.relays.size(); ++i)
        std::printf("activation_time_r%zu_s: %.10g\n", i + 1, a.activation[i]);
    for (std::size_t i = 0; i < cfg.relays.size(); ++i)
        std::printf("occupancy_r%zu: %.10g\n", i + 1, a.occupancy[i]);
    for (std::size_t i = 0; i < a.crossing.size(); ++i)
        std::printf("crossing_rate_r%zu_hz: %.10g\n", i + 1, a.crossing[i]);

    if (!out_path.empty()) {
        CsvWriter csv(out_path);
        csv.row(cfg.scheme, "switch_rate", "-", 0.0, a.switch_rate, kNaN, kNaN, 0, cfg.seed);
        for (std::size_t i = 0; i < cfg.relays.size(); ++i) {
            csv.row(cfg.scheme, "activation_time_r" + std::to_string(i + 1), "-", 0.0,
                    a.activation[i], kNaN, kNaN, 0, cfg.seed);
            csv.row(cfg.scheme, "occupancy_r" + std::to_string(i + 1), "-", 0.0, a.occupancy[i],
                    kNaN, kNaN, 0, cfg.seed);
        }
        for (std::size_t i = 0; i < a.crossing.size(); ++i)
            csv.row(cfg.scheme, "crossing_rate_r" + std::to_string(i + 1), "-", 0.0,
                    a.crossing[i], kNaN, kNaN, 0, cfg.seed);
    }
    return 0;
}

int cmd_simulate(const Config& cfg, const std::string& out_path) {
    TopologyHandle topo;
    make_topology(cfg, topo);
    ExperimentHandle exp;
    make_experiment(cfg, topo, exp);
    ResultHandle result;
    check(sr_experiment_run(exp.ptr, &result.ptr));

    sr_report rep;
    check(sr_result_switch_rate(result.ptr, &rep));
    std::printf("switch_rate_hz: analytic %.10g, simulated %.10g +/- %.3g (events %" PRIu64
                "%s)\n",
                rep.analytic, rep.sim_mean, rep.sim_stderr, rep.n_events,
                rep.low_power ? ", low power" : "");

    CsvWriter csv(out_path.empty() ? "-" : out_path);
    write_result_rows(csv, cfg.scheme, result.ptr, "-", 0.0, cfg.seed);
    return 0;
}

int cmd_sweep(const Config& cfg, const std::string& out_path) {
    if (!cfg.sweep_axis) config_fail("sweep command needs a \"sweep\" section in the config");
    sr_sweep_axis axis;
    if (*cfg.sweep_axis == "doppler_ratio") axis = SR_AXIS_DOPPLER_RATIO;
    else if (*cfg.sweep_axis == "L") axis = SR_AXIS_RELAY_COUNT;
    else if (*cfg.sweep_axis == "threshold") axis = SR_AXIS_THRESHOLD;
    else if (*cfg.sweep_axis == "gamma") axis = SR_AXIS_GAMMA;
    else config_fail("unknown sweep axis \"" + *cfg.sweep_axis + "\"");

    TopologyHandle topo;
    make_topology(cfg, topo);
    ExperimentHandle exp;
    make_experiment(cfg, topo, exp);
    SweepHandle sweep;
    check(sr_sweep_run(exp.ptr, axis, cfg.sweep_values.data(), cfg.sweep_values.size(),
                       &sweep.ptr));

    CsvWriter csv(out_path.empty() ? "-" : out_path);
    std::size_t rows = 0;
    check(sr_sweep_size(sweep.ptr, &rows));
    for (std::size_t r = 0; r < rows; ++r) {
        double value = 0;
        const sr_result* result = nullptr;
        check(sr_sweep_param_value(sweep.ptr, r, &value));
        check(sr_sweep_result(sweep.ptr, r, &result));
        write_result_rows(csv, cfg.scheme, result, *cfg.sweep_axis, value, cfg.seed);
    }
    return 0;
}

int cmd_compare(const Config& cfg, const std::string& out_path) {
    if (cfg.relays.size() != 2) config_fail("compare requires a two-relay topology");
    Config dssc_cfg = cfg;
    dssc_cfg.scheme = "dssc_b";
    dssc_cfg.metric = "min_equivalent";
    if (!dssc_cfg.threshold) dssc_cfg.threshold = 1.0; // placeholder; replaced by T*

    TopologyHandle topo;
    make_topology(cfg, topo);
    ExperimentHandle exp;
    make_experiment(dssc_cfg, topo, exp);

    double t_star = 0, or_hz = 0, dssc_hz = 0;
    ResultHandle or_result, dssc_result;
    check(sr_compare_worst_case(exp.ptr, &t_star, &or_hz, &dssc_hz, &or_result.ptr,
                                &dssc_result.ptr));

    std::printf("worst-case threshold T*: %.10g (linear)\n", t_star);
    std::printf("analytic switch rate: OR %.10g Hz, DSSC-B %.10g Hz (%s)\n", or_hz, dssc_hz,
                dssc_hz < or_hz ? "DSSC-B lower" : "DSSC-B NOT lower");
    sr_report rep_or, rep_dssc;
    check(sr_result_switch_rate(or_result.ptr, &rep_or));
    check(sr_result_switch_rate(dssc_result.ptr, &rep_dssc));
    std::printf("simulated switch rate: OR %.10g Hz, DSSC-B %.10g Hz (%s)\n", rep_or.sim_mean,
                rep_dssc.sim_mean,
                rep_dssc.sim_mean < rep_or.sim_mean ? "DSSC-B lower" : "DSSC-B NOT lower");

    CsvWriter csv(out_path.empty() ? "-" : out_path);
    write_result_rows(csv, "or", or_result.ptr, "threshold", t_star, cfg.seed);
    write_result_rows(csv, "dssc_b", dssc_result.ptr, "threshold", t_star, cfg.seed);
    return 0;
}

// ---- figure reproduction ----

std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> v;
    for (int i = 0; i < n; ++i)
        v.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
    return v;
}

Config figure_config(double omega_sr, double omega_rd, double f_sr, double f_rd,
                     unsigned replications, std::uint64_t seed) {
    Config cfg;
    cfg.scheme = "or";
    cfg.gamma = 1.0;
    cfg.relays = {{{omega_sr, f_sr}, {omega_rd, f_rd}}, {{omega_sr, f_sr}, {omega_rd, f_rd}}};
    cfg.duration_s = 10.0;
    cfg.replications = replications;
    cfg.seed = seed;
    return cfg;
}

double simulate_switch_rate(const Config& cfg) {
    TopologyHandle topo;
    make_topology(cfg, topo);
    ExperimentHandle exp;
    make_experiment(cfg, topo, exp);
    ResultHandle result;
    check(sr_experiment_run(exp.ptr, &result.ptr));
    sr_report rep;
    check(sr_result_switch_rate(result.ptr, &rep));
    return rep.sim_mean;
}

double worst_case_for(const Config& cfg) {
    TopologyHandle topo;
    make_topology(cfg, topo);
    double o1 = 0, o2 = 0;
    check(sr_min_equiv_omega(cfg.relays[0].first.omega, cfg.relays[0].second.omega, &o1));
    check(sr_min_equiv_omega(cfg.relays[1].first.omega, cfg.relays[1].second.omega, &o2));
    double t_star = 0;
    check(sr_worst_case_threshold(topo.ptr, 1e-4 * cfg.gamma * std::min(o1, o2),
                                  1e3 * cfg.gamma * std::max(o1, o2), &t_star));
    return t_star;
}

int cmd_figures(int figure, const std::string& out_dir, bool simulate, unsigned replications,
                std::uint64_t seed) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    const double f_rd = 10.0;

    const auto doppler_grid = log_grid(0.1, 10.0, 21);

    if (figure == 1 || figure == 3) {
        // Unbalanced hop gains (+/-10 dB), Doppler-ratio sweep, both schemes.
        // DSSC-B runs at its worst-case threshold per point. Rates are
        // divided by pi*max Doppler; activation times multiplied by it.
        for (const double db : {10.0, -10.0}) {
            const std::string tag = db > 0 ? "plus10db" : "minus10db";
            const std::string comment =
                "normalization: switch rates / (pi*max_doppler_hz), activation times * "
                "(pi*max_doppler_hz); gamma=1, omega_rd=1 linear, omega_sr=" +
                std::to_string(db) + " dB, f_rd_hz=10";
            const std::string base = figure == 1 ? "fig1" : "fig3";
            CsvWriter or_csv(out_dir + "/" + base + "_or_" + tag + ".csv", comment);
            CsvWriter dssc_csv(out_dir + "/" + base + "_dssc_" + tag + ".csv", comment);
            for (const double ratio : doppler_grid) {
                Config cfg = figure_config(db_to_linear(db), 1.0, ratio * f_rd, f_rd,
                                           replications, seed);
                const double norm = M_PI * std::max(ratio * f_rd, f_rd);
                TopologyHandle topo;
                make_topology(cfg, topo);
                double or_rate = 0;
                check(sr_or_switch_rate(topo.ptr, &or_rate));
                const double t_star = worst_case_for(cfg);
                double dssc_rate = 0;
                check(sr_dssc_switch_rate(topo.ptr, t_star, &dssc_rate));

                double or_sim = kNaN, dssc_sim = kNaN;
                if (simulate) {
                    or_sim = simulate_switch_rate(cfg) / norm;
                    Config dc = cfg;
                    dc.scheme = "dssc_b";
                    dc.threshold = t_star;
                    dssc_sim = simulate_switch_rate(dc) / norm;
                }
                if (figure == 1) {
                    or_csv.row("or", "switch_rate_norm", "doppler_ratio", ratio, or_rate / norm,
                               or_sim, kNaN, 0, seed);
                    dssc_csv.row("dssc_b", "switch_rate_norm", "doppler_ratio", ratio,
                                 dssc_rate / norm, dssc_sim, kNaN, 0, seed);
                } else {
                    // Both relays are identical, so the activation times of the
                    // two relays coincide with 1/rate for either scheme.
                    or_csv.row("or", "activation_time_norm", "doppler_ratio", ratio,
                               norm / or_rate, kNaN, kNaN, 0, seed);
                    dssc_csv.row("dssc_b", "activation_time_norm", "doppler_ratio", ratio,
                                 norm / dssc_rate, kNaN, kNaN, 0, seed);
                }
            }
        }
        return 0;
    }

    if (figure == 2 || figure == 4) {
        const std::string comment = figure == 2
                                        ? "normalization: switch rate / (pi*doppler_hz); "
                                          "i.i.d. hops, f=10 Hz"
                                        : "normalization: activation time * (pi*doppler_hz); "
                                          "i.i.d. hops, f=10 Hz";
        CsvWriter csv(out_dir + (figure == 2 ? "/fig2_or.csv" : "/fig4_or.csv"), comment);
        for (int l = 2; l <= 10; ++l) {
            double rate = 0;
            check(sr_or_switch_rate_iid(l, f_rd, &rate));
            const double norm = M_PI * f_rd;
            double sim = kNaN;
            if (simulate && l <= 6) {
                Config cfg = figure_config(1.0, 1.0, f_rd, f_rd, replications, seed);
                cfg.relays.assign(static_cast<std::size_t>(l), cfg.relays[0]);
                sim = simulate_switch_rate(cfg) / norm;
            }
            if (figure == 2)
                csv.row("or", "switch_rate_norm", "L", l, rate / norm, sim, kNaN, 0, seed);
            else
                csv.row("or", "activation_time_norm", "L", l, norm / rate, kNaN, kNaN, 0, seed);
        }
        return 0;
    }

    if (figure == 5) {
        // Unbalanced gains (S-R 10 dB above R-D), f_sr = 2*f_rd, threshold sweep.
        const std::string comment =
            "normalization: switch rates / (pi*max_doppler_hz); threshold normalized by "
            "gamma*omega_min_equiv; gamma=1, omega_rd=1, omega_sr=+10 dB, f_rd_hz=10, "
            "f_sr_hz=20";
        CsvWriter or_csv(out_dir + "/fig5_or.csv", comment);
        CsvWriter dssc_csv(out_dir + "/fig5_dssc.csv", comment);
        Config cfg = figure_config(10.0, 1.0, 2.0 * f_rd, f_rd, replications, seed);
        TopologyHandle topo;
        make_topology(cfg, topo);
        double o1 = 0;
        check(sr_min_equiv_omega(10.0, 1.0, &o1));
        const double norm = M_PI * 2.0 * f_rd;
        double or_rate = 0;
        check(sr_or_switch_rate(topo.ptr, &or_rate));
        // The OR side does not depend on the threshold; simulate it once.
        const double or_sim = simulate ? simulate_switch_rate(cfg) / norm : kNaN;
        for (const double t_hat : log_grid(0.02, 8.0, 41)) {
            const double t = t_hat * cfg.gamma * o1;
            double dssc_rate = 0;
            check(sr_dssc_switch_rate(topo.ptr, t, &dssc_rate));
            double dssc_sim = kNaN;
            if (simulate) {
                Config dc = cfg;
                dc.scheme = "dssc_b";
                dc.threshold = t;
                dssc_sim = simulate_switch_rate(dc) / norm;
            }
            or_csv.row("or", "switch_rate_norm", "threshold_norm", t_hat, or_rate / norm, or_sim,
                       kNaN, 0, seed);
            dssc_csv.row("dssc_b", "switch_rate_norm", "threshold_norm", t_hat, dssc_rate / norm,
                         dssc_sim, kNaN, 0, seed);
        }
        return 0;
    }

    config_fail("figure index must be 1..5");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Relay switching-rate analysis for OR and DSSC-B over Rayleigh fading"};
    app.require_subcommand(1);

    std::string config_path, out_path, seed_arg;
    bool dump = false;
    unsigned replications_override = 0;

    const auto add_common = [&](CLI::App* cmd, bool needs_config) {
        auto* opt = cmd->add_option("--config", config_path, "JSON experiment config");
        if (needs_config) opt->required();
        cmd->add_option("--out", out_path, "output CSV path (default: stdout)");
        cmd->add_option("--seed", seed_arg, "seed override: unsigned integer or \"auto\"");
        cmd->add_option("--replications", replications_override, "replication count override");
        cmd->add_flag("--dump-config", dump, "print the normalized config and exit");
    };

    auto* analytic = app.add_subcommand("analytic", "closed-form switching rates and times");
    add_common(analytic, true);
    auto* simulate = app.add_subcommand("simulate", "Monte-Carlo experiment with CSV report");
    add_common(simulate, true);
    auto* compare = app.add_subcommand("compare",
                                       "worst-case DSSC-B threshold vs OR, analytic + simulated");
    add_common(compare, true);
    auto* sweep = app.add_subcommand("sweep", "run the experiment across a parameter sweep");
    add_common(sweep, true);

    auto* figures = app.add_subcommand("figures", "emit figure-reproduction CSV data");
    int figure_index = 0;
    bool fig_simulate = false;
    figures->add_option("figure", figure_index, "figure index (1-5)")->required();
    add_common(figures, false);
    figures->add_flag("--simulate", fig_simulate, "add simulated overlays");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitConfig;
    }

    try {
        Config cfg;
        if (!config_path.empty()) {
            cfg = load_config(config_path);
            if (!seed_arg.empty()) {
                if (seed_arg == "auto") cfg.seed = std::random_device{}();
                else cfg.seed = std::stoull(seed_arg);
            }
            if (replications_override > 0) cfg.replications = replications_override;
            if (dump) {
                std::printf("%s\n", dump_config(cfg).dump(2).c_str());
                return 0;
            }
        }
        std::uint64_t fig_seed = 0;
        if (!seed_arg.empty() && seed_arg != "auto") fig_seed = std::stoull(seed_arg);
        else if (seed_arg == "auto") fig_seed = std::random_device{}();

        if (analytic->parsed()) return cmd_analytic(cfg, out_path);
        if (simulate->parsed()) return cmd_simulate(cfg, out_path);
        if (compare->parsed()) return cmd_compare(cfg, out_path);
        if (sweep->parsed()) return cmd_sweep(cfg, out_path);
        if (figures->parsed())
            return cmd_figures(figure_index, out_path.empty() ? "." : out_path, fig_simulate,
                               replications_override > 0 ? replications_override : 10, fig_seed);
    } catch (const cli_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return e.code;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitRuntime;
    }
    return 0;
}
