// End-to-end checks of the installed CLI binary. The test runner passes the
// binary path in SELRELAY_CLI and a scratch directory in SELRELAY_WORKDIR.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

std::string cli_path() {
    const char* p = std::getenv("SELRELAY_CLI");
    REQUIRE_MESSAGE(p != nullptr, "SELRELAY_CLI not set");
    return p;
}

std::string workdir() {
    const char* p = std::getenv("SELRELAY_WORKDIR");
    return p ? p : ".";
}

struct RunResult {
    int exit_code;
    std::string output; // stdout + stderr
};

RunResult run(const std::string& args) {
    const std::string out_file = workdir() + "/cli_out.txt";
    const std::string cmd = cli_path() + " " + args + " > " + out_file + " 2>&1";
    const int rc = std::system(cmd.c_str());
    std::ifstream in(out_file);
    std::stringstream ss;
    ss << in.rdbuf();
    return {WEXITSTATUS(rc), ss.str()};
}

std::string write_file(const std::string& name, const std::string& content) {
    const std::string path = workdir() + "/" + name;
    std::ofstream out(path);
    out << content;
    return path;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* kIidConfig = R"({
  "scheme": "or",
  "gamma": {"value": 0.0, "unit": "db"},
  "relays": [
    {"sr": {"omega": {"value": 1.0, "unit": "linear"}, "doppler_hz": 10.0},
     "rd": {"omega": {"value": 0.0, "unit": "db"}, "doppler_hz": 10.0}},
    {"sr": {"omega": {"value": 1.0, "unit": "linear"}, "doppler_hz": 10.0},
     "rd": {"omega": {"value": 1.0, "unit": "linear"}, "doppler_hz": 10.0}}
  ],
  "trace": {"duration_s": 2.0},
  "replications": 3,
  "seed": 11
})";

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    for (std::string line; std::getline(ss, line);) out.push_back(line);
    return out;
}

} // namespace

TEST_CASE("analytic prints the closed-form rate") {
    const auto cfg = write_file("iid.json", kIidConfig);
    const auto r = run("analytic --config " + cfg);
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("31.41592654") != std::string::npos);
    CHECK(r.output.find("0.03183098862") != std::string::npos);
}

TEST_CASE("analytic covers three-relay and zero-threshold configurations") {
    const auto l3 = write_file("l3.json", R"({"scheme": "or",
        "gamma": {"value": 1.0, "unit": "linear"},
        "relays": [
          {"sr": {"omega": {"value": 1.0, "unit": "linear"}, "doppler_hz": 10.0},
           "rd": {"omega": {"value": 1.0, "unit": "linear"}, "doppler_hz": 10.0}},
          {"sr": {"omega": {"value": 1.0, "unit": "linear"}, "doppler_hz": 10.0},
           "rd": {"omega": {"value": 1.0, "unit": "linear"}, "doppler_hz": 10.0}},
          {"sr": {"omega": {"value": 1.0, "unit": "linear"}, "doppler_hz": 10.0},
           "rd": {"omega": {"value": 1.0, "unit": "linear"}, "doppler_hz": 10.0}}
        ]})");
    const auto r3 = run("analytic --config " + l3);
    CHECK(r3.exit_code == 0);
    CHECK(r3.output.find("42.9457864") != std::string::npos);

    const auto t0 = write_file("t0.json", R"({"scheme": "dssc_b",
        "gamma": {"value": 1.0, "unit": "linear"},
        "threshold": {"value": 0.0, "unit": "linear"},
        "relays": [
          {"sr": {"omega": {"value": 1.0, "unit": "linear"}, "doppler_hz": 10.0},
           "rd": {"omega": {"value": 1.0, "unit": "linear"}, "doppler_hz": 10.0}},
          {"sr": {"omega": {"value": 1.0, "unit": "linear"}, "doppler_hz": 10.0},
           "rd": {"omega": {"value": 1.0, "unit": "linear"}, "doppler_hz": 10.0}}
        ]})");
    const auto r0 = run("analytic --config " + t0);
    CHECK(r0.exit_code == 0);
    CHECK(r0.output.find("switch_rate_hz: 0") != std::string::npos);
    CHECK(r0.output.find("activation_time_r1_s: inf") != std::string::npos);
}

TEST_CASE("config errors exit with code 2 and name the offender") {
    const auto bad = write_file("bad.json", R"({"scheme": "or", "bogus_key": 1,
        "gamma": {"value": 1.0, "unit": "linear"}, "relays": []})");
    const auto r = run("analytic --config " + bad);
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("bogus_key") != std::string::npos);

    const auto missing = run("analytic --config " + workdir() + "/does_not_exist.json");
    CHECK(missing.exit_code == 2);

    const auto no_unit = write_file("nounit.json", R"({"scheme": "or",
        "gamma": {"value": 1.0}, "relays": []})");
    CHECK(run("analytic --config " + no_unit).exit_code == 2);

    const auto dssc_no_thr = write_file("nothr.json", R"({"scheme": "dssc_b",
        "gamma": {"value": 1.0, "unit": "linear"},
        "relays": [
          {"sr": {"omega": {"value": 1.0, "unit": "linear"}, "doppler_hz": 10.0},
           "rd": {"omega": {"value": 1.0, "unit": "linear"}, "doppler_hz": 10.0}},
          {"sr": {"omega": {"value": 1.0, "unit": "linear"}, "doppler_hz": 10.0},
           "rd": {"omega": {"value": 1.0, "unit": "linear"}, "doppler_hz": 10.0}}
        ]})");
    const auto r2 = run("analytic --config " + dssc_no_thr);
    CHECK(r2.exit_code == 2);
    CHECK(r2.output.find("threshold") != std::string::npos);
}

TEST_CASE("simulate emits the documented CSV schema and is seed-reproducible") {
    const auto cfg = write_file("iid.json", kIidConfig);
    const std::string out1 = workdir() + "/sim1.csv";
    const std::string out2 = workdir() + "/sim2.csv";
    CHECK(run("simulate --config " + cfg + " --out " + out1).exit_code == 0);
    CHECK(run("simulate --config " + cfg + " --out " + out2 + " --seed 11").exit_code == 0);

    const auto csv1 = read_file(out1);
    const auto csv2 = read_file(out2);
    CHECK(csv1 == csv2); // --seed 11 matches the config's seed

    const auto lines = lines_of(csv1);
    REQUIRE(!lines.empty());
    CHECK(lines[0] ==
          "scheme,quantity,param_name,param_value,analytic,sim_mean,sim_stderr,n_events,seed");
    bool has_switch_rate = false;
    for (const auto& line : lines)
        if (line.rfind("or,switch_rate,", 0) == 0) has_switch_rate = true;
    CHECK(has_switch_rate);

    const std::string out3 = workdir() + "/sim3.csv";
    CHECK(run("simulate --config " + cfg + " --out " + out3 + " --seed 12").exit_code == 0);
    CHECK(read_file(out3) != csv1);
}

TEST_CASE("dump-config round-trips") {
    const auto cfg = write_file("iid.json", kIidConfig);
    const auto first = run("analytic --config " + cfg + " --dump-config");
    CHECK(first.exit_code == 0);
    const auto normalized = write_file("normalized.json", first.output);
    const auto second = run("analytic --config " + normalized + " --dump-config");
    CHECK(second.exit_code == 0);
    CHECK(first.output == second.output);
}

TEST_CASE("sweep command") {
    std::string cfg_text = kIidConfig;
    cfg_text.insert(cfg_text.rfind('}'), R"(, "sweep": {"axis": "L", "values": [2, 3]})");
    const auto cfg = write_file("sweep.json", cfg_text);
    const std::string out = workdir() + "/sweep.csv";
    CHECK(run("sweep --config " + cfg + " --out " + out).exit_code == 0);
    const auto lines = lines_of(read_file(out));
    bool l2 = false, l3 = false;
    for (const auto& line : lines) {
        if (line.rfind("or,switch_rate,L,", 0) != 0) continue;
        std::stringstream ss(line);
        std::string field;
        for (int c = 0; c < 4; ++c) std::getline(ss, field, ',');
        if (std::stod(field) == 2.0) l2 = true;
        if (std::stod(field) == 3.0) l3 = true;
    }
    CHECK(l2);
    CHECK(l3);

    std::string bad_axis = kIidConfig;
    bad_axis.insert(bad_axis.rfind('}'), R"(, "sweep": {"axis": "nope", "values": [1]})");
    const auto bad = write_file("badaxis.json", bad_axis);
    CHECK(run("sweep --config " + bad).exit_code == 2);
}

TEST_CASE("compare command reports both schemes") {
    const auto cfg = write_file("iid.json", kIidConfig);
    const std::string out = workdir() + "/compare.csv";
    const auto r = run("compare --config " + cfg + " --out " + out + " --replications 2");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("DSSC-B lower") != std::string::npos);
    const auto lines = lines_of(read_file(out));
    bool or_row = false, dssc_row = false;
    for (const auto& line : lines) {
        if (line.rfind("or,switch_rate,threshold,", 0) == 0) or_row = true;
        if (line.rfind("dssc_b,switch_rate,threshold,", 0) == 0) dssc_row = true;
    }
    CHECK(or_row);
    CHECK(dssc_row);
}

TEST_CASE("figure data: monotone relay-count curve") {
    const std::string dir = workdir() + "/figs";
    CHECK(run("figures 2 --out " + dir).exit_code == 0);
    const auto lines = lines_of(read_file(dir + "/fig2_or.csv"));
    REQUIRE(lines.size() >= 3);
    CHECK(lines[0].rfind("# normalization", 0) == 0);
    double prev = 0.0;
    std::size_t rows = 0;
    for (std::size_t i = 2; i < lines.size(); ++i) {
        // scheme,quantity,param_name,param_value,analytic,...
        std::stringstream ss(lines[i]);
        std::string field;
        for (int c = 0; c < 5; ++c) std::getline(ss, field, ',');
        const double analytic = std::stod(field);
        CHECK(analytic > prev);
        prev = analytic;
        ++rows;
    }
    CHECK(rows == 9); // L = 2..10
}

TEST_CASE("figure data: DSSC-B below OR across the threshold sweep") {
    const std::string dir = workdir() + "/figs";
    CHECK(run("figures 5 --out " + dir).exit_code == 0);
    const auto or_lines = lines_of(read_file(dir + "/fig5_or.csv"));
    const auto dssc_lines = lines_of(read_file(dir + "/fig5_dssc.csv"));
    REQUIRE(or_lines.size() == dssc_lines.size());
    for (std::size_t i = 2; i < or_lines.size(); ++i) {
        std::stringstream so(or_lines[i]), sd(dssc_lines[i]);
        std::string field;
        for (int c = 0; c < 5; ++c) std::getline(so, field, ',');
        const double or_v = std::stod(field);
        for (int c = 0; c < 5; ++c) std::getline(sd, field, ',');
        const double dssc_v = std::stod(field);
        CHECK(dssc_v < or_v);
    }
    CHECK(run("figures 9 --out " + dir).exit_code == 2);
}

TEST_CASE("figure data: OR curve ignores the gain-unbalance sign when Dopplers match") {
    const std::string dir = workdir() + "/figs";
    CHECK(run("figures 1 --out " + dir).exit_code == 0);
    const auto plus = lines_of(read_file(dir + "/fig1_or_plus10db.csv"));
    const auto minus = lines_of(read_file(dir + "/fig1_or_minus10db.csv"));
    REQUIRE(plus.size() == minus.size());
    // At doppler_ratio = 1 every hop shares one Doppler frequency and the
    // rate is gain-free; find that row and compare across profiles.
    for (std::size_t i = 2; i < plus.size(); ++i) {
        std::stringstream sp(plus[i]);
        std::string field, ratio_field;
        for (int c = 0; c < 4; ++c) std::getline(sp, ratio_field, ',');
        std::getline(sp, field, ',');
        const double ratio = std::stod(ratio_field);
        if (std::abs(ratio - 1.0) < 1e-9) {
            const double v_plus = std::stod(field);
            std::stringstream sm(minus[i]);
            for (int c = 0; c < 5; ++c) std::getline(sm, field, ',');
            // Swapping which side carries the 10 dB surplus relabels the
            // bracket terms without changing their sum.
            CHECK(std::stod(field) == doctest::Approx(v_plus).epsilon(1e-12));
        }
    }
}
