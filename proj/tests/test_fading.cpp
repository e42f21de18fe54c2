#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "selrelay/fading.hpp"

using namespace selrelay;

namespace {

constexpr double kPi = std::numbers::pi;

// One-direction Rayleigh crossing rate at normalized level rho = level/sqrt(omega).
double rayleigh_lcr(double doppler_hz, double rho) {
    return std::sqrt(2.0 * kPi) * doppler_hz * rho * std::exp(-rho * rho);
}

// Both-direction count halved: same expectation as either direction alone,
// with half the estimator variance.
double measured_one_sided_lcr(const FadingTrace& tr, double level) {
    return measure_lcr(tr.samples, tr.config.sample_rate_hz, level, CrossingDirection::Both) / 2.0;
}

} // namespace

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(LinkParams(0.0, 10.0), domain_error);
    CHECK_THROWS_AS(LinkParams(1.0, -1.0), domain_error);
    CHECK_THROWS_AS(TraceConfig(640.0, 0.0), config_error);
    CHECK_THROWS_AS(TraceConfig(640.0, 1.0, 4), config_error);
    CHECK_THROWS_AS(TraceConfig(-1.0, 1.0), config_error);
}

TEST_CASE("sample rate must cover the Doppler bandwidth") {
    LinkParams params(1.0, 50.0);
    TraceConfig config(640.0, 1.0, 64, 1); // needs >= 1600 Hz
    CHECK_THROWS_AS(generate_trace(params, config), resolution_error);
    try {
        generate_trace(params, config, "relay 2 S-R hop");
    } catch (const resolution_error& e) {
        CHECK(std::string(e.what()).find("relay 2 S-R hop") != std::string::npos);
    }
}

TEST_CASE("trace length and determinism") {
    LinkParams params(1.0, 10.0);
    TraceConfig config(640.0, 2.5, 64, 12345);
    const auto a = generate_trace(params, config);
    CHECK(a.samples.size() == 1600);
    for (double v : a.samples) CHECK(v >= 0.0);

    const auto b = generate_trace(params, config);
    CHECK(a.samples == b.samples); // bit-identical

    TraceConfig other(640.0, 2.5, 64, 12346);
    const auto c = generate_trace(params, other);
    CHECK(a.samples != c.samples);
}

TEST_CASE("second moment converges to omega on a 100 s trace") {
    const auto tr = generate_trace(LinkParams(1.0, 10.0), TraceConfig(640.0, 100.0, 64, 777));
    double acc = 0.0;
    for (double v : tr.samples) acc += v * v;
    const double mean_sq = acc / static_cast<double>(tr.samples.size());
    CHECK(std::abs(mean_sq - 1.0) < 0.01);
}

TEST_CASE("down-crossing rate at the rms level") {
    const auto tr = generate_trace(LinkParams(1.0, 10.0), TraceConfig(640.0, 100.0, 64, 777));
    const double measured = measure_lcr(tr.samples, 640.0, 1.0, CrossingDirection::Down);
    const double expected = rayleigh_lcr(10.0, 1.0); // 9.22137008895789 Hz
    CHECK(expected == doctest::Approx(9.22137008895789).epsilon(1e-12));
    CHECK(std::abs(measured - expected) / expected < 0.03);
}

TEST_CASE("crossing counter on hand-checked sequences") {
    const double flat[] = {0.2, 0.2, 0.2, 0.2};
    CHECK(measure_lcr(flat, 4.0, 1.0, CrossingDirection::Both) == 0.0);

    const double zigzag[] = {0.5, 1.5, 0.5, 1.5};
    CHECK(measure_lcr(zigzag, 4.0, 1.0, CrossingDirection::Both) == doctest::Approx(3.0));
    CHECK(measure_lcr(zigzag, 4.0, 1.0, CrossingDirection::Up) == doctest::Approx(2.0));
    CHECK(measure_lcr(zigzag, 4.0, 1.0, CrossingDirection::Down) == doctest::Approx(1.0));

    const double single[] = {0.5};
    CHECK_THROWS_AS(measure_lcr(single, 4.0, 1.0, CrossingDirection::Both),
                    insufficient_data_error);
    CHECK_THROWS_AS(measure_lcr(zigzag, 4.0, -0.5, CrossingDirection::Both), domain_error);
}

TEST_CASE("two-sided crossings at 20 Hz Doppler") {
    const auto tr = generate_trace(LinkParams(1.0, 20.0), TraceConfig(1280.0, 200.0, 64, 31));
    const double measured = measure_lcr(tr.samples, 1280.0, 1.0, CrossingDirection::Both);
    const double expected = 2.0 * rayleigh_lcr(20.0, 1.0); // 36.88548035583156 Hz
    CHECK(expected == doctest::Approx(36.88548035583156).epsilon(1e-12));
    CHECK(std::abs(measured - expected) / expected < 0.03);
}

TEST_CASE("envelope crossing rates certify the slope statistics") {
    // 200 s traces, levels at rho in {0.5, 1, 2}; 3% agreement with
    // sqrt(2 pi) F rho exp(-rho^2) pins the slope std at pi F sqrt(omega).
    const double omega = 2.0;
    const double doppler = 10.0;
    const auto tr = generate_trace(LinkParams(omega, doppler), TraceConfig(640.0, 200.0, 64, 99));
    for (const double rho : {0.5, 1.0, 2.0}) {
        const double measured = measured_one_sided_lcr(tr, rho * std::sqrt(omega));
        const double expected = rayleigh_lcr(doppler, rho);
        CAPTURE(rho);
        CHECK(std::abs(measured - expected) / expected < 0.03);
    }
}

TEST_CASE("validate_rayleigh accepts matched parameters and rejects mismatched ones") {
    const auto tr =
        generate_trace(LinkParams(2.0, 10.0), TraceConfig(640.0, 1562.5, 64, 2024)); // 1e6 samples
    REQUIRE(tr.samples.size() == 1000000);

    const auto rep = validate_rayleigh(tr, 0.02);
    CHECK(rep.sample_mean_sq > 1.96);
    CHECK(rep.sample_mean_sq < 2.04);
    CHECK(rep.passed);

    // Same samples declared as omega = 8 must fail.
    FadingTrace wrong = tr;
    wrong.params = LinkParams(8.0, 10.0);
    CHECK_FALSE(validate_rayleigh(wrong, 0.02).passed);

    FadingTrace tiny = tr;
    tiny.samples.resize(1000);
    CHECK_THROWS_AS(validate_rayleigh(tiny, 0.02), insufficient_data_error);
}

TEST_CASE("marginal holds across parameter choices") {
    for (const auto& [omega, doppler, seed] :
         {std::tuple{0.5, 5.0, 11ull}, std::tuple{4.0, 25.0, 12ull}}) {
        const double fs = 64.0 * doppler;
        const auto tr =
            generate_trace(LinkParams(omega, doppler), TraceConfig(fs, 1.0e6 / fs, 64, seed));
        CAPTURE(omega);
        CHECK(validate_rayleigh(tr, 0.02).passed);
    }
}

TEST_CASE("traces from distinct seeds are uncorrelated") {
    const TraceConfig base(640.0, 1562.5, 64, 501);
    const auto a = generate_trace(LinkParams(1.0, 10.0), base);
    const auto b = generate_trace(LinkParams(1.0, 10.0), TraceConfig(640.0, 1562.5, 64, 502));
    const std::size_t n = a.samples.size();
    double ma = 0, mb = 0;
    for (std::size_t k = 0; k < n; ++k) {
        ma += a.samples[k];
        mb += b.samples[k];
    }
    ma /= static_cast<double>(n);
    mb /= static_cast<double>(n);
    double num = 0, va = 0, vb = 0;
    for (std::size_t k = 0; k < n; ++k) {
        num += (a.samples[k] - ma) * (b.samples[k] - mb);
        va += (a.samples[k] - ma) * (a.samples[k] - ma);
        vb += (b.samples[k] - mb) * (b.samples[k] - mb);
    }
    CHECK(std::abs(num / std::sqrt(va * vb)) < 0.01);
}

TEST_CASE("csv export") {
    const auto tr = generate_trace(LinkParams(1.0, 10.0), TraceConfig(640.0, 0.05, 64, 3));
    const std::string path = "trace_export_test.csv";
    export_trace_csv(tr, path);
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "t_s,envelope");
    std::size_t rows = 0;
    for (std::string line; std::getline(in, line);) ++rows;
    CHECK(rows == tr.samples.size());
    std::remove(path.c_str());
}
