#include "selrelay/fading.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "selrelay/rng.hpp"

namespace selrelay {

namespace {

constexpr double kPi = std::numbers::pi;

struct Oscillator {
    double re, im;    // current phasor
    double rot_re, rot_im; // per-sample rotation
};

void advance(Oscillator& o) {
    const double re = o.re * o.rot_re - o.im * o.rot_im;
    const double im = o.re * o.rot_im + o.im * o.rot_re;
    o.re = re;
    o.im = im;
}

void renormalize(Oscillator& o) {
    const double mag = std::hypot(o.re, o.im);
    o.re /= mag;
    o.im /= mag;
}

} // namespace

FadingTrace generate_trace(const LinkParams& params, const TraceConfig& config,
                           const std::string& hop_label) {
    if (config.sample_rate_hz < kMinSamplesPerDoppler * params.doppler_hz) {
        std::string hop = hop_label.empty() ? std::string("hop") : hop_label;
        throw resolution_error(hop + ": sample_rate_hz " + std::to_string(config.sample_rate_hz) +
                               " is below " + std::to_string(kMinSamplesPerDoppler) +
                               " x doppler_hz (" + std::to_string(params.doppler_hz) + " Hz)");
    }

    const unsigned n_osc = config.num_sinusoids;
    std::mt19937_64 eng(config.seed);
    const double theta = 2.0 * kPi * uniform01(eng) - kPi;
    std::vector<double> phi(n_osc), psi(n_osc);
    for (auto& p : phi) p = 2.0 * kPi * uniform01(eng) - kPi;
    for (auto& p : psi) p = 2.0 * kPi * uniform01(eng) - kPi;

    // Arrival angles stratified over one quadrant, rotated by theta per seed.
    // In-phase oscillators run at 2*pi*F*cos(alpha_n), quadrature at
    // 2*pi*F*sin(alpha_n); each quadrature carries unit average power.
    const double dt = 1.0 / config.sample_rate_hz;
    std::vector<Oscillator> osc(2 * n_osc);
    for (unsigned n = 0; n < n_osc; ++n) {
        const double alpha = (2.0 * kPi * (n + 1) - kPi + theta) / (4.0 * n_osc);
        const double wc = 2.0 * kPi * params.doppler_hz * std::cos(alpha);
        const double ws = 2.0 * kPi * params.doppler_hz * std::sin(alpha);
        osc[n] = {std::cos(phi[n]), std::sin(phi[n]), std::cos(wc * dt), std::sin(wc * dt)};
        osc[n_osc + n] = {std::cos(psi[n]), std::sin(psi[n]), std::cos(ws * dt), std::sin(ws * dt)};
    }

    const std::size_t n_samples =
        static_cast<std::size_t>(std::llround(config.duration_s * config.sample_rate_hz));
    const double amp = std::sqrt(2.0 / n_osc);
    const double env_scale = std::sqrt(params.omega / 2.0);

    FadingTrace trace{params, config, {}};
    trace.samples.resize(n_samples);
    for (std::size_t k = 0; k < n_samples; ++k) {
        double gc = 0.0, gs = 0.0;
        for (unsigned n = 0; n < n_osc; ++n) gc += osc[n].re;
        for (unsigned n = 0; n < n_osc; ++n) gs += osc[n_osc + n].re;
        trace.samples[k] = env_scale * std::hypot(amp * gc, amp * gs);
        for (auto& o : osc) advance(o);
        if ((k & 0xfffu) == 0xfffu)
            for (auto& o : osc) renormalize(o);
    }
    return trace;
}

double measure_lcr(std::span<const double> samples, double sample_rate_hz, double level,
                   CrossingDirection direction) {
    if (level < 0.0) throw domain_error("measure_lcr: level must be >= 0");
    if (samples.size() < 2)
        throw insufficient_data_error("measure_lcr: need at least 2 samples");

    std::size_t up = 0, down = 0;
    for (std::size_t k = 0; k + 1 < samples.size(); ++k) {
        const double a = samples[k], b = samples[k + 1];
        if (a > level && b <= level) ++down;
        else if (a < level && b >= level) ++up;
    }
    const double duration = static_cast<double>(samples.size()) / sample_rate_hz;
    switch (direction) {
        case CrossingDirection::Up: return static_cast<double>(up) / duration;
        case CrossingDirection::Down: return static_cast<double>(down) / duration;
        default: return static_cast<double>(up + down) / duration;
    }
}

ValidationReport validate_rayleigh(const FadingTrace& trace, double tolerance) {
    const auto& s = trace.samples;
    if (s.size() < 100000)
        throw insufficient_data_error("validate_rayleigh: need at least 1e5 samples, got " +
                                      std::to_string(s.size()));

    ValidationReport rep;
    rep.n = s.size();

    double acc = 0.0;
    for (double v : s) acc += v * v;
    rep.sample_mean_sq = acc / static_cast<double>(s.size());
    rep.mean_sq_rel_dev = std::abs(rep.sample_mean_sq - trace.params.omega) / trace.params.omega;

    std::vector<double> sorted(s.begin(), s.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    double ks = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = -std::expm1(-sorted[i] * sorted[i] / trace.params.omega);
        ks = std::max(ks, std::max(f - static_cast<double>(i) / n,
                                   static_cast<double>(i + 1) / n - f));
    }
    rep.ks_distance = ks;
    rep.passed = rep.mean_sq_rel_dev <= tolerance && rep.ks_distance <= tolerance;
    return rep;
}

void export_trace_csv(const FadingTrace& trace, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw config_error("export_trace_csv: cannot open " + path);
    std::fputs("t_s,envelope\n", f);
    const double dt = 1.0 / trace.config.sample_rate_hz;
    for (std::size_t k = 0; k < trace.samples.size(); ++k)
        std::fprintf(f, "%.17g,%.17g\n", static_cast<double>(k) * dt, trace.samples[k]);
    std::fclose(f);
}

} // namespace selrelay
