#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "selrelay/errors.hpp"

namespace selrelay {

/// One wireless hop: average squared channel gain (linear) and maximum
/// Doppler frequency in Hz.
struct LinkParams {
    double omega;
    double doppler_hz;

    LinkParams(double omega_, double doppler_hz_) : omega(omega_), doppler_hz(doppler_hz_) {
        if (!(omega > 0.0)) throw domain_error("LinkParams: omega must be > 0");
        if (!(doppler_hz > 0.0)) throw domain_error("LinkParams: doppler_hz must be > 0");
    }
};

/// Sampling plan for envelope trace generation.
struct TraceConfig {
    double sample_rate_hz;
    double duration_s;
    unsigned num_sinusoids = 64;
    std::uint64_t seed = 0;

    TraceConfig(double sample_rate_hz_, double duration_s_, unsigned num_sinusoids_ = 64,
                std::uint64_t seed_ = 0)
        : sample_rate_hz(sample_rate_hz_), duration_s(duration_s_),
          num_sinusoids(num_sinusoids_), seed(seed_) {
        if (!(sample_rate_hz > 0.0)) throw config_error("TraceConfig: sample_rate_hz must be > 0");
        if (!(duration_s > 0.0)) throw config_error("TraceConfig: duration_s must be > 0");
        if (num_sinusoids < 8) throw config_error("TraceConfig: num_sinusoids must be >= 8");
    }
};

/// Minimum sample rate as a multiple of the Doppler frequency. Below this
/// the discrete crossing counts drift visibly from the continuous-time rates.
inline constexpr double kMinSamplesPerDoppler = 32.0;

/// Default oversampling used when a config leaves the rate unspecified.
inline constexpr double kDefaultSamplesPerDoppler = 64.0;

/// Uniformly sampled Rayleigh envelope realization of one hop, together with
/// the parameters that produced it. Sample k sits at t = k / sample_rate_hz.
struct FadingTrace {
    LinkParams params;
    TraceConfig config;
    std::vector<double> samples;

    double duration_s() const { return static_cast<double>(samples.size()) / config.sample_rate_hz; }
};

/// Generate a Rayleigh envelope trace with Clarke (isotropic scattering)
/// Doppler dynamics using a sum-of-sinusoids model: num_sinusoids oscillators
/// per quadrature, arrival angles stratified over a quadrant with a common
/// random rotation, phases independent per oscillator. The stationary
/// marginal is Rayleigh with E[a^2] = omega and the envelope slope is
/// zero-mean Gaussian with standard deviation pi * doppler_hz * sqrt(omega).
/// Deterministic in (params, config, seed).
///
/// `hop_label`, when nonempty, names the hop in error messages.
FadingTrace generate_trace(const LinkParams& params, const TraceConfig& config,
                           const std::string& hop_label = {});

enum class CrossingDirection { Up, Down, Both };

/// Crossings per second of `level` by the sampled sequence, counted from
/// consecutive-sample sign changes. Duration is taken as n / sample_rate_hz.
double measure_lcr(std::span<const double> samples, double sample_rate_hz, double level,
                   CrossingDirection direction);

struct ValidationReport {
    std::size_t n = 0;
    double sample_mean_sq = 0.0;     // estimate of E[a^2]
    double mean_sq_rel_dev = 0.0;    // |estimate - omega| / omega
    double ks_distance = 0.0;        // sup-norm distance to the Rayleigh CDF
    bool passed = false;
};

/// Check a trace against the Rayleigh marginal it was generated for:
/// second-moment deviation and Kolmogorov-Smirnov distance, both compared
/// against `tolerance`. Requires at least 1e5 samples.
ValidationReport validate_rayleigh(const FadingTrace& trace, double tolerance);

/// Write `t_s,envelope` rows (full precision, LF endings) to `path`.
void export_trace_csv(const FadingTrace& trace, const std::string& path);

} // namespace selrelay
