#pragma once

#include <array>
#include <utility>
#include <vector>

#include "selrelay/errors.hpp"
#include "selrelay/fading.hpp"

namespace selrelay {

/// Per-relay source->relay and relay->destination hops, plus the common
/// unfaded SNR gamma = P_T / N0 (linear).
struct RelayTopology {
    struct RelayLinks {
        LinkParams sr;
        LinkParams rd;
    };

    std::vector<RelayLinks> relays;
    double gamma;

    RelayTopology(std::vector<RelayLinks> relays_, double gamma_)
        : relays(std::move(relays_)), gamma(gamma_) {
        if (relays.size() < 2) throw domain_error("RelayTopology: need at least 2 relays");
        if (!(gamma > 0.0)) throw domain_error("RelayTopology: gamma must be > 0");
    }

    std::size_t size() const { return relays.size(); }
    double max_doppler() const {
        double f = 0.0;
        for (const auto& r : relays) {
            f = std::max(f, r.sr.doppler_hz);
            f = std::max(f, r.rd.doppler_hz);
        }
        return f;
    }
};

/// Average squared gain of the end-to-end min-equivalent channel of one relay.
struct MinEquivalentParams {
    double omega;

    explicit MinEquivalentParams(double omega_) : omega(omega_) {
        if (!(omega > 0.0)) throw domain_error("MinEquivalentParams: omega must be > 0");
    }
};

/// SNR switching threshold for DSSC-B (linear). The corresponding envelope
/// threshold is sqrt(t / gamma).
struct SwitchThreshold {
    double t;

    explicit SwitchThreshold(double t_) : t(t_) {
        if (t < 0.0) throw domain_error("SwitchThreshold: t must be >= 0");
    }
};

/// Stationary distribution of the six-state DSSC-B switching chain and the
/// per-relay activation probabilities it implies.
struct DsscStationary {
    std::array<double, 6> pi;
    double rho1;
    double rho2;
};

namespace closedform {

/// Omega_sr * Omega_rd / (Omega_sr + Omega_rd).
MinEquivalentParams min_equiv_omega(const LinkParams& sr, const LinkParams& rd);

/// Rayleigh density/CDF of min(a_sr, a_rd) for independent Rayleigh hops.
double min_equiv_pdf(double x, const LinkParams& sr, const LinkParams& rd);
double min_equiv_cdf(double x, const LinkParams& sr, const LinkParams& rd);

/// Density at zero of the difference of the two relays' min-equivalent
/// envelopes: sqrt(pi) * sqrt(o1 o2) / (o1 + o2)^(3/2).
double metric_gap_pdf_at_zero(const MinEquivalentParams& p1, const MinEquivalentParams& p2);

/// Density of the time derivative of that difference process: a four-term
/// zero-mean Gaussian mixture whose weights and scales come from the four
/// hops' gains and Doppler frequencies. Two-relay topologies only.
double metric_gap_slope_pdf(double x, const RelayTopology& topology);

/// E[max(dZ/dt, 0)] for the difference process (closed form).
double mean_positive_gap_slope(const RelayTopology& topology);

/// Opportunistic-relaying switch rate, two relays, independent but not
/// necessarily identical hop statistics.
double or_switch_rate(const RelayTopology& topology);

/// Same quantity assembled from its two factors (gap density at zero and
/// mean positive slope); kept as a separate route for cross-checking.
double or_switch_rate_composed(const RelayTopology& topology);

/// Two relays, equal hop gains: rate depends only on the four Doppler
/// frequencies.
double or_switch_rate_iid2(double f_sr1_hz, double f_r1d_hz, double f_sr2_hz, double f_r2d_hz);

/// L relays, fully i.i.d. hops with common maximum Doppler frequency.
/// Alternating binomial sum; exact up to L = 30.
double or_switch_rate_iid(int num_relays, double doppler_hz);

/// Mean time each relay stays active under OR with two relays.
std::pair<double, double> or_activation_times(const RelayTopology& topology);

/// Mean activation time under i.i.d. OR: reciprocal of the switch rate.
double or_activation_time_iid(int num_relays, double doppler_hz);

/// Probability that each relay's min-equivalent envelope beats the other's:
/// omega_i / (omega_1 + omega_2).
std::pair<double, double> or_steady_state(const MinEquivalentParams& p1,
                                          const MinEquivalentParams& p2);

/// Down-crossing rate of relay `relay_index` (1-based) min-equivalent
/// envelope at the DSSC-B envelope threshold sqrt(t/gamma).
double dssc_crossing_rate(const RelayTopology& topology, int relay_index,
                          const SwitchThreshold& threshold);

/// Stationary probabilities of the six-state DSSC-B chain with
/// q_i = 1 - exp(-t / (gamma omega_i)). Degenerate thresholds (t = 0, or t
/// large enough that exp underflows) return the analytic limits.
DsscStationary dssc_stationary(const RelayTopology& topology, const SwitchThreshold& threshold);

/// Stationary distribution directly from the per-relay below-threshold
/// probabilities; building block shared with the power-iteration oracle.
DsscStationary dssc_stationary_from_q(double q1, double q2);

/// DSSC-B switch rate, grouped single-expression form.
double dssc_switch_rate(const RelayTopology& topology, const SwitchThreshold& threshold);

/// Same rate as occupancy-weighted sum of the per-relay crossing rates;
/// independent code path for cross-checking.
double dssc_switch_rate_composed(const RelayTopology& topology, const SwitchThreshold& threshold);

/// Mean activation time of relay `relay_index` (1-based) under DSSC-B:
/// 2 rho_i / switch rate. Returns +infinity when the switch rate is zero.
double dssc_activation_time(const RelayTopology& topology, int relay_index,
                            const SwitchThreshold& threshold);

/// Threshold maximizing the DSSC-B switch rate over [t_lo, t_hi], located by
/// a coarse grid followed by golden-section refinement to relative argument
/// tolerance 1e-6. The rate vanishes at both ends, so the maximum is interior.
SwitchThreshold worst_case_threshold(const RelayTopology& topology, double t_lo, double t_hi);

/// Independent numeric routes used to verify the closed forms above.
namespace oracles {

/// Integral of the product of the two min-equivalent densities over [0, inf).
double metric_gap_pdf_at_zero_quadrature(const LinkParams& sr1, const LinkParams& rd1,
                                         const LinkParams& sr2, const LinkParams& rd2);

/// Same integral taken directly over the min-equivalent gains.
double metric_gap_pdf_at_zero_quadrature(const MinEquivalentParams& p1,
                                         const MinEquivalentParams& p2);

/// Integral of x * metric_gap_slope_pdf(x) over [0, inf).
double mean_positive_gap_slope_quadrature(const RelayTopology& topology);

/// Explicit 6x6 transition matrix of the DSSC-B switching chain.
std::array<std::array<double, 6>, 6> dssc_transition_matrix(double q1, double q2);

/// Stationary vector by power iteration of the explicit transition matrix.
DsscStationary dssc_stationary_power_iteration(double q1, double q2);

} // namespace oracles
} // namespace closedform
} // namespace selrelay
