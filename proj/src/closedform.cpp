#include "selrelay/closedform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "selrelay/quadrature.hpp"

namespace selrelay::closedform {

namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrt2Pi = std::sqrt(2.0 * kPi);

void require_two_relays(const RelayTopology& t, const char* where) {
    if (t.size() != 2)
        throw unsupported_topology_error(std::string(where) + ": defined for 2 relays, got " +
                                         std::to_string(t.size()));
}

struct GapMixture {
    // weights (gain products) and slope variances (divided by pi^2) of the
    // four Gaussian components of the metric-difference slope density.
    std::array<double, 4> w;
    std::array<double, 4> beta;
    double d1, d2; // per-relay gain sums
};

GapMixture gap_mixture(const RelayTopology& t) {
    const auto& r1 = t.relays[0];
    const auto& r2 = t.relays[1];
    const double b_sr1 = r1.sr.omega * r1.sr.doppler_hz * r1.sr.doppler_hz;
    const double b_r1d = r1.rd.omega * r1.rd.doppler_hz * r1.rd.doppler_hz;
    const double b_sr2 = r2.sr.omega * r2.sr.doppler_hz * r2.sr.doppler_hz;
    const double b_r2d = r2.rd.omega * r2.rd.doppler_hz * r2.rd.doppler_hz;
    GapMixture m;
    m.w = {r1.sr.omega * r2.sr.omega, r1.rd.omega * r2.sr.omega,
           r2.rd.omega * r1.sr.omega, r1.rd.omega * r2.rd.omega};
    m.beta = {b_r1d + b_r2d, b_sr1 + b_r2d, b_sr2 + b_r1d, b_sr1 + b_sr2};
    m.d1 = r1.sr.omega + r1.rd.omega;
    m.d2 = r2.sr.omega + r2.rd.omega;
    return m;
}

double weighted_root_sum(const GapMixture& m) {
    double s = 0.0;
    for (int k = 0; k < 4; ++k) s += m.w[k] * std::sqrt(m.beta[k]);
    return s;
}

// Envelope-threshold slope sum of one relay: sqrt(T/(G*Osr))*Fsr + sqrt(T/(G*Ord))*Frd.
double crossing_slope_sum(const RelayTopology::RelayLinks& r, double t_over_gamma) {
    return std::sqrt(t_over_gamma / r.sr.omega) * r.sr.doppler_hz +
           std::sqrt(t_over_gamma / r.rd.omega) * r.rd.doppler_hz;
}

double log_expm1(double x) {
    return x > 36.0 ? x + std::log1p(-std::exp(-x)) : std::log(std::expm1(x));
}

double log_sum_exp(std::initializer_list<double> xs) {
    double m = -std::numeric_limits<double>::infinity();
    for (double x : xs) m = std::max(m, x);
    double s = 0.0;
    for (double x : xs) s += std::exp(x - m);
    return m + std::log(s);
}

DsscStationary stationary_limit_below_never() {
    // q1 = q2 = 0: no down-crossings ever; by symmetry of the construction
    // each relay is reported active half the time, all mass in the
    // above-threshold states.
    return DsscStationary{{0.0, 0.0, 0.5, 0.0, 0.0, 0.5}, 0.5, 0.5};
}

DsscStationary stationary_from_parts(double q1, double e1, double x1, double q2, double e2,
                                     double x2) {
    if (q1 == 0.0 && q2 == 0.0) return stationary_limit_below_never();
    if (e1 == 0.0 && e2 == 0.0) {
        // Both relays below threshold except for exponentially rare
        // excursions; only the two stay-below states retain mass, weighted
        // by how rarely each relay pokes above (pi2 ~ e^-x2, pi5 ~ e^-x1),
        // so the weaker relay keeps the channel.
        double p2;
        if (std::isinf(x1) && std::isinf(x2)) p2 = 0.5;
        else {
            const double d = x2 - x1; // ln pi5 - ln pi2
            p2 = d > 700.0 ? 0.0 : (d < -700.0 ? 1.0 : 1.0 / (1.0 + std::exp(d)));
        }
        return DsscStationary{{0.0, p2, 0.0, 0.0, 1.0 - p2, 0.0}, p2, 1.0 - p2};
    }
    // Unnormalized stationary weights of the six states; every factor is
    // nonnegative so there is no cancellation.
    const double n1 = q1 * e1 * q2 * e2;
    const double n2 = q1 * q1 * q1 * q2 * e2;
    const double n3 = e1 * (e1 + q1 * q1) * q2 * e2;
    const double n4 = n1;
    const double n5 = q2 * q2 * q2 * q1 * e1;
    const double n6 = e2 * (e2 + q2 * q2) * q1 * e1;
    const double sum = n1 + n2 + n3 + n4 + n5 + n6;
    DsscStationary st;
    st.pi = {n1 / sum, n2 / sum, n3 / sum, n4 / sum, n5 / sum, n6 / sum};
    st.rho1 = (n1 + n2 + n3) / sum;
    st.rho2 = (n4 + n5 + n6) / sum;
    return st;
}

} // namespace

MinEquivalentParams min_equiv_omega(const LinkParams& sr, const LinkParams& rd) {
    return MinEquivalentParams(sr.omega * rd.omega / (sr.omega + rd.omega));
}

double min_equiv_pdf(double x, const LinkParams& sr, const LinkParams& rd) {
    if (x < 0.0) throw domain_error("min_equiv_pdf: x must be >= 0");
    const double inv_omega = (sr.omega + rd.omega) / (sr.omega * rd.omega);
    return 2.0 * x * inv_omega * std::exp(-x * x * inv_omega);
}

double min_equiv_cdf(double x, const LinkParams& sr, const LinkParams& rd) {
    if (x < 0.0) throw domain_error("min_equiv_cdf: x must be >= 0");
    const double inv_omega = (sr.omega + rd.omega) / (sr.omega * rd.omega);
    return -std::expm1(-x * x * inv_omega);
}

double metric_gap_pdf_at_zero(const MinEquivalentParams& p1, const MinEquivalentParams& p2) {
    const double o1 = p1.omega, o2 = p2.omega;
    return std::sqrt(kPi) * std::sqrt(o1 * o2) / std::pow(o1 + o2, 1.5);
}

double metric_gap_slope_pdf(double x, const RelayTopology& topology) {
    require_two_relays(topology, "metric_gap_slope_pdf");
    const GapMixture m = gap_mixture(topology);
    double acc = 0.0;
    for (int k = 0; k < 4; ++k)
        acc += m.w[k] / std::sqrt(m.beta[k]) * std::exp(-x * x / (2.0 * kPi * kPi * m.beta[k]));
    return acc / (std::sqrt(2.0) * std::pow(kPi, 1.5) * m.d1 * m.d2);
}

double mean_positive_gap_slope(const RelayTopology& topology) {
    require_two_relays(topology, "mean_positive_gap_slope");
    const GapMixture m = gap_mixture(topology);
    return std::sqrt(kPi) * weighted_root_sum(m) / (std::sqrt(2.0) * m.d1 * m.d2);
}

double or_switch_rate(const RelayTopology& topology) {
    require_two_relays(topology, "or_switch_rate");
    const GapMixture m = gap_mixture(topology);
    const double o1 = min_equiv_omega(topology.relays[0].sr, topology.relays[0].rd).omega;
    const double o2 = min_equiv_omega(topology.relays[1].sr, topology.relays[1].rd).omega;
    return kPi * std::sqrt(2.0 * o1 * o2) * weighted_root_sum(m) /
           (std::pow(o1 + o2, 1.5) * m.d1 * m.d2);
}

double or_switch_rate_composed(const RelayTopology& topology) {
    require_two_relays(topology, "or_switch_rate_composed");
    const auto p1 = min_equiv_omega(topology.relays[0].sr, topology.relays[0].rd);
    const auto p2 = min_equiv_omega(topology.relays[1].sr, topology.relays[1].rd);
    return 2.0 * metric_gap_pdf_at_zero(p1, p2) * mean_positive_gap_slope(topology);
}

double or_switch_rate_iid2(double f_sr1_hz, double f_r1d_hz, double f_sr2_hz, double f_r2d_hz) {
    for (double f : {f_sr1_hz, f_r1d_hz, f_sr2_hz, f_r2d_hz})
        if (!(f > 0.0)) throw domain_error("or_switch_rate_iid2: Doppler frequencies must be > 0");
    const double s = std::sqrt(f_sr1_hz * f_sr1_hz + f_sr2_hz * f_sr2_hz) +
                     std::sqrt(f_sr1_hz * f_sr1_hz + f_r2d_hz * f_r2d_hz) +
                     std::sqrt(f_r1d_hz * f_r1d_hz + f_sr2_hz * f_sr2_hz) +
                     std::sqrt(f_r1d_hz * f_r1d_hz + f_r2d_hz * f_r2d_hz);
    return kPi * s / (4.0 * std::sqrt(2.0));
}

double or_switch_rate_iid(int num_relays, double doppler_hz) {
    if (num_relays < 2) throw domain_error("or_switch_rate_iid: need at least 2 relays");
    if (num_relays > 30)
        throw domain_error("or_switch_rate_iid: alternating binomial sum is ill-conditioned "
                           "beyond 30 relays");
    if (!(doppler_hz > 0.0)) throw domain_error("or_switch_rate_iid: doppler_hz must be > 0");
    const int l_minus_2 = num_relays - 2;
    double sum = 0.0;
    double binom = 1.0; // C(L-2, l), exact in double for L <= 30
    for (int l = 0; l <= l_minus_2; ++l) {
        const double term = binom * std::pow(1.0 / (l + 2), 1.5);
        sum += (l % 2 == 0) ? term : -term;
        binom = binom * (l_minus_2 - l) / (l + 1);
    }
    return std::sqrt(2.0) * num_relays * (num_relays - 1) * kPi * doppler_hz * sum;
}

std::pair<double, double> or_activation_times(const RelayTopology& topology) {
    require_two_relays(topology, "or_activation_times");
    const double o1 = min_equiv_omega(topology.relays[0].sr, topology.relays[0].rd).omega;
    const double o2 = min_equiv_omega(topology.relays[1].sr, topology.relays[1].rd).omega;
    const double rate = or_switch_rate(topology);
    return {2.0 * o1 / (rate * (o1 + o2)), 2.0 * o2 / (rate * (o1 + o2))};
}

double or_activation_time_iid(int num_relays, double doppler_hz) {
    return 1.0 / or_switch_rate_iid(num_relays, doppler_hz);
}

std::pair<double, double> or_steady_state(const MinEquivalentParams& p1,
                                          const MinEquivalentParams& p2) {
    const double sum = p1.omega + p2.omega;
    return {p1.omega / sum, p2.omega / sum};
}

double dssc_crossing_rate(const RelayTopology& topology, int relay_index,
                          const SwitchThreshold& threshold) {
    if (relay_index < 1 || relay_index > static_cast<int>(topology.size()))
        throw domain_error("dssc_crossing_rate: relay_index out of range");
    const auto& r = topology.relays[static_cast<std::size_t>(relay_index - 1)];
    const double t_over_gamma = threshold.t / topology.gamma;
    if (t_over_gamma == 0.0) return 0.0;
    const double omega_i = min_equiv_omega(r.sr, r.rd).omega;
    return kSqrt2Pi * crossing_slope_sum(r, t_over_gamma) * std::exp(-t_over_gamma / omega_i);
}

DsscStationary dssc_stationary_from_q(double q1, double q2) {
    if (q1 < 0.0 || q1 > 1.0 || q2 < 0.0 || q2 > 1.0)
        throw domain_error("dssc_stationary_from_q: q must lie in [0,1]");
    const double e1 = 1.0 - q1, e2 = 1.0 - q2;
    return stationary_from_parts(q1, e1, -std::log(e1), q2, e2, -std::log(e2));
}

DsscStationary dssc_stationary(const RelayTopology& topology, const SwitchThreshold& threshold) {
    require_two_relays(topology, "dssc_stationary");
    const double o1 = min_equiv_omega(topology.relays[0].sr, topology.relays[0].rd).omega;
    const double o2 = min_equiv_omega(topology.relays[1].sr, topology.relays[1].rd).omega;
    const double x1 = threshold.t / (topology.gamma * o1);
    const double x2 = threshold.t / (topology.gamma * o2);
    return stationary_from_parts(-std::expm1(-x1), std::exp(-x1), x1, -std::expm1(-x2),
                                 std::exp(-x2), x2);
}

double dssc_switch_rate(const RelayTopology& topology, const SwitchThreshold& threshold) {
    require_two_relays(topology, "dssc_switch_rate");
    if (threshold.t == 0.0) return 0.0;
    const double gamma = topology.gamma;
    const double t_over_gamma = threshold.t / gamma;
    const double o1 = min_equiv_omega(topology.relays[0].sr, topology.relays[0].rd).omega;
    const double o2 = min_equiv_omega(topology.relays[1].sr, topology.relays[1].rd).omega;
    const double x1 = t_over_gamma / o1, x2 = t_over_gamma / o2;
    const double s1 = crossing_slope_sum(topology.relays[0], t_over_gamma);
    const double s2 = crossing_slope_sum(topology.relays[1], t_over_gamma);

    // The denominator carries exponents up to 2*max(x)+min(x); stay on the
    // direct path only while that is safely inside double range.
    if (x1 + x2 + std::max(x1, x2) < 600.0) {
        const double u = std::expm1(x1), v = std::expm1(x2);
        const double den = u + v + u * v * (2.0 + u + v);
        return kSqrt2Pi *
               (std::exp(-x1) * v * s1 + std::exp(-x2) * u * s2 + u * v * (s1 + s2)) / den;
    }
    // Exponents this large overflow the direct expression; evaluate the same
    // grouped form in log space and let the final exp underflow to zero.
    const double lu = log_expm1(x1), lv = log_expm1(x2);
    const double log_num = log_sum_exp({-x1 + lv + std::log(s1), -x2 + lu + std::log(s2),
                                        lu + lv + std::log(s1 + s2)});
    const double log_den = log_sum_exp(
        {lu, lv, std::log(2.0) + lu + lv, 2.0 * lu + lv, lu + 2.0 * lv});
    return std::exp(std::log(kSqrt2Pi) + log_num - log_den);
}

double dssc_switch_rate_composed(const RelayTopology& topology, const SwitchThreshold& threshold) {
    require_two_relays(topology, "dssc_switch_rate_composed");
    if (threshold.t == 0.0) return 0.0;
    const DsscStationary st = dssc_stationary(topology, threshold);
    return st.rho1 * dssc_crossing_rate(topology, 1, threshold) +
           st.rho2 * dssc_crossing_rate(topology, 2, threshold);
}

double dssc_activation_time(const RelayTopology& topology, int relay_index,
                            const SwitchThreshold& threshold) {
    require_two_relays(topology, "dssc_activation_time");
    if (relay_index < 1 || relay_index > 2)
        throw domain_error("dssc_activation_time: relay_index out of range");
    const double rate = dssc_switch_rate_composed(topology, threshold);
    const DsscStationary st = dssc_stationary(topology, threshold);
    const double rho = relay_index == 1 ? st.rho1 : st.rho2;
    if (rate == 0.0) return std::numeric_limits<double>::infinity();
    return 2.0 * rho / rate;
}

SwitchThreshold worst_case_threshold(const RelayTopology& topology, double t_lo, double t_hi) {
    require_two_relays(topology, "worst_case_threshold");
    if (!(t_lo > 0.0) || !(t_hi > t_lo))
        throw domain_error("worst_case_threshold: need 0 < t_lo < t_hi");

    const auto rate = [&](double t) { return dssc_switch_rate(topology, SwitchThreshold(t)); };

    // Coarse log-spaced scan to bracket the peak.
    constexpr int kGrid = 256;
    const double log_lo = std::log(t_lo), log_hi = std::log(t_hi);
    int best = 0;
    double best_val = -1.0;
    std::array<double, kGrid> ts;
    for (int i = 0; i < kGrid; ++i) {
        ts[i] = std::exp(log_lo + (log_hi - log_lo) * i / (kGrid - 1));
        const double v = rate(ts[i]);
        if (v > best_val) {
            best_val = v;
            best = i;
        }
    }
    double a = ts[std::max(0, best - 1)];
    double b = ts[std::min(kGrid - 1, best + 1)];

    // Golden-section refinement.
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = rate(c), fd = rate(d);
    while (b - a > 1e-9 * (std::abs(a) + std::abs(b))) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = rate(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = rate(d);
        }
    }
    return SwitchThreshold(0.5 * (a + b));
}

namespace oracles {

double metric_gap_pdf_at_zero_quadrature(const MinEquivalentParams& p1,
                                         const MinEquivalentParams& p2) {
    const double o1 = p1.omega, o2 = p2.omega;
    const auto integrand = [o1, o2](double x) {
        return (2.0 * x / o1) * std::exp(-x * x / o1) * (2.0 * x / o2) * std::exp(-x * x / o2);
    };
    const double sigma = std::sqrt(o1 * o2 / (o1 + o2));
    return integrate_adaptive(integrand, 0.0, 12.0 * sigma, 1e-13);
}

double metric_gap_pdf_at_zero_quadrature(const LinkParams& sr1, const LinkParams& rd1,
                                         const LinkParams& sr2, const LinkParams& rd2) {
    const auto integrand = [&](double x) {
        return min_equiv_pdf(x, sr1, rd1) * min_equiv_pdf(x, sr2, rd2);
    };
    const double o1 = min_equiv_omega(sr1, rd1).omega;
    const double o2 = min_equiv_omega(sr2, rd2).omega;
    const double sigma = std::sqrt(o1 * o2 / (o1 + o2));
    return integrate_adaptive(integrand, 0.0, 12.0 * sigma, 1e-13);
}

double mean_positive_gap_slope_quadrature(const RelayTopology& topology) {
    require_two_relays(topology, "mean_positive_gap_slope_quadrature");
    const auto integrand = [&](double x) { return x * metric_gap_slope_pdf(x, topology); };
    double beta_max = 0.0;
    for (const auto& r : topology.relays)
        beta_max = std::max({beta_max, r.sr.omega * r.sr.doppler_hz * r.sr.doppler_hz,
                             r.rd.omega * r.rd.doppler_hz * r.rd.doppler_hz});
    const double sigma = kPi * std::sqrt(2.0 * beta_max);
    // Integrand scale grows with sigma; keep the tolerance proportional so
    // the relative error stays pinned.
    return integrate_adaptive(integrand, 0.0, 14.0 * sigma, 1e-13 * std::max(1.0, sigma));
}

std::array<std::array<double, 6>, 6> dssc_transition_matrix(double q1, double q2) {
    // States: 1 active relay 1, threshold just down-crossed (switch fires);
    //         2 active relay 1, below threshold with no down-cross;
    //         3 active relay 1, above threshold;
    //         4..6 the same with relay 2 active.
    // After a switch the newly activated relay is classified from its own
    // current and previous metric samples.
    std::array<std::array<double, 6>, 6> p{};
    p[0][3] = (1.0 - q2) * q2;
    p[0][4] = q2 * q2;
    p[0][5] = 1.0 - q2;
    p[1][1] = q1;
    p[1][2] = 1.0 - q1;
    p[2][0] = q1;
    p[2][2] = 1.0 - q1;
    p[3][0] = (1.0 - q1) * q1;
    p[3][1] = q1 * q1;
    p[3][2] = 1.0 - q1;
    p[4][4] = q2;
    p[4][5] = 1.0 - q2;
    p[5][3] = q2;
    p[5][5] = 1.0 - q2;
    return p;
}

DsscStationary dssc_stationary_power_iteration(double q1, double q2) {
    const auto p = dssc_transition_matrix(q1, q2);
    std::array<double, 6> v;
    v.fill(1.0 / 6.0);
    for (int iter = 0; iter < 2000000; ++iter) {
        std::array<double, 6> next{};
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j) next[j] += v[i] * p[i][j];
        double diff = 0.0;
        for (int j = 0; j < 6; ++j) diff = std::max(diff, std::abs(next[j] - v[j]));
        v = next;
        if (diff < 1e-16) break;
    }
    DsscStationary st;
    st.pi = v;
    st.rho1 = v[0] + v[1] + v[2];
    st.rho2 = v[3] + v[4] + v[5];
    return st;
}

} // namespace oracles
} // namespace selrelay::closedform
