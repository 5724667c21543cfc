#pragma once

#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "subideal/complex_core.hpp"
#include "subideal/design.hpp"
#include "subideal/filtering.hpp"
#include "subideal/quadrature.hpp"
#include "subideal/spectral.hpp"
#include "subideal/types.hpp"

namespace subideal {

struct SmoothingResult {
    bool finite;
    double value;  // converged value when finite, last partial integral otherwise
};

namespace detail {

// sup of f over [0, Omega], refined by doubling the grid density until the
// value moves by less than 1e-3 relative.
template <class F>
double sup_on_grid(const F& f, double omega_max, int density) {
    if (omega_max == 0.0) return f(0.0);
    double prev = -1.0;
    int m = std::max(density, 2);
    for (int round = 0; round < 12; ++round) {
        double s = 0.0;
        for (int i = 0; i <= m; ++i)
            s = std::max(s, f(omega_max * static_cast<double>(i) / static_cast<double>(m)));
        if (prev >= 0.0 && std::abs(s - prev) <= 1e-3 * std::max(s, 1e-300)) return s;
        prev = s;
        m *= 2;
    }
    return prev;
}

inline void require_converged(const QuadResult& r, const char* who) {
    if (!r.converged)
        throw std::runtime_error(std::string(who) + ": quadrature did not converge");
}

}  // namespace detail

// --- Condition (a1): identity approximation --------------------------------

// sup_{|omega| <= Omega} |H(i*omega) - 1| (even in omega, computed on [0, Omega]).
inline double check_identity_approx(const FilterParams& p, double Omega, int grid_density = 512) {
    if (!(Omega >= 0.0))
        throw std::invalid_argument("check_identity_approx: Omega must be >= 0");
    return detail::sup_on_grid(
        [&](double w) { return std::abs(transfer_eval(p, Complex(0.0, w)) - 1.0); }, Omega,
        grid_density);
}

// --- Condition (a2): output convergence ------------------------------------

inline double l2_norm(const SampledSignal& x) {
    return std::sqrt(x.dt * x.values.square().sum());
}

inline double l2_distance(const SampledSignal& a, const SampledSignal& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("l2_distance: length mismatch");
    return std::sqrt(a.dt * (a.values - b.values).square().sum());
}

// ||y_k - x||_L2 for each filter of the sequence applied to x.
inline std::vector<double> check_output_convergence(const std::vector<FilterParams>& seq,
                                                    const SampledSignal& x) {
    std::vector<double> errs;
    errs.reserve(seq.size());
    for (const FilterParams& p : seq) {
        const PreparedKernel kern = design_kernel(p, x.dt, x.size());
        const SampledSignal y = convolve_fft(kern.kernel, x);
        errs.push_back(l2_distance(y, x));
    }
    return errs;
}

// --- Condition (b): smoothing integral -------------------------------------

// 2 * int_0^inf exp(omega^rho) |H(i*omega)|^n domega. Finite when rho < q
// (certified exponential tail bound past the switch point); otherwise the
// partial integrals over doubling truncations are watched for growth.
inline SmoothingResult smoothing_integral(const FilterParams& p, double rho, int n,
                                          const QuadratureConfig& qc = {}) {
    if (!(rho > 0.0))
        throw std::invalid_argument("smoothing_integral: rho must be positive");
    if (n < 1)
        throw std::invalid_argument("smoothing_integral: n must be >= 1");
    qc.validate();

    const double a = static_cast<double>(n) * p.alpha * decay_margin(p.q);
    const auto integrand = [&](double w) {
        const double e = std::pow(w, rho) + static_cast<double>(n) * log_gain(p, w);
        if (e < kLogTiny) return 0.0;
        if (e > 700.0) return std::numeric_limits<double>::infinity();
        return std::exp(e);
    };

    if (rho < p.q) {
        // omega^rho <= (a/2) omega^q holds past W_star, leaving a pure
        // exp(-(a/2) omega^q) envelope for the tail bound.
        double W = std::max(1.0, std::pow(2.0 / a, 1.0 / (p.q - rho)));
        while (exp_power_tail_bound(0.5 * a, p.q, W) > 0.1 * qc.abs_tol) {
            W *= 2.0;
            if (W > 1e15)
                throw std::runtime_error("smoothing_integral: tail bound did not close");
        }
        const QuadResult main = integrate_pts(integrand, decade_breakpoints(0.0, W), qc);
        detail::require_converged(main, "smoothing_integral");
        return {true, 2.0 * main.value};
    }

    // no certificate: watch doubling truncations
    double T = 10.0, partial = 0.0;
    QuadResult head = integrate_pts(integrand, decade_breakpoints(0.0, T), qc);
    partial = 2.0 * head.value;
    bool head_ok = head.converged;
    int quiet = 0;
    for (int step = 0; step < 48; ++step) {
        const QuadResult seg = integrate(integrand, T, 2.0 * T, qc);
        head_ok = head_ok && seg.converged;
        const double inc = 2.0 * seg.value;
        if (!std::isfinite(inc) || !std::isfinite(partial + inc) || partial + inc > 1e50)
            return {false, partial + inc};
        partial += inc;
        T *= 2.0;
        quiet = (inc <= std::max(qc.abs_tol, qc.rel_tol * partial)) ? quiet + 1 : 0;
        if (quiet >= 2) {
            if (!head_ok)
                throw std::runtime_error("smoothing_integral: quadrature did not converge");
            return {true, partial};
        }
    }
    return {false, partial};
}

// --- Paley-Wiener integral -------------------------------------------------

namespace detail {

// int_W^inf omega^(q-2) expansion of the one-sided integrand, three terms.
inline double pw_tail(double beta, double q, double W) {
    const double c = std::cos(q * M_PI / 2.0);
    const double s = std::sin(q * M_PI / 2.0);
    return c * std::pow(W, q - 1.0) / (1.0 - q) + q * beta * s * std::pow(W, q - 2.0) / (2.0 - q) -
           c * std::pow(W, q - 3.0) / (3.0 - q);
}

// Full-line integral of |log|H|| / (1+omega^2) at alpha = 1.
inline double pw_core(double beta, double q, const QuadratureConfig& qc) {
    const double W = 1e4;
    const auto f = [&](double w) { return -log_gain_t(1.0, beta, q, w) / (1.0 + w * w); };
    const QuadResult main = integrate_pts(f, decade_breakpoints(0.0, W), qc);
    require_converged(main, "paley_wiener_integral");
    return 2.0 * (main.value + pw_tail(beta, q, W));
}

}  // namespace detail

// int |log|H(i*omega)|| / (1+omega^2) domega over the whole line; always
// finite for this family and exactly linear in alpha.
inline double paley_wiener_integral(const FilterParams& p, const QuadratureConfig& qc = {}) {
    qc.validate();
    return p.alpha * detail::pw_core(p.beta, p.q, qc);
}

// --- Condition (c): sub-ideal divergence profile ---------------------------

// Partial integrals 2 * int_0^T |log|H||^delta / (1+omega^2) domega for each
// truncation T. With delta*q = 1 the per-decade increments approach a
// constant; with delta*q > 1 successive-decade ratios approach 10^(delta*q-1).
inline std::vector<double> subideal_divergence_profile(const FilterParams& p, double delta,
                                                       const std::vector<double>& truncations,
                                                       const QuadratureConfig& qc = {}) {
    if (!(delta >= 1.0))
        throw std::range_error("subideal_divergence_profile: delta must be >= 1");
    if (truncations.empty())
        throw std::invalid_argument("subideal_divergence_profile: no truncations given");
    for (std::size_t i = 0; i < truncations.size(); ++i) {
        if (!(truncations[i] > 0.0))
            throw std::invalid_argument("subideal_divergence_profile: truncations must be positive");
        if (i > 0 && !(truncations[i] > truncations[i - 1]))
            throw std::invalid_argument("subideal_divergence_profile: truncations must increase");
    }
    qc.validate();

    const auto f = [&](double w) {
        return std::pow(-log_gain(p, w), delta) / (1.0 + w * w);
    };
    std::vector<double> partials;
    partials.reserve(truncations.size());
    double acc = 0.0, lo = 0.0;
    for (double T : truncations) {
        const QuadResult seg = integrate_pts(f, decade_breakpoints(lo, T), qc);
        detail::require_converged(seg, "subideal_divergence_profile");
        acc += 2.0 * seg.value;
        partials.push_back(acc);
        lo = T;
    }
    return partials;
}

// --- Condition (d): L2 gain distance ---------------------------------------

namespace detail {

template <class GainA, class GainB>
double l2_gain_distance_impl(const GainA& ga, const GainB& gb, double tail_decay_a, double q_a,
                             double mu_b, const QuadratureConfig& qc) {
    const auto f = [&](double w) {
        const double d = ga(w) - gb(w);
        return d * d;
    };
    double W = 10.0;
    while (2.0 * (exp_power_tail_bound(tail_decay_a, q_a, W) +
                  std::exp(std::max(-2.0 * mu_b * W, kLogTiny)) / (2.0 * mu_b)) >
           0.1 * qc.abs_tol) {
        W *= 2.0;
        if (W > 1e9)
            throw std::runtime_error("l2_gain_distance: tail bound did not close");
    }
    const QuadResult main = integrate_pts(f, decade_breakpoints(0.0, W), qc);
    require_converged(main, "l2_gain_distance");
    return std::sqrt(2.0 * main.value);
}

}  // namespace detail

// || |H(i.)| - exp(-mu|.|) ||_L2 over the whole line.
inline double l2_gain_distance(const FilterParams& p, const ReferenceParams& r,
                               const QuadratureConfig& qc = {}) {
    qc.validate();
    return detail::l2_gain_distance_impl([&](double w) { return gain(p, w); },
                                         [&](double w) { return reference_gain(r, w); },
                                         2.0 * p.alpha * decay_margin(p.q), p.q, r.mu, qc);
}

// Distance between two reference gains; zero when the parameters coincide.
inline double l2_gain_distance(const ReferenceParams& a, const ReferenceParams& b,
                               const QuadratureConfig& qc = {}) {
    qc.validate();
    const auto expa = [&](double w) { return reference_gain(a, w); };
    const auto expb = [&](double w) { return reference_gain(b, w); };
    const auto f = [&](double w) {
        const double d = expa(w) - expb(w);
        return d * d;
    };
    double W = 10.0;
    while (std::exp(std::max(-2.0 * std::min(a.mu, b.mu) * W, kLogTiny)) / std::min(a.mu, b.mu) >
           0.1 * qc.abs_tol) {
        W *= 2.0;
        if (W > 1e9)
            throw std::runtime_error("l2_gain_distance: tail bound did not close");
    }
    const QuadResult main = integrate_pts(f, decade_breakpoints(0.0, W), qc);
    detail::require_converged(main, "l2_gain_distance");
    return std::sqrt(2.0 * main.value);
}

// ||exp(-mu|.|)||_L2 = sqrt(1/mu), used to normalize reported distances.
inline double reference_l2_norm(const ReferenceParams& r) { return std::sqrt(1.0 / r.mu); }

// --- Pointwise comparisons -------------------------------------------------

// |H(i*omega)| / exp(-mu*|omega|), evaluated in log space.
inline double gain_ratio(const FilterParams& p, const ReferenceParams& r, double omega) {
    return std::exp(log_gain(p, omega) + r.mu * std::abs(omega));
}

// Energy fraction of h at strictly negative times.
inline double causality_defect(const SampledSignal& h) {
    double neg = 0.0, total = 0.0;
    for (Index j = 0; j < h.size(); ++j) {
        const double e = h.values[j] * h.values[j];
        total += e;
        if (h.time(j) < 0.0) neg += e;
    }
    if (total == 0.0)
        throw std::domain_error("causality_defect: signal has zero energy");
    return neg / total;
}

// sup_{|omega| <= Omega} |H(i*omega) - exp(-i*alpha*omega)|: distance to a
// pure delay by alpha; shrinks as q -> 1, beta -> 0 at fixed alpha.
inline double delay_proximity(const FilterParams& p, double Omega) {
    if (!(Omega >= 0.0))
        throw std::invalid_argument("delay_proximity: Omega must be >= 0");
    return detail::sup_on_grid(
        [&](double w) {
            return std::abs(transfer_eval(p, Complex(0.0, w)) - std::polar(1.0, -p.alpha * w));
        },
        Omega, 512);
}

// --- Test signals for the condition (a2) battery ---------------------------

inline SampledSignal make_gaussian_pulse(double dt, Index n) {
    const double center = 0.5 * static_cast<double>(n) * dt;
    ArrayXd v(n);
    for (Index j = 0; j < n; ++j) {
        const double t = static_cast<double>(j) * dt - center;
        v[j] = std::exp(-0.5 * t * t);
    }
    return SampledSignal(0.0, dt, std::move(v));
}

inline SampledSignal make_step(double dt, Index n) {
    ArrayXd v = ArrayXd::Zero(n);
    for (Index j = n / 4; j < n; ++j) v[j] = 1.0;
    return SampledSignal(0.0, dt, std::move(v));
}

// White Gaussian noise band-limited by a narrow Gaussian window in time.
inline SampledSignal make_bandlimited_noise(double dt, Index n, unsigned long seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    ArrayXd white(n);
    for (Index j = 0; j < n; ++j) white[j] = dist(rng);
    const int half = 12;
    const double sigma = 4.0;
    ArrayXd v = ArrayXd::Zero(n);
    for (Index j = 0; j < n; ++j) {
        double acc = 0.0, wsum = 0.0;
        for (int m = -half; m <= half; ++m) {
            const Index i = j + m;
            if (i < 0 || i >= n) continue;
            const double w = std::exp(-0.5 * (m / sigma) * (m / sigma));
            acc += w * white[i];
            wsum += w;
        }
        v[j] = acc / wsum;
    }
    return SampledSignal(0.0, dt, std::move(v));
}

// --- Report ----------------------------------------------------------------

struct CheckRecord {
    std::string name;
    std::vector<std::pair<std::string, double>> params;
    std::vector<double> values;
    std::string threshold;
    bool pass = false;
};

struct VerificationReport {
    std::string artifact_version = kArtifactVersion;
    std::vector<std::pair<std::string, double>> config;
    std::vector<CheckRecord> checks;

    bool all_pass() const {
        for (const CheckRecord& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

struct BatteryConfig {
    double mu = 0.1;
    double ratio_omega = 100.0;
    double tail_eps = 1e-9;
    unsigned long seed = 12345;
    double pw_max = INFINITY;  // optional hard cap on the Paley-Wiener value
    QuadratureConfig quadrature{};

    // condition (a1)/(a2) identity schedule
    std::vector<double> alphas{0.4, 0.2, 0.1, 0.05};
    double seq_beta = 0.1;
    double seq_q = 0.5;
    double a1_omega = 20.0;
    double signal_dt = 0.01;
    Index signal_n = 4096;

    // matched schedule for conditions (d) and the figure parameters
    std::vector<double> matched_qs{0.9, 0.99, 0.999};
};

namespace detail {

inline bool strictly_decreasing(const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
        if (!(v[i] < v[i - 1])) return false;
    return true;
}

}  // namespace detail

inline VerificationReport run_battery(const BatteryConfig& cfg = {}) {
    cfg.quadrature.validate();
    VerificationReport rep;
    rep.config = {{"mu", cfg.mu},
                  {"ratio_omega", cfg.ratio_omega},
                  {"tail_eps", cfg.tail_eps},
                  {"seed", static_cast<double>(cfg.seed)},
                  {"pw_max", cfg.pw_max},
                  {"abs_tol", cfg.quadrature.abs_tol},
                  {"rel_tol", cfg.quadrature.rel_tol},
                  {"signal_dt", cfg.signal_dt},
                  {"signal_n", static_cast<double>(cfg.signal_n)}};

    const std::vector<FilterParams> idseq =
        make_identity_sequence(cfg.seq_q, cfg.seq_beta, cfg.alphas);
    const std::vector<FilterParams> mseq = make_matched_sequence(cfg.mu, cfg.matched_qs);
    const FilterParams fig_imp(matched_alpha(1.0, 0.9), 0.1, 0.9);

    {  // (a1) identity approximation along the decreasing-alpha schedule
        CheckRecord c;
        c.name = "identity_approx";
        c.params = {{"beta", cfg.seq_beta}, {"q", cfg.seq_q}, {"omega", cfg.a1_omega}};
        for (const FilterParams& p : idseq)
            c.values.push_back(check_identity_approx(p, cfg.a1_omega));
        c.threshold = "strictly decreasing, final < 0.25";
        c.pass = detail::strictly_decreasing(c.values) && c.values.back() < 0.25;
        rep.checks.push_back(std::move(c));
    }

    {  // (a2) output convergence on the fixed signal battery
        CheckRecord c;
        c.name = "output_convergence";
        c.params = {{"beta", cfg.seq_beta},
                    {"q", cfg.seq_q},
                    {"dt", cfg.signal_dt},
                    {"n", static_cast<double>(cfg.signal_n)},
                    {"seed", static_cast<double>(cfg.seed)}};
        const SampledSignal gauss = make_gaussian_pulse(cfg.signal_dt, cfg.signal_n);
        c.values = check_output_convergence(idseq, gauss);
        c.threshold = "strictly decreasing, final < first/3";
        c.pass = detail::strictly_decreasing(c.values) &&
                 c.values.back() < c.values.front() / 3.0;
        // recorded for reference: final-alpha errors on the step and noise signals
        const std::vector<FilterParams> last{idseq.back()};
        c.values.push_back(
            check_output_convergence(last, make_step(cfg.signal_dt, cfg.signal_n)).front());
        c.values.push_back(
            check_output_convergence(
                last, make_bandlimited_noise(cfg.signal_dt, cfg.signal_n, cfg.seed))
                .front());
        rep.checks.push_back(std::move(c));
    }

    {  // (b) smoothing integral: two finite regimes, one divergent
        CheckRecord c;
        c.name = "smoothing";
        c.params = {{"rho_a", 0.25}, {"rho_b", 0.8}, {"rho_div", 0.6}};
        const SmoothingResult sa = smoothing_integral(FilterParams(1, 1, 0.5), 0.25, 1, cfg.quadrature);
        const SmoothingResult sb = smoothing_integral(FilterParams(3, 1, 0.9), 0.8, 1, cfg.quadrature);
        const SmoothingResult sd = smoothing_integral(FilterParams(1, 1, 0.5), 0.6, 1, cfg.quadrature);
        c.values = {sa.value, sb.value, sd.value};
        c.threshold = "finite for rho < q, divergent for rho > q";
        c.pass = sa.finite && sb.finite && !sd.finite;
        rep.checks.push_back(std::move(c));
    }

    {  // Paley-Wiener integral: finite, exactly linear in alpha
        CheckRecord c;
        c.name = "paley_wiener";
        c.params = {{"alpha", 1.0}, {"beta", 1.0}, {"q", 0.5}, {"pw_max", cfg.pw_max}};
        const double v1 = paley_wiener_integral(FilterParams(1, 1, 0.5), cfg.quadrature);
        const double v2 = paley_wiener_integral(FilterParams(2, 1, 0.5), cfg.quadrature);
        c.values = {v1, v2};
        c.threshold = "alpha-doubling exact to 1e-10 relative, value <= pw_max";
        c.pass = std::abs(v2 - 2.0 * v1) <= 1e-10 * std::abs(v2) && v1 <= cfg.pw_max;
        rep.checks.push_back(std::move(c));
    }

    {  // (c) divergence signatures at delta*q = 1 and delta*q = 1.8
        CheckRecord c;
        c.name = "subideal_divergence";
        c.params = {{"delta", 2.0}};
        const std::vector<double> Ts{1e3, 1e4, 1e5, 1e6};
        const std::vector<double> plog =
            subideal_divergence_profile(FilterParams(1, 1, 0.5), 2.0, Ts, cfg.quadrature);
        const std::vector<double> ppow = subideal_divergence_profile(
            FilterParams(matched_alpha(cfg.mu, 0.9), 0.1, 0.9), 2.0, Ts, cfg.quadrature);
        bool ok = true;
        double inc_min = INFINITY, inc_max = 0.0;
        for (std::size_t i = 1; i < plog.size(); ++i) {
            const double inc = plog[i] - plog[i - 1];
            c.values.push_back(inc);
            inc_min = std::min(inc_min, inc);
            inc_max = std::max(inc_max, inc);
        }
        ok = ok && inc_max <= 1.1 * inc_min;
        const double target = std::pow(10.0, 0.8);
        for (std::size_t i = 1; i < ppow.size(); ++i) {
            const double ratio = ppow[i] / ppow[i - 1];
            c.values.push_back(ratio);
            ok = ok && std::abs(ratio - target) <= 0.1 * target;
        }
        c.threshold = "increments within 10% (delta*q=1); ratios within 10% of 10^0.8";
        c.pass = ok;
        rep.checks.push_back(std::move(c));
    }

    {  // (d) L2 gain distance along the matched schedule
        CheckRecord c;
        c.name = "condition_d";
        c.params = {{"mu", cfg.mu}};
        const ReferenceParams ref(cfg.mu);
        for (const FilterParams& p : mseq)
            c.values.push_back(l2_gain_distance(p, ref, cfg.quadrature));
        const double norm = reference_l2_norm(ref);
        c.values.push_back(norm);
        c.threshold = "final distance < 0.2 * reference norm";
        c.pass = c.values[mseq.size() - 1] < 0.2 * norm;
        rep.checks.push_back(std::move(c));
    }

    {  // causality of the computed impulse response
        CheckRecord c;
        c.name = "causality_defect";
        c.params = {{"alpha", fig_imp.alpha},
                    {"beta", fig_imp.beta},
                    {"q", fig_imp.q},
                    {"tail_eps", cfg.tail_eps}};
        const FrequencyGrid g = auto_grid(fig_imp, cfg.tail_eps);
        const double d0 = causality_defect(impulse_response(fig_imp, g));
        const double d1 = causality_defect(impulse_response(fig_imp, FrequencyGrid(g.omega_max, 2 * g.n)));
        c.values = {d0, d1};
        c.threshold = "defect <= 1e-4, decreasing under refinement";
        c.pass = d0 <= 1e-4 && d1 < d0;
        rep.checks.push_back(std::move(c));
    }

    {  // high-frequency gain ratios against the reference
        CheckRecord c;
        c.name = "gain_ratio";
        c.params = {{"mu", cfg.mu}, {"omega", cfg.ratio_omega}};
        const ReferenceParams ref(cfg.mu);
        const FilterParams p99(matched_alpha(cfg.mu, 0.99), 0.01, 0.99);
        const FilterParams p90(matched_alpha(cfg.mu, 0.9), 0.1, 0.9);
        const double r99 = gain_ratio(p99, ref, cfg.ratio_omega);
        const double r90 = gain_ratio(p90, ref, cfg.ratio_omega);
        c.values = {r99, r90};
        c.threshold = "1.477 +/- 0.01 and 38.64 +/- 0.2 at omega=100";
        c.pass = std::abs(r99 - 1.477) <= 0.01 && std::abs(r90 - 38.64) <= 0.2;
        rep.checks.push_back(std::move(c));
    }

    return rep;
}

inline nlohmann::json report_to_json(const VerificationReport& rep) {
    nlohmann::json j;
    j["artifact_version"] = rep.artifact_version;
    nlohmann::json cfg = nlohmann::json::object();
    for (const auto& [k, v] : rep.config) cfg[k] = v;
    j["config"] = cfg;
    nlohmann::json checks = nlohmann::json::array();
    for (const CheckRecord& c : rep.checks) {
        nlohmann::json jc;
        jc["name"] = c.name;
        nlohmann::json params = nlohmann::json::object();
        for (const auto& [k, v] : c.params) params[k] = v;
        jc["params"] = params;
        jc["values"] = c.values;
        jc["threshold"] = c.threshold;
        jc["verdict"] = c.pass ? "pass" : "fail";
        checks.push_back(jc);
    }
    j["checks"] = checks;
    return j;
}

}  // namespace subideal
