#pragma once

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "subideal/csv.hpp"
#include "subideal/design.hpp"
#include "subideal/filtering.hpp"
#include "subideal/spectral.hpp"
#include "subideal/types.hpp"
#include "subideal/verify.hpp"

namespace subideal::cli {

// Fully resolved run parameters; every command embeds the fields it used in
// its output metadata so equal configs produce byte-identical files.
struct RunConfig {
    double alpha = NAN;
    bool alpha_from_matched = false;
    double beta = NAN;
    double q = NAN;
    double mu = 0.1;
    bool mu_set = false;

    double omega_max = NAN;
    long samples = 0;  // 0 = defaulted per command
    double tail_eps = 1e-9;

    double abs_tol = 1e-12;
    double rel_tol = 1e-10;

    std::string input;       // apply: signal CSV path, "-" = stdin
    std::string out;         // output path ("-" = stdout); figures: directory
    std::string format;  // empty = per-command default (csv; verify: json)
    std::string mode = "fft";  // apply: direct | fft | stream
    unsigned long seed = 12345;
    bool with_reference = false;

    std::string check;  // verify: optional single-check selector
    double check_omega = 100.0;
    double pw_max = INFINITY;
};

namespace detail {

inline double resolved_alpha(const RunConfig& cfg) {
    if (cfg.alpha_from_matched) {
        if (std::isnan(cfg.q))
            throw std::invalid_argument("--alpha from-matched requires --q");
        return matched_alpha(cfg.mu, cfg.q);
    }
    if (std::isnan(cfg.alpha))
        throw std::invalid_argument("missing --alpha");
    return cfg.alpha;
}

inline FilterParams make_params(const RunConfig& cfg) {
    if (std::isnan(cfg.beta))
        throw std::invalid_argument("missing --beta");
    if (std::isnan(cfg.q))
        throw std::invalid_argument("missing --q");
    return FilterParams(resolved_alpha(cfg), cfg.beta, cfg.q);
}

// Explicit flags override the tail-driven automatic grid piecewise.
inline FrequencyGrid resolve_grid(const FilterParams& p, const RunConfig& cfg) {
    const bool have_omega = !std::isnan(cfg.omega_max);
    const bool have_n = cfg.samples > 0;
    if (have_omega && have_n)
        return FrequencyGrid(cfg.omega_max, static_cast<Index>(cfg.samples));
    if (have_omega) {
        const double dt = M_PI / cfg.omega_max;
        const Index n = next_pow2(std::max<Index>(
            8, static_cast<Index>(std::ceil(16.0 * p.alpha / dt))));
        return FrequencyGrid(cfg.omega_max, n);
    }
    const FrequencyGrid g = auto_grid(p, cfg.tail_eps);
    if (have_n) return FrequencyGrid(g.omega_max, static_cast<Index>(cfg.samples));
    return g;
}

inline void meta_num(Metadata& m, const std::string& key, double v) {
    m.emplace_back(key, format_double(v));
}

inline Metadata base_meta(const char* command) {
    return Metadata{{"artifact_version", kArtifactVersion}, {"command", command}};
}

inline nlohmann::json meta_to_json(const Metadata& m) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [k, v] : m) {
        char* end = nullptr;
        const double num = std::strtod(v.c_str(), &end);
        if (end && *end == '\0' && end != v.c_str())
            j[k] = num;
        else
            j[k] = v;
    }
    return j;
}

inline std::string resolve_format(const RunConfig& cfg, const char* fallback, bool allow_csv,
                                  bool allow_json) {
    const std::string f = cfg.format.empty() ? fallback : cfg.format;
    if (f == "csv" && allow_csv) return f;
    if (f == "json" && allow_json) return f;
    throw std::invalid_argument("unsupported --format '" + f + "' for this command");
}

// Tabular emitter shared by freqz and impulse: CSV with metadata comments, or
// a JSON object with the same config block and row-major data.
struct Table {
    Metadata meta;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    void write_csv(std::ostream& os) const {
        write_metadata(os, meta);
        for (std::size_t i = 0; i < columns.size(); ++i)
            os << (i ? "," : "") << columns[i];
        os << "\n";
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i)
                os << (i ? "," : "") << format_double(row[i]);
            os << "\n";
        }
    }

    void write_json(std::ostream& os) const {
        nlohmann::json j;
        j["config"] = meta_to_json(meta);
        j["columns"] = columns;
        j["rows"] = rows;
        os << j.dump(2) << "\n";
    }

    void write(std::ostream& os, const std::string& format) const {
        if (format == "json")
            write_json(os);
        else
            write_csv(os);
    }
};

}  // namespace detail

// --- freqz -----------------------------------------------------------------

// omega,re,im,gain,phase_rad over [0, omega_max]; optional reference column.
inline void cmd_freqz(const RunConfig& cfg, std::ostream& os) {
    const std::string fmt = detail::resolve_format(cfg, "csv", true, true);
    const FilterParams p = detail::make_params(cfg);
    const double omega_max = std::isnan(cfg.omega_max) ? 100.0 : cfg.omega_max;
    if (omega_max < 0.0)
        throw std::invalid_argument("freqz: --omega-max must be >= 0");
    const long m = (cfg.samples > 0) ? cfg.samples : 1001;
    const long rows = (omega_max == 0.0) ? 1 : m;

    detail::Table tab;
    tab.meta = detail::base_meta("freqz");
    detail::meta_num(tab.meta, "alpha", p.alpha);
    detail::meta_num(tab.meta, "beta", p.beta);
    detail::meta_num(tab.meta, "q", p.q);
    if (cfg.with_reference) detail::meta_num(tab.meta, "mu", cfg.mu);
    detail::meta_num(tab.meta, "omega_max", omega_max);
    detail::meta_num(tab.meta, "samples", static_cast<double>(rows));

    tab.columns = {"omega", "re", "im", "gain", "phase_rad"};
    if (cfg.with_reference) tab.columns.push_back("ref_gain");

    for (long i = 0; i < rows; ++i) {
        const double w =
            (rows == 1) ? 0.0 : omega_max * static_cast<double>(i) / static_cast<double>(rows - 1);
        const Complex H = transfer_eval(p, Complex(0.0, w));
        std::vector<double> row{w, H.real(), H.imag(), gain(p, w), std::arg(H)};
        if (cfg.with_reference) row.push_back(reference_gain(ReferenceParams(cfg.mu), w));
        tab.rows.push_back(std::move(row));
    }
    tab.write(os, fmt);
}

// --- impulse ---------------------------------------------------------------

// t,value rows of the inverse-transform impulse response with grid, causality
// defect, clipped-energy, and DC-consistency metadata.
inline void cmd_impulse(const RunConfig& cfg, std::ostream& os) {
    const std::string fmt = detail::resolve_format(cfg, "csv", true, true);
    const FilterParams p = detail::make_params(cfg);
    const FrequencyGrid g = detail::resolve_grid(p, cfg);

    double residue = 0.0;
    const SampledSignal h = impulse_response(p, g, &residue);
    const PreparedKernel prep = prepare_kernel(h);

    detail::Table tab;
    tab.meta = detail::base_meta("impulse");
    detail::meta_num(tab.meta, "alpha", p.alpha);
    detail::meta_num(tab.meta, "beta", p.beta);
    detail::meta_num(tab.meta, "q", p.q);
    detail::meta_num(tab.meta, "tail_eps", cfg.tail_eps);
    detail::meta_num(tab.meta, "omega_max", g.omega_max);
    detail::meta_num(tab.meta, "n", static_cast<double>(g.n));
    detail::meta_num(tab.meta, "dt", g.dt());
    detail::meta_num(tab.meta, "causality_defect", causality_defect(h));
    detail::meta_num(tab.meta, "clipped_energy_fraction", prep.clipped_energy_fraction);
    detail::meta_num(tab.meta, "imag_residue", residue);
    detail::meta_num(tab.meta, "dc_sum", h.values.sum() * h.dt);
    detail::meta_num(tab.meta, "dc_gain", transfer_eval(p, Complex(0.0, 0.0)).real());

    tab.columns = {"t", "value"};
    tab.rows.reserve(static_cast<std::size_t>(h.size()));
    for (Index j = 0; j < h.size(); ++j)
        tab.rows.push_back({h.time(j), h.values[j]});
    tab.write(os, fmt);
}

// --- apply -----------------------------------------------------------------

inline SampledSignal load_signal(const std::string& path) {
    if (path.empty())
        throw std::invalid_argument("apply: missing --input");
    if (path == "-") return read_signal_csv(std::cin);
    std::ifstream f(path);
    if (!f)
        throw std::invalid_argument("apply: cannot open '" + path + "'");
    return read_signal_csv(f);
}

// Filter a signal file. The kernel is designed at the input's sampling rate
// unless an explicit grid is forced, in which case the rates must agree.
inline void cmd_apply(const RunConfig& cfg, std::ostream& os) {
    detail::resolve_format(cfg, "csv", true, false);
    const FilterParams p = detail::make_params(cfg);
    if (cfg.mode != "direct" && cfg.mode != "fft" && cfg.mode != "stream")
        throw std::invalid_argument("apply: --mode must be direct, fft or stream");

    const SampledSignal x = load_signal(cfg.input);

    PreparedKernel prep = [&] {
        if (!std::isnan(cfg.omega_max) || cfg.samples > 0) {
            const FrequencyGrid g = detail::resolve_grid(p, cfg);
            return prepare_kernel(impulse_response(p, g));
        }
        return design_kernel(p, x.dt, x.size());
    }();

    SampledSignal y(0.0, 1.0, ArrayXd::Zero(1));
    if (cfg.mode == "direct") {
        y = convolve_direct(prep.kernel, x);
    } else if (cfg.mode == "fft") {
        y = convolve_fft(prep.kernel, x);
    } else {
        subideal::detail::check_rate(prep.kernel, x);
        StreamState st(prep.kernel);
        ArrayXd out(x.size());
        const Index chunk = 1024;
        for (Index j0 = 0; j0 < x.size(); j0 += chunk) {
            const Index len = std::min<Index>(chunk, x.size() - j0);
            out.segment(j0, len) = stream_push(st, ArrayXd(x.values.segment(j0, len)));
        }
        y = SampledSignal(x.t0, x.dt, std::move(out));
    }

    Metadata meta = detail::base_meta("apply");
    detail::meta_num(meta, "alpha", p.alpha);
    detail::meta_num(meta, "beta", p.beta);
    detail::meta_num(meta, "q", p.q);
    meta.emplace_back("mode", cfg.mode);
    detail::meta_num(meta, "kernel_len", static_cast<double>(prep.kernel.size()));
    detail::meta_num(meta, "clipped_energy_fraction", prep.clipped_energy_fraction);
    write_signal_csv(os, y, meta);
}

// --- verify ----------------------------------------------------------------

namespace detail {

inline std::string canonical_check_name(const std::string& name) {
    if (name == "identity" || name == "identity_approx") return "identity_approx";
    if (name == "a2" || name == "output_convergence") return "output_convergence";
    if (name == "smoothing") return "smoothing";
    if (name == "pw" || name == "paley_wiener") return "paley_wiener";
    if (name == "divergence" || name == "subideal_divergence") return "subideal_divergence";
    if (name == "d" || name == "condition_d") return "condition_d";
    if (name == "causality" || name == "causality_defect") return "causality_defect";
    if (name == "ratio" || name == "gain_ratio") return "gain_ratio";
    throw std::invalid_argument("verify: unknown --check '" + name + "'");
}

}  // namespace detail

// Run the verification battery (or one named check), emit the JSON report,
// and return true iff every verdict passed.
inline bool cmd_verify(const RunConfig& cfg, std::ostream& os) {
    detail::resolve_format(cfg, "json", false, true);
    BatteryConfig bc;
    bc.mu = cfg.mu;
    bc.ratio_omega = cfg.check_omega;
    bc.tail_eps = cfg.tail_eps;
    bc.seed = cfg.seed;
    bc.pw_max = cfg.pw_max;
    bc.quadrature.abs_tol = cfg.abs_tol;
    bc.quadrature.rel_tol = cfg.rel_tol;
    bc.quadrature.validate();

    VerificationReport rep = run_battery(bc);
    if (!cfg.check.empty()) {
        const std::string want = detail::canonical_check_name(cfg.check);
        std::vector<CheckRecord> kept;
        for (CheckRecord& c : rep.checks)
            if (c.name == want) kept.push_back(std::move(c));
        rep.checks = std::move(kept);
    }
    os << report_to_json(rep).dump(2) << "\n";
    return rep.all_pass();
}

// --- figures ---------------------------------------------------------------

namespace detail {

inline void fig1(const RunConfig& cfg, std::ostream& os) {
    const double mu = cfg.mu_set ? cfg.mu : 0.1;
    const ReferenceParams ref(mu);
    const FilterParams p99(matched_alpha(mu, 0.99), 0.01, 0.99);
    const FilterParams p90(matched_alpha(mu, 0.9), 0.1, 0.9);

    Table tab;
    tab.meta = base_meta("figures");
    tab.meta.emplace_back("figure", "fig1_gain");
    meta_num(tab.meta, "mu", mu);
    meta_num(tab.meta, "alpha_q099", p99.alpha);
    meta_num(tab.meta, "alpha_q09", p90.alpha);
    tab.columns = {"omega", "gain_ref", "gain_q099", "gain_q09"};
    for (int i = 0; i <= 2000; ++i) {
        const double w = 0.1 * i;
        tab.rows.push_back({w, reference_gain(ref, w), gain(p99, w), gain(p90, w)});
    }
    tab.write_csv(os);
}

inline void fig2(const RunConfig& cfg, std::ostream& os) {
    const double mu = cfg.mu_set ? cfg.mu : 0.05;
    const ReferenceParams ref(mu);
    const FilterParams pa(0.1, 0.1, 0.5);
    const FilterParams pb(0.05, 0.05, 0.5);

    Table tab;
    tab.meta = base_meta("figures");
    tab.meta.emplace_back("figure", "fig2_identity_error");
    meta_num(tab.meta, "mu", mu);
    meta_num(tab.meta, "q", 0.5);
    tab.columns = {"omega", "err_ref", "err_a010", "err_a005"};
    for (int i = -1000; i <= 1000; ++i) {
        const double w = 0.1 * i;
        tab.rows.push_back({w, std::abs(reference_gain(ref, w) - 1.0),
                            std::abs(transfer_eval(pa, Complex(0.0, w)) - 1.0),
                            std::abs(transfer_eval(pb, Complex(0.0, w)) - 1.0)});
    }
    tab.write_csv(os);
}

inline void fig3(const RunConfig& cfg, std::ostream& os) {
    RunConfig c = cfg;
    if (std::isnan(c.alpha) && !c.alpha_from_matched) c.alpha = 6.3925;
    if (std::isnan(c.beta)) c.beta = 0.1;
    if (std::isnan(c.q)) c.q = 0.9;
    c.format = "csv";
    cmd_impulse(c, os);
}

}  // namespace detail

// Emit the three figure datasets into a directory.
inline void cmd_figures(const RunConfig& cfg, const std::string& dir) {
    detail::resolve_format(cfg, "csv", true, false);
    const auto emit = [&](const std::string& name, const auto& writer) {
        const std::string path = dir.empty() ? name : dir + "/" + name;
        std::ofstream f(path);
        if (!f)
            throw std::invalid_argument("figures: cannot write '" + path + "'");
        writer(cfg, f);
    };
    emit("fig1_gain.csv", [](const RunConfig& c, std::ostream& os) { detail::fig1(c, os); });
    emit("fig2_identity_error.csv",
         [](const RunConfig& c, std::ostream& os) { detail::fig2(c, os); });
    emit("fig3_impulse.csv", [](const RunConfig& c, std::ostream& os) { detail::fig3(c, os); });
}

}  // namespace subideal::cli
