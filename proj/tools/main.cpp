#include <clocale>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "subideal/cli.hpp"

namespace {

using subideal::cli::RunConfig;

// --out wins, then the SUBIDEAL_OUT_DIR directory, then stdout.
std::string resolve_out(const RunConfig& cfg, const char* default_name) {
    if (!cfg.out.empty()) return cfg.out;
    const char* dir = std::getenv("SUBIDEAL_OUT_DIR");
    if (dir && *dir) return std::string(dir) + "/" + default_name;
    return "-";
}

std::string resolve_out_dir(const RunConfig& cfg) {
    if (!cfg.out.empty()) return cfg.out;
    const char* dir = std::getenv("SUBIDEAL_OUT_DIR");
    if (dir && *dir) return dir;
    return ".";
}

template <class Fn>
int with_output(const std::string& path, Fn&& fn) {
    if (path == "-") return fn(std::cout);
    std::ofstream f(path);
    if (!f) throw std::invalid_argument("cannot write '" + path + "'");
    return fn(f);
}

int run(const std::string& command, const RunConfig& cfg) {
    if (command == "freqz")
        return with_output(resolve_out(cfg, "freqz.csv"), [&](std::ostream& os) {
            subideal::cli::cmd_freqz(cfg, os);
            return 0;
        });
    if (command == "impulse")
        return with_output(resolve_out(cfg, "impulse.csv"), [&](std::ostream& os) {
            subideal::cli::cmd_impulse(cfg, os);
            return 0;
        });
    if (command == "apply")
        return with_output(resolve_out(cfg, "apply.csv"), [&](std::ostream& os) {
            subideal::cli::cmd_apply(cfg, os);
            return 0;
        });
    if (command == "verify")
        return with_output(resolve_out(cfg, "report.json"), [&](std::ostream& os) {
            return subideal::cli::cmd_verify(cfg, os) ? 0 : 1;
        });
    if (command == "figures") {
        subideal::cli::cmd_figures(cfg, resolve_out_dir(cfg));
        return 0;
    }
    throw std::invalid_argument("unknown command '" + command + "'");
}

}  // namespace

int main(int argc, char** argv) {
    std::setlocale(LC_ALL, "C");

    CLI::App app{"sub-ideal causal smoothing filters: exp(-alpha (s+beta)^q)"};
    app.set_version_flag("--version", subideal::kArtifactVersion);
    app.require_subcommand(1);

    RunConfig cfg;
    std::string alpha_str;
    std::vector<CLI::Option*> mu_opts;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--alpha", alpha_str, "filter strength, or 'from-matched' for mu/cos(q pi/2)");
        sub->add_option("--beta", cfg.beta, "shift into the right half-plane");
        sub->add_option("--q", cfg.q, "fractional exponent in (0,1]");
        mu_opts.push_back(sub->add_option("--mu", cfg.mu, "reference decay rate"));
        sub->add_option("--omega-max", cfg.omega_max, "frequency range limit");
        sub->add_option("--samples", cfg.samples, "sample or grid-point count");
        sub->add_option("--tail-eps", cfg.tail_eps, "spectral tail level for automatic grids");
        sub->add_option("--format", cfg.format, "output format")
            ->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--out", cfg.out, "output path ('-' = stdout); figures: directory");
        sub->add_option("--seed", cfg.seed, "seed for randomized checks");
    };

    CLI::App* freqz = app.add_subcommand("freqz", "frequency response table");
    add_common(freqz);
    freqz->add_flag("--with-reference", cfg.with_reference,
                    "add the non-causal reference gain column");

    CLI::App* impulse = app.add_subcommand("impulse", "impulse response table");
    add_common(impulse);

    CLI::App* apply = app.add_subcommand("apply", "filter a sampled signal file");
    add_common(apply);
    apply->add_option("--input", cfg.input, "input signal CSV ('-' = stdin)");
    apply->add_option("--mode", cfg.mode, "convolution mode")
        ->check(CLI::IsMember({"direct", "fft", "stream"}));

    CLI::App* verify = app.add_subcommand("verify", "run the verification battery");
    add_common(verify);
    verify->add_option("--check", cfg.check, "run a single named check");
    verify->add_option("--omega", cfg.check_omega, "evaluation frequency for the ratio check");
    verify->add_option("--pw-max", cfg.pw_max, "extra upper bound on the Paley-Wiener value");
    verify->add_option("--abs-tol", cfg.abs_tol, "quadrature absolute tolerance");
    verify->add_option("--rel-tol", cfg.rel_tol, "quadrature relative tolerance");

    CLI::App* figures = app.add_subcommand("figures", "emit the three figure datasets");
    add_common(figures);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (!alpha_str.empty()) {
            if (alpha_str == "from-matched") {
                cfg.alpha_from_matched = true;
            } else {
                char* end = nullptr;
                cfg.alpha = std::strtod(alpha_str.c_str(), &end);
                if (!end || *end != '\0' || end == alpha_str.c_str())
                    throw std::invalid_argument("--alpha: expected a number or 'from-matched'");
            }
        }
        for (const CLI::Option* o : mu_opts)
            if (o->count() > 0) cfg.mu_set = true;

        const std::string command = app.get_subcommands().front()->get_name();
        return run(command, cfg);
    } catch (const subideal::rate_mismatch_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::range_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
