#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sigorient/sigma.hpp"
#include "sigorient/suites.hpp"

namespace {

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

} // namespace

int main(int argc, char** argv) {
    using namespace sigorient;

    CLI::App app{"Runs the sigma orientation verification suites."};
    app.set_config("--config", "", "key = value file; flags given on the command line win");

    RunConfig cfg;
    double tau_re = cfg.tau.real();
    double tau_im = cfg.tau.imag();
    std::string format = "text";
    std::string out;

    std::vector<std::string> names(kSuiteNames.begin(), kSuiteNames.end());
    names.emplace_back("all");

    app.add_option("--tau-re", tau_re, "Re tau")->capture_default_str();
    app.add_option("--tau-im", tau_im, "Im tau (> 0)")->capture_default_str();
    app.add_option("--qn", cfg.q_truncation, "q-product truncation N")->capture_default_str();
    app.add_option("--cap", cfg.degree_cap, "total degree cap of the series rings")->capture_default_str();
    app.add_option("--tol", cfg.tolerance, "tolerance of the 1e-8 checks")->capture_default_str();
    app.add_option("--dmax", cfg.d_max, "largest rank in the configuration matrix")->capture_default_str();
    app.add_option("--nmax", cfg.n_max, "largest torsion order in the configuration matrix")->capture_default_str();
    app.add_option("--seed", cfg.seed, "seed of the randomized cases")->capture_default_str();
    app.add_option("--suite", cfg.suites, "suite to run (repeatable)")
        ->check(CLI::IsMember(names))
        ->capture_default_str();
    app.add_option("--format", format, "report format")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();
    app.add_option("--out", out, "report path (default stdout)");
    app.add_option("--jobs", cfg.jobs, "worker threads")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }
    cfg.tau = cplx(tau_re, tau_im);

    std::vector<CheckReport> reports;
    try {
        validate_config(cfg);
        if (SigmaParams{ModulusTau(cfg.tau, cfg.q_truncation)}.precision_limited())
            std::fprintf(stderr, "sigorient: warning: |q|^N > 1e-16, sigma is truncation-limited\n");
        reports = run_suites(cfg);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "sigorient: %s\n", e.what());
        return kExitUsage;
    }

    try {
        write_report(reports, format == "json" ? ReportFormat::json : ReportFormat::text, out);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "sigorient: %s\n", e.what());
        return kExitUsage;
    }
    return all_passed(reports) ? 0 : kExitFail;
}
