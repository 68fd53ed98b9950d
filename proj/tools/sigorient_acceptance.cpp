// One line per acceptance criterion. Exit status 0 iff the set of failing
// criteria equals --known-failures (empty by default).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sigorient/suites.hpp"

namespace {

using namespace sigorient;

constexpr double kSuiteBudgetSeconds = 60.0;

struct Criterion {
    int id;
    const char* title;
    const char* suite;
    std::vector<std::string> families;
};

// Families that restate a criterion with the corrected sign or root of
// unity; reported, never counted.
struct Corrected {
    int id;
    const char* title;
    const char* suite;
    std::vector<std::string> families;
};

const std::vector<Criterion> kCriteria = {
    {1, "sigma functional equations", "sigma",
     {"oddness", "quasi_periodicity", "quasi_periodicity_random", "zero_set", "zero_set_random", "jet"}},
    {2, "delta lift independence", "delta", {"lift_pair", "lift_independence", "weyl_invariance"}},
    {3, "delta'' = Euler class of the fixed part, delta' a unit", "delta",
     {"fixed_euler", "delta_prime_unit", "factorization"}},
    {4, "a-lift law w^{s phi}, trivial when phi = 0 mod n", "delta", {"a_lift_law", "a_lift_phi_trivial"}},
    {5, "Weil pairing", "looijenga", {"weil_root", "weil_lift_invariance", "weil_factor_root", "weil_half_period"}},
    {6, "Looijenga cocycle, section, pair trivialization", "looijenga",
     {"cocycle", "section", "pair_trivial", "pair_nontrivial", "gamma_lift_law"}},
    {7, "divisor identities", "divisors",
     {"torsion_count", "torsion_divisor", "euler_divisor_degree", "string_divisor", "string_divisor_gap"}},
    {8, "coordinate data", "coordinate",
     {"validation", "t1_divisor", "ts_vanishing", "ts_normalization", "ts_pole_order", "ts_nonvanishing"}},
    {9, "Chern class consistency", "delta", {"chern_c1", "chern_c2", "chern_c2_sum_zero"}},
    {10, "orientation assembly", "orientation",
     {"gluing", "gluing_lift", "multiplicativity", "thom_product", "broken_pair"}},
};

const std::vector<Corrected> kCorrected = {
    {3, "delta'' = (-1)^{(k+l+kl) sum D} e(V^A)", "delta", {"fixed_euler_signed", "delta_prime_unit"}},
    {4, "a-lift law w^{s phi} e^{2 pi i r k phi / n}", "delta", {"a_lift_law_corrected", "a_lift_phi_trivial"}},
};

RunConfig config_for(const std::string& suite, cplx tau, int jobs) {
    RunConfig cfg;
    cfg.tau = tau;
    cfg.suites = {suite};
    cfg.jobs = jobs;
    if (suite == "delta" || suite == "orientation") {
        cfg.d_max = 4;
        cfg.n_max = 6;
    } else if (suite == "looijenga" || suite == "divisors") {
        cfg.n_max = 12;
    }
    return cfg;
}

std::string family_of(const std::string& case_id) { return case_id.substr(0, case_id.find('/')); }

struct Tally {
    int pass = 0;
    int fail = 0;
    int skip = 0;
    double worst = 0.0;       // largest passing residual
    double worst_ratio = 0.0; // largest passing residual / tolerance
    std::string first_failure;
};

Tally tally(const std::vector<CheckReport>& reports, const std::vector<std::string>& families, const char* tau) {
    Tally t;
    for (const auto& r : reports) {
        if (std::find(families.begin(), families.end(), family_of(r.case_id)) == families.end()) {
            continue;
        }
        switch (r.status) {
        case CheckStatus::pass:
            ++t.pass;
            if (!std::isnan(r.tolerance)) {
                t.worst = std::max(t.worst, r.residual);
                t.worst_ratio = std::max(t.worst_ratio, r.residual / r.tolerance);
            }
            break;
        case CheckStatus::fail:
            ++t.fail;
            if (t.first_failure.empty()) {
                t.first_failure = std::string(tau) + " " + r.case_id + " residual=" + std::to_string(r.residual);
            }
            break;
        case CheckStatus::skip:
            ++t.skip;
            break;
        }
    }
    return t;
}

void merge(Tally& into, const Tally& t) {
    into.pass += t.pass;
    into.fail += t.fail;
    into.skip += t.skip;
    into.worst = std::max(into.worst, t.worst);
    into.worst_ratio = std::max(into.worst_ratio, t.worst_ratio);
    if (into.first_failure.empty()) {
        into.first_failure = t.first_failure;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance gate of the sigma orientation library."};
    std::vector<int> known;
    int jobs = 1;
    app.add_option("--known-failures", known, "criteria expected to fail (comma separated)")->delimiter(',');
    app.add_option("--jobs", jobs, "worker threads per suite")->check(CLI::PositiveNumber);
    CLI11_PARSE(app, argc, argv);

    const std::vector<std::pair<const char*, cplx>> taus = {{"tau=i", cplx(0.0, 1.0)},
                                                            {"tau=0.3+0.8i", cplx(0.3, 0.8)}};

    // (tau label, suite) -> reports
    std::map<std::pair<std::string, std::string>, std::vector<CheckReport>> runs;
    bool within_budget = true;
    for (const auto& [label, tau] : taus) {
        for (const auto name : kSuiteNames) {
            const std::string suite(name);
            const auto t0 = std::chrono::steady_clock::now();
            runs[{label, suite}] = run_suite(suite, config_for(suite, tau, jobs));
            const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            const bool ok = secs < kSuiteBudgetSeconds;
            within_budget = within_budget && ok;
            std::printf("[%s] time  %-12s %-13s %6.2fs (budget %.0fs)\n", ok ? "PASS" : "FAIL", suite.c_str(),
                        label, secs, kSuiteBudgetSeconds);
        }
    }

    const auto collect = [&](const char* suite, const std::vector<std::string>& families) {
        Tally total;
        for (const auto& [label, tau] : taus) {
            merge(total, tally(runs[{label, suite}], families, label));
        }
        return total;
    };

    std::set<int> failing;
    for (const auto& c : kCriteria) {
        const Tally t = collect(c.suite, c.families);
        const bool ok = t.fail == 0 && t.pass > 0;
        if (!ok) {
            failing.insert(c.id);
        }
        std::printf("[%s] %2d  %-52s pass=%d fail=%d skip=%d worst_residual=%.2e (%.1e of tol)\n",
                    ok ? "PASS" : "FAIL", c.id, c.title, t.pass, t.fail, t.skip, t.worst, t.worst_ratio);
        if (!ok && !t.first_failure.empty()) {
            std::printf("           first failure: %s\n", t.first_failure.c_str());
        }
    }
    for (const auto& c : kCorrected) {
        const Tally t = collect(c.suite, c.families);
        std::printf("[INFO] %2d* %-51s %s pass=%d fail=%d worst_residual=%.2e (%.1e of tol)\n", c.id, c.title,
                    t.fail == 0 && t.pass > 0 ? "holds" : "FAILS", t.pass, t.fail, t.worst, t.worst_ratio);
    }

    // A family no criterion claims would drop out of the gate unnoticed.
    bool all_mapped = true;
    for (const auto& [key, reports] : runs) {
        for (const auto& r : reports) {
            const std::string f = family_of(r.case_id);
            const auto claims = [&](const auto& c) {
                return key.second == c.suite && std::find(c.families.begin(), c.families.end(), f) != c.families.end();
            };
            if (std::none_of(kCriteria.begin(), kCriteria.end(), claims) &&
                std::none_of(kCorrected.begin(), kCorrected.end(), claims)) {
                std::printf("[FAIL] unmapped family %s/%s\n", key.second.c_str(), f.c_str());
                all_mapped = false;
                break;
            }
        }
    }

    const std::set<int> expected(known.begin(), known.end());
    const bool gate = within_budget && all_mapped && failing == expected;
    std::printf("failing criteria: {");
    for (auto it = failing.begin(); it != failing.end(); ++it) {
        std::printf("%s%d", it == failing.begin() ? "" : ",", *it);
    }
    std::printf("}  known: {");
    for (auto it = expected.begin(); it != expected.end(); ++it) {
        std::printf("%s%d", it == expected.begin() ? "" : ",", *it);
    }
    std::printf("}  gate: %s\n", gate ? "PASS" : "FAIL");
    return gate ? 0 : 1;
}
