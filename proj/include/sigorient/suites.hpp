#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sigorient/cochar.hpp"
#include "sigorient/elliptic.hpp"
#include "sigorient/modulus.hpp"

namespace sigorient {

inline constexpr std::array<std::string_view, 6> kSuiteNames{"sigma",    "delta",      "looijenga",
                                                              "divisors", "coordinate", "orientation"};

// Checks pinned to 1e-8 use `tolerance`; checks pinned tighter use
// min(pinned, tolerance).
struct RunConfig {
    cplx tau{0.0, 1.0};
    int q_truncation = 64;
    int degree_cap = 6;
    double tolerance = 1e-8;
    int d_max = 4;
    int n_max = 6;
    std::uint64_t seed = 1;
    std::vector<std::string> suites{"all"};
    int jobs = 1;
};

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Throws ConfigError.
void validate_config(const RunConfig& cfg);

enum class CheckStatus { pass, fail, skip };
std::string_view to_string(CheckStatus s);

struct CheckReport {
    std::string suite;
    std::string case_id;
    CheckStatus status = CheckStatus::fail;
    double residual = 0.0;
    std::string expected;
    std::string measured;
    std::string anchor;
    // Threshold of residual checks; NaN for verdicts, whose residual field
    // carries the probed quantity instead. Not part of the report schema.
    double tolerance = std::numeric_limits<double>::quiet_NaN();
};

// One named suite (not "all"). Deterministic in cfg; throws ConfigError for
// an unknown name or invalid config.
std::vector<CheckReport> run_suite(std::string_view name, const RunConfig& cfg);

// Runs cfg.suites ("all" expands) on up to cfg.jobs threads; sorted by
// (suite, case id).
std::vector<CheckReport> run_suites(const RunConfig& cfg);

bool all_passed(const std::vector<CheckReport>& reports); // skips do not fail

enum class ReportFormat { text, json };

std::string format_report(const std::vector<CheckReport>& reports, ReportFormat format);
// Empty path or "-" writes to stdout. Throws std::runtime_error on I/O failure.
void write_report(const std::vector<CheckReport>& reports, ReportFormat format, const std::string& path);

// Configuration matrices shared by the suites and the tests.

// Ascending sum-zero vectors of length d in [-bound, bound]^d, zero excluded.
std::vector<Cocharacter> sum_zero_cocharacters(int d, long long bound);
// Pairs (m0, m1) from the lists above (d <= d_max) with phi(m0) = phi(m1),
// m0 before m1 in (length, lexicographic) order.
std::vector<std::pair<Cocharacter, Cocharacter>> string_pairs(int d_max, long long bound);
// Canonical lifts 2 pi i (l + k tau) / n of the points of exact order n.
std::vector<LiftData> matrix_points(int n, const ModulusTau& tau);

std::string format_cocharacter(const Cocharacter& m);
std::string format_complex(cplx z);

} // namespace sigorient
