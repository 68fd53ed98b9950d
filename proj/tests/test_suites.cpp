#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "sigorient/suites.hpp"

using namespace sigorient;

namespace {

RunConfig small(std::string suite) {
    RunConfig cfg;
    cfg.suites = {std::move(suite)};
    cfg.d_max = 2;
    cfg.n_max = 2;
    return cfg;
}

bool has_case(const std::vector<CheckReport>& r, const std::string& needle) {
    return std::any_of(r.begin(), r.end(), [&](const CheckReport& c) { return c.case_id.find(needle) != std::string::npos; });
}

} // namespace

TEST_SUITE("suites") {

TEST_CASE("configuration validation") {
    RunConfig cfg;
    CHECK_NOTHROW(validate_config(cfg));
    cfg.tau = cplx(0.0, -1.0);
    CHECK_THROWS_AS(validate_config(cfg), ConfigError);
    cfg = RunConfig{};
    cfg.tolerance = 0.0;
    CHECK_THROWS_AS(validate_config(cfg), ConfigError);
    cfg = RunConfig{};
    cfg.degree_cap = 0;
    CHECK_THROWS_AS(validate_config(cfg), ConfigError);
    cfg = RunConfig{};
    cfg.suites = {"nonsense"};
    CHECK_THROWS_AS(validate_config(cfg), ConfigError);
    CHECK_THROWS_AS(run_suite("nonsense", RunConfig{}), ConfigError);
}

TEST_CASE("matrix helpers") {
    // ascending sum-zero vectors, zero excluded: (-2,2), (-1,1)
    CHECK(sum_zero_cocharacters(2, 2) == std::vector<Cocharacter>{{-2, 2}, {-1, 1}});
    for (const auto& [m0, m1] : string_pairs(3, 2)) {
        CHECK(phi(m0) == phi(m1));
    }
    CHECK(matrix_points(4, ModulusTau(cplx(0, 1))).size() == 12);
    CHECK(format_cocharacter({1, -1}) == "(1,-1)");
}

TEST_CASE("sigma suite: at least 300 cases, all passing") {
    const auto r = run_suite("sigma", RunConfig{});
    CHECK(r.size() >= 300);
    CHECK(all_passed(r));
}

TEST_CASE("delta at d_max = 2, n_max = 2 includes the (1,-1) -> (3,-3) lift") {
    const auto r = run_suite("delta", small("delta"));
    CHECK(has_case(r, "(1,-1)->(3,-3)"));
    for (const auto& c : r) {
        const bool literal_lift_law = c.case_id.rfind("a_lift_law/", 0) == 0;
        if (!literal_lift_law) {
            CHECK_MESSAGE(c.status == CheckStatus::pass, c.case_id);
        }
    }
    // w^{s phi} alone misses the e^{2 pi i r k phi / n} factor for r != 0
    CHECK(std::any_of(r.begin(), r.end(), [](const CheckReport& c) {
        return c.case_id.rfind("a_lift_law/", 0) == 0 && c.status == CheckStatus::fail;
    }));
}

TEST_CASE("reports are sorted and byte-identical across runs and thread counts") {
    RunConfig cfg = small("all");
    cfg.suites = {"sigma", "coordinate", "delta"};
    const std::string a = format_report(run_suites(cfg), ReportFormat::json);
    cfg.jobs = 3;
    const auto reports = run_suites(cfg);
    CHECK(format_report(reports, ReportFormat::json) == a);
    CHECK(std::is_sorted(reports.begin(), reports.end(), [](const CheckReport& x, const CheckReport& y) {
        return std::tie(x.suite, x.case_id) < std::tie(y.suite, y.case_id);
    }));
    RunConfig other = cfg;
    other.seed = 2;
    CHECK(format_report(run_suites(other), ReportFormat::json) != a);
}

TEST_CASE("JSON reports parse back to the same statuses") {
    CHECK(nlohmann::json::parse(format_report({}, ReportFormat::json)) == nlohmann::json::array());
    const auto reports = run_suite("coordinate", RunConfig{});
    const auto j = nlohmann::json::parse(format_report(reports, ReportFormat::json));
    REQUIRE(j.size() == reports.size());
    for (std::size_t i = 0; i < reports.size(); ++i) {
        CHECK(j[i]["suite"] == reports[i].suite);
        CHECK(j[i]["case"] == reports[i].case_id);
        CHECK(j[i]["status"] == std::string(to_string(reports[i].status)));
        for (const char* key : {"residual", "expected", "measured", "anchor"}) {
            CHECK(j[i].contains(key));
        }
    }
}

TEST_CASE("text reports have one line per case") {
    const auto reports = run_suite("coordinate", RunConfig{});
    const std::string text = format_report(reports, ReportFormat::text);
    CHECK(static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')) == reports.size());
}

TEST_CASE("write_report writes files and reports I/O failure") {
    const auto path = std::filesystem::temp_directory_path() / "sigorient_report_test.json";
    const std::vector<CheckReport> one{{"sigma", "x", CheckStatus::fail, 0.5, "a", "b", "c"}};
    write_report(one, ReportFormat::json, path.string());
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(nlohmann::json::parse(ss.str())[0]["status"] == "fail");
    std::filesystem::remove(path);
    CHECK_FALSE(all_passed(one));
    CHECK_THROWS_AS(write_report(one, ReportFormat::json, "/nonexistent-dir/x.json"), std::runtime_error);
}

TEST_CASE("skips do not fail a run") {
    const std::vector<CheckReport> r{{"sigma", "a", CheckStatus::pass, 0, "", "", ""},
                                     {"sigma", "b", CheckStatus::skip, 0, "", "", ""}};
    CHECK(all_passed(r));
}

} // TEST_SUITE
