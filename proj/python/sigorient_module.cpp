#include <map>
#include <string>
#include <tuple>
#include <vector>

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sigorient/char_classes.hpp"
#include "sigorient/orientation.hpp"
#include "sigorient/suites.hpp"

namespace py = pybind11;
using namespace sigorient;

namespace {

// {exponent tuple: coefficient}, nonzero terms only
py::dict series_terms(const TruncatedSeries& s) {
    py::dict out;
    const RingPtr& ring = s.ring();
    for (std::size_t i = 0; i < ring->size(); ++i) {
        if (s[i] != cplx{}) {
            out[py::tuple(py::cast(ring->exponents(i)))] = s[i];
        }
    }
    return out;
}

std::vector<std::string> line_names(const char* prefix, std::size_t count) {
    std::vector<std::string> out;
    for (std::size_t i = 1; i <= count; ++i) {
        out.push_back(prefix + std::to_string(i));
    }
    return out;
}

RunConfig make_config(cplx tau, int q_truncation, int degree_cap, double tolerance, int d_max, int n_max,
                      std::uint64_t seed, std::vector<std::string> suites, int jobs) {
    RunConfig cfg;
    cfg.tau = tau;
    cfg.q_truncation = q_truncation;
    cfg.degree_cap = degree_cap;
    cfg.tolerance = tolerance;
    cfg.d_max = d_max;
    cfg.n_max = n_max;
    cfg.seed = seed;
    cfg.suites = std::move(suites);
    cfg.jobs = jobs;
    return cfg;
}

py::list to_dicts(const std::vector<CheckReport>& reports) {
    py::list out;
    for (const auto& r : reports) {
        py::dict d;
        d["suite"] = r.suite;
        d["case"] = r.case_id;
        d["status"] = std::string(to_string(r.status));
        d["residual"] = r.residual;
        d["expected"] = r.expected;
        d["measured"] = r.measured;
        d["anchor"] = r.anchor;
        out.append(d);
    }
    return out;
}

} // namespace

PYBIND11_MODULE(_sigorient, m) {
    m.doc() = "Verification library for the equivariant sigma orientation over C / Lambda.";

    py::register_exception<NonUnitError>(m, "NonUnitError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    m.def(
        "sigma", [](cplx z, cplx tau, int q_truncation) { return sigma(z, SigmaParams(ModulusTau(tau, q_truncation))); },
        py::arg("z"), py::arg("tau") = cplx(0.0, 1.0), py::arg("q_truncation") = 64);

    m.def(
        "sigma_jet",
        [](cplx c, int order, cplx tau) {
            return sigma_jet_scaled(c, order, SigmaParams(ModulusTau(tau))).materialize();
        },
        py::arg("c"), py::arg("order"), py::arg("tau") = cplx(0.0, 1.0),
        "Taylor coefficients of sigma(c + eps) up to eps^order.");

    m.def("phi", py::overload_cast<const Cocharacter&>(&phi), py::arg("m"));

    m.def(
        "weil_pairing",
        [](long long l, long long k, int n, cplx tau) {
            const ModulusTau t(tau);
            return weil_pairing(lift_from_lattice(l, k, n, t), t);
        },
        py::arg("l"), py::arg("k"), py::arg("n"), py::arg("tau") = cplx(0.0, 1.0),
        "w for the lift a = 2 pi i (l + k tau) / n.");

    m.def(
        "delta_a",
        [](const Cocharacter& weights, long long l, long long k, int n, cplx tau, int degree_cap) {
            const ModulusTau t(tau);
            const auto vars = line_names("x", weights.size());
            const RingPtr ring = SeriesRing::make(vars, degree_cap);
            const ExpansionPoint ep = ExpansionPoint::finite(lift_from_lattice(l, k, n, t));
            return series_terms(delta_A(SplitBundle::from_vars(vars, weights), ep, ring, SigmaParams(t)));
        },
        py::arg("m"), py::arg("l"), py::arg("k"), py::arg("n"), py::arg("tau") = cplx(0.0, 1.0),
        py::arg("degree_cap") = 4, "Coefficients of delta_A in x_1..x_d, keyed by exponent tuples.");

    m.def(
        "gluing_check",
        [](const Cocharacter& m0, const Cocharacter& m1, long long l, long long k, int n, cplx tau, int degree_cap) {
            const ModulusTau t(tau);
            const std::vector<std::pair<long long, long long>> shifts{{0, 0}, {0, 1}, {1, -1}};
            const GluingReport rep =
                gluing_check(m0, m1, lift_from_lattice(l, k, n, t), shifts, SigmaParams(t), degree_cap);
            py::dict d;
            d["germ_residual"] = rep.germ_residual;
            d["lift_ratio"] = rep.lift_ratio;
            d["predicted_ratio"] = rep.predicted_ratio;
            d["max_prediction_error"] = rep.max_prediction_error;
            d["string"] = rep.flags_generic.sum_zero && rep.flags_generic.phi_match;
            return d;
        },
        py::arg("m0"), py::arg("m1"), py::arg("l"), py::arg("k"), py::arg("n"), py::arg("tau") = cplx(0.0, 1.0),
        py::arg("degree_cap") = 4);

    m.def(
        "run_suites",
        [](std::vector<std::string> suites, cplx tau, int q_truncation, int degree_cap, double tolerance, int d_max,
           int n_max, std::uint64_t seed, int jobs) {
            const RunConfig cfg =
                make_config(tau, q_truncation, degree_cap, tolerance, d_max, n_max, seed, std::move(suites), jobs);
            std::vector<CheckReport> reports;
            {
                py::gil_scoped_release release;
                reports = run_suites(cfg);
            }
            return to_dicts(reports);
        },
        py::arg("suites") = std::vector<std::string>{"all"}, py::arg("tau") = cplx(0.0, 1.0),
        py::arg("q_truncation") = 64, py::arg("degree_cap") = 6, py::arg("tolerance") = 1e-8, py::arg("d_max") = 4,
        py::arg("n_max") = 6, py::arg("seed") = 1, py::arg("jobs") = 1,
        "Check reports as dicts with the keys of the JSON report.");

    m.attr("SUITES") = std::vector<std::string>(kSuiteNames.begin(), kSuiteNames.end());
}
