#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "sigorient/sigma.hpp"

using namespace sigorient;

namespace {

const cplx kTaus[] = {cplx(0.0, 1.0), cplx(0.3, 0.8)};

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

} // namespace

TEST_SUITE("sigma") {

TEST_CASE("product agrees with the theta-series form") {
    std::mt19937_64 rng(1);
    for (const cplx tau : kTaus) {
        const SigmaParams p{ModulusTau(tau)};
        for (int i = 0; i < 50; ++i) {
            const cplx z = oracle::random_cplx(rng, 3.0);
            CHECK(rel(sigma(z, p), oracle::sigma_theta(z, tau)) < 1e-12);
        }
    }
}

TEST_CASE("odd, with derivative one at the origin") {
    const SigmaParams p(ModulusTau(cplx(0.0, 1.0)));
    const cplx z(0.4, -0.9);
    CHECK(std::abs(sigma(-z, p) + sigma(z, p)) < 1e-14);
    CHECK(std::abs(sigma(1e-7, p) / 1e-7 - 1.0) < 1e-9);
}

TEST_CASE("transformation law against the theta oracle") {
    std::mt19937_64 rng(4);
    for (const cplx tau : kTaus) {
        const ModulusTau t(tau);
        const SigmaParams p(t);
        for (int k = -3; k <= 3; ++k) {
            for (int l = -3; l <= 3; ++l) {
                const cplx z = oracle::random_cplx(rng, 1.0);
                const cplx lam = kTwoPiI * (static_cast<double>(l) + static_cast<double>(k) * tau);
                const cplx factor = (((l + k) % 2 == 0) ? 1.0 : -1.0) *
                                    std::exp(-static_cast<double>(k) * z - cplx(0.0, kPi) * double(k * k) * tau);
                CHECK(rel(oracle::sigma_theta(z + lam, tau), factor * oracle::sigma_theta(z, tau)) < 1e-10);
                CHECK(check_transform(z, k, l, p) < 1e-9);
            }
        }
    }
}

TEST_CASE("zeros at lattice points only") {
    const ModulusTau t(cplx(0.3, 0.8));
    const SigmaParams p(t);
    CHECK(std::abs(sigma(t.lattice_point(2, -1), p)) < 1e-9);
    CHECK(std::abs(sigma(t.from_coords(0.5, 0.5), p)) > 1e-3);
}

TEST_CASE("jets match Cauchy integrals") {
    for (const cplx tau : kTaus) {
        const SigmaParams p{ModulusTau(tau)};
        for (const cplx c : {cplx(0.0), cplx(0.7, 1.1), cplx(-2.0, 4.0)}) {
            const auto jet = sigma_jet_scaled(c, 6, p).materialize();
            const auto ref = oracle::cauchy_jet([&](cplx z) { return oracle::sigma_theta(z, tau); }, c, 6);
            const double scale = std::abs(ref[0]) + std::abs(ref[1]);
            for (int j = 0; j <= 6; ++j) {
                CHECK(std::abs(jet[j] - ref[j]) / scale < 1e-11);
            }
        }
    }
}

TEST_CASE("reduced jets reproduce the jet at a far center") {
    const ModulusTau t(cplx(0.3, 0.8));
    const SigmaParams p(t);
    const cplx c = t.lattice_point(3, 2) + cplx(0.2, 0.4);
    const auto direct = sigma_jet_scaled(c, 5, p).materialize();
    const SigmaReducedJet r = sigma_jet_reduced(c, 5, p);
    CHECK_FALSE(r.at_lattice);
    CHECK(r.linear == -2.0);
    // exp(log_const + linear eps) * jet(eps), expanded to order 5
    const auto jet = r.jet.materialize();
    std::vector<cplx> e(6);
    double f = 1.0;
    for (int j = 0; j <= 5; ++j) {
        e[j] = std::pow(r.linear, j) / f;
        f *= (j + 1);
    }
    const double scale = std::abs(direct[0]);
    for (int j = 0; j <= 5; ++j) {
        cplx s = 0.0;
        for (int i = 0; i <= j; ++i) {
            s += e[i] * jet[j - i];
        }
        CHECK(std::abs(std::exp(r.log_const) * s - direct[j]) / scale < 1e-11);
    }
}

TEST_CASE("reduced jets at lattice points are the jet at the origin") {
    const ModulusTau t(cplx(0.0, 1.0));
    const SigmaParams p(t);
    const SigmaReducedJet r = sigma_jet_reduced(t.lattice_point(1, 1), 4, p);
    CHECK(r.at_lattice);
    // (-1)^{l+k} e^{-pi i k^2 tau} with l = k = 1
    CHECK(std::abs(std::exp(r.log_const) - std::exp(-kPi * cplx(0, 1) * t.tau())) < 1e-12);
    const auto jet = r.jet.materialize();
    CHECK(std::abs(jet[0]) < 1e-15);
    CHECK(std::abs(jet[1] - 1.0) < 1e-14);
}

TEST_CASE("sigma products refuse lattice points in the denominator") {
    const ModulusTau t(cplx(0.0, 1.0));
    const SigmaParams p(t);
    const std::vector<cplx> num{cplx(0.5, 0.1)};
    const std::vector<cplx> den{t.lattice_point(1, 0)};
    CHECK_THROWS_AS(sigma_product(num, den, p), std::domain_error);
}

TEST_CASE("truncation below double precision is flagged") {
    CHECK_FALSE(SigmaParams(ModulusTau(cplx(0.0, 1.0))).precision_limited());
    CHECK(SigmaParams(ModulusTau(cplx(0.0, 0.05))).precision_limited());
}

} // TEST_SUITE
