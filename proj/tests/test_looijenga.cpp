#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "sigorient/looijenga.hpp"

using namespace sigorient;

namespace {

Cocharacter random_sum_zero(std::mt19937_64& rng, int d, int bound) {
    std::uniform_int_distribution<int> u(-bound, bound);
    Cocharacter m(d);
    long long s = 0;
    for (int i = 0; i + 1 < d; ++i) {
        m[i] = u(rng);
        s += m[i];
    }
    m[d - 1] = -s;
    return m;
}

LoopPoint random_su_point(std::mt19937_64& rng, int d) {
    std::uniform_real_distribution<double> r(-0.4, 0.4);
    std::uniform_real_distribution<double> a(-kPi, kPi);
    LoopPoint p{{}, true};
    cplx prod = 1.0;
    for (int i = 0; i + 1 < d; ++i) {
        p.u.push_back(std::exp(cplx(r(rng), a(rng))));
        prod *= p.u.back();
    }
    p.u.push_back(1.0 / prod);
    return p;
}

} // namespace

TEST_SUITE("looijenga") {

TEST_CASE("exponent evaluation is the monomial it names") {
    const ModulusTau t(cplx(0.3, 0.8));
    AutomorphyExponent f;
    f.u_exponent = {2, -1};
    f.z_exponent = 3;
    f.q_exponent = -5;
    f.q_denominator = 2;
    const LoopPoint u{{cplx(1.1, 0.2), cplx(0.7, -0.4)}, false};
    const cplx zq(0.9, 0.3);
    const cplx ref = u.u[0] * u.u[0] / u.u[1] * zq * zq * zq * std::exp(kTwoPiI * t.tau() * (-2.5));
    CHECK(std::abs(evaluate(f, u, zq, t) - ref) / std::abs(ref) < 1e-13);
    CHECK_THROWS_AS(validate_loop_point(LoopPoint{{2.0, 2.0}, true}), std::invalid_argument);
}

TEST_CASE("cocycle condition: exponents and values") {
    std::mt19937_64 rng(31);
    const ModulusTau t(cplx(0.0, 1.0));
    for (int trial = 0; trial < 100; ++trial) {
        const int d = 2 + trial % 4;
        const Cocharacter m = random_sum_zero(rng, d, 3);
        const Cocharacter mp = random_sum_zero(rng, d, 3);
        CHECK(cocycle_condition_check(m, mp));
        Cocharacter sum(d);
        LoopPoint uq{{}, false};
        const LoopPoint u = random_su_point(rng, d);
        for (int i = 0; i < d; ++i) {
            sum[i] = m[i] + mp[i];
            uq.u.push_back(u.u[i] * std::pow(t.q(), static_cast<double>(m[i])));
        }
        const cplx lhs = cocycle_L(sum, u, t);
        const cplx rhs = cocycle_L(mp, uq, t) * cocycle_L(m, u, t);
        CHECK(std::abs(lhs - rhs) / std::abs(rhs) < 1e-10);
    }
}

TEST_CASE("section property against the theta oracle") {
    std::mt19937_64 rng(32);
    for (const cplx tau : {cplx(0.0, 1.0), cplx(0.3, 0.8)}) {
        const ModulusTau t(tau);
        const SigmaParams p(t);
        for (int trial = 0; trial < 30; ++trial) {
            const int d = 2 + trial % 3;
            const Cocharacter m = random_sum_zero(rng, d, 2);
            const LoopPoint u = random_su_point(rng, d);
            cplx lhs = 1.0;
            cplx rhs = cocycle_L(m, u, t);
            for (int i = 0; i < d; ++i) {
                const cplx x = std::log(u.u[i]);
                lhs *= oracle::sigma_theta(x + kTwoPiI * tau * static_cast<double>(m[i]), tau);
                rhs *= oracle::sigma_theta(x, tau);
            }
            CHECK(std::abs(lhs - rhs) / std::abs(rhs) < 1e-9);
            CHECK(section_check(m, u, p) < 1e-8);
        }
    }
}

TEST_CASE("Weil factor is w^{s phi}") {
    const ModulusTau t(cplx(0.3, 0.8));
    const LiftData lift = lift_from_lattice(1, 2, 5, t);
    const cplx w = weil_pairing(lift, t);
    const Cocharacter m{2, -1, -1}; // phi = 3
    CHECK(std::abs(weil_factor(m, lift, 2, t) - std::pow(w, 6)) < 1e-12);
    CHECK(std::abs(weil_factor({5, -5}, lift, 1, t) - 1.0) < 1e-12); // phi = 25 = 0 mod 5
}

TEST_CASE("pair trivialization iff phi agrees") {
    const ModulusTau t(cplx(0.0, 1.0));
    const auto good = pair_trivialization_check({2, -1, -1}, {1, 1, -2}, t, 50, 7);
    CHECK(good.phi_gap == 0);
    CHECK(good.exponent_trivial);
    CHECK(good.max_constraint_residual < 1e-10);
    CHECK(good.max_deviation < 1e-8);
    const auto bad = pair_trivialization_check({1, -1}, {2, -2}, t, 50, 7);
    CHECK(bad.phi_gap == -3);
    CHECK_FALSE(bad.exponent_trivial);
    CHECK(bad.max_deviation > 1e-3);
}

TEST_CASE("gamma lift law along tau-shifts") {
    const ModulusTau t(cplx(0.3, 0.8));
    const SigmaParams p(t);
    const std::vector<std::string> vars{"x1", "x2", "x3"};
    const RingPtr ring = SeriesRing::make({"x1", "x2", "x3", "z"}, 4);
    const SplitBundle v = SplitBundle::from_vars(vars, {2, -1, -1});
    const LiftData lift = lift_from_lattice(1, 1, 4, t);
    const auto rep = gamma_lift_law_check(v, ExpansionPoint::finite(lift),
                                          ExpansionPoint::finite(shift_lift(lift, 0, 1, t)), ring, p);
    CHECK(rep.proportionality_residual < 1e-10);
    CHECK(std::abs(rep.measured - rep.expected) < 1e-10);
    CHECK(std::abs(rep.expected - 1.0) > 0.5); // w^3 with w a primitive 4th root
}

} // TEST_SUITE
