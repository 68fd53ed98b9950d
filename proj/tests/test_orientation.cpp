#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "sigorient/orientation.hpp"

using namespace sigorient;

namespace {

const std::vector<std::pair<long long, long long>> kShifts{{0, 0}, {0, 1}, {1, -1}};

} // namespace

TEST_SUITE("orientation") {

TEST_CASE("default coordinate divisor passes all four conditions") {
    const ModulusTau t(cplx(0.3, 0.8));
    const CoordinateData cd = default_coordinate_data(t);
    CHECK(divisor_degree(cd.divisor) == 0);
    CHECK(validate_coordinate_divisor(cd, t).ok());
}

TEST_CASE("coordinate validation rejects each broken condition") {
    const ModulusTau t(cplx(0.0, 1.0));
    const CurvePoint zero = point_from_coords(0.0, 0.0, t);
    const CurvePoint a = point_from_coords(0.5, 0.0, t);
    CoordinateData one;
    one.divisor.add(zero, 1);
    one.divisor.add(a, -1);
    const auto v1 = validate_coordinate_divisor(one, t);
    CHECK(v1.degree_zero);
    CHECK_FALSE(v1.curve_sum_zero);
    CoordinateData two;
    two.divisor.add(zero, 2);
    two.divisor.add(a, -2);
    const auto v2 = validate_coordinate_divisor(two, t);
    CHECK(v2.curve_sum_zero);
    CHECK_FALSE(v2.identity_multiplicity_one);
    CoordinateData generic;
    generic.divisor.add(zero, 1);
    generic.divisor.add(point_from_coords(0.123, 0.0, t), 1);
    generic.divisor.add(point_from_coords(0.877, 0.0, t), -2);
    CHECK_FALSE(validate_coordinate_divisor(generic, t).torsion_support);
    CHECK_THROWS_AS(build_t1(one, SigmaParams(t)), std::invalid_argument);
}

TEST_CASE("t1 vanishes to first order at 0 and is doubly periodic") {
    const ModulusTau t(cplx(0.3, 0.8));
    const SigmaParams p(t);
    const CoordinateFunction t1 = build_t1(default_coordinate_data(t), p);
    const double probe = std::abs(t1(1e-4));
    CHECK(probe > 1e-5);
    CHECK(probe < 1e-3);
    CHECK(std::abs(t1(2e-4) / t1(1e-4) - 2.0) < 1e-3);
    std::mt19937_64 rng(3);
    for (int i = 0; i < 20; ++i) {
        const cplx z = oracle::random_cplx(rng, 2.0);
        const cplx v = t1(z);
        CHECK(std::abs(t1(z + t.lattice_point(1, 0)) - v) / std::abs(v) < 1e-8);
        CHECK(std::abs(t1(z + t.lattice_point(0, 1)) - v) / std::abs(v) < 1e-8);
    }
}

TEST_CASE("t_s: zeros on C<s>, pole at 0, normalization by circle means") {
    for (const cplx tau : {cplx(0.0, 1.0), cplx(0.3, 0.8)}) {
        const ModulusTau t(tau);
        const SigmaParams p(t);
        const CoordinateData cd = default_coordinate_data(t);
        const CoordinateFunction t1 = build_t1(cd, p);
        for (int s = 2; s <= 4; ++s) {
            const CoordinateFunction ts = build_ts(s, cd, p);
            const auto pts = exact_order_points(s, t);
            for (const auto& q : pts) {
                CHECK(std::abs(ts(q.rep)) < 1e-8);
            }
            const int count = static_cast<int>(pts.size());
            CHECK(winding_number(ts, 0.0) == -count);
            // t1^{count} t_s is holomorphic near 0; its value there is the circle mean.
            const auto g = [&](cplx z) { return std::pow(t1(z), count) * ts(z); };
            CHECK(std::abs(oracle::circle_mean(g, 0.0, 0.05) - 1.0) < 1e-8);
            const LaurentJet jet = normalization_jet(s, cd, p);
            CHECK(jet.valuation == 0);
            CHECK(std::abs(jet.unit[0] - 1.0) < 1e-8);
        }
    }
    CHECK_THROWS_AS(build_ts(1, default_coordinate_data(ModulusTau(cplx(0, 1))), SigmaParams(ModulusTau(cplx(0, 1)))),
                    std::invalid_argument);
}

TEST_CASE("Laurent jets multiply valuations") {
    const LaurentJet a{1, {2.0, 1.0}};
    const LaurentJet b{-2, {0.5, 0.0}};
    const LaurentJet c = laurent_multiply(a, b);
    CHECK(c.valuation == -1);
    CHECK(std::abs(c.unit[0] - 1.0) < 1e-15);
    CHECK(std::abs(c.unit[1] - 0.5) < 1e-15);
    CHECK(laurent_pow(a, 3).valuation == 3);
}

TEST_CASE("Thom sigma class examples") {
    const ModulusTau t(cplx(0.0, 1.0));
    const SigmaParams p(t);
    const std::vector<std::string> vars{"x1", "x2"};
    const RingPtr ring = SeriesRing::make(vars, 5);
    const SplitBundle v = SplitBundle::from_vars(vars, {1, -1});

    // Odd weights move at n = 2; even ones are fixed.
    const ExpansionPoint half = ExpansionPoint::finite(lift_from_lattice(1, 0, 2, t));
    const auto odd = thom_sigma_class(v, half, ring, p);
    CHECK(odd.rank == 0);
    const auto even = thom_sigma_class(v.with_weights({2, -2}), half, ring, p);
    CHECK(even.rank == 2);
    CHECK(max_abs_diff(even.euler_unit, TruncatedSeries::constant(ring, 1.0)) < 1e-15);

    const LiftData third = lift_from_lattice(1, 0, 3, t);
    const auto g = thom_sigma_class(v, ExpansionPoint::finite(third), ring, p);
    CHECK(g.rank == 0);
    CHECK(max_abs_diff(g.thom_factor, TruncatedSeries::constant(ring, 1.0)) < 1e-15);
    const cplx ref = oracle::sigma_theta(third.a_lift, t.tau()) * oracle::sigma_theta(-third.a_lift, t.tau());
    CHECK(std::abs(g.euler_unit.constant_term() - ref) / std::abs(ref) < 1e-12);

    const SplitBundle zero = SplitBundle::from_vars(vars, {0, 0});
    const auto z = thom_sigma_class(zero, ExpansionPoint::finite(third), ring, p);
    CHECK(max_abs_diff(z.thom_factor, euler_sigma(zero, ring, p)) < 1e-15);
}

TEST_CASE("multiplicativity") {
    const ModulusTau t(cplx(0.3, 0.8));
    const SigmaParams p(t);
    const RingPtr ring = SeriesRing::make({"a1", "a2", "a3", "b1", "b2"}, 4);
    const SplitBundle v = SplitBundle::from_vars({"a1", "a2", "a3"}, {3, -1, -2});
    const SplitBundle w = SplitBundle::from_vars({"b1", "b2"}, {2, -2});
    const ExpansionPoint ep = ExpansionPoint::finite(lift_from_lattice(1, 2, 3, t));
    CHECK(multiplicativity_check(v, w, ep, ring, p) < 1e-10);
    CHECK(multiplicativity_check(v, SplitBundle{}, ep, ring, p) < 1e-12);
    const auto cancel = thom_sigma_class(v.direct_sum(v.negated()), ep, ring, p);
    CHECK(max_abs_diff(cancel.thom_factor * cancel.euler_unit, TruncatedSeries::constant(ring, 1.0)) < 1e-10);
}

TEST_CASE("gluing: identical components") {
    const ModulusTau t(cplx(0.0, 1.0));
    const SigmaParams p(t);
    const auto rep = gluing_check({1, -1}, {1, -1}, lift_from_lattice(1, 1, 2, t), kShifts, p, 4);
    CHECK(rep.max_germ_residual < 1e-12);
    CHECK(rep.max_lift_deviation < 1e-12);
}

TEST_CASE("gluing: String pair at n = 3 over three lifts") {
    const ModulusTau t(cplx(0.3, 0.8));
    const SigmaParams p(t);
    for (const LiftData& lift : {lift_from_lattice(1, 0, 3, t), lift_from_lattice(0, 1, 3, t),
                                 lift_from_lattice(1, 1, 3, t), lift_from_lattice(2, 1, 3, t)}) {
        const auto rep = gluing_check({2, -1, -1}, {1, 1, -2}, lift, kShifts, p, 4);
        CHECK(rep.flags_generic.phi_match);
        CHECK(rep.max_germ_residual < 1e-8);
        CHECK(rep.max_lift_deviation < 1e-8);
        REQUIRE(rep.lift_ratio.size() == 3);
    }
}

TEST_CASE("gluing: broken pair shows the root of unity") {
    const ModulusTau t(cplx(0.0, 1.0));
    const SigmaParams p(t);
    const auto rep = gluing_check({1, -1}, {2, -2}, lift_from_lattice(1, 0, 2, t), kShifts, p, 4);
    CHECK_FALSE(rep.flags_finite.phi_match);
    CHECK(rep.max_prediction_error < 1e-10);
    // w = -1 at a = pi i and dphi = -3 is odd, so both shifts with s != 0 flip the sign.
    CHECK(std::abs(rep.lift_ratio[0] - 1.0) < 1e-12);
    CHECK(std::abs(rep.lift_ratio[1] + 1.0) < 1e-10);
    CHECK(std::abs(rep.lift_ratio[2] + 1.0) < 1e-10);
}

TEST_CASE("Euler divisors have degree 2 phi") {
    const ModulusTau t(cplx(0.3, 0.8));
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (const Cocharacter& m : {Cocharacter{1, -1}, Cocharacter{2, -1, -1}, Cocharacter{4, -3, 0, -1}}) {
        std::vector<CurvePoint> pts;
        for (std::size_t i = 0; i < m.size(); ++i) {
            pts.push_back(point_from_coords(u(rng), u(rng), t));
        }
        CHECK(divisor_degree(euler_divisor(m, pts, t)) == 2 * phi(m));
    }
}

TEST_CASE("String divisor: principal for matched data, degree gap otherwise") {
    const ModulusTau t(cplx(0.0, 1.0));
    const SigmaParams p(t);
    const CurvePoint o = point_from_coords(0.0, 0.0, t);
    const auto same = string_divisor_function({1, -1}, {o, o}, {1, -1}, {o, o}, p);
    CHECK(same.divisor.empty());
    CHECK(same.principal);
    const auto gap = string_divisor_function({1, -1}, {o, o}, {2, -2}, {o, o}, p);
    CHECK(gap.degree_gap == -6);
    CHECK(gap.degree == -6);
    CHECK_FALSE(gap.principal);
    // m0 = (2,-1,-1), m1 = (1,1,-2), weighted sums both zero
    const CurvePoint h = point_from_coords(0.5, 0.0, t);
    const auto rep = string_divisor_function({2, -1, -1}, {h, h, o}, {1, 1, -2}, {h, o, h}, p);
    REQUIRE(rep.principal);
    REQUIRE(rep.function.has_value());
    const cplx z(0.31, 0.77);
    const cplx v = (*rep.function)(z);
    CHECK(std::abs((*rep.function)(z + t.lattice_point(0, 1)) - v) / std::abs(v) < 1e-8);
    for (const auto& [pt, m] : rep.divisor.entries()) {
        CHECK(winding_number(*rep.function, pt.rep) == m);
    }
}

} // TEST_SUITE
