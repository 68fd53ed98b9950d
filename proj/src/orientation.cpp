#include "sigorient/orientation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace sigorient {

namespace {

long long mod_floor(long long a, long long n) { return ((a % n) + n) % n; }

std::vector<std::string> numbered(const std::string& stem, std::size_t d) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < d; ++i) {
        out.push_back(stem + std::to_string(i + 1));
    }
    return out;
}

} // namespace

CoordinateData default_coordinate_data(const ModulusTau& tau) {
    const CurvePoint a = reduce_point(cplx(0.0, kPi), tau);
    const CurvePoint b = reduce_point(cplx(0.0, kPi) * tau.tau(), tau);
    CoordinateData cd;
    cd.divisor.add(reduce_point(0.0, tau), 1);
    cd.divisor.add(a, 1);
    cd.divisor.add(b, -1);
    cd.divisor.add(point_add(a, point_neg(b, tau), tau), -1);
    return cd;
}

CoordinateValidation validate_coordinate_divisor(const CoordinateData& cd, const ModulusTau& tau, int n_max) {
    CoordinateValidation v;
    v.degree_zero = divisor_degree(cd.divisor) == 0;
    v.curve_sum_zero = is_zero_point(divisor_curve_sum(cd.divisor, tau));
    v.torsion_support = std::all_of(cd.divisor.entries().begin(), cd.divisor.entries().end(),
                                    [&](const auto& e) { return point_order(e.first, n_max).has_value(); });
    v.identity_multiplicity_one = cd.divisor.multiplicity(reduce_point(0.0, tau)) == 1;
    return v;
}

LaurentJet laurent_jet(const EllipticFunction& f, int order, const SigmaParams& p) {
    auto ring = SeriesRing::make({"eps"}, std::max(order, 1));
    const int cap = ring->degree_cap();
    const TruncatedSeries eps = TruncatedSeries::variable(ring, 0);
    LaurentJet out;
    TruncatedSeries unit = series_exp(eps * (-static_cast<double>(f.k0())));
    for (const auto& [a, m] : f.factors()) {
        std::vector<cplx> c = sigma_jet_scaled(-a, cap + 1, p).materialize();
        if (is_zero_point(reduce_point(a, p.modulus()))) {
            // sigma(eps - a) = eps * (unit), a a lattice point
            c.erase(c.begin());
            out.valuation += static_cast<int>(m);
        } else {
            c.pop_back();
        }
        unit = unit * series_pow(TruncatedSeries(ring, std::move(c)), static_cast<int>(m));
    }
    out.unit.assign(unit.coefficients().begin(), unit.coefficients().end());
    return out;
}

LaurentJet laurent_multiply(const LaurentJet& a, const LaurentJet& b) {
    const std::size_t m = std::min(a.unit.size(), b.unit.size());
    LaurentJet out;
    out.valuation = a.valuation + b.valuation;
    out.unit.assign(m, cplx{});
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; i + j < m; ++j) {
            out.unit[i + j] += a.unit[i] * b.unit[j];
        }
    }
    return out;
}

LaurentJet laurent_pow(const LaurentJet& a, int e) {
    if (e < 0) {
        throw std::invalid_argument("negative Laurent power");
    }
    LaurentJet out;
    out.unit.assign(a.unit.size(), cplx{});
    if (!out.unit.empty()) {
        out.unit[0] = 1.0;
    }
    for (int i = 0; i < e; ++i) {
        out = laurent_multiply(out, a);
    }
    return out;
}

CoordinateFunction build_t1(const CoordinateData& cd, const SigmaParams& p) {
    if (!validate_coordinate_divisor(cd, p.modulus()).ok()) {
        throw std::invalid_argument("invalid coordinate divisor");
    }
    return CoordinateFunction{build_elliptic_function(cd.divisor, p), 1.0};
}

namespace {

EllipticFunction unnormalized_ts(int s, const ModulusTau& tau, const SigmaParams& p, long long& count) {
    Divisor d;
    const auto pts = exact_order_points(s, tau);
    count = static_cast<long long>(pts.size());
    for (const auto& pt : pts) {
        d.add(pt, 1);
    }
    d.add(reduce_point(0.0, tau), -count);
    return build_elliptic_function(d, p);
}

} // namespace

CoordinateFunction build_ts(int s, const CoordinateData& cd, const SigmaParams& p) {
    if (s < 2) {
        throw std::invalid_argument("t_s is defined for s >= 2");
    }
    long long count = 0;
    EllipticFunction g = unnormalized_ts(s, p.modulus(), p, count);
    const LaurentJet t1 = laurent_jet(build_t1(cd, p).f, 2, p);
    const LaurentJet gj = laurent_jet(g, 2, p);
    const LaurentJet prod = laurent_multiply(laurent_pow(t1, static_cast<int>(count)), gj);
    if (prod.valuation != 0) {
        throw std::logic_error("t_1^N t_s is not regular and non-vanishing at the origin");
    }
    return CoordinateFunction{std::move(g), 1.0 / prod.unit[0]};
}

LaurentJet normalization_jet(int s, const CoordinateData& cd, const SigmaParams& p, int order) {
    const CoordinateFunction ts = build_ts(s, cd, p);
    long long count = 0;
    unnormalized_ts(s, p.modulus(), p, count);
    LaurentJet j = laurent_multiply(laurent_pow(laurent_jet(build_t1(cd, p).f, order, p), static_cast<int>(count)),
                                    laurent_jet(ts.f, order, p));
    for (auto& c : j.unit) {
        c *= ts.lambda;
    }
    return j;
}

ThomClassGerm thom_sigma_class(const SplitBundle& v, const ExpansionPoint& ep, const RingPtr& ring,
                               const SigmaParams& p) {
    if (!is_sum_zero(v.weights0()) || !is_sum_zero(v.weights1())) {
        throw std::invalid_argument("Thom class germs need sum-zero components");
    }
    const SplitBundle fixed = fixed_part(v, ep);
    const SplitBundle moving = moving_part(v, ep);
    ThomClassGerm g{ep, euler_sigma(fixed, ring, p, ep.a_lift()), euler_sigma(moving, ring, p, ep.a_lift()),
                    static_cast<long long>(fixed.v0.size()) - static_cast<long long>(fixed.v1.size())};
    if (!(std::abs(g.euler_unit.constant_term()) > kUnitTolerance)) {
        throw NonUnitError("the moving Euler factor vanishes at the expansion point");
    }
    return g;
}

double multiplicativity_check(const SplitBundle& v, const SplitBundle& w, const ExpansionPoint& ep,
                              const RingPtr& ring, const SigmaParams& p) {
    const ThomClassGerm gv = thom_sigma_class(v, ep, ring, p);
    const ThomClassGerm gw = thom_sigma_class(w, ep, ring, p);
    const ThomClassGerm gs = thom_sigma_class(v.direct_sum(w), ep, ring, p);
    return std::max(scaled_diff(gs.thom_factor, gv.thom_factor * gw.thom_factor),
                    scaled_diff(gs.euler_unit, gv.euler_unit * gw.euler_unit));
}

GluingReport gluing_check(const Cocharacter& m0, const Cocharacter& m1, const LiftData& lift,
                          const std::vector<std::pair<long long, long long>>& shifts, const SigmaParams& p,
                          int degree_cap) {
    const ModulusTau& tau = p.modulus();
    validate_lift(lift, tau);
    GluingReport rep;
    rep.flags_finite = string_pair_flags(m0, m1, lift.n);
    rep.flags_generic = string_pair_flags(m0, m1, std::nullopt);

    const auto x0 = numbered("a", m0.size());
    const auto x1 = numbered("b", m1.size());
    std::vector<std::string> names = x0;
    names.insert(names.end(), x1.begin(), x1.end());
    names.emplace_back(kZ);
    const RingPtr ring = SeriesRing::make(names, degree_cap);
    const SplitBundle v = SplitBundle::graded(x0, m0, x1, m1);

    // Locus L = sum m0 x0 - sum m1 x1 = 0, solved for the variable with the
    // smallest nonzero coefficient (x1 entries first). L = 0 identically
    // leaves the full ring.
    std::vector<std::pair<std::string, double>> form;
    for (std::size_t i = 0; i < m1.size(); ++i) {
        form.emplace_back(x1[i], -static_cast<double>(m1[i]));
    }
    for (std::size_t i = 0; i < m0.size(); ++i) {
        form.emplace_back(x0[i], static_cast<double>(m0[i]));
    }
    std::size_t j = form.size();
    for (std::size_t i = 0; i < form.size(); ++i) {
        if (form[i].second != 0.0 && (j == form.size() || std::abs(form[i].second) < std::abs(form[j].second))) {
            j = i;
        }
    }
    std::vector<std::string> locus_names;
    for (const auto& name : names) {
        if (j == form.size() || name != form[j].first) {
            locus_names.push_back(name);
        }
    }
    const RingPtr target = SeriesRing::make(locus_names, degree_cap);
    std::map<std::string, TruncatedSeries> locus;
    if (j < form.size()) {
        TruncatedSeries rest(target);
        for (std::size_t i = 0; i < form.size(); ++i) {
            if (i != j && form[i].second != 0.0) {
                rest += TruncatedSeries::variable(target, form[i].first) * form[i].second;
            }
        }
        locus.emplace(form[j].first, rest * (-1.0 / form[j].second));
    }
    const auto restrict_locus = [&](const TruncatedSeries& s) { return substitute(s, target, locus); };

    const auto restrict_parts = [&](const GradedSeries& g) {
        return g.mapped(restrict_locus);
    };
    std::optional<GradedSeries> first;
    const long long dphi = phi(m0) - phi(m1);
    const cplx w = weil_pairing(lift, tau);
    for (const auto& [r, s] : shifts) {
        const LiftData l = shift_lift(lift, r, s, tau);
        const ExpansionPoint ep = ExpansionPoint::finite(l);
        const GradedSeries db = restrict_parts(delta_borel_parts(v, ep, ring, p));
        const GradedSeries te = restrict_parts(euler_sigma_parts(v, ring, p, l.a_lift));
        const double res = graded_scaled_diff(db, te);
        rep.shifts.emplace_back(r, s);
        rep.germ_residual.push_back(res);
        rep.max_germ_residual = std::max(rep.max_germ_residual, res);

        const int n = lift.n;
        const long long e_w = mod_floor(mod_floor(s, n) * mod_floor(dphi, n), n);
        const long long e_r = mod_floor(mod_floor(r, n) * mod_floor(lift.k, n) % n * mod_floor(dphi, n), n);
        const cplx predicted = std::pow(w, static_cast<int>(e_w)) * std::exp(kTwoPiI * (static_cast<double>(e_r) / n));
        rep.predicted_ratio.push_back(predicted);
        if (!first) {
            first = db;
            rep.lift_ratio.push_back(1.0);
            continue;
        }
        const cplx ratio = graded_proportionality(db, *first);
        rep.lift_ratio.push_back(ratio);
        rep.max_lift_deviation = std::max(rep.max_lift_deviation, graded_scaled_diff(db, *first));
        rep.max_prediction_error = std::max(rep.max_prediction_error, std::abs(ratio - predicted));
    }
    return rep;
}

Divisor euler_divisor(const Cocharacter& m, const std::vector<CurvePoint>& points, const ModulusTau& tau) {
    if (m.size() != points.size()) {
        throw std::invalid_argument("one curve point per weight is required");
    }
    Divisor d;
    for (std::size_t i = 0; i < m.size(); ++i) {
        d.add(torsion_divisor(points[i], m[i], tau));
    }
    return d;
}

StringDivisorReport string_divisor_function(const Cocharacter& m0, const std::vector<CurvePoint>& p0,
                                            const Cocharacter& m1, const std::vector<CurvePoint>& p1,
                                            const SigmaParams& p) {
    const ModulusTau& tau = p.modulus();
    StringDivisorReport rep;
    rep.divisor = euler_divisor(m0, p0, tau) - euler_divisor(m1, p1, tau);
    rep.degree = divisor_degree(rep.divisor);
    rep.degree_gap = 2 * (phi(m0) - phi(m1));
    rep.curve_sum = divisor_curve_sum(rep.divisor, tau);
    rep.principal = is_principal(rep.divisor, tau);
    if (rep.principal) {
        rep.function = build_elliptic_function(rep.divisor, p);
    }
    return rep;
}

} // namespace sigorient
