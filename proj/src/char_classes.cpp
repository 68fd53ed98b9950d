#include "sigorient/char_classes.hpp"

#include <cmath>
#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>

namespace sigorient {

namespace {

// Renormalized to unit max coefficient after every factor; the magnitude
// moves to log_scale.
struct Scaled {
    double log_scale = 0.0;
    TruncatedSeries s;

    explicit Scaled(const RingPtr& ring) : s(TruncatedSeries::constant(ring, 1.0)) {}

    void mul(const TruncatedSeries& f) {
        s = s * f;
        const double m = s.max_abs();
        if (m > 0.0 && std::isfinite(m)) {
            s *= 1.0 / m;
            log_scale += std::log(m);
        }
    }
};

// Accumulates a FactoredSeries one sigma factor at a time. Each sigma is
// expanded at its reduced center, so lifts far from the origin only enter
// through the exponential, where they cancel before anything is
// exponentiated.
struct Accumulator {
    cplx log_const{};
    TruncatedSeries linear;
    Scaled unit;
    Scaled fixed;

    explicit Accumulator(const RingPtr& ring) : linear(ring), unit(ring), fixed(ring) {}

    void sigma(const TruncatedSeries& arg, cplx center, const SigmaParams& p) {
        const SigmaReducedJet r = sigma_jet_reduced(center, arg.ring()->degree_cap(), p);
        log_const += r.log_const + r.jet.log_scale;
        linear += arg * r.linear;
        (r.at_lattice ? fixed : unit).mul(compose_univariate(r.jet.coeffs, arg));
    }

    FactoredSeries finish() const {
        return FactoredSeries{log_const + unit.log_scale + fixed.log_scale, linear, unit.s, fixed.s};
    }
};

using LineFilter = std::function<bool(const Line&)>;

// sigma(x_j [+ m_j z] + m_j shift) over the selected lines.
void multiply_sigma_lines(Accumulator& acc, const std::vector<Line>& lines, const RingPtr& ring, cplx shift,
                          bool formal_z, const SigmaParams& p, const LineFilter& keep) {
    for (const auto& line : lines) {
        if (!keep(line)) {
            continue;
        }
        const double m = static_cast<double>(line.weight);
        TruncatedSeries arg = TruncatedSeries::variable(ring, line.var);
        if (formal_z && line.weight != 0) {
            arg += TruncatedSeries::variable(ring, kZ) * m;
        }
        acc.sigma(arg, m * shift, p);
    }
}

bool keep_for(DeltaPart part, const ExpansionPoint& ep, const Line& line) {
    switch (part) {
    case DeltaPart::prime:
        return !ep.is_fixed_weight(line.weight);
    case DeltaPart::double_prime:
        return ep.is_fixed_weight(line.weight);
    case DeltaPart::full:
        break;
    }
    return true;
}

FactoredSeries delta_component(const std::vector<Line>& lines, const ExpansionPoint& ep, const RingPtr& ring,
                               const SigmaParams& p, DeltaPart part) {
    Accumulator acc(ring);
    const LineFilter keep = [&](const Line& l) { return keep_for(part, ep, l); };
    multiply_sigma_lines(acc, lines, ring, ep.a_lift(), false, p, keep);
    if (!ep.is_generic()) {
        const LiftData& lift = *ep.lift;
        const double kn = static_cast<double>(lift.k) / lift.n;
        for (const auto& line : lines) {
            if (!keep(line)) {
                continue;
            }
            const double m = static_cast<double>(line.weight);
            acc.linear += TruncatedSeries::variable(ring, line.var) * (kn * m);
            acc.log_const += kn * lift.a_lift * (0.5 * m * m);
        }
    }
    return acc.finish();
}

FactoredSeries sigma_component(const std::vector<Line>& lines, const RingPtr& ring, const SigmaParams& p,
                               cplx z_shift) {
    Accumulator acc(ring);
    multiply_sigma_lines(acc, lines, ring, z_shift, ring->has_var(kZ), p, [](const Line&) { return true; });
    return acc.finish();
}

bool same_factor(const TruncatedSeries& a, const TruncatedSeries& b) {
    const double scale = std::max(a.max_abs(), b.max_abs());
    return scale == 0.0 || max_abs_diff(a, b) <= 1e-12 * scale;
}

// num / den as one series. Equal fixed factors cancel; otherwise throws
// NonUnitError when den vanishes at 0.
TruncatedSeries ratio_value(const FactoredSeries& num, const FactoredSeries& den) {
    const bool cancel = same_factor(num.fixed, den.fixed);
    const TruncatedSeries d = cancel ? den.unit : den.unit * den.fixed;
    if (!(std::abs(d.constant_term()) > kUnitTolerance)) {
        throw NonUnitError("denominator class vanishes at the expansion point");
    }
    const TruncatedSeries n = cancel ? num.unit : num.unit * num.fixed;
    return series_exp(num.linear - den.linear) * n * series_invert(d) * std::exp(num.log_const - den.log_const);
}

TruncatedSeries graded_value(const GradedSeries& g, bool graded) {
    return graded ? ratio_value(g.num, g.den) : g.num.value();
}

// a.num b.den = exp(log_ratio) lhs against a.den b.num = rhs. The fixed
// factors are cancelled when they coincide: they are the same product of
// sigma(arg) on both sides and may vanish below the degree cap.
struct CrossTerms {
    TruncatedSeries lhs;
    TruncatedSeries rhs;
    cplx log_ratio;
};

CrossTerms cross_terms(const GradedSeries& a, const GradedSeries& b) {
    const cplx dc = a.num.log_const + b.den.log_const - a.den.log_const - b.num.log_const;
    const TruncatedSeries dl = a.num.linear + b.den.linear - a.den.linear - b.num.linear;
    TruncatedSeries lhs = series_exp(dl) * a.num.unit * b.den.unit;
    TruncatedSeries rhs = a.den.unit * b.num.unit;
    if (!same_factor(a.num.fixed, b.num.fixed) || !same_factor(a.den.fixed, b.den.fixed)) {
        lhs = lhs * a.num.fixed * b.den.fixed;
        rhs = rhs * a.den.fixed * b.num.fixed;
    }
    return {lhs, rhs, dc};
}

long long mod_floor(long long a, long long n) { return ((a % n) + n) % n; }

// x_j -> x_j + m_j z
std::map<std::string, TruncatedSeries> borel_shift(const SplitBundle& v, const RingPtr& ring) {
    const TruncatedSeries z = TruncatedSeries::variable(ring, kZ);
    std::map<std::string, TruncatedSeries> shift;
    for (const auto* lines : {&v.v0, &v.v1}) {
        for (const auto& l : *lines) {
            shift.insert_or_assign(l.var, TruncatedSeries::variable(ring, l.var) + z * static_cast<double>(l.weight));
        }
    }
    return shift;
}

void require_congruent(const Cocharacter& a, const Cocharacter& b, int n) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("lift length does not match the bundle");
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (mod_floor(a[i] - b[i], n) != 0) {
            throw std::invalid_argument("weights are not a lift of the bundle's reduction");
        }
    }
}

std::vector<Line> make_lines(const std::vector<std::string>& vars, const Cocharacter& m) {
    if (vars.size() != m.size()) {
        throw std::invalid_argument("variable and weight lists differ in length");
    }
    std::vector<Line> out;
    for (std::size_t i = 0; i < vars.size(); ++i) {
        out.push_back({vars[i], m[i]});
    }
    return out;
}

Cocharacter weights_of(const std::vector<Line>& lines) {
    Cocharacter m;
    for (const auto& l : lines) {
        m.push_back(l.weight);
    }
    return m;
}

TruncatedSeries chern_total_component(const std::vector<Line>& lines, const RingPtr& ring) {
    TruncatedSeries r = TruncatedSeries::constant(ring, 1.0);
    const TruncatedSeries z = TruncatedSeries::variable(ring, kZ);
    for (const auto& l : lines) {
        r = r * (TruncatedSeries::variable(ring, l.var) + z * static_cast<double>(l.weight) + 1.0);
    }
    return r;
}

std::vector<TruncatedSeries> vars_of(const std::vector<Line>& lines, const RingPtr& ring) {
    std::vector<TruncatedSeries> x;
    for (const auto& l : lines) {
        x.push_back(TruncatedSeries::variable(ring, l.var));
    }
    return x;
}

TruncatedSeries c1_component(const std::vector<Line>& lines, const RingPtr& ring) {
    TruncatedSeries r(ring);
    for (const auto& l : lines) {
        r += TruncatedSeries::variable(ring, l.var);
    }
    return r + TruncatedSeries::variable(ring, kZ) * static_cast<double>(weight_sum(weights_of(lines)));
}

TruncatedSeries c2_component(const std::vector<Line>& lines, const RingPtr& ring) {
    TruncatedSeries r(ring);
    if (lines.empty()) {
        return r;
    }
    const auto x = vars_of(lines, ring);
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t j = i + 1; j < x.size(); ++j) {
            r += x[i] * x[j];
        }
    }
    const Cocharacter m = weights_of(lines);
    const TruncatedSeries z = TruncatedSeries::variable(ring, kZ);
    r -= pairing_I_mixed(m, x) * z;
    r -= z * z * static_cast<double>(phi(m));
    return r;
}

} // namespace

SplitBundle SplitBundle::from_vars(const std::vector<std::string>& vars, const Cocharacter& m) {
    return SplitBundle{make_lines(vars, m), {}};
}

SplitBundle SplitBundle::graded(const std::vector<std::string>& vars0, const Cocharacter& m0,
                                const std::vector<std::string>& vars1, const Cocharacter& m1) {
    return SplitBundle{make_lines(vars0, m0), make_lines(vars1, m1)};
}

Cocharacter SplitBundle::weights0() const { return weights_of(v0); }
Cocharacter SplitBundle::weights1() const { return weights_of(v1); }

SplitBundle SplitBundle::with_weights(const Cocharacter& m0, const Cocharacter& m1) const {
    if (m0.size() != v0.size() || m1.size() != v1.size()) {
        throw std::invalid_argument("weight vector length does not match the bundle");
    }
    SplitBundle out = *this;
    for (std::size_t i = 0; i < m0.size(); ++i) {
        out.v0[i].weight = m0[i];
    }
    for (std::size_t i = 0; i < m1.size(); ++i) {
        out.v1[i].weight = m1[i];
    }
    return out;
}

SplitBundle SplitBundle::direct_sum(const SplitBundle& other) const {
    SplitBundle out = *this;
    out.v0.insert(out.v0.end(), other.v0.begin(), other.v0.end());
    out.v1.insert(out.v1.end(), other.v1.begin(), other.v1.end());
    return out;
}

SplitBundle SplitBundle::negated() const { return SplitBundle{v1, v0}; }

ExpansionPoint ExpansionPoint::finite(const LiftData& lift) {
    ExpansionPoint ep;
    ep.lift = lift;
    ep.sample = lift.a_lift;
    return ep;
}

ExpansionPoint ExpansionPoint::generic(cplx sample) {
    ExpansionPoint ep;
    ep.sample = sample;
    return ep;
}

bool ExpansionPoint::is_fixed_weight(long long m) const {
    return lift ? mod_floor(m, lift->n) == 0 : m == 0;
}

SplitBundle fixed_part(const SplitBundle& v, const ExpansionPoint& ep) {
    SplitBundle out;
    for (const auto& l : v.v0) {
        if (ep.is_fixed_weight(l.weight)) {
            out.v0.push_back(l);
        }
    }
    for (const auto& l : v.v1) {
        if (ep.is_fixed_weight(l.weight)) {
            out.v1.push_back(l);
        }
    }
    return out;
}

SplitBundle moving_part(const SplitBundle& v, const ExpansionPoint& ep) {
    SplitBundle out;
    for (const auto& l : v.v0) {
        if (!ep.is_fixed_weight(l.weight)) {
            out.v0.push_back(l);
        }
    }
    for (const auto& l : v.v1) {
        if (!ep.is_fixed_weight(l.weight)) {
            out.v1.push_back(l);
        }
    }
    return out;
}

TruncatedSeries chern_total_borel(const SplitBundle& v, const RingPtr& ring) {
    TruncatedSeries num = chern_total_component(v.v0, ring);
    if (!v.is_graded()) {
        return num;
    }
    return num * series_invert(chern_total_component(v.v1, ring));
}

TruncatedSeries c1_borel(const SplitBundle& v, const RingPtr& ring) {
    return c1_component(v.v0, ring) - c1_component(v.v1, ring);
}

TruncatedSeries c2_borel(const SplitBundle& v, const RingPtr& ring) {
    const TruncatedSeries a2 = c2_component(v.v0, ring);
    if (!v.is_graded()) {
        return a2;
    }
    const TruncatedSeries a1 = c1_component(v.v0, ring);
    const TruncatedSeries b1 = c1_component(v.v1, ring);
    const TruncatedSeries b2 = c2_component(v.v1, ring);
    return a2 - b2 - a1 * b1 + b1 * b1;
}

ChernComponents chern_components(const SplitBundle& v, const RingPtr& ring) {
    const TruncatedSeries c1 = c1_borel(v, ring);
    const TruncatedSeries c2 = c2_borel(v, ring);
    return ChernComponents{coefficient_in(c1, kZ, 0), coefficient_in(c1, kZ, 1).constant_term(),
                           coefficient_in(c2, kZ, 0), coefficient_in(c2, kZ, 1),
                           coefficient_in(c2, kZ, 2).constant_term()};
}

TruncatedSeries FactoredSeries::value() const {
    return series_exp(linear) * unit * fixed * std::exp(log_const);
}

TruncatedSeries euler_sigma(const SplitBundle& v, const RingPtr& ring, const SigmaParams& p, cplx z_shift) {
    return graded_value(euler_sigma_parts(v, ring, p, z_shift), v.is_graded());
}

TruncatedSeries delta_A(const SplitBundle& v, const ExpansionPoint& ep, const RingPtr& ring,
                        const SigmaParams& p, DeltaPart part) {
    return graded_value(delta_A_parts(v, ep, ring, p, part), v.is_graded());
}

GradedSeries euler_sigma_parts(const SplitBundle& v, const RingPtr& ring, const SigmaParams& p, cplx z_shift) {
    return {sigma_component(v.v0, ring, p, z_shift), sigma_component(v.v1, ring, p, z_shift)};
}

GradedSeries delta_A_parts(const SplitBundle& v, const ExpansionPoint& ep, const RingPtr& ring,
                           const SigmaParams& p, DeltaPart part) {
    if (ep.lift) {
        validate_lift(*ep.lift, p.modulus());
    }
    return {delta_component(v.v0, ep, ring, p, part), delta_component(v.v1, ep, ring, p, part)};
}

GradedSeries delta_borel_parts(const SplitBundle& v, const ExpansionPoint& ep, const RingPtr& ring,
                               const SigmaParams& p, DeltaPart part) {
    const auto shift = borel_shift(v, ring);
    return delta_A_parts(v, ep, ring, p, part).mapped([&](const TruncatedSeries& s) {
        return substitute_shift(s, shift);
    });
}

cplx graded_proportionality(const GradedSeries& a, const GradedSeries& b, double* residual) {
    const CrossTerms t = cross_terms(a, b);
    return proportionality(t.lhs, t.rhs, residual) * std::exp(t.log_ratio);
}

double graded_scaled_diff(const GradedSeries& a, const GradedSeries& b) {
    const CrossTerms t = cross_terms(a, b);
    const double scale = t.rhs.max_abs();
    const double diff = max_abs_diff(t.lhs * std::exp(t.log_ratio), t.rhs);
    return scale > 0.0 ? diff / scale : diff;
}

TruncatedSeries delta_A(const SplitBundle& v, const GradedCocharacter& m_tilde, const ExpansionPoint& ep,
                        const RingPtr& ring, const SigmaParams& p, DeltaPart part) {
    if (ep.lift) {
        require_congruent(m_tilde.m0, v.weights0(), ep.lift->n);
        require_congruent(m_tilde.m1, v.weights1(), ep.lift->n);
    } else if (m_tilde.m0 != v.weights0() || m_tilde.m1 != v.weights1()) {
        throw std::invalid_argument("at the generic point the lift is the weight vector itself");
    }
    return delta_A(v.with_weights(m_tilde.m0, m_tilde.m1), ep, ring, p, part);
}

TruncatedSeries delta_prime(const SplitBundle& v, const ExpansionPoint& ep, const RingPtr& ring,
                            const SigmaParams& p) {
    return delta_A(v, ep, ring, p, DeltaPart::prime);
}

TruncatedSeries delta_double_prime(const SplitBundle& v, const ExpansionPoint& ep, const RingPtr& ring,
                                   const SigmaParams& p) {
    return delta_A(v, ep, ring, p, DeltaPart::double_prime);
}

TruncatedSeries delta_borel(const SplitBundle& v, const ExpansionPoint& ep, const RingPtr& ring,
                            const SigmaParams& p, DeltaPart part) {
    return graded_value(delta_borel_parts(v, ep, ring, p, part), v.is_graded());
}

int fixed_part_sign(const SplitBundle& v, const ExpansionPoint& ep) {
    if (!ep.lift) {
        return 1;
    }
    const LiftData& lift = *ep.lift;
    long long total = 0;
    for (const auto& l : v.v0) {
        if (ep.is_fixed_weight(l.weight)) {
            total += l.weight / lift.n;
        }
    }
    for (const auto& l : v.v1) {
        if (ep.is_fixed_weight(l.weight)) {
            total -= l.weight / lift.n;
        }
    }
    const long long e = mod_floor(lift.k + lift.l + lift.k * lift.l, 2) * mod_floor(total, 2);
    return e % 2 == 0 ? 1 : -1;
}

LiftFactorReport a_lift_factor_check(const SplitBundle& v, const ExpansionPoint& ep,
                                     const ExpansionPoint& ep2, const RingPtr& ring, const SigmaParams& p) {
    if (!ep.lift || !ep2.lift || ep.lift->n != ep2.lift->n) {
        throw std::invalid_argument("lift comparison needs two finite lifts of the same order");
    }
    if (!is_sum_zero(v.weights0()) || !is_sum_zero(v.weights1())) {
        throw std::invalid_argument("lift comparison needs sum-zero weights");
    }
    const ModulusTau& tau = p.modulus();
    double ds = 0.0;
    double dt = 0.0;
    tau.coords(ep2.lift->a_lift - ep.lift->a_lift, ds, dt);
    LiftFactorReport rep;
    rep.r = std::llround(ds);
    rep.s = std::llround(dt);
    if (std::abs(ds - static_cast<double>(rep.r)) > 1e-9 || std::abs(dt - static_cast<double>(rep.s)) > 1e-9) {
        throw std::invalid_argument("expansion points are lifts of different curve points");
    }
    rep.phi = phi(v.weights());
    const int n = ep.lift->n;
    const long long phi_mod = mod_floor(rep.phi, n);
    const cplx w = weil_pairing(*ep.lift, tau);
    rep.expected_literal = std::pow(w, static_cast<int>(mod_floor(rep.s * phi_mod, n)));
    const long long k_mod = mod_floor(ep.lift->k, n);
    const long long e = mod_floor(mod_floor(rep.r, n) * k_mod % n * phi_mod, n);
    rep.expected = rep.expected_literal * std::exp(kTwoPiI * (static_cast<double>(e) / n));
    rep.measured = graded_proportionality(delta_A_parts(v, ep2, ring, p), delta_A_parts(v, ep, ring, p),
                                          &rep.proportionality_residual);
    return rep;
}

} // namespace sigorient
