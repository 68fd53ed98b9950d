#include "sigorient/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

namespace sigorient {

namespace {

double canonical_fraction(double x) {
    double f = x - std::floor(x);
    if (f < kPointTolerance || f > 1.0 - kPointTolerance) {
        f = 0.0;
    }
    return f;
}

bool near_integer(double x, double tol) { return std::abs(x - std::round(x)) <= tol; }

// Distance of x from the nearest integer, on the circle R/Z.
double circle_distance(double x) { return std::abs(x - std::round(x)); }

} // namespace

CurvePoint point_from_coords(double s, double t, const ModulusTau& tau) {
    if (!std::isfinite(s) || !std::isfinite(t)) {
        throw std::invalid_argument("non-finite point");
    }
    CurvePoint p;
    p.s = canonical_fraction(s);
    p.t = canonical_fraction(t);
    p.rep = tau.from_coords(p.s, p.t);
    return p;
}

CurvePoint reduce_point(cplx z, const ModulusTau& tau) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw std::invalid_argument("non-finite point");
    }
    double s = 0.0;
    double t = 0.0;
    tau.coords(z, s, t);
    return point_from_coords(s, t, tau);
}

bool same_point(const CurvePoint& a, const CurvePoint& b, double tol) {
    return circle_distance(a.s - b.s) <= tol && circle_distance(a.t - b.t) <= tol;
}

bool is_zero_point(const CurvePoint& p, double tol) {
    return circle_distance(p.s) <= tol && circle_distance(p.t) <= tol;
}

CurvePoint point_add(const CurvePoint& a, const CurvePoint& b, const ModulusTau& tau) {
    return point_from_coords(a.s + b.s, a.t + b.t, tau);
}

CurvePoint point_neg(const CurvePoint& a, const ModulusTau& tau) {
    return point_from_coords(-a.s, -a.t, tau);
}

CurvePoint point_mul(long long n, const CurvePoint& a, const ModulusTau& tau) {
    const double nd = static_cast<double>(n);
    return point_from_coords(nd * a.s, nd * a.t, tau);
}

std::vector<CurvePoint> torsion_points(int n, const ModulusTau& tau) {
    if (n < 1) {
        throw std::invalid_argument("torsion order must be positive");
    }
    std::vector<CurvePoint> out;
    out.reserve(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            out.push_back(point_from_coords(static_cast<double>(i) / n, static_cast<double>(j) / n, tau));
        }
    }
    return out;
}

std::vector<CurvePoint> exact_order_points(int n, const ModulusTau& tau) {
    std::vector<CurvePoint> out;
    for (const auto& p : torsion_points(n, tau)) {
        if (point_order(p, n) == n) {
            out.push_back(p);
        }
    }
    return out;
}

std::optional<int> point_order(const CurvePoint& p, int n_max) {
    for (int n = 1; n <= n_max; ++n) {
        if (near_integer(n * p.s, kPointTolerance) && near_integer(n * p.t, kPointTolerance)) {
            return n;
        }
    }
    return std::nullopt;
}

void validate_lift(const LiftData& lift, const ModulusTau& tau) {
    if (lift.n < 1) {
        throw std::invalid_argument("lift order must be positive");
    }
    const cplx lambda = tau.lattice_point(lift.l, lift.k);
    const cplx defect = static_cast<double>(lift.n) * lift.a_lift - lambda;
    if (std::abs(defect) > 1e-9 * std::max(1.0, std::abs(lambda))) {
        throw std::invalid_argument("n * a_lift is not the stated lattice point");
    }
    if (point_order(reduce_point(lift.a_lift, tau), lift.n) != lift.n) {
        throw std::invalid_argument("lift does not have exact order n");
    }
}

LiftData make_lift(cplx a_lift, int n, const ModulusTau& tau) {
    if (n < 1) {
        throw std::invalid_argument("lift order must be positive");
    }
    double s = 0.0;
    double t = 0.0;
    tau.coords(static_cast<double>(n) * a_lift, s, t);
    LiftData lift{a_lift, n, std::llround(t), std::llround(s)};
    validate_lift(lift, tau);
    return lift;
}

LiftData lift_from_lattice(long long l, long long k, int n, const ModulusTau& tau) {
    if (n < 1) {
        throw std::invalid_argument("lift order must be positive");
    }
    LiftData lift{tau.lattice_point(l, k) / static_cast<double>(n), n, k, l};
    validate_lift(lift, tau);
    return lift;
}

LiftData shift_lift(const LiftData& lift, long long r, long long s, const ModulusTau& tau) {
    LiftData out = lift;
    out.a_lift = lift.a_lift + tau.lattice_point(r, s);
    out.l = lift.l + lift.n * r;
    out.k = lift.k + lift.n * s;
    return out;
}

cplx weil_pairing(const LiftData& lift, const ModulusTau& tau) {
    validate_lift(lift, tau);
    // Reduce k mod n in the exponent; the discarded part is an integer
    // multiple of 2 pi i tau matched by the same shift of a_lift.
    const long long n = lift.n;
    const long long kr = ((lift.k % n) + n) % n;
    const long long s = (lift.k - kr) / n;
    const cplx a_reduced = lift.a_lift - tau.lattice_point(0, s);
    return std::exp(-a_reduced + kTwoPiI * tau.tau() * (static_cast<double>(kr) / n));
}

void Divisor::add(const CurvePoint& p, long long mult) {
    if (mult == 0) {
        return;
    }
    for (auto it = entries_.begin(); it != entries_.end(); ++it) {
        if (same_point(it->first, p)) {
            it->second += mult;
            if (it->second == 0) {
                entries_.erase(it);
            }
            return;
        }
    }
    const auto pos = std::find_if(entries_.begin(), entries_.end(), [&](const auto& e) {
        return std::tie(e.first.s, e.first.t) > std::tie(p.s, p.t);
    });
    entries_.insert(pos, {p, mult});
}

void Divisor::add(const Divisor& other, long long factor) {
    for (const auto& [p, m] : other.entries_) {
        add(p, factor * m);
    }
}

long long Divisor::multiplicity(const CurvePoint& p) const {
    for (const auto& [q, m] : entries_) {
        if (same_point(p, q)) {
            return m;
        }
    }
    return 0;
}

long long divisor_degree(const Divisor& d) {
    long long deg = 0;
    for (const auto& e : d.entries()) {
        deg += e.second;
    }
    return deg;
}

CurvePoint divisor_curve_sum(const Divisor& d, const ModulusTau& tau) {
    double s = 0.0;
    double t = 0.0;
    for (const auto& [p, m] : d.entries()) {
        s += static_cast<double>(m) * p.s;
        t += static_cast<double>(m) * p.t;
        s -= std::floor(s);
        t -= std::floor(t);
    }
    return point_from_coords(s, t, tau);
}

Divisor torsion_divisor(const CurvePoint& p, long long n, const ModulusTau& tau) {
    Divisor d;
    if (n == 0) {
        return d;
    }
    const CurvePoint base = n > 0 ? p : point_neg(p, tau);
    const long long an = n > 0 ? n : -n;
    // Q with an * Q = -base; then D = {Q + b : b in C[an]}.
    const double qs = -base.s / static_cast<double>(an);
    const double qt = -base.t / static_cast<double>(an);
    for (long long i = 0; i < an; ++i) {
        for (long long j = 0; j < an; ++j) {
            d.add(point_from_coords(qs + static_cast<double>(i) / an, qt + static_cast<double>(j) / an, tau), 1);
        }
    }
    return d;
}

bool is_principal(const Divisor& d, const ModulusTau& tau) {
    return divisor_degree(d) == 0 && is_zero_point(divisor_curve_sum(d, tau));
}

EllipticFunction::EllipticFunction(SigmaParams params, std::vector<std::pair<cplx, long long>> factors,
                                   long long k0, long long l0)
    : params_(std::move(params)), factors_(std::move(factors)), k0_(k0), l0_(l0) {}

cplx EllipticFunction::operator()(cplx z) const {
    cplx r = std::exp(-static_cast<double>(k0_) * z);
    for (const auto& [a, m] : factors_) {
        const cplx sv = sigma(z - a, params_);
        r *= std::pow(sv, static_cast<int>(m));
    }
    return r;
}

EllipticFunction build_elliptic_function(const Divisor& d, const SigmaParams& p) {
    const ModulusTau& tau = p.modulus();
    if (!is_principal(d, tau)) {
        throw std::invalid_argument("divisor is not principal");
    }
    // Canonical lifts have s, t in [0,1); the weighted coordinate sums are
    // then integers l0, k0.
    std::vector<std::pair<cplx, long long>> factors;
    double s = 0.0;
    double t = 0.0;
    for (const auto& [pt, m] : d.entries()) {
        factors.emplace_back(pt.rep, m);
        s += static_cast<double>(m) * pt.s;
        t += static_cast<double>(m) * pt.t;
    }
    const long long l0 = std::llround(s);
    const long long k0 = std::llround(t);
    return EllipticFunction(p, std::move(factors), k0, l0);
}

} // namespace sigorient
