#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "sigorient/modulus.hpp"
#include "sigorient/sigma.hpp"

namespace sigorient {

inline constexpr double kPointTolerance = 1e-9;

// A point of C/Lambda in canonical form: rep = 2 pi i (s + t tau) with
// s, t in [0,1). Coordinates within kPointTolerance of an integer are snapped.
struct CurvePoint {
    cplx rep;
    double s = 0.0;
    double t = 0.0;
};

CurvePoint reduce_point(cplx z, const ModulusTau& tau);
CurvePoint point_from_coords(double s, double t, const ModulusTau& tau);

// Equality modulo the lattice, compared on fractional coordinates.
bool same_point(const CurvePoint& a, const CurvePoint& b, double tol = kPointTolerance);
bool is_zero_point(const CurvePoint& p, double tol = kPointTolerance);

CurvePoint point_add(const CurvePoint& a, const CurvePoint& b, const ModulusTau& tau);
CurvePoint point_neg(const CurvePoint& a, const ModulusTau& tau);
CurvePoint point_mul(long long n, const CurvePoint& a, const ModulusTau& tau);

// {2 pi i (i/n + (j/n) tau) : 0 <= i,j < n}, ordered by (i, j).
std::vector<CurvePoint> torsion_points(int n, const ModulusTau& tau);
std::vector<CurvePoint> exact_order_points(int n, const ModulusTau& tau);

// Smallest n <= n_max with nP = 0.
std::optional<int> point_order(const CurvePoint& p, int n_max);

// n * a_lift = 2 pi i (l + k tau), with the image of a_lift of exact order n.
struct LiftData {
    cplx a_lift;
    int n = 1;
    long long k = 0;
    long long l = 0;
};

// Recovers (k, l) from a_lift and validates; throws std::invalid_argument.
LiftData make_lift(cplx a_lift, int n, const ModulusTau& tau);
// a_lift = 2 pi i (l + k tau) / n, validated.
LiftData lift_from_lattice(long long l, long long k, int n, const ModulusTau& tau);
// a_lift + 2 pi i r + 2 pi i s tau, a lift of the same point.
LiftData shift_lift(const LiftData& lift, long long r, long long s, const ModulusTau& tau);
void validate_lift(const LiftData& lift, const ModulusTau& tau);

// w = e^{-a_lift} e^{2 pi i k tau / n}; w^n = 1.
cplx weil_pairing(const LiftData& lift, const ModulusTau& tau);

// Integer-multiplicity formal sum of curve points. Entries are kept sorted by
// (s, t); equal points are merged and zero multiplicities dropped.
class Divisor {
public:
    Divisor() = default;

    void add(const CurvePoint& p, long long mult);
    void add(const Divisor& other, long long factor = 1);

    const std::vector<std::pair<CurvePoint, long long>>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }
    long long multiplicity(const CurvePoint& p) const;

    friend Divisor operator+(Divisor a, const Divisor& b) {
        a.add(b, 1);
        return a;
    }
    friend Divisor operator-(Divisor a, const Divisor& b) {
        a.add(b, -1);
        return a;
    }

private:
    std::vector<std::pair<CurvePoint, long long>> entries_;
};

long long divisor_degree(const Divisor& d);
CurvePoint divisor_curve_sum(const Divisor& d, const ModulusTau& tau);

// D(P, n) = sum over a with n a + P = 0 of (a). For n < 0 this is
// D(-P, |n|), so the curve sum is -nP in both cases. D(P, 0) is empty.
Divisor torsion_divisor(const CurvePoint& p, long long n, const ModulusTau& tau);

// Abel: degree zero and curve sum zero.
bool is_principal(const Divisor& d, const ModulusTau& tau);

// f(z) = e^{-k0 z} prod sigma(z - a_i)^{n_i} with sum n_i a_i = 2 pi i (l0 + k0 tau).
class EllipticFunction {
public:
    EllipticFunction(SigmaParams params, std::vector<std::pair<cplx, long long>> factors, long long k0,
                     long long l0);

    cplx operator()(cplx z) const;

    const std::vector<std::pair<cplx, long long>>& factors() const { return factors_; }
    long long k0() const { return k0_; }
    long long l0() const { return l0_; }

private:
    SigmaParams params_;
    std::vector<std::pair<cplx, long long>> factors_;
    long long k0_;
    long long l0_;
};

// Throws std::invalid_argument when d is not principal.
EllipticFunction build_elliptic_function(const Divisor& d, const SigmaParams& p);

// Winding number of f around a circle; counts zeros minus poles inside.
template <typename F>
int winding_number(const F& f, cplx center, double radius = 1e-2, int samples = 256) {
    double total = 0.0;
    cplx prev = f(center + radius);
    for (int j = 1; j <= samples; ++j) {
        const double theta = 2.0 * kPi * j / samples;
        const cplx cur = f(center + radius * cplx(std::cos(theta), std::sin(theta)));
        total += std::arg(cur / prev);
        prev = cur;
    }
    return static_cast<int>(std::lround(total / (2.0 * kPi)));
}

} // namespace sigorient
