#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sigorient/cochar.hpp"
#include "sigorient/elliptic.hpp"
#include "sigorient/series.hpp"
#include "sigorient/sigma.hpp"

namespace sigorient {

// Name of the equivariant parameter in Borel rings.
inline constexpr const char* kZ = "z";

// A line L (x = c_1 L, a ring variable) twisted by the character of weight m.
struct Line {
    std::string var;
    long long weight = 0;
};

// V = sum of lines in v0, minus the sum of lines in v1 (graded when v1 is
// non-empty).
struct SplitBundle {
    std::vector<Line> v0;
    std::vector<Line> v1;

    static SplitBundle from_vars(const std::vector<std::string>& vars, const Cocharacter& m);
    static SplitBundle graded(const std::vector<std::string>& vars0, const Cocharacter& m0,
                              const std::vector<std::string>& vars1, const Cocharacter& m1);

    bool is_graded() const { return !v1.empty(); }
    Cocharacter weights0() const;
    Cocharacter weights1() const;
    GradedCocharacter weights() const { return {weights0(), weights1()}; }

    // Same lines, other integer weights (lengths must match).
    SplitBundle with_weights(const Cocharacter& m0, const Cocharacter& m1 = {}) const;
    SplitBundle direct_sum(const SplitBundle& other) const;
    SplitBundle negated() const;
};

// Point of expansion: a lift of a point of order n, or the generic point
// (n = infinity) with a numeric sample for the translation.
struct ExpansionPoint {
    std::optional<LiftData> lift;
    cplx sample{};

    static ExpansionPoint finite(const LiftData& lift);
    static ExpansionPoint generic(cplx sample = 0.0);

    bool is_generic() const { return !lift.has_value(); }
    cplx a_lift() const { return lift ? lift->a_lift : sample; }
    // Weight m is "fixed" when m = 0 mod n (generic: m = 0).
    bool is_fixed_weight(long long m) const;
};

// Lines with fixed / moving weights at ep.
SplitBundle fixed_part(const SplitBundle& v, const ExpansionPoint& ep);
SplitBundle moving_part(const SplitBundle& v, const ExpansionPoint& ep);

// prod (1 + x_i + m_i z), graded inputs divided. Ring must contain z.
TruncatedSeries chern_total_borel(const SplitBundle& v, const RingPtr& ring);

// Closed forms: c1 = sum x + (sum m) z; c2 = e2(x) - I(m,x) z - phi(m) z^2,
// and for graded V, c1 = a1 - b1, c2 = a2 - b2 - a1 b1 + b1^2.
TruncatedSeries c1_borel(const SplitBundle& v, const RingPtr& ring);
TruncatedSeries c2_borel(const SplitBundle& v, const RingPtr& ring);

// c1 = c1_0 + c1_2 z and c2 = c2_0 + c2_2 z + c2_4 z^2 with the c_i_j free of z.
struct ChernComponents {
    TruncatedSeries c1_0;
    cplx c1_2;
    TruncatedSeries c2_0;
    TruncatedSeries c2_2;
    cplx c2_4;
};
ChernComponents chern_components(const SplitBundle& v, const RingPtr& ring);

// prod sigma(x_i + m_i z + m_i z_shift); z is formal when the ring has it.
// Throws NonUnitError when a denominator factor vanishes at the origin.
TruncatedSeries euler_sigma(const SplitBundle& v, const RingPtr& ring, const SigmaParams& p,
                            cplx z_shift = 0.0);

enum class DeltaPart { full, prime, double_prime };

// exp((k/n) sum m_j x_j + (k/n) a (1/2) sum m_j^2) prod sigma(x_j + m_j a), restricted to
// the moving (prime) or fixed (double prime) weights; the weights of v are
// the lift. Graded inputs are per-component ratios. The generic point drops
// the exponential factor.
TruncatedSeries delta_A(const SplitBundle& v, const ExpansionPoint& ep, const RingPtr& ring,
                        const SigmaParams& p, DeltaPart part = DeltaPart::full);

// Same with an explicit lift m_tilde of the weights of v mod n
// (std::invalid_argument if not congruent).
TruncatedSeries delta_A(const SplitBundle& v, const GradedCocharacter& m_tilde, const ExpansionPoint& ep,
                        const RingPtr& ring, const SigmaParams& p, DeltaPart part = DeltaPart::full);

TruncatedSeries delta_prime(const SplitBundle& v, const ExpansionPoint& ep, const RingPtr& ring,
                            const SigmaParams& p);
TruncatedSeries delta_double_prime(const SplitBundle& v, const ExpansionPoint& ep, const RingPtr& ring,
                                   const SigmaParams& p);

// delta_A with x_j replaced by x_j + m_j z. Ring must contain z.
TruncatedSeries delta_borel(const SplitBundle& v, const ExpansionPoint& ep, const RingPtr& ring,
                            const SigmaParams& p, DeltaPart part = DeltaPart::full);

// exp(log_const + linear) * unit * fixed. `fixed` is the product of the
// sigma factors centred at lattice points, `unit` the remaining factors;
// `linear` has no constant term.
struct FactoredSeries {
    cplx log_const{};
    TruncatedSeries linear;
    TruncatedSeries unit;
    TruncatedSeries fixed;

    TruncatedSeries value() const;

    // f applied to each series factor; f must preserve products and send
    // series without constant term to series without constant term.
    template <class F>
    FactoredSeries mapped(F&& f) const {
        return {log_const, f(linear), f(unit), f(fixed)};
    }
};

// Numerator and denominator components of a graded class. Graded classes
// are compared by cross-multiplying these, which needs no inverse of a
// non-unit denominator.
struct GradedSeries {
    FactoredSeries num;
    FactoredSeries den;

    template <class F>
    GradedSeries mapped(F&& f) const {
        return {num.mapped(f), den.mapped(f)};
    }
};

GradedSeries euler_sigma_parts(const SplitBundle& v, const RingPtr& ring, const SigmaParams& p,
                               cplx z_shift = 0.0);
GradedSeries delta_A_parts(const SplitBundle& v, const ExpansionPoint& ep, const RingPtr& ring,
                           const SigmaParams& p, DeltaPart part = DeltaPart::full);
GradedSeries delta_borel_parts(const SplitBundle& v, const ExpansionPoint& ep, const RingPtr& ring,
                               const SigmaParams& p, DeltaPart part = DeltaPart::full);

// c with a.num * b.den ~= c * a.den * b.num, i.e. a ~= c b as graded classes.
cplx graded_proportionality(const GradedSeries& a, const GradedSeries& b, double* residual = nullptr);
// max |a.num b.den - a.den b.num| / max |a.den b.num|, with the common fixed
// factors cancelled first.
double graded_scaled_diff(const GradedSeries& a, const GradedSeries& b);

// For fixed weights m_j = n D_j the double-primed class equals
// (-1)^{(k + l + k l) sum D_j} prod sigma(x_j). Returns that sign (+1 at the
// generic point).
int fixed_part_sign(const SplitBundle& v, const ExpansionPoint& ep);

// Comparison of delta_A at two lifts a' = a + 2 pi i r + 2 pi i s tau.
struct LiftFactorReport {
    long long r = 0;
    long long s = 0;
    long long phi = 0;      // phi(m0) - phi(m1)
    cplx measured;          // delta(a') / delta(a)
    cplx expected_literal;  // w^{s phi}
    cplx expected;          // w^{s phi} e^{2 pi i r k phi / n}
    double proportionality_residual = 0.0;
};

// Components must be sum-zero; throws std::invalid_argument when the two
// expansion points are not lifts of the same point.
LiftFactorReport a_lift_factor_check(const SplitBundle& v, const ExpansionPoint& ep,
                                     const ExpansionPoint& ep2, const RingPtr& ring, const SigmaParams& p);

} // namespace sigorient
