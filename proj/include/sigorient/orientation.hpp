#pragma once

#include <optional>
#include <vector>

#include "sigorient/char_classes.hpp"
#include "sigorient/cochar.hpp"
#include "sigorient/elliptic.hpp"
#include "sigorient/sigma.hpp"

namespace sigorient {

// Divisor of the coordinate t_1. Lifts of the support are the canonical
// representatives.
struct CoordinateData {
    Divisor divisor;
};

// (0) + (a) - (b) - (a - b) with a = pi i, b = pi i tau.
CoordinateData default_coordinate_data(const ModulusTau& tau);

struct CoordinateValidation {
    bool degree_zero = false;
    bool curve_sum_zero = false;
    bool torsion_support = false;
    bool identity_multiplicity_one = false;

    bool ok() const { return degree_zero && curve_sum_zero && torsion_support && identity_multiplicity_one; }
};

// Torsion is detected up to order n_max.
CoordinateValidation validate_coordinate_divisor(const CoordinateData& cd, const ModulusTau& tau, int n_max = 12);

// f(eps) = eps^valuation * (unit[0] + unit[1] eps + ...).
struct LaurentJet {
    int valuation = 0;
    std::vector<cplx> unit;
};

LaurentJet laurent_jet(const EllipticFunction& f, int order, const SigmaParams& p);
LaurentJet laurent_multiply(const LaurentJet& a, const LaurentJet& b);
LaurentJet laurent_pow(const LaurentJet& a, int e);

// lambda * f(z)
struct CoordinateFunction {
    EllipticFunction f;
    cplx lambda = 1.0;

    cplx operator()(cplx z) const { return lambda * f(z); }
};

// t_1 = prod sigma(z - P)^{n_P} with the periodicity correction; throws
// std::invalid_argument for an invalid coordinate divisor.
CoordinateFunction build_t1(const CoordinateData& cd, const SigmaParams& p);

// t_s with divisor C<s> - |C<s>|(0), normalized by (t_1^{|C<s>|} t_s)(0) = 1.
// Throws std::invalid_argument for s < 2.
CoordinateFunction build_ts(int s, const CoordinateData& cd, const SigmaParams& p);

// Laurent jet of t_1^{|C<s>|} t_s at the origin.
LaurentJet normalization_jet(int s, const CoordinateData& cd, const SigmaParams& p, int order = 4);

struct ThomClassGerm {
    ExpansionPoint point;
    TruncatedSeries thom_factor; // Euler image of the fixed sub-bundle
    TruncatedSeries euler_unit;  // translated Euler class of the moving part
    long long rank = 0;          // virtual rank of the fixed sub-bundle
};

// Thom(V^A) e(V / V^A) translated to the expansion point. V must have sum-zero
// components; throws NonUnitError when the moving factor vanishes there.
ThomClassGerm thom_sigma_class(const SplitBundle& v, const ExpansionPoint& ep, const RingPtr& ring,
                               const SigmaParams& p);

// max scaled difference of thom factors and of euler units between V + W and
// the product of the separate germs.
double multiplicativity_check(const SplitBundle& v, const SplitBundle& w, const ExpansionPoint& ep,
                              const RingPtr& ring, const SigmaParams& p);

struct GluingReport {
    StringFlags flags_finite;
    StringFlags flags_generic;
    // per lift: (r, s) relative to the first lift
    std::vector<std::pair<long long, long long>> shifts;
    std::vector<double> germ_residual; // delta^B versus translated Euler class, on the locus
    std::vector<cplx> lift_ratio;      // delta^B(lift) / delta^B(first lift)
    std::vector<cplx> predicted_ratio; // w^{s dphi} e^{2 pi i r k dphi / n}
    double max_germ_residual = 0.0;
    double max_lift_deviation = 0.0;   // max |delta^B(lift) - delta^B(first lift)| (scaled)
    double max_prediction_error = 0.0; // max |lift_ratio - predicted_ratio|
};

// Compares, on the locus sum m0 x0 = sum m1 x1, the Borel delta class of the
// pair V0 - V1 with the translated Euler class at each lift a + 2 pi i (r + s tau).
GluingReport gluing_check(const Cocharacter& m0, const Cocharacter& m1, const LiftData& lift,
                          const std::vector<std::pair<long long, long long>>& shifts, const SigmaParams& p,
                          int degree_cap);

// sum_i D(P_i, m_i); degree 2 phi(m) and curve sum -sum m_i P_i.
Divisor euler_divisor(const Cocharacter& m, const std::vector<CurvePoint>& points, const ModulusTau& tau);

struct StringDivisorReport {
    Divisor divisor;
    long long degree = 0;
    long long degree_gap = 0; // 2 (phi(m0) - phi(m1))
    CurvePoint curve_sum;
    bool principal = false;
    std::optional<EllipticFunction> function;
};

StringDivisorReport string_divisor_function(const Cocharacter& m0, const std::vector<CurvePoint>& p0,
                                            const Cocharacter& m1, const std::vector<CurvePoint>& p1,
                                            const SigmaParams& p);

} // namespace sigorient
