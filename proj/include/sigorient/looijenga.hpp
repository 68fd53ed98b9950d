#pragma once

#include <cstdint>
#include <vector>

#include "sigorient/char_classes.hpp"
#include "sigorient/cochar.hpp"
#include "sigorient/elliptic.hpp"
#include "sigorient/sigma.hpp"

namespace sigorient {

// u in (C^x)^d; with `su` set, prod u_i = 1.
struct LoopPoint {
    std::vector<cplx> u;
    bool su = false;
};

// Throws std::invalid_argument on zero entries or a violated SU constraint.
void validate_loop_point(const LoopPoint& p);

// prod u_i^{u_exponent[i]} * zq^{z_exponent} * q^{q_exponent / q_denominator}
struct AutomorphyExponent {
    std::vector<long long> u_exponent;
    long long z_exponent = 0;
    long long q_exponent = 0;
    long long q_denominator = 1;

    bool operator==(const AutomorphyExponent&) const = default;
};

AutomorphyExponent multiply(const AutomorphyExponent& a, const AutomorphyExponent& b);
// The factor evaluated at u q^m instead of u.
AutomorphyExponent translate(const AutomorphyExponent& f, const Cocharacter& m);
cplx evaluate(const AutomorphyExponent& f, const LoopPoint& u, cplx zq, const ModulusTau& tau);

// u^{-I(m)} q^{-phi(m)} with u^{I(m)} = prod u_i^{m_i}.
AutomorphyExponent cocycle_L_exponent(const Cocharacter& m);
cplx cocycle_L(const Cocharacter& m, const LoopPoint& u, const ModulusTau& tau);

// Exponents (-k m on u, -k I(m,m) on z, -k^2 phi(m) on q).
AutomorphyExponent cocycle_Lm_exponent(const Cocharacter& m, long long k);
cplx cocycle_Lm(const Cocharacter& m, const LoopPoint& u, cplx zq, long long k, const ModulusTau& tau);

// factor(m + m') == translate(factor(m'), m) * factor(m), in exponent arithmetic.
bool cocycle_condition_check(const Cocharacter& m, const Cocharacter& mp);

// |sigma(u q^m) - R| / |R|, R = u^{-I(m)} q^{-phi(m)} sigma(u), for the product
// sigma over the entries of u (x = principal log u). Throws std::domain_error
// when sigma(u) vanishes.
double section_check(const Cocharacter& m, const LoopPoint& u, const SigmaParams& p);

// w^{s phi(m)} with phi(m) reduced mod n.
cplx weil_factor(const Cocharacter& m, const LiftData& lift, long long s, const ModulusTau& tau);

struct PairTrivializationReport {
    long long phi_gap = 0;                 // phi(m0) - phi(m1)
    std::vector<AutomorphyExponent> ratio; // one per k = 1..k_max; u over (u0, u1)
    int samples = 0;
    double max_constraint_residual = 0.0;
    double max_deviation = 0.0;            // max |ratio - 1| over the locus samples
    bool exponent_trivial = false;         // z and q exponents of the ratio vanish
};

// Samples (u0, u1, z, k) with prod u0 = prod u1 = 1 and
// prod u0^{m0} = prod u1^{m1} and evaluates the ratio cocycle L_{m0} / L_{m1}.
// m1 needs two distinct weights (to solve the constraints for two entries).
PairTrivializationReport pair_trivialization_check(const Cocharacter& m0, const Cocharacter& m1,
                                                   const ModulusTau& tau, int samples, std::uint64_t seed,
                                                   int k_max = 2);

// gamma(l) = f_A / delta^B(l) with f_A the translated Euler class at the
// lift `ep`. Reports gamma(l) / gamma(l') against c = w^{s phi(m)}.
LiftFactorReport gamma_lift_law_check(const SplitBundle& v, const ExpansionPoint& ep, const ExpansionPoint& ep2,
                                      const RingPtr& ring, const SigmaParams& p);

} // namespace sigorient
