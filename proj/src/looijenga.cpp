#include "sigorient/looijenga.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace sigorient {

namespace {

long long mod_floor(long long a, long long n) { return ((a % n) + n) % n; }

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

cplx q_power(const ModulusTau& tau, long long num, long long den) {
    return std::exp(kTwoPiI * tau.tau() * (static_cast<double>(num) / static_cast<double>(den)));
}

} // namespace

void validate_loop_point(const LoopPoint& p) {
    cplx prod = 1.0;
    for (const auto& v : p.u) {
        if (v == cplx{}) {
            throw std::invalid_argument("loop point has a zero entry");
        }
        prod *= v;
    }
    if (p.su && std::abs(prod - 1.0) >= 1e-10) {
        throw std::invalid_argument("loop point violates prod u = 1");
    }
}

AutomorphyExponent multiply(const AutomorphyExponent& a, const AutomorphyExponent& b) {
    if (a.u_exponent.size() != b.u_exponent.size() || a.q_denominator != b.q_denominator) {
        throw std::invalid_argument("incompatible automorphy factors");
    }
    AutomorphyExponent r = a;
    for (std::size_t i = 0; i < r.u_exponent.size(); ++i) {
        r.u_exponent[i] += b.u_exponent[i];
    }
    r.z_exponent += b.z_exponent;
    r.q_exponent += b.q_exponent;
    return r;
}

AutomorphyExponent translate(const AutomorphyExponent& f, const Cocharacter& m) {
    if (f.u_exponent.size() != m.size()) {
        throw std::invalid_argument("translation length mismatch");
    }
    AutomorphyExponent r = f;
    r.q_exponent += f.q_denominator * pairing_dot(f.u_exponent, m);
    return r;
}

cplx evaluate(const AutomorphyExponent& f, const LoopPoint& u, cplx zq, const ModulusTau& tau) {
    validate_loop_point(u);
    if (u.u.size() != f.u_exponent.size()) {
        throw std::invalid_argument("loop point length mismatch");
    }
    cplx r = q_power(tau, f.q_exponent, f.q_denominator);
    for (std::size_t i = 0; i < u.u.size(); ++i) {
        r *= std::pow(u.u[i], static_cast<int>(f.u_exponent[i]));
    }
    if (f.z_exponent != 0) {
        if (zq == cplx{}) {
            throw std::invalid_argument("zero z coordinate");
        }
        r *= std::pow(zq, static_cast<int>(f.z_exponent));
    }
    return r;
}

AutomorphyExponent cocycle_L_exponent(const Cocharacter& m) {
    AutomorphyExponent f;
    for (long long v : m) {
        f.u_exponent.push_back(-v);
    }
    f.q_exponent = -phi(m);
    return f;
}

cplx cocycle_L(const Cocharacter& m, const LoopPoint& u, const ModulusTau& tau) {
    return evaluate(cocycle_L_exponent(m), u, 1.0, tau);
}

AutomorphyExponent cocycle_Lm_exponent(const Cocharacter& m, long long k) {
    AutomorphyExponent f;
    for (long long v : m) {
        f.u_exponent.push_back(-k * v);
    }
    f.z_exponent = -k * pairing_I(m, m);
    f.q_exponent = -k * k * phi(m);
    return f;
}

cplx cocycle_Lm(const Cocharacter& m, const LoopPoint& u, cplx zq, long long k, const ModulusTau& tau) {
    return evaluate(cocycle_Lm_exponent(m, k), u, zq, tau);
}

bool cocycle_condition_check(const Cocharacter& m, const Cocharacter& mp) {
    if (m.size() != mp.size()) {
        throw std::invalid_argument("cocharacter length mismatch");
    }
    Cocharacter sum(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        sum[i] = m[i] + mp[i];
    }
    const AutomorphyExponent direct = cocycle_L_exponent(sum);
    const AutomorphyExponent composed = multiply(translate(cocycle_L_exponent(mp), m), cocycle_L_exponent(m));
    return direct == composed;
}

double section_check(const Cocharacter& m, const LoopPoint& u, const SigmaParams& p) {
    validate_loop_point(u);
    if (u.u.size() != m.size()) {
        throw std::invalid_argument("loop point length mismatch");
    }
    const ModulusTau& tau = p.modulus();
    std::vector<cplx> x(u.u.size());
    std::vector<cplx> xt(u.u.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = std::log(u.u[i]);
        xt[i] = x[i] + tau.lattice_point(0, m[i]);
    }
    const cplx base = sigma_product(x, p);
    if (std::abs(base) < 1e-300) {
        throw std::domain_error("sample lies on the divisor of sigma");
    }
    const cplx lhs = sigma_product(xt, p);
    const cplx rhs = cocycle_L(m, u, tau) * base;
    return std::abs(lhs - rhs) / std::abs(rhs);
}

cplx weil_factor(const Cocharacter& m, const LiftData& lift, long long s, const ModulusTau& tau) {
    const cplx w = weil_pairing(lift, tau);
    const long long e = mod_floor(mod_floor(s, lift.n) * mod_floor(phi(m), lift.n), lift.n);
    return std::pow(w, static_cast<int>(e));
}

PairTrivializationReport pair_trivialization_check(const Cocharacter& m0, const Cocharacter& m1,
                                                   const ModulusTau& tau, int samples, std::uint64_t seed,
                                                   int k_max) {
    if (!is_sum_zero(m0) || !is_sum_zero(m1)) {
        throw std::invalid_argument("pair trivialization needs sum-zero cocharacters");
    }
    std::size_t ja = 0;
    std::size_t jb = m1.size();
    for (std::size_t j = 1; j < m1.size(); ++j) {
        if (m1[j] != m1[ja]) {
            jb = j;
            break;
        }
    }
    if (jb == m1.size()) {
        throw std::invalid_argument("m1 needs two distinct weights");
    }

    PairTrivializationReport rep;
    rep.phi_gap = phi(m0) - phi(m1);
    rep.samples = samples;
    bool trivial = true;
    for (long long k = 1; k <= k_max; ++k) {
        AutomorphyExponent f = cocycle_Lm_exponent(m0, k);
        const AutomorphyExponent g = cocycle_Lm_exponent(m1, k);
        for (long long e : g.u_exponent) {
            f.u_exponent.push_back(-e);
        }
        f.z_exponent -= g.z_exponent;
        f.q_exponent -= g.q_exponent;
        trivial = trivial && f.z_exponent == 0 && f.q_exponent == 0;
        rep.ratio.push_back(std::move(f));
    }
    rep.exponent_trivial = trivial;

    std::mt19937_64 rng(seed);
    const std::size_t d0 = m0.size();
    const std::size_t d1 = m1.size();
    for (int sample = 0; sample < samples; ++sample) {
        // Additive coordinates u = e^x; SU means sum x = 0.
        std::vector<cplx> x0(d0);
        std::vector<cplx> x1(d1);
        cplx sum0 = 0.0;
        for (std::size_t i = 0; i + 1 < d0; ++i) {
            x0[i] = cplx(uniform(rng, -0.5, 0.5), uniform(rng, -kPi, kPi));
            sum0 += x0[i];
        }
        x0[d0 - 1] = -sum0;
        cplx target = 0.0;
        for (std::size_t i = 0; i < d0; ++i) {
            target += static_cast<double>(m0[i]) * x0[i];
        }
        cplx rest_sum = 0.0;
        cplx rest_weighted = 0.0;
        for (std::size_t i = 0; i < d1; ++i) {
            if (i == ja || i == jb) {
                continue;
            }
            x1[i] = cplx(uniform(rng, -0.5, 0.5), uniform(rng, -kPi, kPi));
            rest_sum += x1[i];
            rest_weighted += static_cast<double>(m1[i]) * x1[i];
        }
        // x_a + x_b = -rest_sum;  m_a x_a + m_b x_b = target - rest_weighted
        const double ma = static_cast<double>(m1[ja]);
        const double mb = static_cast<double>(m1[jb]);
        const cplx s1 = -rest_sum;
        const cplx s2 = target - rest_weighted;
        x1[ja] = (s2 - mb * s1) / (ma - mb);
        x1[jb] = s1 - x1[ja];

        LoopPoint u0{{}, true};
        LoopPoint u1{{}, true};
        for (const auto& v : x0) {
            u0.u.push_back(std::exp(v));
        }
        for (const auto& v : x1) {
            u1.u.push_back(std::exp(v));
        }
        cplx lhs = 1.0;
        cplx rhs = 1.0;
        cplx p0 = 1.0;
        cplx p1 = 1.0;
        for (std::size_t i = 0; i < d0; ++i) {
            lhs *= std::pow(u0.u[i], static_cast<int>(m0[i]));
            p0 *= u0.u[i];
        }
        for (std::size_t i = 0; i < d1; ++i) {
            rhs *= std::pow(u1.u[i], static_cast<int>(m1[i]));
            p1 *= u1.u[i];
        }
        const double constraint = std::max({std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)),
                                            std::abs(p0 - 1.0), std::abs(p1 - 1.0)});
        rep.max_constraint_residual = std::max(rep.max_constraint_residual, constraint);
        if (constraint >= 1e-12) {
            continue;
        }

        LoopPoint joint{u0.u, false};
        joint.u.insert(joint.u.end(), u1.u.begin(), u1.u.end());
        const cplx zq = std::exp(cplx(uniform(rng, -0.5, 0.5), uniform(rng, -kPi, kPi)));
        for (const auto& f : rep.ratio) {
            const cplx v = evaluate(f, joint, zq, tau);
            rep.max_deviation = std::max(rep.max_deviation, std::abs(v - 1.0));
        }
    }
    return rep;
}

LiftFactorReport gamma_lift_law_check(const SplitBundle& v, const ExpansionPoint& ep, const ExpansionPoint& ep2,
                                      const RingPtr& ring, const SigmaParams& p) {
    // The reference report carries the lift bookkeeping and expected roots of unity.
    LiftFactorReport rep = a_lift_factor_check(v, ep, ep2, ring, p);
    const GradedSeries d1 = delta_borel_parts(v, ep, ring, p);
    const GradedSeries d2 = delta_borel_parts(v, ep2, ring, p);
    const TruncatedSeries n1 = d1.num.value();
    const TruncatedSeries n2 = d2.num.value();
    const bool units = std::abs(n1.constant_term()) > kUnitTolerance && std::abs(n2.constant_term()) > kUnitTolerance;
    if (units && !v.is_graded()) {
        const TruncatedSeries f_a = euler_sigma(v, ring, p, ep.a_lift());
        const TruncatedSeries g1 = f_a * series_invert(n1);
        const TruncatedSeries g2 = f_a * series_invert(n2);
        rep.measured = proportionality(g1, g2, &rep.proportionality_residual);
    } else {
        // gamma(l) / gamma(l') = delta^B(l') / delta^B(l); f_A cancels.
        rep.measured = graded_proportionality(d2, d1, &rep.proportionality_residual);
    }
    return rep;
}

} // namespace sigorient
