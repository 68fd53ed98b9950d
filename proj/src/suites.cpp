#include "sigorient/suites.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <thread>
#include <tuple>

#include "json.hpp"
#include "sigorient/char_classes.hpp"
#include "sigorient/looijenga.hpp"
#include "sigorient/orientation.hpp"
#include "sigorient/sigma.hpp"

namespace sigorient {

namespace {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * (static_cast<double>(engine_() >> 11) * 0x1.0p-53);
    }
    long long integer(long long lo, long long hi) {
        return lo + static_cast<long long>(engine_() % static_cast<std::uint64_t>(hi - lo + 1));
    }
    std::uint64_t bits() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

class Recorder {
public:
    explicit Recorder(std::string suite) : suite_(std::move(suite)) {}

    // Pass iff the residual is finite and below the threshold.
    void residual(std::string id, double r, double threshold, std::string expected, std::string measured,
                  std::string_view anchor) {
        const bool ok = std::isfinite(r) && r < threshold;
        push(std::move(id), ok ? CheckStatus::pass : CheckStatus::fail, r, std::move(expected), std::move(measured),
             anchor);
        out_.back().tolerance = threshold;
    }

    void verdict(std::string id, bool ok, double r, std::string expected, std::string measured,
                 std::string_view anchor) {
        push(std::move(id), ok ? CheckStatus::pass : CheckStatus::fail, r, std::move(expected), std::move(measured),
             anchor);
    }

    void skip(std::string id, std::string reason, std::string_view anchor) {
        push(std::move(id), CheckStatus::skip, 0.0, "", std::move(reason), anchor);
    }

    std::vector<CheckReport> take() { return std::move(out_); }

private:
    void push(std::string id, CheckStatus st, double r, std::string expected, std::string measured,
              std::string_view anchor) {
        out_.push_back({suite_, std::move(id), st, r, std::move(expected), std::move(measured), std::string(anchor)});
    }

    std::string suite_;
    std::vector<CheckReport> out_;
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::string sci(double v) { return fmt("%.6e", v); }

std::string index_id(std::string_view family, int i) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%03d", i);
    return std::string(family) + "/" + buf;
}

std::string lift_id(const LiftData& l) {
    return "n=" + std::to_string(l.n) + "/a=(" + std::to_string(l.l) + "," + std::to_string(l.k) + ")";
}

std::string config_id(const Cocharacter& m, const LiftData& l) {
    return "d=" + std::to_string(m.size()) + "/m=" + format_cocharacter(m) + "/" + lift_id(l);
}

std::string pair_id(const Cocharacter& m0, const Cocharacter& m1) {
    return format_cocharacter(m0) + "|" + format_cocharacter(m1);
}

std::vector<std::string> numbered(const std::string& prefix, std::size_t count) {
    std::vector<std::string> out;
    for (std::size_t i = 1; i <= count; ++i) {
        out.push_back(prefix + std::to_string(i));
    }
    return out;
}

Cocharacter random_sum_zero(Rng& rng, int d, long long bound) {
    for (;;) {
        Cocharacter m(d);
        long long s = 0;
        for (int i = 0; i + 1 < d; ++i) {
            m[i] = rng.integer(-bound, bound);
            s += m[i];
        }
        m[d - 1] = -s;
        if (std::abs(m[d - 1]) <= bound && std::any_of(m.begin(), m.end(), [](long long v) { return v != 0; })) {
            return m;
        }
    }
}

double frac_distance(double x) { return std::abs(x - std::round(x)); }

// Jordan's totient J_2(n): the number of points of exact order n.
long long exact_order_count(int n) {
    long long r = static_cast<long long>(n) * n;
    int m = n;
    for (int p = 2; p * p <= m; ++p) {
        if (m % p == 0) {
            r = r / (static_cast<long long>(p) * p) * (static_cast<long long>(p) * p - 1);
            while (m % p == 0) {
                m /= p;
            }
        }
    }
    if (m > 1) {
        r = r / (static_cast<long long>(m) * m) * (static_cast<long long>(m) * m - 1);
    }
    return r;
}

// ---------------------------------------------------------------- sigma

void sigma_suite(Recorder& rec, const RunConfig& cfg, Rng& rng) {
    const ModulusTau tau(cfg.tau, cfg.q_truncation);
    const SigmaParams p(tau);
    const double tol = std::min(1e-9, cfg.tolerance);
    const auto random_z = [&] {
        for (;;) {
            const double s = rng.uniform(-1.0, 1.0);
            const double t = rng.uniform(-2.0, 2.0);
            if (frac_distance(s) > 0.05 || frac_distance(t) > 0.05) {
                return tau.from_coords(s, t);
            }
        }
    };

    for (int i = 0; i < 100; ++i) {
        const cplx z = random_z();
        const cplx a = sigma(z, p);
        rec.residual(index_id("oddness", i), std::abs(a + sigma(-z, p)) / std::abs(a), tol, "sigma(-z) = -sigma(z)",
                     "z=" + format_complex(z), "sigma is odd");
    }

    for (long long k = -3; k <= 3; ++k) {
        for (long long l = -3; l <= 3; ++l) {
            if (k == 0 && l == 0) {
                continue;
            }
            double worst = 0.0;
            for (int j = 0; j < 4; ++j) {
                worst = std::max(worst, check_transform(random_z(), k, l, p));
            }
            rec.residual("quasi_periodicity/k=" + std::to_string(k) + ",l=" + std::to_string(l), worst, tol,
                         "(-1)^(k+l) e^(-kz - pi i k^2 tau) sigma(z)", "max over 4 z", "quasi-periodicity of sigma");
        }
    }
    for (int i = 0; i < 100; ++i) {
        long long k = 0;
        long long l = 0;
        while (k == 0 && l == 0) {
            k = rng.integer(-3, 3);
            l = rng.integer(-3, 3);
        }
        const cplx z = random_z();
        rec.residual(index_id("quasi_periodicity_random", i), check_transform(z, k, l, p), tol,
                     "(-1)^(k+l) e^(-kz - pi i k^2 tau) sigma(z)",
                     "k=" + std::to_string(k) + " l=" + std::to_string(l) + " z=" + format_complex(z),
                     "quasi-periodicity of sigma");
    }

    for (int n = 1; n <= 6; ++n) {
        const auto pts = torsion_points(n, tau);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const double v = std::abs(sigma(pts[i].rep, p));
            const bool zero = is_zero_point(pts[i]);
            rec.verdict("zero_set/n=" + std::to_string(n) + "/" + std::to_string(i / n) + "," + std::to_string(i % n),
                        zero ? v < 1e-10 : v > 1e-10, v, zero ? "|sigma| < 1e-10" : "|sigma| > 1e-10", sci(v),
                        "sigma vanishes exactly on the lattice");
        }
    }
    for (long long l = -1; l <= 1; ++l) {
        for (long long k = -1; k <= 1; ++k) {
            const double v = std::abs(sigma(tau.lattice_point(l, k), p));
            rec.verdict("zero_set/lattice/" + std::to_string(l) + "," + std::to_string(k), v < 1e-10, v,
                        "|sigma| < 1e-10", sci(v), "sigma vanishes exactly on the lattice");
        }
    }
    for (int i = 0; i < 100; ++i) {
        const cplx z = random_z();
        const double v = std::abs(sigma(z, p));
        rec.verdict(index_id("zero_set_random", i), v > 1e-10, v, "|sigma| > 1e-10", sci(v),
                    "sigma vanishes exactly on the lattice");
    }

    // Jets against 5- and 7-point central differences.
    const std::vector<cplx> centers{0.0, cplx(0.3, 0.2), tau.from_coords(0.25, 0.1), tau.from_coords(0.4, 0.45)};
    for (std::size_t c = 0; c < centers.size(); ++c) {
        const cplx z0 = centers[c];
        const auto f = [&](double steps, double h) { return sigma(z0 + steps * h, p); };
        const double h = 1e-3;
        const double h3 = 1e-2;
        const cplx d1 = (-f(2, h) + 8.0 * f(1, h) - 8.0 * f(-1, h) + f(-2, h)) / (12.0 * h);
        const cplx d2 = (-f(2, h) + 16.0 * f(1, h) - 30.0 * f(0, h) + 16.0 * f(-1, h) - f(-2, h)) / (12.0 * h * h);
        const cplx d3 = (-f(3, h3) + 8.0 * f(2, h3) - 13.0 * f(1, h3) + 13.0 * f(-1, h3) - 8.0 * f(-2, h3) +
                         f(-3, h3)) /
                        (8.0 * h3 * h3 * h3);
        const auto jet = sigma_jet_scaled(z0, 3, p).materialize();
        const std::vector<cplx> fd{sigma(z0, p), d1, d2 / 2.0, d3 / 6.0};
        double worst = 0.0;
        for (int j = 0; j <= 3; ++j) {
            worst = std::max(worst, std::abs(jet[j] - fd[j]) / std::max(1.0, std::abs(jet[j])));
        }
        rec.residual("jet/" + std::to_string(c), worst, 1e-6, "finite differences to order 3",
                     "c=" + format_complex(z0), "Taylor jet of sigma");
    }
    const auto jet0 = sigma_jet_scaled(0.0, 1, p).materialize();
    rec.residual("jet/normalization", std::abs(jet0[1] - 1.0), tol, "sigma'(0) = 1", format_complex(jet0[1]),
                 "sigma(z) = z + O(z^2)");
}

// ---------------------------------------------------------------- delta

void delta_suite(Recorder& rec, const RunConfig& cfg, Rng& rng) {
    const ModulusTau tau(cfg.tau, cfg.q_truncation);
    const SigmaParams p(tau);
    const double tol = cfg.tolerance;
    const double tight = std::min(1e-10, tol);

    for (int d = 2; d <= cfg.d_max; ++d) {
        const auto vars = numbered("x", d);
        const RingPtr ring = SeriesRing::make(vars, cfg.degree_cap);
        auto weights = sum_zero_cocharacters(d, 2);
        if (d == 2) {
            // both orderings, so that e.g. (1,-1) -> (3,-3) is a lift pair
            const std::size_t count = weights.size();
            for (std::size_t i = 0; i < count; ++i) {
                weights.push_back({weights[i][1], weights[i][0]});
            }
        }
        for (const auto& m : weights) {
            const SplitBundle v = SplitBundle::from_vars(vars, m);
            for (int n = 2; n <= cfg.n_max; ++n) {
                for (const auto& lift : matrix_points(n, tau)) {
                    const std::string id = config_id(m, lift);
                    const ExpansionPoint ep = ExpansionPoint::finite(lift);
                    const TruncatedSeries base = delta_A(v, ep, ring, p);

                    double worst = 0.0;
                    for (int i = 0; i < 20; ++i) {
                        Cocharacter delta(d, 0);
                        if (i == 0) {
                            delta[0] = 1;
                            delta[1] = -1;
                        } else {
                            delta = random_sum_zero(rng, d, 2);
                        }
                        Cocharacter mt = m;
                        for (int j = 0; j < d; ++j) {
                            mt[j] += n * delta[j];
                        }
                        const double r = scaled_diff(delta_A(v, GradedCocharacter{mt, {}}, ep, ring, p), base);
                        if (i == 0) {
                            rec.residual("lift_pair/" + id + "/" + format_cocharacter(m) + "->" +
                                             format_cocharacter(mt),
                                         r, tol, "delta(m + n D) = delta(m)", sci(r),
                                         "delta is independent of the lift of m");
                        }
                        worst = std::max(worst, r);
                    }
                    rec.residual("lift_independence/" + id, worst, tol, "delta(m + n D) = delta(m), 20 shifts",
                                 sci(worst), "delta is independent of the lift of m");

                    const TruncatedSeries dp = delta_prime(v, ep, ring, p);
                    const TruncatedSeries dpp = delta_double_prime(v, ep, ring, p);
                    rec.residual("factorization/" + id, scaled_diff(dp * dpp, base), tight, "delta = delta' delta''",
                                 "", "delta splits into moving and fixed parts");
                    const double unit = std::abs(dp.constant_term());
                    rec.verdict("delta_prime_unit/" + id, unit > 1e-6, unit, "|delta'(0)| > 1e-6", sci(unit),
                                "delta' has no zero or pole at 0");

                    const TruncatedSeries fixed = euler_sigma(fixed_part(v, ep), ring, p);
                    const int sign = fixed_part_sign(v, ep);
                    rec.residual("fixed_euler/" + id, scaled_diff(dpp, fixed), tol, "delta'' = e(V^A)",
                                 "sign " + std::to_string(sign), "delta'' is the Euler class of the fixed part");
                    rec.residual("fixed_euler_signed/" + id, scaled_diff(dpp, fixed * static_cast<double>(sign)), tol,
                                 "delta'' = (-1)^((k+l+kl) sum D) e(V^A)", "sign " + std::to_string(sign),
                                 "delta'' is the Euler class of the fixed part, up to the automorphy sign");

                    std::vector<std::pair<long long, long long>> shifts{{0, 1}, {1, 0}};
                    while (shifts.size() < 4) {
                        const long long r = rng.integer(-2, 2);
                        const long long s = rng.integer(-2, 2);
                        if (r != 0 || s != 0) {
                            shifts.emplace_back(r, s);
                        }
                    }
                    const bool phi_trivial = phi(m) % n == 0;
                    for (const auto& [r, s] : shifts) {
                        const auto rep = a_lift_factor_check(
                            v, ep, ExpansionPoint::finite(shift_lift(lift, r, s, tau)), ring, p);
                        const std::string sid = id + "/r=" + std::to_string(r) + ",s=" + std::to_string(s);
                        const double lit = std::max(std::abs(rep.measured - rep.expected_literal),
                                                    rep.proportionality_residual);
                        const double cor =
                            std::max(std::abs(rep.measured - rep.expected), rep.proportionality_residual);
                        rec.residual("a_lift_law/" + sid, lit, tol, format_complex(rep.expected_literal),
                                     format_complex(rep.measured), "dependence of delta on the lift of a");
                        rec.residual("a_lift_law_corrected/" + sid, cor, tol, format_complex(rep.expected),
                                     format_complex(rep.measured),
                                     "dependence of delta on the lift of a, with the 2 pi i r factor");
                        if (phi_trivial) {
                            const double t =
                                std::max(std::abs(rep.measured - 1.0), rep.proportionality_residual);
                            rec.residual("a_lift_phi_trivial/" + sid, t, tol, "1", format_complex(rep.measured),
                                         "delta does not depend on the lift when phi = 0 mod n");
                        }
                    }

                    // Transposition of the first two equal weights.
                    for (int i = 0; i + 1 < d; ++i) {
                        if (m[i] != m[i + 1]) {
                            continue;
                        }
                        std::vector<int> perm(d);
                        for (int j = 0; j < d; ++j) {
                            perm[j] = j;
                        }
                        std::swap(perm[i], perm[i + 1]);
                        const TruncatedSeries e = euler_sigma(v, ring, p, lift.a_lift);
                        const double r = std::max(scaled_diff(permute_vars(base, perm), base),
                                                  scaled_diff(permute_vars(e, perm), e));
                        rec.residual("weyl_invariance/" + id, r, tight, "invariant under W(m)", sci(r),
                                     "classes are W(m)-invariant");
                        break;
                    }
                }
            }
        }
    }

    const double exact = std::min(1e-12, tol);
    for (int i = 0; i < 100; ++i) {
        const int d0 = static_cast<int>(rng.integer(1, 3));
        const int d1 = static_cast<int>(rng.integer(0, 2));
        const auto a = numbered("a", d0);
        const auto b = numbered("b", d1);
        Cocharacter m0(d0);
        Cocharacter m1(d1);
        for (auto& w : m0) {
            w = rng.integer(-3, 3);
        }
        for (auto& w : m1) {
            w = rng.integer(-3, 3);
        }
        std::vector<std::string> names = a;
        names.insert(names.end(), b.begin(), b.end());
        names.emplace_back(kZ);
        const RingPtr ring = SeriesRing::make(names, 2);
        const SplitBundle v = SplitBundle::graded(a, m0, b, m1);
        const TruncatedSeries total = chern_total_borel(v, ring);
        const std::string desc = format_cocharacter(m0) + "-" + format_cocharacter(m1);
        rec.residual(index_id("chern_c1", i), scaled_diff(c1_borel(v, ring), homogeneous_part(total, 1)), exact,
                     "degree-1 part of prod(1 + x + m z)", desc, "first Borel Chern class");
        rec.residual(index_id("chern_c2", i), scaled_diff(c2_borel(v, ring), homogeneous_part(total, 2)), exact,
                     "degree-2 part of prod(1 + x + m z)", desc, "second Borel Chern class");
    }
    for (int d = 2; d <= std::max(2, cfg.d_max); ++d) {
        const auto vars = numbered("x", d);
        std::vector<std::string> names = vars;
        names.emplace_back(kZ);
        const RingPtr ring = SeriesRing::make(names, 2);
        std::vector<TruncatedSeries> x;
        for (const auto& name : vars) {
            x.push_back(TruncatedSeries::variable(ring, name));
        }
        const TruncatedSeries z = TruncatedSeries::variable(ring, kZ);
        TruncatedSeries e2(ring);
        for (int i = 0; i < d; ++i) {
            for (int j = i + 1; j < d; ++j) {
                e2 += x[i] * x[j];
            }
        }
        for (const auto& m : sum_zero_cocharacters(d, 2)) {
            TruncatedSeries expected = e2 - z * z * static_cast<double>(phi(m));
            for (int i = 0; i < d; ++i) {
                expected -= x[i] * z * static_cast<double>(m[i]);
            }
            const SplitBundle v = SplitBundle::from_vars(vars, m);
            rec.residual("chern_c2_sum_zero/d=" + std::to_string(d) + "/m=" + format_cocharacter(m),
                         scaled_diff(c2_borel(v, ring), expected), exact, "e2(x) - sum m x z - phi z^2", "",
                         "second Borel Chern class of an SU bundle");
        }
    }
}

// ---------------------------------------------------------------- looijenga

void looijenga_suite(Recorder& rec, const RunConfig& cfg, Rng& rng) {
    const ModulusTau tau(cfg.tau, cfg.q_truncation);
    const SigmaParams p(tau);
    const double tol = cfg.tolerance;
    const double exact = std::min(1e-12, tol);

    for (int i = 0; i < 500; ++i) {
        const int d = static_cast<int>(rng.integer(2, 6));
        const Cocharacter m = random_sum_zero(rng, d, 4);
        const Cocharacter mp = random_sum_zero(rng, d, 4);
        const bool ok = cocycle_condition_check(m, mp) && polarization_check(m, mp);
        rec.verdict(index_id("cocycle", i), ok, ok ? 0.0 : 1.0, "L(m + m') = L(m')(u q^m) L(m)",
                    format_cocharacter(m) + " " + format_cocharacter(mp), "cocycle condition for the Looijenga bundle");
    }

    for (int d = 2; d <= std::min(cfg.d_max, 4); ++d) {
        for (const auto& m : sum_zero_cocharacters(d, 2)) {
            double worst = 0.0;
            int used = 0;
            for (int i = 0; i < 200; ++i) {
                std::vector<cplx> x(d);
                cplx s = 0.0;
                for (int j = 0; j + 1 < d; ++j) {
                    x[j] = cplx(rng.uniform(-1.0, 1.0), rng.uniform(-kPi, kPi));
                    s += x[j];
                }
                x[d - 1] = -s;
                LoopPoint u{{}, true};
                for (const auto& xj : x) {
                    u.u.push_back(std::exp(xj));
                }
                try {
                    worst = std::max(worst, section_check(m, u, p));
                    ++used;
                } catch (const std::domain_error&) {
                }
            }
            rec.residual("section/m=" + format_cocharacter(m), worst, tol, "sigma(u q^m) = u^-m q^-phi sigma(u)",
                         std::to_string(used) + " samples", "the sigma product is a section of the Looijenga bundle");
        }
    }

    for (int n = 2; n <= cfg.n_max; ++n) {
        for (const auto& lift : matrix_points(n, tau)) {
            const cplx w = weil_pairing(lift, tau);
            const double root = std::abs(std::pow(w, n) - 1.0);
            rec.residual("weil_root/" + lift_id(lift), root, exact, "w^n = 1", format_complex(w),
                         "the Weil pairing is an n-th root of unity");
            double worst = 0.0;
            for (int i = 0; i < 100; ++i) {
                const LiftData l2 = shift_lift(lift, rng.integer(-5, 5), rng.integer(-5, 5), tau);
                worst = std::max(worst, std::abs(weil_pairing(l2, tau) - w));
            }
            rec.residual("weil_lift_invariance/" + lift_id(lift), worst, exact, format_complex(w), sci(worst),
                         "the Weil pairing does not depend on the lift");
            const Cocharacter m = random_sum_zero(rng, 3, 3);
            const cplx f = weil_factor(m, lift, 1, tau);
            rec.residual("weil_factor_root/" + lift_id(lift), std::abs(std::pow(f, n) - 1.0), exact, "w^(phi n) = 1",
                         format_complex(f), "the Weil pairing is an n-th root of unity");
        }
    }
    const cplx w_half = weil_pairing(lift_from_lattice(1, 0, 2, tau), tau);
    rec.residual("weil_half_period/pi_i", std::abs(w_half + 1.0), exact, "-1", format_complex(w_half),
                 "Weil pairing of pi i with q^(1/2)");
    const cplx w_tau = weil_pairing(lift_from_lattice(0, 1, 2, tau), tau);
    rec.residual("weil_half_period/pi_i_tau", std::abs(w_tau - 1.0), exact, "1", format_complex(w_tau),
                 "Weil pairing of pi i tau with q^(1/2)");

    const int pd = std::min(cfg.d_max, 4);
    for (const auto& [m0, m1] : string_pairs(pd, 2)) {
        const auto rep = pair_trivialization_check(m0, m1, tau, 50, rng.bits());
        rec.verdict("pair_trivial/" + pair_id(m0, m1), rep.exponent_trivial && rep.max_deviation < tol,
                    rep.max_deviation, "ratio 1 on the locus",
                    "deviation " + sci(rep.max_deviation) + " constraint " + sci(rep.max_constraint_residual),
                    "equal phi trivializes the pair on the String locus");
    }
    std::vector<Cocharacter> small;
    for (int d = 2; d <= std::min(cfg.d_max, 3); ++d) {
        const auto ms = sum_zero_cocharacters(d, 2);
        small.insert(small.end(), ms.begin(), ms.end());
    }
    for (std::size_t i = 0; i < small.size(); ++i) {
        for (std::size_t j = i + 1; j < small.size(); ++j) {
            if (phi(small[i]) == phi(small[j])) {
                continue;
            }
            const auto rep = pair_trivialization_check(small[i], small[j], tau, 50, rng.bits());
            const auto& e = rep.ratio.front();
            rec.verdict("pair_nontrivial/" + pair_id(small[i], small[j]),
                        !rep.exponent_trivial && rep.max_deviation > 1e-6, rep.max_deviation,
                        "nonzero exponent, ratio != 1",
                        "z^" + std::to_string(e.z_exponent) + " q^" + std::to_string(e.q_exponent) + "/" +
                            std::to_string(e.q_denominator),
                        "unequal phi obstructs the pair trivialization");
        }
    }

    for (const Cocharacter& m : {Cocharacter{1, -1}, Cocharacter{2, -1, -1}, Cocharacter{1, 1, -2}}) {
        const auto vars = numbered("x", m.size());
        std::vector<std::string> names = vars;
        names.emplace_back(kZ);
        const RingPtr ring = SeriesRing::make(names, std::min(cfg.degree_cap, 4));
        const SplitBundle v = SplitBundle::from_vars(vars, m);
        for (int n = 2; n <= std::min(cfg.n_max, 3); ++n) {
            const LiftData lift = matrix_points(n, tau).front();
            for (long long s = 1; s <= 2; ++s) {
                const auto rep = gamma_lift_law_check(v, ExpansionPoint::finite(lift),
                                                      ExpansionPoint::finite(shift_lift(lift, 0, s, tau)), ring, p);
                const double r = std::max(std::abs(rep.measured - rep.expected), rep.proportionality_residual);
                rec.residual("gamma_lift_law/" + config_id(m, lift) + "/s=" + std::to_string(s), r, tol,
                             format_complex(rep.expected), format_complex(rep.measured),
                             "the gluing factor changes by w^(s phi) with the lift");
            }
        }
    }
}

// ---------------------------------------------------------------- divisors

// Points of order dividing 6, in coordinates.
CurvePoint random_torsion(Rng& rng, const ModulusTau& tau) {
    return point_from_coords(static_cast<double>(rng.integer(0, 5)) / 6.0,
                             static_cast<double>(rng.integer(0, 5)) / 6.0, tau);
}

CurvePoint weighted_sum(const Cocharacter& m, const std::vector<CurvePoint>& pts, const ModulusTau& tau) {
    CurvePoint s = reduce_point(0.0, tau);
    for (std::size_t i = 0; i < m.size(); ++i) {
        s = point_add(s, point_mul(m[i], pts[i], tau), tau);
    }
    return s;
}

// Points for m1 with sum m1 P1 = sum m0 P0; the last nonzero weight of m1
// absorbs the difference.
std::vector<CurvePoint> matching_points(const Cocharacter& m0, const std::vector<CurvePoint>& p0,
                                        const Cocharacter& m1, Rng& rng, const ModulusTau& tau) {
    std::vector<CurvePoint> p1;
    for (std::size_t i = 0; i < m1.size(); ++i) {
        p1.push_back(random_torsion(rng, tau));
    }
    std::size_t j = m1.size();
    while (j > 0 && m1[j - 1] == 0) {
        --j;
    }
    --j;
    p1[j] = reduce_point(0.0, tau);
    const CurvePoint gap = point_add(weighted_sum(m0, p0, tau), point_neg(weighted_sum(m1, p1, tau), tau), tau);
    p1[j] = point_from_coords(gap.s / static_cast<double>(m1[j]), gap.t / static_cast<double>(m1[j]), tau);
    return p1;
}

void divisors_suite(Recorder& rec, const RunConfig& cfg, Rng& rng) {
    const ModulusTau tau(cfg.tau, cfg.q_truncation);
    const SigmaParams p(tau);
    const double tol = cfg.tolerance;

    for (int n = 1; n <= cfg.n_max; ++n) {
        const auto all = torsion_points(n, tau);
        const auto exact = exact_order_points(n, tau);
        const bool orders = std::all_of(exact.begin(), exact.end(),
                                        [&](const CurvePoint& q) { return point_order(q, n) == n; });
        const bool ok = static_cast<long long>(all.size()) == static_cast<long long>(n) * n &&
                        static_cast<long long>(exact.size()) == exact_order_count(n) && orders;
        rec.verdict("torsion_count/n=" + (n < 10 ? "0" + std::to_string(n) : std::to_string(n)), ok, ok ? 0.0 : 1.0,
                    std::to_string(n * n) + " / " + std::to_string(exact_order_count(n)),
                    std::to_string(all.size()) + " / " + std::to_string(exact.size()),
                    "the n-torsion has n^2 points");
    }

    const std::vector<std::pair<std::string, CurvePoint>> bases{
        {"zero", reduce_point(0.0, tau)},
        {"half", point_from_coords(0.5, 0.0, tau)},
        {"third", point_from_coords(1.0 / 3.0, 2.0 / 3.0, tau)},
        {"generic", point_from_coords(0.137, 0.291, tau)}};
    for (const auto& [name, pt] : bases) {
        for (long long n = -3; n <= 4; ++n) {
            const Divisor dv = torsion_divisor(pt, n, tau);
            const long long deg = divisor_degree(dv);
            const bool sum_ok = n == 0 ? dv.empty() : same_point(divisor_curve_sum(dv, tau), point_mul(-n, pt, tau));
            rec.verdict("torsion_divisor/P=" + name + "/n=" + std::to_string(n), deg == n * n && sum_ok,
                        static_cast<double>(std::abs(deg - n * n)), "degree " + std::to_string(n * n) + ", sum -nP",
                        "degree " + std::to_string(deg), "D(P, n) has degree n^2");
        }
    }

    for (int i = 0; i < 200; ++i) {
        const int d = static_cast<int>(rng.integer(2, 6));
        const Cocharacter m = random_sum_zero(rng, d, 4);
        std::vector<CurvePoint> pts;
        for (int j = 0; j < d; ++j) {
            pts.push_back(point_from_coords(rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0), tau));
        }
        const long long deg = divisor_degree(euler_divisor(m, pts, tau));
        rec.verdict(index_id("euler_divisor_degree", i), deg == 2 * phi(m), static_cast<double>(std::abs(deg - 2 * phi(m))),
                    std::to_string(2 * phi(m)), std::to_string(deg) + " m=" + format_cocharacter(m),
                    "deg f_m = 2 phi(m)");
    }

    const int pd = std::min(cfg.d_max, 4);
    for (const auto& [m0, m1] : string_pairs(pd, 2)) {
        std::vector<CurvePoint> p0;
        for (std::size_t i = 0; i < m0.size(); ++i) {
            p0.push_back(random_torsion(rng, tau));
        }
        const auto p1 = matching_points(m0, p0, m1, rng, tau);
        const auto rep = string_divisor_function(m0, p0, m1, p1, p);
        const std::string id = "string_divisor/" + pair_id(m0, m1);
        rec.verdict(id + "/principal", rep.principal && rep.function.has_value(), static_cast<double>(rep.degree),
                    "principal", "degree " + std::to_string(rep.degree) + " support " +
                                     std::to_string(rep.divisor.entries().size()),
                    "String pairs have principal Euler divisor difference");
        if (!rep.function) {
            continue;
        }
        const EllipticFunction& f = *rep.function;
        double worst = 0.0;
        for (int i = 0; i < 4; ++i) {
            const cplx z = tau.from_coords(rng.uniform(0.05, 0.95), rng.uniform(0.05, 0.95)) + cplx(0.013, 0.007);
            const cplx fz = f(z);
            worst = std::max({worst, std::abs(f(z + tau.lattice_point(1, 0)) - fz) / std::abs(fz),
                              std::abs(f(z + tau.lattice_point(0, 1)) - fz) / std::abs(fz)});
        }
        rec.residual(id + "/periodicity", worst, tol, "f(z + lattice) = f(z)", sci(worst),
                     "the String divisor is the divisor of an elliptic function");
        bool winding_ok = true;
        std::string seen;
        for (const auto& [pt, mult] : rep.divisor.entries()) {
            const int w = winding_number(f, pt.rep, 1e-2, 256);
            winding_ok = winding_ok && w == mult;
            seen += std::to_string(w) + " ";
        }
        rec.verdict(id + "/winding", winding_ok, winding_ok ? 0.0 : 1.0, "multiplicities of the divisor", seen,
                    "the String divisor is the divisor of an elliptic function");
    }

    std::vector<Cocharacter> small;
    for (int d = 2; d <= std::min(cfg.d_max, 3); ++d) {
        const auto ms = sum_zero_cocharacters(d, 2);
        small.insert(small.end(), ms.begin(), ms.end());
    }
    for (std::size_t i = 0; i < small.size(); ++i) {
        for (std::size_t j = i + 1; j < small.size(); ++j) {
            const long long gap = 2 * (phi(small[i]) - phi(small[j]));
            if (gap == 0) {
                continue;
            }
            std::vector<CurvePoint> p0;
            for (std::size_t k = 0; k < small[i].size(); ++k) {
                p0.push_back(random_torsion(rng, tau));
            }
            const auto p1 = matching_points(small[i], p0, small[j], rng, tau);
            const auto rep = string_divisor_function(small[i], p0, small[j], p1, p);
            rec.verdict("string_divisor_gap/" + pair_id(small[i], small[j]),
                        !rep.principal && rep.degree_gap == gap && rep.degree == gap,
                        static_cast<double>(std::abs(rep.degree - gap)), "degree gap " + std::to_string(gap),
                        "degree " + std::to_string(rep.degree), "unequal phi gives a non-principal divisor");
        }
    }
}

// ---------------------------------------------------------------- coordinate

void coordinate_suite(Recorder& rec, const RunConfig& cfg, Rng& rng) {
    const ModulusTau tau(cfg.tau, cfg.q_truncation);
    const SigmaParams p(tau);
    const double tol = cfg.tolerance;
    const CoordinateData cd = default_coordinate_data(tau);
    const CoordinateValidation v = validate_coordinate_divisor(cd, tau, 12);
    const auto flag = [&](const char* name, bool ok) {
        rec.verdict(std::string("validation/") + name, ok, ok ? 0.0 : 1.0, "true", ok ? "true" : "false",
                    "conditions on the coordinate divisor");
    };
    flag("degree_zero", v.degree_zero);
    flag("curve_sum_zero", v.curve_sum_zero);
    flag("torsion_support", v.torsion_support);
    flag("identity_multiplicity_one", v.identity_multiplicity_one);
    if (!v.ok()) {
        return;
    }

    const CoordinateFunction t1 = build_t1(cd, p);
    bool t1_ok = true;
    for (const auto& [pt, mult] : cd.divisor.entries()) {
        t1_ok = t1_ok && winding_number(t1, pt.rep, 1e-2, 256) == mult;
    }
    rec.verdict("t1_divisor", t1_ok, t1_ok ? 0.0 : 1.0, "winding numbers match the divisor", t1_ok ? "match" : "mismatch",
                "t_1 has the prescribed divisor");

    for (int s = 2; s <= 4; ++s) {
        const CoordinateFunction ts = build_ts(s, cd, p);
        const auto pts = exact_order_points(s, tau);
        double worst = 0.0;
        for (const auto& q : pts) {
            worst = std::max(worst, std::abs(ts(q.rep)));
        }
        const std::string id = "/s=" + std::to_string(s);
        rec.residual("ts_vanishing" + id, worst, tol, "t_s = 0 on the points of exact order s", sci(worst),
                     "t_s vanishes on C<s>*");
        const LaurentJet jet = normalization_jet(s, cd, p);
        const double norm = jet.valuation == 0 ? std::abs(jet.unit[0] - 1.0) : INFINITY;
        rec.residual("ts_normalization" + id, norm, tol, "(t_1^N t_s)(0) = 1",
                     "valuation " + std::to_string(jet.valuation) + " value " + format_complex(jet.unit[0]),
                     "normalization of t_s");
        const LaurentJet pole = laurent_jet(ts.f, 2, p);
        const long long want = -static_cast<long long>(pts.size());
        rec.verdict("ts_pole_order" + id, pole.valuation == want, static_cast<double>(std::abs(pole.valuation - want)),
                    std::to_string(want), std::to_string(pole.valuation), "t_s has divisor C<s> - |C<s>|(0)");
        double smallest = INFINITY;
        for (int i = 0; i < 10; ++i) {
            const cplx z = tau.from_coords(rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0));
            smallest = std::min(smallest, std::abs(ts(z)));
        }
        rec.verdict("ts_nonvanishing" + id, smallest > 1e-6, smallest, "|t_s| > 1e-6 at random points", sci(smallest),
                    "t_s has no other zeros");
    }
}

// ---------------------------------------------------------------- orientation

void orientation_suite(Recorder& rec, const RunConfig& cfg, Rng& rng) {
    const ModulusTau tau(cfg.tau, cfg.q_truncation);
    const SigmaParams p(tau);
    const double tol = cfg.tolerance;
    const double tight = std::min(1e-10, tol);
    const std::vector<std::pair<long long, long long>> shifts{{0, 0}, {0, 1}, {1, -1}};

    for (const auto& [m0, m1] : string_pairs(cfg.d_max, 2)) {
        for (int n = 2; n <= cfg.n_max; ++n) {
            const auto pts = matrix_points(n, tau);
            std::vector<LiftData> chosen{pts.front()};
            if (pts.size() > 1) {
                chosen.push_back(pts.back());
            }
            for (const auto& lift : chosen) {
                const GluingReport g = gluing_check(m0, m1, lift, shifts, p, cfg.degree_cap);
                const std::string id = pair_id(m0, m1) + "/" + lift_id(lift);
                rec.residual("gluing/" + id, g.max_germ_residual, tol, "delta^B = translated Euler class",
                             sci(g.max_germ_residual), "the germs glue on the String locus");
                rec.residual("gluing_lift/" + id, g.max_lift_deviation, tol, "same germ at 3 lifts",
                             sci(g.max_lift_deviation), "the glued germ does not depend on the lift");
            }
        }
    }

    std::vector<Cocharacter> small;
    for (int d = 2; d <= std::min(cfg.d_max, 3); ++d) {
        const auto ms = sum_zero_cocharacters(d, 2);
        small.insert(small.end(), ms.begin(), ms.end());
    }
    for (std::size_t i = 0; i < small.size(); ++i) {
        for (std::size_t j = i + 1; j < small.size(); ++j) {
            const long long dphi = phi(small[i]) - phi(small[j]);
            int n = 0;
            for (int c = 2; c <= cfg.n_max; ++c) {
                if (dphi % c != 0) {
                    n = c;
                    break;
                }
            }
            if (n == 0) {
                continue;
            }
            const LiftData lift = lift_from_lattice(1, 0, n, tau);
            const GluingReport g = gluing_check(small[i], small[j], lift, shifts, p, std::min(cfg.degree_cap, 4));
            double nonunit = 0.0;
            std::string measured;
            for (const auto& r : g.lift_ratio) {
                measured += format_complex(r) + " ";
            }
            for (const auto& r : g.predicted_ratio) {
                nonunit = std::max(nonunit, std::abs(r - 1.0));
            }
            rec.verdict("broken_pair/" + pair_id(small[i], small[j]) + "/" + lift_id(lift),
                        g.max_prediction_error < tol && nonunit > 0.5, g.max_prediction_error,
                        "ratios w^(s dphi) e^(2 pi i r k dphi / n), not all 1", measured,
                        "non-String pairs depend on the lift");
        }
    }

    for (int i = 0; i < 20; ++i) {
        const int dv = static_cast<int>(rng.integer(2, 3));
        const int dw = static_cast<int>(rng.integer(2, 3));
        const Cocharacter mv = random_sum_zero(rng, dv, 3);
        const Cocharacter mw = random_sum_zero(rng, dw, 3);
        const auto xv = numbered("x", dv);
        const auto yw = numbered("y", dw);
        std::vector<std::string> names = xv;
        names.insert(names.end(), yw.begin(), yw.end());
        const RingPtr ring = SeriesRing::make(names, cfg.degree_cap);
        const SplitBundle v = SplitBundle::from_vars(xv, mv);
        const SplitBundle w = SplitBundle::from_vars(yw, mw);
        const int n = static_cast<int>(rng.integer(2, std::max(2, cfg.n_max)));
        const auto pts = matrix_points(n, tau);
        const LiftData lift = pts[static_cast<std::size_t>(rng.integer(0, static_cast<long long>(pts.size()) - 1))];
        const ExpansionPoint ep = ExpansionPoint::finite(lift);
        const std::string desc = format_cocharacter(mv) + "+" + format_cocharacter(mw) + " " + lift_id(lift);
        const double r = multiplicativity_check(v, w, ep, ring, p);
        rec.residual(index_id("multiplicativity", i), r, tight, "Sigma(V + W) = Sigma(V) Sigma(W)", desc,
                     "the orientation is exponential");
        const ThomClassGerm g = thom_sigma_class(v, ep, ring, p);
        const double t = scaled_diff(g.thom_factor * g.euler_unit, euler_sigma(v, ring, p, lift.a_lift));
        rec.residual(index_id("thom_product", i), t, tight, "Thom factor times Euler unit = Euler class", desc,
                     "Sigma_A = Thom(V^A) e(V / V^A)");
    }
}

using SuiteFn = void (*)(Recorder&, const RunConfig&, Rng&);

SuiteFn suite_fn(std::string_view name) {
    if (name == "sigma") return sigma_suite;
    if (name == "delta") return delta_suite;
    if (name == "looijenga") return looijenga_suite;
    if (name == "divisors") return divisors_suite;
    if (name == "coordinate") return coordinate_suite;
    if (name == "orientation") return orientation_suite;
    return nullptr;
}

std::uint64_t suite_seed(std::uint64_t seed, std::string_view name) {
    std::uint64_t h = 1469598103934665603ull;
    for (const char c : name) {
        h = (h ^ static_cast<unsigned char>(c)) * 1099511628211ull;
    }
    return seed ^ h;
}

} // namespace

void validate_config(const RunConfig& cfg) {
    if (!(cfg.tau.imag() > 0.0) || !std::isfinite(cfg.tau.real())) {
        throw ConfigError("Im tau must be positive");
    }
    if (!(cfg.tolerance > 0.0)) {
        throw ConfigError("tolerance must be positive");
    }
    if (cfg.q_truncation < 1 || cfg.degree_cap < 1 || cfg.d_max < 1 || cfg.n_max < 1) {
        throw ConfigError("caps must be at least 1");
    }
    if (cfg.degree_cap > SeriesRing::kMaxCap) {
        throw ConfigError("degree cap above " + std::to_string(SeriesRing::kMaxCap));
    }
    if (cfg.d_max > 6) {
        throw ConfigError("d_max above 6");
    }
    if (cfg.jobs < 1) {
        throw ConfigError("jobs must be at least 1");
    }
    for (const auto& s : cfg.suites) {
        if (s != "all" && suite_fn(s) == nullptr) {
            throw ConfigError("unknown suite '" + s + "'");
        }
    }
}

std::string_view to_string(CheckStatus s) {
    switch (s) {
    case CheckStatus::pass:
        return "pass";
    case CheckStatus::fail:
        return "fail";
    case CheckStatus::skip:
        return "skip";
    }
    return "fail";
}

std::vector<CheckReport> run_suite(std::string_view name, const RunConfig& cfg) {
    validate_config(cfg);
    const SuiteFn fn = suite_fn(name);
    if (fn == nullptr) {
        throw ConfigError("unknown suite '" + std::string(name) + "'");
    }
    Recorder rec{std::string(name)};
    Rng rng(suite_seed(cfg.seed, name));
    fn(rec, cfg, rng);
    return rec.take();
}

std::vector<CheckReport> run_suites(const RunConfig& cfg) {
    validate_config(cfg);
    std::vector<std::string> names;
    for (const auto& s : cfg.suites) {
        if (s == "all") {
            names.assign(kSuiteNames.begin(), kSuiteNames.end());
            break;
        }
        if (std::find(names.begin(), names.end(), s) == names.end()) {
            names.push_back(s);
        }
    }

    std::vector<std::vector<CheckReport>> parts(names.size());
    std::vector<std::exception_ptr> errors(names.size());
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t i = next++; i < names.size(); i = next++) {
            try {
                parts[i] = run_suite(names[i], cfg);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const std::size_t threads = std::min<std::size_t>(static_cast<std::size_t>(cfg.jobs), names.size());
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < threads; ++t) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto& t : pool) {
        t.join();
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }

    std::vector<CheckReport> out;
    for (auto& part : parts) {
        out.insert(out.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
    }
    std::stable_sort(out.begin(), out.end(), [](const CheckReport& a, const CheckReport& b) {
        return std::tie(a.suite, a.case_id) < std::tie(b.suite, b.case_id);
    });
    return out;
}

bool all_passed(const std::vector<CheckReport>& reports) {
    return std::none_of(reports.begin(), reports.end(),
                        [](const CheckReport& r) { return r.status == CheckStatus::fail; });
}

std::string format_report(const std::vector<CheckReport>& reports, ReportFormat format) {
    if (format == ReportFormat::json) {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& r : reports) {
            nlohmann::ordered_json o;
            o["suite"] = r.suite;
            o["case"] = r.case_id;
            o["status"] = std::string(to_string(r.status));
            if (std::isfinite(r.residual)) {
                o["residual"] = r.residual;
            } else {
                o["residual"] = nullptr;
            }
            o["expected"] = r.expected;
            o["measured"] = r.measured;
            o["anchor"] = r.anchor;
            arr.push_back(std::move(o));
        }
        return arr.dump(2) + "\n";
    }
    std::string out;
    for (const auto& r : reports) {
        char res[32];
        std::snprintf(res, sizeof res, "%.3e", r.residual);
        std::string status(to_string(r.status));
        std::transform(status.begin(), status.end(), status.begin(), [](unsigned char c) { return std::toupper(c); });
        out += status + " " + r.suite + " " + r.case_id + " residual=" + res + " expected=\"" + r.expected +
               "\" measured=\"" + r.measured + "\"\n";
    }
    return out;
}

void write_report(const std::vector<CheckReport>& reports, ReportFormat format, const std::string& path) {
    const std::string body = format_report(reports, format);
    if (path.empty() || path == "-") {
        std::cout << body << std::flush;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw std::runtime_error("cannot open '" + path + "' for writing");
    }
    f << body;
    if (!f.flush()) {
        throw std::runtime_error("write to '" + path + "' failed");
    }
}

std::vector<Cocharacter> sum_zero_cocharacters(int d, long long bound) {
    std::vector<Cocharacter> out;
    Cocharacter cur;
    const auto rec = [&](auto&& self, long long lo, long long sum) -> void {
        if (static_cast<int>(cur.size()) == d) {
            if (sum == 0 && std::any_of(cur.begin(), cur.end(), [](long long v) { return v != 0; })) {
                out.push_back(cur);
            }
            return;
        }
        for (long long v = lo; v <= bound; ++v) {
            cur.push_back(v);
            self(self, v, sum + v);
            cur.pop_back();
        }
    };
    rec(rec, -bound, 0);
    return out;
}

std::vector<std::pair<Cocharacter, Cocharacter>> string_pairs(int d_max, long long bound) {
    std::vector<Cocharacter> all;
    for (int d = 2; d <= d_max; ++d) {
        const auto ms = sum_zero_cocharacters(d, bound);
        all.insert(all.end(), ms.begin(), ms.end());
    }
    std::vector<std::pair<Cocharacter, Cocharacter>> out;
    for (std::size_t i = 0; i < all.size(); ++i) {
        for (std::size_t j = i + 1; j < all.size(); ++j) {
            if (phi(all[i]) == phi(all[j])) {
                out.emplace_back(all[i], all[j]);
            }
        }
    }
    return out;
}

std::vector<LiftData> matrix_points(int n, const ModulusTau& tau) {
    std::vector<LiftData> out;
    for (const auto& q : exact_order_points(n, tau)) {
        out.push_back(lift_from_lattice(std::llround(q.s * n), std::llround(q.t * n), n, tau));
    }
    return out;
}

std::string format_cocharacter(const Cocharacter& m) {
    std::string s = "(";
    for (std::size_t i = 0; i < m.size(); ++i) {
        s += (i ? "," : "") + std::to_string(m[i]);
    }
    return s + ")";
}

std::string format_complex(cplx z) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g%+.10gi", z.real(), z.imag());
    return buf;
}

} // namespace sigorient
