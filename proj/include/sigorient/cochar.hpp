#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "sigorient/series.hpp"

namespace sigorient {

// Integer weights m_1..m_d of a cocharacter of the maximal torus of U(d).
using Cocharacter = std::vector<long long>;

// Virtual cocharacter m0 - m1 (numerator and denominator weights).
struct GradedCocharacter {
    Cocharacter m0;
    Cocharacter m1;
};

long long weight_sum(const Cocharacter& m);
bool is_sum_zero(const Cocharacter& m);

// -sum_{i<j} m_i m_j. Exact; throws std::overflow_error on overflow.
long long phi(const Cocharacter& m);
// phi(m0) - phi(m1)
long long phi(const GradedCocharacter& m);
// (1/2) sum m_i^2; defined only for sum-zero m (std::invalid_argument otherwise).
long long phi_half_square(const Cocharacter& m);

// -sum_{i != j} m_i m'_j
long long pairing_I(const Cocharacter& m, const Cocharacter& mp);
// sum m_i m'_i; agrees with pairing_I when both are sum-zero.
long long pairing_dot(const Cocharacter& m, const Cocharacter& mp);

// -sum_{i != j} m_i x_j
TruncatedSeries pairing_I_mixed(const Cocharacter& m, std::span<const TruncatedSeries> x);
// sum m_i x_i
TruncatedSeries pairing_dot_mixed(const Cocharacter& m, std::span<const TruncatedSeries> x);

// phi(m + m') == phi(m) + I(m, m') + phi(m')
bool polarization_check(const Cocharacter& m, const Cocharacter& mp);

// Acts by (w m)_i = m_{perm[i]}.
struct WeylElement {
    std::vector<int> perm;

    static WeylElement identity(int d);
    bool is_identity() const;
};

Cocharacter apply_weyl(const WeylElement& w, const Cocharacter& m);
template <typename T>
std::vector<T> apply_weyl(const WeylElement& w, const std::vector<T>& v) {
    std::vector<T> out;
    out.reserve(w.perm.size());
    for (int i : w.perm) {
        out.push_back(v.at(i));
    }
    return out;
}

// Ascending weights and the permutation that produces them (stable).
std::pair<Cocharacter, WeylElement> weyl_normal_form(const Cocharacter& m);

struct FiniteReduction {
    std::vector<long long> residues; // in [0, n)
    int n = 1;
};

FiniteReduction reduce_mod(const Cocharacter& m, int n);

// Sum-zero integer vectors congruent to r with entries in [-bound, bound],
// lexicographically ascending. Throws std::invalid_argument if there are none.
std::vector<Cocharacter> enumerate_lifts(const FiniteReduction& r, long long bound);

struct StringFlags {
    bool sum_zero = false;  // sum m0 = sum m1 = 0
    bool phi_match = false; // phi(m0) = phi(m1), or congruent mod n
};

// n unset means the generic point (exact equality of phi).
StringFlags string_pair_flags(const Cocharacter& m0, const Cocharacter& m1, std::optional<int> n);

} // namespace sigorient
