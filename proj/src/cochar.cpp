#include "sigorient/cochar.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace sigorient {

namespace {

long long checked_mul(long long a, long long b) {
    long long r = 0;
    if (__builtin_mul_overflow(a, b, &r)) {
        throw std::overflow_error("cocharacter form overflow");
    }
    return r;
}

long long checked_add(long long a, long long b) {
    long long r = 0;
    if (__builtin_add_overflow(a, b, &r)) {
        throw std::overflow_error("cocharacter form overflow");
    }
    return r;
}

void require_same_length(std::size_t a, std::size_t b) {
    if (a != b) {
        throw std::invalid_argument("cocharacter length mismatch");
    }
}

long long mod_floor(long long a, long long n) { return ((a % n) + n) % n; }

} // namespace

long long weight_sum(const Cocharacter& m) {
    long long s = 0;
    for (long long v : m) {
        s = checked_add(s, v);
    }
    return s;
}

bool is_sum_zero(const Cocharacter& m) { return weight_sum(m) == 0; }

long long phi(const Cocharacter& m) {
    // -sum_{i<j} m_i m_j = (sum m_i^2 - (sum m_i)^2) / 2
    long long sq = 0;
    for (long long v : m) {
        sq = checked_add(sq, checked_mul(v, v));
    }
    const long long s = weight_sum(m);
    return (sq - checked_mul(s, s)) / 2;
}

long long phi(const GradedCocharacter& m) { return phi(m.m0) - phi(m.m1); }

long long phi_half_square(const Cocharacter& m) {
    if (!is_sum_zero(m)) {
        throw std::invalid_argument("half-square form needs a sum-zero cocharacter");
    }
    long long sq = 0;
    for (long long v : m) {
        sq = checked_add(sq, checked_mul(v, v));
    }
    return sq / 2;
}

long long pairing_dot(const Cocharacter& m, const Cocharacter& mp) {
    require_same_length(m.size(), mp.size());
    long long r = 0;
    for (std::size_t i = 0; i < m.size(); ++i) {
        r = checked_add(r, checked_mul(m[i], mp[i]));
    }
    return r;
}

long long pairing_I(const Cocharacter& m, const Cocharacter& mp) {
    require_same_length(m.size(), mp.size());
    return pairing_dot(m, mp) - checked_mul(weight_sum(m), weight_sum(mp));
}

TruncatedSeries pairing_dot_mixed(const Cocharacter& m, std::span<const TruncatedSeries> x) {
    require_same_length(m.size(), x.size());
    if (x.empty()) {
        throw std::invalid_argument("empty series vector");
    }
    TruncatedSeries r(x[0].ring());
    for (std::size_t i = 0; i < m.size(); ++i) {
        r += x[i] * static_cast<double>(m[i]);
    }
    return r;
}

TruncatedSeries pairing_I_mixed(const Cocharacter& m, std::span<const TruncatedSeries> x) {
    require_same_length(m.size(), x.size());
    if (x.empty()) {
        throw std::invalid_argument("empty series vector");
    }
    TruncatedSeries xs(x[0].ring());
    for (const auto& xi : x) {
        xs += xi;
    }
    return pairing_dot_mixed(m, x) - xs * static_cast<double>(weight_sum(m));
}

bool polarization_check(const Cocharacter& m, const Cocharacter& mp) {
    require_same_length(m.size(), mp.size());
    Cocharacter s(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        s[i] = checked_add(m[i], mp[i]);
    }
    return phi(s) == phi(m) + pairing_I(m, mp) + phi(mp);
}

WeylElement WeylElement::identity(int d) {
    WeylElement w;
    w.perm.resize(d);
    std::iota(w.perm.begin(), w.perm.end(), 0);
    return w;
}

bool WeylElement::is_identity() const {
    for (std::size_t i = 0; i < perm.size(); ++i) {
        if (perm[i] != static_cast<int>(i)) {
            return false;
        }
    }
    return true;
}

Cocharacter apply_weyl(const WeylElement& w, const Cocharacter& m) {
    require_same_length(w.perm.size(), m.size());
    return apply_weyl<long long>(w, m);
}

std::pair<Cocharacter, WeylElement> weyl_normal_form(const Cocharacter& m) {
    WeylElement w = WeylElement::identity(static_cast<int>(m.size()));
    std::stable_sort(w.perm.begin(), w.perm.end(), [&](int a, int b) { return m[a] < m[b]; });
    return {apply_weyl(w, m), w};
}

FiniteReduction reduce_mod(const Cocharacter& m, int n) {
    if (n < 1) {
        throw std::invalid_argument("modulus must be positive");
    }
    FiniteReduction r;
    r.n = n;
    for (long long v : m) {
        r.residues.push_back(mod_floor(v, n));
    }
    return r;
}

std::vector<Cocharacter> enumerate_lifts(const FiniteReduction& r, long long bound) {
    if (r.n < 1 || bound < 0) {
        throw std::invalid_argument("invalid reduction or bound");
    }
    const std::size_t d = r.residues.size();
    std::vector<std::vector<long long>> choices(d);
    for (std::size_t i = 0; i < d; ++i) {
        const long long res = mod_floor(r.residues[i], r.n);
        for (long long v = -bound; v <= bound; ++v) {
            if (mod_floor(v, r.n) == res) {
                choices[i].push_back(v);
            }
        }
    }
    std::vector<Cocharacter> out;
    Cocharacter cur(d);
    // Depth-first in lexicographic order; prune on the reachable sum range.
    auto rec = [&](auto&& self, std::size_t i, long long partial) -> void {
        if (i == d) {
            if (partial == 0) {
                out.push_back(cur);
            }
            return;
        }
        const long long rest = static_cast<long long>(d - i - 1) * bound;
        for (long long v : choices[i]) {
            const long long s = partial + v;
            if (s > rest || s < -rest) {
                continue;
            }
            cur[i] = v;
            self(self, i + 1, s);
        }
    };
    if (d > 0) {
        rec(rec, 0, 0);
    }
    if (out.empty()) {
        throw std::invalid_argument("no sum-zero lift within the bound");
    }
    return out;
}

StringFlags string_pair_flags(const Cocharacter& m0, const Cocharacter& m1, std::optional<int> n) {
    StringFlags f;
    f.sum_zero = is_sum_zero(m0) && is_sum_zero(m1);
    const long long gap = phi(m0) - phi(m1);
    f.phi_match = n ? mod_floor(gap, *n) == 0 : gap == 0;
    return f;
}

} // namespace sigorient
