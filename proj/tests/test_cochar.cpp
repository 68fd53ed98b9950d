#include <algorithm>
#include <random>

#include "doctest.h"
#include "sigorient/cochar.hpp"

using namespace sigorient;

namespace {

Cocharacter random_weights(std::mt19937_64& rng, int d, int bound, bool sum_zero) {
    std::uniform_int_distribution<int> u(-bound, bound);
    Cocharacter m(d);
    for (auto& x : m) {
        x = u(rng);
    }
    if (sum_zero) {
        long long s = 0;
        for (int i = 0; i + 1 < d; ++i) {
            s += m[i];
        }
        m[d - 1] = -s;
    }
    return m;
}

} // namespace

TEST_SUITE("cochar") {

TEST_CASE("phi is minus the second elementary symmetric function") {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 200; ++trial) {
        const Cocharacter m = random_weights(rng, 1 + trial % 6, 5, false);
        long long e2 = 0;
        for (std::size_t i = 0; i < m.size(); ++i) {
            for (std::size_t j = i + 1; j < m.size(); ++j) {
                e2 += m[i] * m[j];
            }
        }
        CHECK(phi(m) == -e2);
    }
}

TEST_CASE("for sum-zero weights phi is half the sum of squares") {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 200; ++trial) {
        const Cocharacter m = random_weights(rng, 2 + trial % 5, 4, true);
        long long sq = 0;
        for (auto x : m) {
            sq += x * x;
        }
        CHECK(2 * phi(m) == sq);
        CHECK(phi_half_square(m) == phi(m));
    }
    CHECK(phi(Cocharacter{1, -1}) == 1);
    CHECK(phi(Cocharacter{2, -1, -1}) == 3);
    CHECK_THROWS_AS(phi_half_square({1, 1}), std::invalid_argument);
}

TEST_CASE("polarization identity") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        const int d = 2 + trial % 4;
        const Cocharacter m = random_weights(rng, d, 6, false);
        const Cocharacter mp = random_weights(rng, d, 6, false);
        long long pairing = 0;
        for (int i = 0; i < d; ++i) {
            for (int j = 0; j < d; ++j) {
                if (i != j) {
                    pairing -= m[i] * mp[j];
                }
            }
        }
        CHECK(pairing_I(m, mp) == pairing);
        CHECK(polarization_check(m, mp));
    }
}

TEST_CASE("the two pairings agree on sum-zero vectors") {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 100; ++trial) {
        const Cocharacter m = random_weights(rng, 4, 5, true);
        const Cocharacter mp = random_weights(rng, 4, 5, true);
        CHECK(pairing_I(m, mp) == pairing_dot(m, mp));
    }
}

TEST_CASE("phi overflow is detected") {
    const long long big = 4'000'000'000LL;
    CHECK_THROWS_AS(phi(Cocharacter{big, big}), std::overflow_error);
}

TEST_CASE("Weyl normal form sorts stably") {
    const Cocharacter m{3, -1, 0, -2};
    const auto [sorted, w] = weyl_normal_form(m);
    CHECK(sorted == Cocharacter{-2, -1, 0, 3});
    CHECK(apply_weyl(w, m) == sorted);
    CHECK(phi(sorted) == phi(m));
    CHECK(WeylElement::identity(3).is_identity());
}

TEST_CASE("lift enumeration matches a brute-force scan of the box") {
    for (int n = 2; n <= 4; ++n) {
        const Cocharacter m{1, n - 1, 0};
        const FiniteReduction r = reduce_mod(m, n);
        CHECK(r.residues == std::vector<long long>{1, (n - 1) % n, 0});
        const long long bound = 4;
        std::vector<Cocharacter> brute;
        for (long long a = -bound; a <= bound; ++a) {
            for (long long b = -bound; b <= bound; ++b) {
                for (long long c = -bound; c <= bound; ++c) {
                    const Cocharacter x{a, b, c};
                    bool ok = a + b + c == 0;
                    for (int i = 0; i < 3; ++i) {
                        ok = ok && ((x[i] - m[i]) % n + n) % n == 0;
                    }
                    if (ok) {
                        brute.push_back(x);
                    }
                }
            }
        }
        std::sort(brute.begin(), brute.end());
        CHECK(enumerate_lifts(r, bound) == brute);
    }
    CHECK_THROWS_AS(enumerate_lifts(reduce_mod({1, 0}, 3), 1), std::invalid_argument);
}

TEST_CASE("string flags") {
    const auto f = string_pair_flags({2, -1, -1}, {1, 1, -2}, std::nullopt);
    CHECK(f.sum_zero);
    CHECK(f.phi_match);
    const auto g = string_pair_flags({1, -1}, {2, -2}, std::nullopt);
    CHECK_FALSE(g.phi_match);
    // phi = 1 and 4 agree mod 3
    CHECK(string_pair_flags({1, -1}, {2, -2}, 3).phi_match);
    CHECK_FALSE(string_pair_flags({1, 0}, {1, -1}, std::nullopt).sum_zero);
}

} // TEST_SUITE
