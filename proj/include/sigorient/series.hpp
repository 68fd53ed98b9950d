#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sigorient/modulus.hpp"

namespace sigorient {

// Raised when a series with (numerically) vanishing constant term is inverted.
class NonUnitError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class SeriesRing;
using RingPtr = std::shared_ptr<const SeriesRing>;

// Polynomial ring C[v_1..v_r] truncated at total degree `degree_cap`.
//
// Monomials are enumerated once, grouped by total degree and ordered
// lexicographically (highest power of the first variable first) inside each
// degree. A monomial is packed into a 64-bit key with four bits per variable,
// so adding keys multiplies monomials. This limits rings to 16 variables and
// a cap of 15.
class SeriesRing {
public:
    static constexpr int kMaxVariables = 16;
    static constexpr int kMaxCap = 15;

    static RingPtr make(std::vector<std::string> variable_names, int degree_cap);

    const std::vector<std::string>& names() const { return names_; }
    int num_vars() const { return static_cast<int>(names_.size()); }
    int degree_cap() const { return cap_; }
    std::size_t size() const { return keys_.size(); }

    int var_index(std::string_view name) const;
    bool has_var(std::string_view name) const;

    std::uint64_t key(std::size_t idx) const { return keys_[idx]; }
    int degree(std::size_t idx) const { return degrees_[idx]; }
    int exponent(std::size_t idx, int var) const {
        return static_cast<int>((keys_[idx] >> (4 * var)) & 0xFu);
    }
    std::vector<int> exponents(std::size_t idx) const;

    // Index of the monomial with the given packed key, or npos when the key
    // exceeds the cap.
    std::size_t index_of_key(std::uint64_t key) const;
    std::size_t index_of(std::span<const int> exponents) const;
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    static std::uint64_t pack(std::span<const int> exponents);

    bool same_as(const SeriesRing& other) const;

    // Product table: for monomial i, the pairs (j, index of m_i*m_j) with
    // deg(m_i) + deg(m_j) <= cap. Built lazily on first multiplication.
    struct ProductEntry {
        std::uint32_t other;
        std::uint32_t out;
    };
    std::span<const ProductEntry> products_of(std::size_t idx) const;

private:
    SeriesRing(std::vector<std::string> names, int cap);
    void build_product_table() const;

    std::vector<std::string> names_;
    int cap_;
    std::vector<std::uint64_t> keys_;
    std::vector<int> degrees_;
    std::unordered_map<std::uint64_t, std::size_t> index_;

    mutable std::once_flag table_once_;
    mutable std::vector<ProductEntry> table_;
    mutable std::vector<std::size_t> table_offsets_;
};

// A truncated power series with complex coefficients over a SeriesRing,
// stored densely in the ring's monomial order.
class TruncatedSeries {
public:
    explicit TruncatedSeries(RingPtr ring);
    TruncatedSeries(RingPtr ring, std::vector<cplx> coefficients);

    static TruncatedSeries constant(RingPtr ring, cplx value);
    static TruncatedSeries variable(RingPtr ring, std::string_view name);
    static TruncatedSeries variable(RingPtr ring, int var);

    const RingPtr& ring() const { return ring_; }
    std::span<const cplx> coefficients() const { return coeffs_; }
    cplx operator[](std::size_t idx) const { return coeffs_[idx]; }
    cplx& operator[](std::size_t idx) { return coeffs_[idx]; }

    cplx coefficient(std::span<const int> exponents) const;
    cplx coefficient(std::initializer_list<int> exponents) const {
        return coefficient(std::span<const int>(exponents.begin(), exponents.size()));
    }
    void set_coefficient(std::span<const int> exponents, cplx value);
    cplx constant_term() const { return coeffs_[0]; }

    // Lowest total degree carrying a coefficient of modulus above tol;
    // -1 for the zero series.
    int valuation(double tol = 0.0) const;
    double max_abs() const;

    // Sum of coefficient * monomial at a numeric point (one value per variable).
    cplx evaluate(std::span<const cplx> point) const;

    TruncatedSeries& operator+=(const TruncatedSeries& other);
    TruncatedSeries& operator-=(const TruncatedSeries& other);
    TruncatedSeries& operator*=(cplx scalar);

    friend TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries& b) { return a += b; }
    friend TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries& b) { return a -= b; }
    friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b);
    friend TruncatedSeries operator*(TruncatedSeries a, cplx s) { return a *= s; }
    friend TruncatedSeries operator*(cplx s, TruncatedSeries a) { return a *= s; }
    friend TruncatedSeries operator+(TruncatedSeries a, cplx s) {
        a.coeffs_[0] += s;
        return a;
    }
    TruncatedSeries operator-() const;

private:
    void require_same_ring(const TruncatedSeries& other) const;

    RingPtr ring_;
    std::vector<cplx> coeffs_;
};

TruncatedSeries add(const TruncatedSeries& a, const TruncatedSeries& b);
TruncatedSeries mul(const TruncatedSeries& a, const TruncatedSeries& b);
TruncatedSeries scale(const TruncatedSeries& a, cplx s);

inline constexpr double kUnitTolerance = 1e-10;

// exp(c0) * sum_k (s - c0)^k / k!
TruncatedSeries series_exp(const TruncatedSeries& s);

// Multiplicative inverse; throws NonUnitError when |constant term| <= unit_tol.
TruncatedSeries series_invert(const TruncatedSeries& s, double unit_tol = kUnitTolerance);

// Integer power (negative exponents invert).
TruncatedSeries series_pow(const TruncatedSeries& s, int exponent, double unit_tol = kUnitTolerance);

// sum_k coeffs[k] * arg^k; arg must have zero constant term.
TruncatedSeries compose_univariate(std::span<const cplx> coeffs, const TruncatedSeries& arg);

// Formal substitution of variables of s by series over `target` with zero
// constant term. Variables without an assignment map to the variable of the
// same name in `target`; throws std::invalid_argument if there is none or an
// assignment names an unknown variable.
TruncatedSeries substitute(const TruncatedSeries& s, const RingPtr& target,
                           const std::map<std::string, TruncatedSeries>& assignments);

// Same-ring substitution, e.g. x -> x + 2z.
TruncatedSeries substitute_shift(const TruncatedSeries& s,
                                 const std::map<std::string, TruncatedSeries>& assignments);

// Re-expresses s in a ring containing all of its variables (by name).
TruncatedSeries embed(const TruncatedSeries& s, const RingPtr& target);

// Degree-`degree` homogeneous component.
TruncatedSeries homogeneous_part(const TruncatedSeries& s, int degree);

// Coefficient of var^power, as a series in the remaining variables (same ring).
TruncatedSeries coefficient_in(const TruncatedSeries& s, std::string_view var, int power);

// Sets the named variable to zero.
TruncatedSeries restrict_to_zero(const TruncatedSeries& s, std::string_view var);

// image[v] is the variable that v is sent to; image must be a permutation of
// 0..num_vars-1.
TruncatedSeries permute_vars(const TruncatedSeries& s, std::span<const int> image);

bool is_invariant(const TruncatedSeries& s, std::span<const std::vector<int>> generators,
                  double tol = 1e-12);

double max_abs_diff(const TruncatedSeries& a, const TruncatedSeries& b);

// max |a - b| / max(1, max |b|)
double scaled_diff(const TruncatedSeries& a, const TruncatedSeries& b);

// Ratio c with a ~= c * b, measured at the coefficient of largest modulus
// in b. `residual` receives max |a - c b| / max |a|.
cplx proportionality(const TruncatedSeries& a, const TruncatedSeries& b, double* residual = nullptr);

// Sorted (degree, then ring order) list of nonzero terms as
// [{"exponent":[...], "re":..., "im":...}, ...].
std::string series_to_json(const TruncatedSeries& s, double zero_tol = 0.0);
std::string series_to_text(const TruncatedSeries& s, double zero_tol = 0.0);

} // namespace sigorient
