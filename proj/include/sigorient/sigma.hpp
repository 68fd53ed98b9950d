#pragma once

#include <span>
#include <vector>

#include "sigorient/modulus.hpp"
#include "sigorient/series.hpp"

namespace sigorient {

// Modulus plus the number N of q-product factors; the q powers are cached.
class SigmaParams {
public:
    explicit SigmaParams(const ModulusTau& tau);
    SigmaParams(const ModulusTau& tau, int product_terms);

    const ModulusTau& modulus() const { return tau_; }
    int product_terms() const { return static_cast<int>(qpow_.size()); }
    cplx q_power(int n) const { return qpow_[n - 1]; }
    cplx denominator_factor(int n) const { return denom_[n - 1]; }

    // |q|^N > 1e-16: the truncated tail is above double precision.
    bool precision_limited() const;

private:
    ModulusTau tau_;
    std::vector<cplx> qpow_;
    std::vector<cplx> denom_;
};

// (e^{z/2} - e^{-z/2}) prod_{n<=N} (1 - q^n w)(1 - q^n/w) / (1 - q^n)^2,  w = e^z
cplx sigma(cplx z, const SigmaParams& p);

// Taylor coefficients of sigma(c + eps) as exp(log_scale) * coeffs[j] * eps^j.
// The scale is split off so that jets at far-away lifts stay representable.
struct SigmaJet {
    double log_scale = 0.0;
    std::vector<cplx> coeffs;

    std::vector<cplx> materialize() const;
};

SigmaJet sigma_jet_scaled(cplx c, int order, const SigmaParams& p);

// sigma(c + eps) = exp(log_const + linear eps) * jet(eps), where jet is the
// Taylor jet at c0 = c - lambda (lambda the nearest lattice point) and the
// exponential is the automorphy factor. c0 is exactly 0 when the lattice
// coordinates of c are within 1e-9 of integers.
struct SigmaReducedJet {
    cplx log_const{};
    double linear = 0.0;
    SigmaJet jet;
    bool at_lattice = false;
};

SigmaReducedJet sigma_jet_reduced(cplx c, int order, const SigmaParams& p);

// sigma(c + eps) over a one-variable ring named "eps" with cap `order`.
TruncatedSeries sigma_jet(cplx c, int order, const SigmaParams& p);

// Residual of sigma(z + 2 pi i l + 2 pi i k tau) = (-1)^{l+k} e^{-kz - pi i k^2 tau} sigma(z),
// measured after dividing out the automorphy factor:
//   |sigma(z + lambda)/F - sigma(z)| / |sigma(z)|  (absolute when sigma(z) = 0).
double check_transform(cplx z, long long k, long long l, const SigmaParams& p);

// prod sigma(x_j)
cplx sigma_product(std::span<const cplx> x, const SigmaParams& p);
// prod sigma(x0_j) / prod sigma(x1_j); throws std::domain_error when a
// denominator entry is a lattice point.
cplx sigma_product(std::span<const cplx> numerator, std::span<const cplx> denominator,
                   const SigmaParams& p);

} // namespace sigorient
