#include "sigorient/sigma.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sigorient {

SigmaParams::SigmaParams(const ModulusTau& tau) : SigmaParams(tau, tau.q_truncation()) {}

SigmaParams::SigmaParams(const ModulusTau& tau, int product_terms) : tau_(tau) {
    if (product_terms < 1) {
        throw std::invalid_argument("product_terms must be at least 1");
    }
    qpow_.resize(product_terms);
    denom_.resize(product_terms);
    cplx qn = 1.0;
    for (int n = 1; n <= product_terms; ++n) {
        qn *= tau.q();
        qpow_[n - 1] = qn;
        denom_[n - 1] = 1.0 / ((1.0 - qn) * (1.0 - qn));
    }
}

bool SigmaParams::precision_limited() const {
    return std::pow(std::abs(tau_.q()), product_terms()) > 1e-16;
}

cplx sigma(cplx z, const SigmaParams& p) {
    const cplx w = std::exp(z);
    const cplx winv = std::exp(-z);
    cplx r = std::exp(0.5 * z) - std::exp(-0.5 * z);
    for (int n = 1; n <= p.product_terms(); ++n) {
        const cplx qn = p.q_power(n);
        r *= (1.0 - qn * w) * (1.0 - qn * winv) * p.denominator_factor(n);
    }
    return r;
}

namespace {

// In-place truncated product of univariate coefficient vectors.
void mul_into(std::vector<cplx>& acc, const std::vector<cplx>& f) {
    const std::size_t m = acc.size();
    for (std::size_t i = m; i-- > 0;) {
        cplx s = 0.0;
        for (std::size_t j = 0; j <= i; ++j) {
            s += acc[i - j] * f[j];
        }
        acc[i] = s;
    }
}

double renormalize(std::vector<cplx>& v) {
    double m = 0.0;
    for (const auto& c : v) {
        m = std::max(m, std::abs(c));
    }
    if (m == 0.0 || (m > 1e-100 && m < 1e100)) {
        return 0.0;
    }
    for (auto& c : v) {
        c /= m;
    }
    return std::log(m);
}

} // namespace

std::vector<cplx> SigmaJet::materialize() const {
    const double f = std::exp(log_scale);
    std::vector<cplx> out(coeffs);
    for (auto& c : out) {
        c *= f;
    }
    return out;
}

SigmaJet sigma_jet_scaled(cplx c, int order, const SigmaParams& p) {
    if (order < 0) {
        throw std::invalid_argument("jet order must be non-negative");
    }
    const std::size_t m = static_cast<std::size_t>(order) + 1;
    std::vector<double> inv_fact(m);
    inv_fact[0] = 1.0;
    for (std::size_t j = 1; j < m; ++j) {
        inv_fact[j] = inv_fact[j - 1] / static_cast<double>(j);
    }

    SigmaJet jet;
    jet.coeffs.resize(m);

    // e^{(c+eps)/2} - e^{-(c+eps)/2}; both exponentials carry a common scale.
    const double half_re = 0.5 * std::abs(c.real());
    const cplx ep = std::exp(0.5 * c - half_re);
    const cplx em = std::exp(-0.5 * c - half_re);
    jet.log_scale = half_re;
    double pw = 1.0;
    for (std::size_t j = 0; j < m; ++j) {
        const double sgn = (j % 2 == 0) ? 1.0 : -1.0;
        jet.coeffs[j] = (ep - sgn * em) * pw * inv_fact[j];
        pw *= 0.5;
    }

    // Factor (1 - q^n e^{+-c} e^{+-eps}) / (1 - q^n), normalized by max(1, |q^n e^{+-c}|).
    std::vector<cplx> f(m);
    const double logq_re = std::log(std::abs(p.modulus().q()));
    for (int n = 1; n <= p.product_terms(); ++n) {
        const cplx qn = p.q_power(n);
        const cplx dinv = 1.0 / (1.0 - qn);
        for (int sign : {1, -1}) {
            const double log_mag = n * logq_re + sign * c.real();
            const double shift = std::max(0.0, log_mag);
            const cplx a = std::exp(cplx(log_mag - shift, std::arg(qn) + sign * c.imag()));
            const double one = std::exp(-shift);
            double sg = 1.0;
            for (std::size_t j = 0; j < m; ++j) {
                f[j] = ((j == 0 ? one : 0.0) - a * sg * inv_fact[j]) * dinv;
                sg *= sign;
            }
            mul_into(jet.coeffs, f);
            jet.log_scale += shift;
        }
        jet.log_scale += renormalize(jet.coeffs);
    }
    return jet;
}

SigmaReducedJet sigma_jet_reduced(cplx c, int order, const SigmaParams& p) {
    const ModulusTau& t = p.modulus();
    double s = 0.0;
    double u = 0.0;
    t.coords(c, s, u);
    const double l = std::round(s);
    const double k = std::round(u);
    SigmaReducedJet out;
    out.at_lattice = std::abs(s - l) < 1e-9 && std::abs(u - k) < 1e-9;
    const cplx c0 = out.at_lattice ? cplx(0.0) : c - t.lattice_point(static_cast<long long>(l), static_cast<long long>(k));
    // sigma(c0 + lambda + eps) = (-1)^{l+k} e^{-k (c0 + eps) - pi i k^2 tau} sigma(c0 + eps)
    const double parity = std::fmod(std::abs(l + k), 2.0);
    out.log_const = cplx(0.0, kPi * parity) - k * c0 - cplx(0.0, kPi) * (k * k) * t.tau();
    out.linear = -k;
    out.jet = sigma_jet_scaled(c0, order, p);
    return out;
}

TruncatedSeries sigma_jet(cplx c, int order, const SigmaParams& p) {
    auto ring = SeriesRing::make({"eps"}, std::max(order, 1));
    return TruncatedSeries(ring, sigma_jet_scaled(c, ring->degree_cap(), p).materialize());
}

double check_transform(cplx z, long long k, long long l, const SigmaParams& p) {
    if (k == 0 && l == 0) {
        return 0.0;
    }
    const ModulusTau& t = p.modulus();
    const cplx lambda = t.lattice_point(l, k);
    const double sign = ((l + k) % 2 == 0) ? 1.0 : -1.0;
    const double kd = static_cast<double>(k);
    const cplx log_factor = -kd * z - cplx(0.0, kPi) * kd * kd * t.tau();
    const cplx lhs = sigma(z + lambda, p) * std::exp(-log_factor) * sign;
    const cplx rhs = sigma(z, p);
    const double scale = std::abs(rhs);
    return scale > 0.0 ? std::abs(lhs - rhs) / scale : std::abs(lhs);
}

cplx sigma_product(std::span<const cplx> x, const SigmaParams& p) {
    cplx r = 1.0;
    for (const auto& z : x) {
        r *= sigma(z, p);
    }
    return r;
}

cplx sigma_product(std::span<const cplx> numerator, std::span<const cplx> denominator,
                   const SigmaParams& p) {
    for (const auto& z : denominator) {
        double s = 0.0;
        double t = 0.0;
        p.modulus().coords(z, s, t);
        if (std::abs(s - std::round(s)) < 1e-12 && std::abs(t - std::round(t)) < 1e-12) {
            throw std::domain_error("lattice point in the denominator of a sigma product");
        }
    }
    return sigma_product(numerator, p) / sigma_product(denominator, p);
}

} // namespace sigorient
