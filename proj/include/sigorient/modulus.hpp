#pragma once

#include <complex>
#include <numbers>

namespace sigorient {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline const cplx kTwoPiI{0.0, 2.0 * std::numbers::pi};

// The curve parameter tau, fixing the lattice 2*pi*i*Z + 2*pi*i*tau*Z and
// q = exp(2*pi*i*tau). q_truncation is the number of q-product factors kept
// when evaluating sigma.
class ModulusTau {
public:
    explicit ModulusTau(cplx tau, int q_truncation = 64);

    cplx tau() const { return tau_; }
    int q_truncation() const { return q_truncation_; }
    cplx q() const { return q_; }

    // 2*pi*i*(l + k*tau)
    cplx lattice_point(long long l, long long k) const;

    // Real coordinates (s,t) with z = 2*pi*i*(s + t*tau).
    void coords(cplx z, double& s, double& t) const;
    cplx from_coords(double s, double t) const;

private:
    cplx tau_;
    int q_truncation_;
    cplx q_;
};

} // namespace sigorient
