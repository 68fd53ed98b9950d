#include "sigorient/modulus.hpp"

#include <cmath>
#include <stdexcept>

namespace sigorient {

ModulusTau::ModulusTau(cplx tau, int q_truncation) : tau_(tau), q_truncation_(q_truncation) {
    if (!std::isfinite(tau.real()) || !std::isfinite(tau.imag()) || !(tau.imag() > 0.0)) {
        throw std::invalid_argument("tau must satisfy Im(tau) > 0");
    }
    if (q_truncation < 1) {
        throw std::invalid_argument("q truncation must be at least 1");
    }
    q_ = std::exp(kTwoPiI * tau_);
}

cplx ModulusTau::lattice_point(long long l, long long k) const {
    return kTwoPiI * (static_cast<double>(l) + static_cast<double>(k) * tau_);
}

void ModulusTau::coords(cplx z, double& s, double& t) const {
    const cplx u = z / kTwoPiI;
    t = u.imag() / tau_.imag();
    s = u.real() - t * tau_.real();
}

cplx ModulusTau::from_coords(double s, double t) const {
    return kTwoPiI * (s + t * tau_);
}

} // namespace sigorient
