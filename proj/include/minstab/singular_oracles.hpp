#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "minstab/quadrature.hpp"

namespace minstab {

// Slow direct-quadrature oracles for the singular integral operators at probe
// points, restricted to integrands supported in the unit disk. Probes must lie
// strictly inside the disk. Used to validate the multiplier implementations.

namespace detail {

// distance from an interior point z along direction e^{i phi} to the unit circle
inline double ray_to_circle(cx z, double phi) {
    double b = std::real(std::conj(z) * std::polar(1.0, phi));
    double disc = b * b + 1.0 - std::norm(z);
    return -b + std::sqrt(std::max(disc, 0.0));
}

} // namespace detail

// P(h)(z) = -(1/pi) int_D h(zeta) [1/(zeta - z) - 1/zeta] dA. Polar
// coordinates around z (and around 0 for the second kernel term) absorb both
// singularities: the Jacobian cancels 1/rho exactly.
inline cx direct_cauchy_P(const std::function<cx(cx)>& h, cx z, int nphi = 256, int nrad = 64) {
    std::vector<double> gx, gw;
    gauss_legendre(nrad, gx, gw);
    auto polar_part = [&](cx center) {
        cx acc{};
        for (int j = 0; j < nphi; ++j) {
            double phi = 2.0 * pi * double(j) / double(nphi);
            double R = detail::ray_to_circle(center, phi);
            cx dir = std::polar(1.0, phi);
            cx ray{};
            for (int i = 0; i < nrad; ++i) {
                double rho = 0.5 * (gx[std::size_t(i)] + 1.0) * R;
                ray += 0.5 * R * gw[std::size_t(i)] * h(center + rho * dir);
            }
            acc += ray * std::conj(dir); // e^{-i phi}
        }
        return acc * (2.0 * pi / double(nphi));
    };
    return (-1.0 / pi) * (polar_part(z) - polar_part(cx{0.0}));
}

// Principal-value oracle for T(h)(z) with epsilon-disk excision and Richardson
// extrapolation in epsilon. Log-radial Gauss nodes handle the 1/rho weight.
inline cx direct_beurling_T_eps(const std::function<cx(cx)>& h, cx z, double eps,
                                int nphi = 256, int nrad = 96) {
    std::vector<double> gx, gw;
    gauss_legendre(nrad, gx, gw);
    cx acc{};
    for (int j = 0; j < nphi; ++j) {
        double phi = 2.0 * pi * double(j) / double(nphi);
        double R = detail::ray_to_circle(z, phi);
        if (R <= eps) continue;
        cx dir = std::polar(1.0, phi);
        double ua = std::log(eps), ub = std::log(R);
        cx ray{};
        for (int i = 0; i < nrad; ++i) {
            double u = 0.5 * (gx[std::size_t(i)] + 1.0) * (ub - ua) + ua;
            ray += 0.5 * (ub - ua) * gw[std::size_t(i)] * h(z + std::exp(u) * dir);
        }
        acc += ray * std::conj(dir) * std::conj(dir); // e^{-2 i phi}
    }
    return (-1.0 / pi) * acc * (2.0 * pi / double(nphi));
}

inline cx direct_beurling_T(const std::function<cx(cx)>& h, cx z, double eps = 1e-4,
                            int nphi = 256, int nrad = 96) {
    cx t1 = direct_beurling_T_eps(h, z, eps, nphi, nrad);
    cx t2 = direct_beurling_T_eps(h, z, 0.5 * eps, nphi, nrad);
    return 2.0 * t2 - t1;
}

} // namespace minstab
