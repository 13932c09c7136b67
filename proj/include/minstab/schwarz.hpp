#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "minstab/errors.hpp"
#include "minstab/polynomial.hpp"
#include "minstab/weierstrass.hpp"

namespace minstab {

// Stereographic projection of the Gauss map for n = 3 data: g = p3/(p1 - i p2).
struct gauss_map_description {
    polynomial numerator;
    polynomial denominator;
    bool monomial_reduced = false; // g = c z^k exactly
    cx monomial_coeff{};
    int monomial_degree = 0;
};

inline gauss_map_description gauss_map_stereographic(const weierstrass_data& w) {
    if (w.n() != 3) throw unsupported("gauss_map_stereographic: requires n = 3 data");
    gauss_map_description d;
    d.numerator = w.p(2);
    d.denominator = w.p(0) - w.p(1).scaled(cx{0.0, 1.0});
    if (d.denominator.is_zero())
        throw unsupported("gauss_map_stereographic: denominator p1 - i p2 vanishes identically");
    if (d.denominator.degree() == 0) {
        polynomial q = d.numerator.scaled(1.0 / d.denominator.coeff(0));
        int nonzero = 0, deg = 0;
        for (int j = 0; j <= q.degree(); ++j)
            if (std::abs(q.coeff(j)) > 1e-14) {
                ++nonzero;
                deg = j;
            }
        if (nonzero == 1) {
            d.monomial_reduced = true;
            d.monomial_coeff = q.coeff(deg);
            d.monomial_degree = deg;
        }
    }
    return d;
}

struct cap_spec {
    double theta0;     // geodesic radius (colatitude) of the spherical cap
    double rho;        // max modulus of g over the closed disk
    bool enclosure;    // true if the cap only encloses the Gauss image
};

// Spherical cap covering g(closed disk) under stereographic projection:
// plane radius rho maps to colatitude 2 atan(rho), so rho = 1 is the
// hemisphere. For monomial g the image is exactly the cap.
inline cap_spec cap_of_disk_image(const gauss_map_description& g, int samples = 4096) {
    double rho;
    bool enclosure;
    if (g.monomial_reduced) {
        rho = std::abs(g.monomial_coeff);
        enclosure = false;
    } else {
        auto dm = g.denominator.min_modulus_on_circle(samples);
        if (dm.certified_lower <= boundary_zero_tolerance)
            throw unsupported("cap_of_disk_image: denominator vanishes near the unit circle");
        if (g.denominator.winding_on_circle(samples) != 0)
            throw unsupported("cap_of_disk_image: denominator has zeros inside the disk (pole of g)");
        rho = 0.0;
        for (int k = 0; k < samples; ++k) {
            cx z = std::polar(1.0, 2.0 * pi * double(k) / double(samples));
            rho = std::max(rho, std::abs(g.numerator.eval(z) / g.denominator.eval(z)));
        }
        enclosure = true;
    }
    if (!(rho > 0.0)) throw unsupported("cap_of_disk_image: Gauss image degenerates to a point");
    return {2.0 * std::atan(rho), rho, enclosure};
}

// First Dirichlet eigenvalue of the Laplacian on a spherical cap of geodesic
// radius theta0: smallest lambda with u'' + cot(theta) u' + lambda u = 0,
// u regular at 0, u(theta0) = 0. Shooting with a series start (the cot
// singularity) and RK4, bisection on lambda.
namespace detail {

inline double cap_shoot(double lambda, double theta0, double step) {
    // series: u = 1 - lambda t^2/4 + lambda(lambda - 2/3) t^4 / 64 + O(t^6)
    double t = std::min(0.01, 0.5 * theta0);
    double u = 1.0 - lambda * t * t / 4.0 + lambda * (lambda - 2.0 / 3.0) * t * t * t * t / 64.0;
    double v = -lambda * t / 2.0 + lambda * (lambda - 2.0 / 3.0) * t * t * t / 16.0;
    auto rhs = [&](double th, double uu, double vv, double& du, double& dv) {
        du = vv;
        dv = -vv / std::tan(th) - lambda * uu;
    };
    long nsteps = std::lround(std::ceil((theta0 - t) / step));
    double h = (theta0 - t) / double(nsteps);
    for (long s = 0; s < nsteps; ++s) {
        double k1u, k1v, k2u, k2v, k3u, k3v, k4u, k4v;
        rhs(t, u, v, k1u, k1v);
        rhs(t + 0.5 * h, u + 0.5 * h * k1u, v + 0.5 * h * k1v, k2u, k2v);
        rhs(t + 0.5 * h, u + 0.5 * h * k2u, v + 0.5 * h * k2v, k3u, k3v);
        rhs(t + h, u + h * k3u, v + h * k3v, k4u, k4v);
        u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
        v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        t += h;
    }
    return u;
}

} // namespace detail

inline double lambda1_cap(double theta0, double tolerance = 1e-8, double ode_step = 1e-4) {
    if (!(theta0 > 0.0 && theta0 < pi)) throw std::domain_error("lambda1_cap: need 0 < theta0 < pi");
    if (!(tolerance > 0.0)) throw std::domain_error("lambda1_cap: tolerance must be positive");

    // scan for the first sign change of u(theta0), then bisect
    double lo = 0.1;
    double ulo = detail::cap_shoot(lo, theta0, ode_step);
    double hi = lo;
    double scan_step = 2.0;
    double cap_hi = 2e2; // nominal upper end; doubled on demand for small caps
    for (;;) {
        double next = std::min(hi + scan_step, cap_hi);
        double unext = detail::cap_shoot(next, theta0, ode_step);
        if ((ulo > 0.0) != (unext > 0.0)) {
            lo = hi;
            hi = next;
            break;
        }
        hi = next;
        ulo = unext;
        if (hi >= cap_hi) {
            if (cap_hi > 1e8) throw numerical_failure("lambda1_cap: no eigenvalue below 1e8");
            cap_hi *= 2.0;
            scan_step *= 2.0;
        }
    }
    double flo = detail::cap_shoot(lo, theta0, ode_step);
    for (int it = 0; it < 200 && hi - lo > tolerance; ++it) {
        double mid = 0.5 * (lo + hi);
        double fm = detail::cap_shoot(mid, theta0, ode_step);
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

struct schwarz_report {
    double rho = 0.0;
    double theta0 = 0.0;
    double lambda1 = 0.0;
    bool unstable = false;
    bool inconclusive = false;
    bool enclosure = false;
};

// Instability certificate: lambda1 of the Gauss-image cap below 2. When the
// cap is only an enclosure the verdict is one-directional and flagged.
inline schwarz_report schwarz_verdict(const weierstrass_data& w, double tolerance = 1e-6) {
    auto g = gauss_map_stereographic(w);
    auto cap = cap_of_disk_image(g);
    schwarz_report rep;
    rep.rho = cap.rho;
    rep.theta0 = cap.theta0;
    rep.enclosure = cap.enclosure;
    rep.lambda1 = lambda1_cap(cap.theta0, std::min(tolerance * 1e-2, 1e-8));
    if (std::abs(rep.lambda1 - 2.0) <= tolerance) {
        rep.inconclusive = true;
        rep.unstable = false;
    } else {
        rep.unstable = rep.lambda1 < 2.0;
    }
    return rep;
}

} // namespace minstab
