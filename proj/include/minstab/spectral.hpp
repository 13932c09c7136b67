#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "minstab/eigen_sym.hpp"
#include "minstab/harmonic_field.hpp"
#include "minstab/polynomial.hpp"
#include "minstab/weierstrass.hpp"

namespace minstab {

// F(f) = Re int f_z f_zbar + int |f_zbar|^2 over the unit disk, in closed form
// for harmonic extensions: pi * sum_{k>=1} k (Re(c_k c_{-k}) + |c_{-k}|^2).
// Validated against F_quadrature in the test suite before anything relies on it.
inline double F_spectral(const harmonic_field& f) {
    double acc = 0.0;
    for (int k = 1; k <= f.max_index(); ++k) {
        cx ck = f.coeff(k), cmk = f.coeff(-k);
        acc += double(k) * (std::real(ck * cmk) + std::norm(cmk));
    }
    return pi * acc;
}

// The published display for C(p, gamma, m), kept verbatim for comparison:
//   pi sum_{j=0}^{m-1} [Re(gamma^2 a_j a_{2m-j}) + |gamma|^2 |a_j|^2] / (m - j).
// Coincides with the functional value at m = 1 and diverges from it for
// m >= 2 (weight 1/(m-j) instead of (m-j)); both are surfaced in reports.
inline double C_printed(const polynomial& p, cx gamma, int m) {
    if (m < 0) throw std::domain_error("C_printed: m must be >= 0");
    double acc = 0.0;
    for (int j = 0; j <= m - 1; ++j) {
        cx prod = gamma * gamma * p.coeff(j) * p.coeff(2 * m - j);
        acc += (std::real(prod) + std::norm(gamma) * std::norm(p.coeff(j))) / double(m - j);
    }
    return pi * acc;
}

// Canonical value: F of the harmonic extension of p * gamma z^{-m} on the
// boundary. This is the quantity the search and index operations use.
inline double C_canonical(const polynomial& p, cx gamma, int m) {
    if (m < 1) throw std::domain_error("C_canonical: m must be >= 1");
    return F_spectral(boundary_fourier(p, laurent_tail::monomial(m, gamma)));
}

// F_alpha(phi) = sum_i F(harmonic extension of p_i * phi|circle). Negative
// values certify a destabilizing variation.
inline double F_alpha(const weierstrass_data& w, const laurent_tail& phi) {
    double acc = 0.0;
    for (int i = 0; i < w.n(); ++i) acc += F_spectral(boundary_fourier(w.p(i), phi));
    return acc;
}

struct destab_result {
    int m;
    double min_eigenvalue; // of the 2x2 form in gamma = x + iy; < 0 certifies instability
    cx gamma_star;         // unit eigenvector for the smaller eigenvalue
    double form_xx, form_xy, form_yy;
};

// gamma -> F_alpha(gamma z^{-m}) is a real quadratic form in (x, y); assemble
// it from three evaluations by polarization and diagonalize.
inline destab_result destab_search_single_m(const weierstrass_data& w, int m) {
    if (m < 1) throw std::domain_error("destab_search_single_m: m must be >= 1");
    auto L = [&](cx gamma) { return F_alpha(w, laurent_tail::monomial(m, gamma)); };
    const double inv_sqrt2 = 0.7071067811865475244;
    double fxx = L(cx{1.0, 0.0});
    double fyy = L(cx{0.0, 1.0});
    double fmix = L(cx{inv_sqrt2, inv_sqrt2});
    double fxy = fmix - 0.5 * (fxx + fyy);

    double tr = fxx + fyy;
    double disc = std::sqrt(std::max(0.25 * (fxx - fyy) * (fxx - fyy) + fxy * fxy, 0.0));
    double lo = 0.5 * tr - disc;

    // eigenvector of [[fxx, fxy], [fxy, fyy]] for eigenvalue lo
    double vx, vy;
    if (std::abs(fxy) > 1e-300) {
        vx = lo - fyy;
        vy = fxy;
    } else if (fxx <= fyy) {
        vx = 1.0;
        vy = 0.0;
    } else {
        vx = 0.0;
        vy = 1.0;
    }
    double nrm = std::hypot(vx, vy);
    if (nrm == 0.0) {
        vx = 1.0;
        vy = 0.0;
        nrm = 1.0;
    }
    return {m, lo, cx{vx / nrm, vy / nrm}, fxx, fxy, fyy};
}

struct quadratic_form_report {
    int basis_orders = 0;                 // tails z^{-m}, i z^{-m} for m = 1..M
    std::vector<std::string> basis_labels;
    sym_matrix gram;                      // 2M x 2M, real symmetric
    std::vector<double> eigenvalues;      // ascending
    int index = 0;                        // eigenvalues below -tolerance
    double tolerance = 0.0;
    double spectral_radius = 0.0;
};

// Gram matrix of the quadratic form phi -> F_alpha(phi) on the real basis
// {z^{-m}, i z^{-m}: m = 1..M}, assembled by polarization
// B(u, v) = (L(u+v) - L(u) - L(v)) / 2.
inline sym_matrix gram_matrix(const weierstrass_data& w, int M) {
    if (M < 1 || M > 64) throw std::domain_error("gram_matrix: need 1 <= M <= 64");
    auto basis = [&](int k) { // k in [0, 2M): k = 2(m-1) + (0 real, 1 imaginary)
        int m = k / 2 + 1;
        cx g = (k % 2 == 0) ? cx{1.0, 0.0} : cx{0.0, 1.0};
        return laurent_tail::monomial(m, g);
    };
    const int dim = 2 * M;
    std::vector<double> diag(static_cast<std::size_t>(dim));
    for (int k = 0; k < dim; ++k) diag[std::size_t(k)] = F_alpha(w, basis(k));
    sym_matrix g(dim);
    for (int a = 0; a < dim; ++a) {
        g.at(a, a) = diag[std::size_t(a)];
        for (int b = a + 1; b < dim; ++b) {
            double lab = F_alpha(w, basis(a) + basis(b));
            double v = 0.5 * (lab - diag[std::size_t(a)] - diag[std::size_t(b)]);
            g.at(a, b) = v;
            g.at(b, a) = v;
        }
    }
    return g;
}

// Eigenvalues and negativity index of the truncated form; a monotone lower
// bound for the index of the full form as M grows.
inline quadratic_form_report gram_index(const weierstrass_data& w, int M, double tolerance = -1.0) {
    quadratic_form_report rep;
    rep.basis_orders = M;
    for (int m = 1; m <= M; ++m) {
        rep.basis_labels.push_back("z^-" + std::to_string(m));
        rep.basis_labels.push_back("i z^-" + std::to_string(m));
    }
    rep.gram = gram_matrix(w, M);
    auto eig = jacobi_eigensymm(rep.gram, false);
    rep.eigenvalues = eig.values;
    rep.spectral_radius = 0.0;
    for (double v : rep.eigenvalues) rep.spectral_radius = std::max(rep.spectral_radius, std::abs(v));
    rep.tolerance = tolerance >= 0.0 ? tolerance : 1e-9 * std::max(rep.spectral_radius, 1e-300);
    rep.index = 0;
    for (double v : rep.eigenvalues)
        if (v < -rep.tolerance) ++rep.index;
    return rep;
}

} // namespace minstab
