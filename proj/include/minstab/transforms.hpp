#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "minstab/errors.hpp"
#include "minstab/plane_grid.hpp"
#include "minstab/quadrature.hpp"
#include "minstab/weierstrass.hpp"

namespace minstab {

// Hopf differential coefficient of h_i = 2 Re A_i is (h_i)_z^2 = p_i^2.
inline cx hopf_coeff(const weierstrass_data& w, int i, cx z) {
    cx p = w.p(i).eval(z);
    return p * p;
}

// Energy change of h_i under precomposition with the inverse of a
// quasiconformal map of Beltrami form mu:
//   -4 Re int phi_i mu/(1-|mu|^2) + 4 int |phi_i| |mu|^2/(1-|mu|^2).
inline double reich_strebel_delta(const weierstrass_data& w, int i, const std::vector<cx>& mu,
                                  const disk_grid& g) {
    if (mu.size() != g.size()) throw std::invalid_argument("reich_strebel_delta: sample size mismatch");
    double acc = 0.0;
    double sup = 0.0;
    for (std::size_t idx = 0; idx < g.size(); ++idx) {
        double m2 = std::norm(mu[idx]);
        sup = std::max(sup, m2);
        if (m2 >= 1.0) continue; // reported below
        cx phi = hopf_coeff(w, i, g.node(idx));
        double denom = 1.0 - m2;
        acc += g.weight(idx) * (-4.0 * std::real(phi * mu[idx]) + 4.0 * std::abs(phi) * m2) / denom;
    }
    if (sup >= 1.0)
        throw not_quasiconformal("reich_strebel_delta: |mu| >= 1 on the grid", std::sqrt(sup));
    return acc;
}

struct nmi_result {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = true;
    double tolerance = 0.0;
};

// Finite inequality: Re sum_i int phi_i mu_i/(1-|mu_i|^2) <= sum_i int |phi_i| |mu_i|^2/(1-|mu_i|^2).
inline nmi_result nmi_finite_check(const weierstrass_data& w, const std::vector<std::vector<cx>>& mus,
                                   const disk_grid& g) {
    if (int(mus.size()) != w.n()) throw std::invalid_argument("nmi_finite_check: need one field per coordinate");
    nmi_result r;
    for (int i = 0; i < w.n(); ++i) {
        const auto& mu = mus[std::size_t(i)];
        if (mu.size() != g.size()) throw std::invalid_argument("nmi_finite_check: sample size mismatch");
        double sup = 0.0;
        for (std::size_t idx = 0; idx < g.size(); ++idx) {
            double m2 = std::norm(mu[idx]);
            sup = std::max(sup, m2);
            if (m2 >= 1.0) continue;
            cx phi = hopf_coeff(w, i, g.node(idx));
            double denom = 1.0 - m2;
            r.lhs += g.weight(idx) * std::real(phi * mu[idx]) / denom;
            r.rhs += g.weight(idx) * std::abs(phi) * m2 / denom;
        }
        if (sup >= 1.0)
            throw not_quasiconformal("nmi_finite_check: |mu| >= 1 on the grid", std::sqrt(sup));
    }
    r.tolerance = 1e-7 * (1.0 + std::abs(r.lhs) + std::abs(r.rhs));
    r.holds = r.lhs <= r.rhs + r.tolerance;
    return r;
}

struct nmi_infinitesimal_result {
    double lhs = 0.0; // -Re sum_i int phi_i mudot_i T(mudot_i)
    double rhs = 0.0; // sum_i int |phi_i| |mudot_i|^2
    bool holds = true;
    double tolerance = 0.0;
    double equivalence_residual = 0.0; // max_{i<j} sup_{1<|z|<R} |P(mudot_i) - P(mudot_j)|
};

// Infinitesimal inequality with the quadratic right-hand side. Fields must be
// supported in the unit disk; integrals are box sums (integrands carry a
// mudot factor, so they are supported in the disk as well).
inline nmi_infinitesimal_result nmi_infinitesimal_check(const weierstrass_data& w, const plane_grid& g,
                                                        const std::vector<std::vector<cx>>& mudots,
                                                        double equivalence_sample_radius = 2.5) {
    if (int(mudots.size()) != w.n())
        throw std::invalid_argument("nmi_infinitesimal_check: need one field per coordinate");
    nmi_infinitesimal_result r;
    std::vector<std::vector<cx>> pvals;
    pvals.reserve(mudots.size());
    for (int i = 0; i < w.n(); ++i) {
        const auto& md = mudots[std::size_t(i)];
        auto pc = cauchy_P_full(g, md);
        for (std::size_t idx = 0; idx < g.size(); ++idx) {
            cx z = g.node(idx);
            if (std::norm(z) > 1.0) continue;
            cx phi = hopf_coeff(w, i, z);
            r.lhs -= std::real(phi * md[idx] * pc.dz[idx]) * g.cell_area();
            r.rhs += std::abs(phi) * std::norm(md[idx]) * g.cell_area();
        }
        pvals.push_back(std::move(pc.value));
    }
    for (std::size_t a = 0; a < pvals.size(); ++a) {
        for (std::size_t b = a + 1; b < pvals.size(); ++b) {
            double m = 0.0;
            for (std::size_t idx = 0; idx < g.size(); ++idx) {
                double az = std::abs(g.node(idx));
                if (az > 1.0 && az < equivalence_sample_radius)
                    m = std::max(m, std::abs(pvals[a][idx] - pvals[b][idx]));
            }
            r.equivalence_residual = std::max(r.equivalence_residual, m);
        }
    }
    r.tolerance = 1e-7 * (1.0 + std::abs(r.lhs) + std::abs(r.rhs));
    r.holds = r.lhs <= r.rhs + r.tolerance;
    return r;
}

struct p1p2_result {
    double residual1 = 0.0;
    double residual2 = 0.0;
    double t_side1 = 0.0;   // Re sum int phi mudot T(mudot)      (multiplier path)
    double p_side1 = 0.0;   // Re sum int (alpha P)_z (alpha P)_zbar  (finite differences + polar grid)
    double t_side2 = 0.0;   // sum int |phi| |mudot|^2
    double p_side2 = 0.0;   // sum int |(alpha P)_zbar|^2
};

// Cross-checks the two discretizations of the second-variation integrands:
// the Beurling-transform path on the plane grid versus derivatives of
// alpha_i P(mudot_i) taken by finite differences and integrated on a polar
// grid. Both identities hold for mutually equivalent tuples on minimal data.
inline p1p2_result identity_P1_P2_check(const weierstrass_data& w, const plane_grid& g,
                                        const std::vector<std::vector<cx>>& mudots,
                                        int nr = 48, int ntheta = 128) {
    if (int(mudots.size()) != w.n())
        throw std::invalid_argument("identity_P1_P2_check: need one field per coordinate");
    p1p2_result r;
    disk_grid dg(nr, ntheta);
    for (int i = 0; i < w.n(); ++i) {
        const auto& md = mudots[std::size_t(i)];
        auto pc = cauchy_P_full(g, md);

        for (std::size_t idx = 0; idx < g.size(); ++idx) {
            cx z = g.node(idx);
            if (std::norm(z) > 1.0) continue;
            cx phi = hopf_coeff(w, i, z);
            r.t_side1 += std::real(phi * md[idx] * pc.dz[idx]) * g.cell_area();
            r.t_side2 += std::abs(phi) * std::norm(md[idx]) * g.cell_area();
        }

        // product field alpha_i P(mudot_i), differentiated without the
        // operator identities
        std::vector<cx> prod(g.size());
        for (std::size_t idx = 0; idx < g.size(); ++idx)
            prod[idx] = w.p(i).eval(g.node(idx)) * pc.value[idx];
        auto wz = g.dz_fd4(prod);
        auto wzb = g.dzbar_fd4(prod);
        for (std::size_t idx = 0; idx < dg.size(); ++idx) {
            cx z = dg.node(idx);
            cx a = g.interp(wz, z), b = g.interp(wzb, z);
            r.p_side1 += dg.weight(idx) * std::real(a * b);
            r.p_side2 += dg.weight(idx) * std::norm(b);
        }
    }
    r.residual1 = std::abs(r.t_side1 - r.p_side1);
    r.residual2 = std::abs(r.t_side2 - r.p_side2);
    return r;
}

struct neumann_options {
    int order = 4;          // number of Cauchy-transform terms
    double max_mu = 0.3;    // contraction margin
    double residual_radius = 2.0; // sup-norm window for the Beltrami residual
};

struct neumann_result {
    std::vector<cx> f;       // f(z) = z + sum_k P(g_k)
    std::vector<cx> fz;      // 1 + sum_k T(g_k)   (structural)
    std::vector<cx> fzbar;   // sum_k g_k          (structural)
    double beltrami_residual = 0.0; // sup |f_zbar - mu f_z| by finite differences
    int order = 0;
};

// Truncated Neumann series for the normal solution of the Beltrami equation:
// f = z + P(mu) + P(mu T(mu)) + ... ; f(0) = 0 by the kernel normalization.
inline neumann_result normal_solution_neumann(const plane_grid& g, const std::vector<cx>& mu,
                                              const neumann_options& opt = {}) {
    if (mu.size() != g.size()) throw std::invalid_argument("normal_solution_neumann: field size mismatch");
    if (opt.order < 1 || opt.order > 6) throw std::domain_error("normal_solution_neumann: order must be in 1..6");
    double sup = g.sup_norm(mu);
    if (sup > opt.max_mu)
        throw series_divergence_risk("normal_solution_neumann: sup|mu| exceeds the contraction margin", sup);

    neumann_result r;
    r.order = opt.order;
    r.f.assign(g.size(), cx{});
    r.fz.assign(g.size(), cx{});
    r.fzbar.assign(g.size(), cx{});
    std::vector<cx> gk(mu);
    for (int k = 0; k < opt.order; ++k) {
        auto pc = cauchy_P_full(g, gk);
        for (std::size_t i = 0; i < g.size(); ++i) {
            r.f[i] += pc.value[i];
            r.fz[i] += pc.dz[i];
            r.fzbar[i] += gk[i];
        }
        if (k + 1 < opt.order) {
            // next term: mu * T(g_k)
            for (std::size_t i = 0; i < g.size(); ++i) gk[i] = mu[i] * pc.dz[i];
        }
    }
    for (std::size_t i = 0; i < g.size(); ++i) {
        cx z = g.node(i);
        r.f[i] += z;
        r.fz[i] += 1.0;
    }

    auto fzb_fd = g.dzbar_fd4(r.f);
    auto fz_fd = g.dz_fd4(r.f);
    double res = 0.0;
    const double rr2 = opt.residual_radius * opt.residual_radius;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (std::norm(g.node(i)) > rr2) continue;
        res = std::max(res, std::abs(fzb_fd[i] - mu[i] * fz_fd[i]));
    }
    r.beltrami_residual = res;
    return r;
}

struct composed_energy_area {
    double energy = 0.0;
    double area = 0.0;
    double min_jacobian = 0.0;
};

// Energy and image area of h composed with the inverse of f, both pulled back
// to the unit disk. The integrands satisfy energy-density >= area-density
// pointwise, so the quadrature values inherit the inequality node by node.
inline composed_energy_area composed_energy_area_quadrature(const weierstrass_data& w,
                                                            const plane_grid& g,
                                                            const neumann_result& f) {
    composed_energy_area out;
    out.min_jacobian = std::numeric_limits<double>::infinity();
    for (std::size_t idx = 0; idx < g.size(); ++idx) {
        cx z = g.node(idx);
        if (std::norm(z) > 1.0) continue;
        cx fz = f.fz[idx], fzb = f.fzbar[idx];
        double J = std::norm(fz) - std::norm(fzb);
        out.min_jacobian = std::min(out.min_jacobian, J);
        if (J <= 0.0) continue;
        double S = 0.0;
        cx Phi{};
        for (int i = 0; i < w.n(); ++i) {
            cx p = w.p(i).eval(z);
            cx gw = (std::conj(fz) * p - std::conj(fzb) * std::conj(p)) / J;
            S += std::norm(gw);
            Phi += gw * gw;
        }
        double area_density = 2.0 * std::sqrt(std::max(S * S - std::norm(Phi), 0.0));
        out.energy += g.cell_area() * 2.0 * S * J;
        out.area += g.cell_area() * area_density * J;
    }
    return out;
}

} // namespace minstab
