#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "minstab/eigen_sym.hpp"
#include "minstab/harmonic_field.hpp"
#include "minstab/plane_grid.hpp"
#include "minstab/polynomial.hpp"
#include "minstab/quadrature.hpp"
#include "minstab/rng.hpp"
#include "minstab/spectral.hpp"
#include "minstab/transforms.hpp"
#include "minstab/weierstrass.hpp"

namespace minstab {

// Construction of mutually infinitesimally equivalent Beltrami variations
// from a tail phi: each coordinate gets a smooth field g_i equal to phi
// outside a blend annulus, and mudot_i = (g_i)_zbar, so that P(mudot_i) = g_i
// and all P(mudot_i) agree outside the unit disk.

namespace detail {

inline double smoothstep3(double t) {
    t = std::clamp(t, 0.0, 1.0);
    return t * t * (3.0 - 2.0 * t);
}

inline double smoothstep5(double t) {
    t = std::clamp(t, 0.0, 1.0);
    return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

} // namespace detail

// Multiplicative cutoff vanishing near a point, ramping 0 -> 1 along a
// smoothed logarithmic radial profile between rho_in and delta. This is the
// profile with (near-)minimal contribution to the second-variation functional
// for a forced point value.
struct log_dent {
    cx center;
    double rho_in;
    double delta;

    double value(cx z) const {
        double rho = std::abs(z - center);
        if (rho <= rho_in) return 0.0;
        if (rho >= delta) return 1.0;
        return detail::smoothstep3(std::log(rho / rho_in) / std::log(delta / rho_in));
    }
};

struct variation_options {
    // blend annulus: g = interior below, phi above. Wide enough that grids of
    // spacing ~1/32 resolve the ramp; narrow custom rings need finer grids.
    double ring_inner = 0.72;
    double ring_outer = 0.94;
    double division_eps = 1e-6; // Tikhonov floor for the v/p division
    double fd_step = 1e-4;      // step for the zbar-derivative of g
};

// One family of interior extensions. g(i, z) is smooth, equals phi(z) for
// |z| >= ring_outer, and carries the chosen interior model below the ring.
class variation_family {
public:
    enum class interior_kind {
        reflect, // gamma_m z^{-m} -> gamma_m zbar^m, the same for every coordinate
        optimal  // v_i conj(p_i) / (|p_i|^2 + eps^2) with optional dents at the p_i zeros
    };

    static variation_family reflect(const weierstrass_data& w, laurent_tail phi,
                                    variation_options opt = {}) {
        variation_family f(w, std::move(phi), opt);
        f.kind_ = interior_kind::reflect;
        return f;
    }

    // near-optimal extensions aiming at the harmonic fields v_i; dents[i]
    // lists cutoffs around the interior zeros of p_i
    static variation_family optimal(const weierstrass_data& w, laurent_tail phi,
                                    std::vector<std::vector<log_dent>> dents,
                                    variation_options opt = {}) {
        variation_family f(w, std::move(phi), opt);
        f.kind_ = interior_kind::optimal;
        f.dents_ = std::move(dents);
        f.dents_.resize(std::size_t(w.n()));
        return f;
    }

    // additive smooth interior perturbation, supported in |z - c| < width;
    // preserves mutual equivalence because it vanishes near the circle
    void add_interior_bump(int coord, cx center, double width, cx amplitude) {
        bumps_.push_back({coord, center, width, amplitude});
    }

    int n() const { return int(pv_.size()); }
    const laurent_tail& tail() const { return phi_; }

    // The Cauchy kernel is normalized by P(h)(0) = 0, so P((g)_zbar) = g only
    // when g(0) = 0; tuples are mutually equivalent only if all g_i(0) agree.
    // Pin every extension to vanish at the origin with a local bump.
    cx g(int i, cx z) const {
        cx pin = raw_g(i, cx{0.0});
        if (pin == cx{0.0}) return raw_g(i, z);
        double s = std::norm(z) / 0.25; // pin bump of radius 0.5
        if (s >= 1.0) return raw_g(i, z);
        double t = 1.0 - s;
        return raw_g(i, z) - pin * t * t * t * t;
    }

    // mudot_i = (g_i)_zbar by 4th-order finite differences on the analytic
    // evaluator; exactly zeroed where g == phi (holomorphic)
    cx mudot(int i, cx z) const {
        if (std::abs(z) >= opt_.ring_outer) return {};
        const double s = opt_.fd_step;
        auto G = [&](double dx, double dy) { return g(i, z + cx{dx, dy}); };
        cx gx = (-G(2 * s, 0) + 8.0 * G(s, 0) - 8.0 * G(-s, 0) + G(-2 * s, 0)) / (12.0 * s);
        cx gy = (-G(0, 2 * s) + 8.0 * G(0, s) - 8.0 * G(0, -s) + G(0, -2 * s)) / (12.0 * s);
        return 0.5 * (gx + cx{0.0, 1.0} * gy);
    }

    std::vector<cx> sample_mudot(int i, const plane_grid& grid) const {
        return grid.sample([&](cx z) { return mudot(i, z); });
    }
    std::vector<cx> sample_mudot(int i, const disk_grid& grid) const {
        return grid.sample([&](cx z) { return mudot(i, z); });
    }

private:
    variation_family(const weierstrass_data& w, laurent_tail phi, variation_options opt)
        : phi_(std::move(phi)), opt_(opt) {
        pv_.reserve(std::size_t(w.n()));
        for (int i = 0; i < w.n(); ++i)
            pv_.push_back({w.p(i), boundary_fourier(w.p(i), phi_)});
    }

    cx raw_g(int i, cx z) const {
        double rho = std::abs(z);
        if (rho >= opt_.ring_outer) return phi_.eval(z);
        double chi = rho <= opt_.ring_inner
                         ? 0.0
                         : detail::smoothstep5((rho - opt_.ring_inner) / (opt_.ring_outer - opt_.ring_inner));
        cx interior = interior_value(i, z);
        cx base = chi == 0.0 ? interior : chi * phi_.eval(z) + (1.0 - chi) * interior;
        return base + bump_value(i, z);
    }

    cx interior_value(int i, cx z) const {
        if (kind_ == interior_kind::reflect) {
            cx acc{};
            cx zb = std::conj(z), zp = zb;
            for (int m = 1; m <= phi_.max_order(); ++m) {
                acc += phi_.gamma(m) * zp;
                zp *= zb;
            }
            return acc;
        }
        const auto& [p, v] = pv_[std::size_t(i)];
        cx pz = p.eval(z);
        cx val = v.value(z) * std::conj(pz) / (std::norm(pz) + opt_.division_eps * opt_.division_eps);
        if (i < int(dents_.size()))
            for (const auto& d : dents_[std::size_t(i)]) val *= d.value(z);
        return val;
    }

    cx bump_value(int i, cx z) const {
        cx acc{};
        for (const auto& b : bumps_) {
            if (b.coord != i) continue;
            double s = std::norm((z - b.center) / b.width);
            if (s < 1.0) {
                double t = 1.0 - s;
                acc += b.amplitude * t * t * t * t;
            }
        }
        return acc;
    }

    struct bump {
        int coord;
        cx center;
        double width;
        cx amplitude;
    };

    laurent_tail phi_;
    variation_options opt_;
    interior_kind kind_ = interior_kind::reflect;
    std::vector<std::pair<polynomial, harmonic_field>> pv_;
    std::vector<std::vector<log_dent>> dents_;
    std::vector<bump> bumps_;
};

// Seeded mutually equivalent tuple: a shared tail extension plus interior
// bumps per coordinate, kept clear of the origin pin and the blend ring.
inline variation_family random_reflect_family(const weierstrass_data& w, rng& r,
                                              double tail_scale = 0.3, double bump_scale = 0.5,
                                              variation_options opt = {}, double bw_lo = 0.15,
                                              double bw_hi = 0.25) {
    int M = 1 + int(r.uniform(0.0, 3.0));
    std::vector<cx> gam(static_cast<std::size_t>(M));
    for (auto& v : gam) v = r.complex_in_square(tail_scale);
    auto fam = variation_family::reflect(w, laurent_tail(std::move(gam)), opt);
    for (int i = 0; i < w.n(); ++i) {
        int nb = 1 + int(r.uniform(0.0, 2.0));
        for (int b = 0; b < nb; ++b) {
            double rad = std::min(0.55, opt.ring_inner - 0.15);
            cx c = std::polar(r.uniform(0.5 * rad, rad), r.uniform(0.0, 2.0 * pi));
            fam.add_interior_bump(i, c, r.uniform(bw_lo, bw_hi), r.complex_in_square(bump_scale));
        }
    }
    return fam;
}

// Seeded smooth Beltrami field on the disk grid, sup norm below the given
// bound, vanishing at the rim.
inline std::vector<cx> random_beltrami_field(const disk_grid& g, rng& r, double sup_bound = 0.8) {
    struct part {
        cx c;
        double w;
        cx amp;
    };
    std::vector<part> parts;
    int nb = 2 + int(r.uniform(0.0, 3.0));
    for (int b = 0; b < nb; ++b)
        parts.push_back({r.complex_in_disk(0.6), r.uniform(0.2, 0.5), r.complex_in_square()});
    auto raw = [&](cx z) {
        cx acc{};
        for (const auto& p : parts) {
            double s = std::norm((z - p.c) / p.w);
            if (s < 1.0) {
                double t = 1.0 - s;
                acc += p.amp * t * t;
            }
        }
        return acc * (1.0 - std::norm(z));
    };
    double sup = 0.0;
    for (std::size_t idx = 0; idx < g.size(); ++idx) sup = std::max(sup, std::abs(raw(g.node(idx))));
    double scale = sup > 0.0 ? sup_bound * r.uniform(0.3, 1.0) / sup : 0.0;
    return g.sample([&](cx z) { return scale * raw(z); });
}

struct destab_pipeline_report {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = true;
    double equivalence_residual = 0.0;
    double f_alpha = 0.0;            // spectral value of the tail: the N -> inf limit
    double dent_cost_model = 0.0;    // capacity model sum 1.2 pi (Re v)^2 / ln(delta/rho_in)
    double predicted_quadratic = 0.0; // f_alpha + dent_cost_model
    bool dents_resolved = true;
    int dent_count = 0;
};

// Run the interior-extension construction for a tail on data with known
// interior zeros, and compare the transform-pipeline quadratic value with the
// capacity model. The measured rhs - lhs approaches f_alpha from above at
// rate 1/log as the grid refines; it certifies instability (holds = false)
// only when the dent budget fits under |f_alpha|.
inline destab_pipeline_report run_destab_pipeline(const weierstrass_data& w, const laurent_tail& tail,
                                                  const std::vector<std::vector<cx>>& zeros,
                                                  const plane_grid& grid,
                                                  variation_options opt = {}) {
    destab_pipeline_report rep;
    rep.f_alpha = F_alpha(w, tail);

    double rho_in = 2.5 * grid.spacing();
    std::vector<cx> all;
    for (const auto& zs : zeros)
        for (cx z : zs) all.push_back(z);
    std::vector<std::vector<log_dent>> dents(std::size_t(w.n()));
    for (int i = 0; i < w.n() && i < int(zeros.size()); ++i) {
        for (cx zeta : zeros[std::size_t(i)]) {
            double delta = opt.ring_inner - 0.02 - std::abs(zeta);
            for (cx o : all)
                if (std::abs(o - zeta) > 1e-12) delta = std::min(delta, 0.5 * std::abs(o - zeta));
            if (delta < 2.0 * rho_in) {
                rep.dents_resolved = false;
                delta = 2.0 * rho_in;
            }
            dents[std::size_t(i)].push_back({zeta, rho_in, delta});
            ++rep.dent_count;
            double re_v = std::real(boundary_fourier(w.p(i), tail).value(zeta));
            rep.dent_cost_model += 1.2 * pi * re_v * re_v / std::log(delta / rho_in);
        }
    }
    rep.predicted_quadratic = rep.f_alpha + rep.dent_cost_model;

    auto fam = variation_family::optimal(w, tail, std::move(dents), opt);
    std::vector<std::vector<cx>> tuple;
    for (int i = 0; i < w.n(); ++i) tuple.push_back(fam.sample_mudot(i, grid));
    auto res = nmi_infinitesimal_check(w, grid, tuple);
    rep.lhs = res.lhs;
    rep.rhs = res.rhs;
    rep.holds = res.holds;
    rep.equivalence_residual = res.equivalence_residual;
    return rep;
}

// Interior zeros of the Enneper-family coordinate polynomials (known in
// closed form; the catalog exists so no root finder is needed). The origin
// zero of p_3 = r^{k+1} z^k (multiplicity k, listed once) is interior for
// every r; the zeros of p_1, p_2 sit at radius 1/r and enter only for r > 1.
inline std::vector<std::vector<cx>> enneper_interior_zeros(int k, double r) {
    std::vector<std::vector<cx>> zs(3);
    if (r > 1.0) {
        for (int j = 0; j < 2 * k; ++j) {
            zs[0].push_back(std::polar(1.0 / r, pi * double(j) / double(k)));
            zs[1].push_back(std::polar(1.0 / r, pi * double(2 * j + 1) / double(2 * k)));
        }
    }
    zs[2].push_back(cx{0.0});
    return zs;
}

struct constrained_tail_result {
    laurent_tail tail;
    double form_value = 0.0;     // F_alpha at the minimizer (unit-norm coefficients)
    bool found_negative = false;
    int nullspace_dim = 0;
};

enum class zero_constraint {
    real_part, // Re v_i(zeta) = 0: dents at the zeros then ride null
               // directions of the functional (imaginary radial fillers are free)
    full       // v_i(zeta) = 0 and (v_i)_zbar(zeta) = 0: singularity-free division
};

// Minimize the F_alpha Gram form over tails constrained at the listed
// interior zeros of the p_i. A negative constrained minimum certifies
// instability through the transform pipeline without log-capacity costs.
inline constrained_tail_result find_regular_destabilizing_tail(
    const weierstrass_data& w, int M, const std::vector<std::vector<cx>>& zeros_per_coord,
    zero_constraint mode = zero_constraint::real_part) {
    const int dim = 2 * M;
    auto basis_tail = [&](int kk) {
        int m = kk / 2 + 1;
        cx gm = (kk % 2 == 0) ? cx{1.0, 0.0} : cx{0.0, 1.0};
        return laurent_tail::monomial(m, gm);
    };

    std::vector<std::vector<double>> rows;
    for (int i = 0; i < w.n() && i < int(zeros_per_coord.size()); ++i) {
        for (cx zeta : zeros_per_coord[std::size_t(i)]) {
            std::vector<double> re_row(static_cast<std::size_t>(dim)), im_row(static_cast<std::size_t>(dim));
            std::vector<double> re_grad(static_cast<std::size_t>(dim)), im_grad(static_cast<std::size_t>(dim));
            for (int kk = 0; kk < dim; ++kk) {
                auto v = boundary_fourier(w.p(i), basis_tail(kk));
                cx val = v.value(zeta);
                re_row[std::size_t(kk)] = std::real(val);
                im_row[std::size_t(kk)] = std::imag(val);
                cx gb = v.dzbar(zeta);
                re_grad[std::size_t(kk)] = std::real(gb);
                im_grad[std::size_t(kk)] = std::imag(gb);
            }
            rows.push_back(std::move(re_row));
            if (mode == zero_constraint::full) {
                rows.push_back(std::move(im_row));
                rows.push_back(std::move(re_grad));
                rows.push_back(std::move(im_grad));
            }
        }
    }

    // nullspace of the constraint matrix via the spectral decomposition of C^T C
    sym_matrix ctc(dim);
    for (const auto& row : rows)
        for (int a = 0; a < dim; ++a)
            for (int b = 0; b < dim; ++b)
                ctc.at(a, b) += row[std::size_t(a)] * row[std::size_t(b)];
    auto ns = jacobi_eigensymm(ctc, true);
    double cmax = std::max(ns.values.empty() ? 0.0 : std::abs(ns.values.back()), 1.0);
    std::vector<std::vector<double>> null_basis;
    for (std::size_t k = 0; k < ns.values.size(); ++k)
        if (std::abs(ns.values[k]) < 1e-10 * cmax) null_basis.push_back(ns.vectors[k]);

    constrained_tail_result out;
    out.nullspace_dim = int(null_basis.size());
    if (null_basis.empty()) return out;

    sym_matrix G = gram_matrix(w, M);
    const int q = int(null_basis.size());
    sym_matrix Gq(q);
    for (int a = 0; a < q; ++a) {
        for (int b = a; b < q; ++b) {
            double acc = 0.0;
            for (int r = 0; r < dim; ++r)
                for (int c = 0; c < dim; ++c)
                    acc += null_basis[std::size_t(a)][std::size_t(r)] * G.at(r, c) *
                           null_basis[std::size_t(b)][std::size_t(c)];
            Gq.at(a, b) = acc;
            Gq.at(b, a) = acc;
        }
    }
    auto eig = jacobi_eigensymm(Gq, true);
    out.form_value = eig.values.front();
    out.found_negative = out.form_value < 0.0;

    std::vector<double> x(std::size_t(dim), 0.0);
    for (int a = 0; a < q; ++a)
        for (int r = 0; r < dim; ++r)
            x[std::size_t(r)] += eig.vectors.front()[std::size_t(a)] * null_basis[std::size_t(a)][std::size_t(r)];
    std::vector<cx> gammas(static_cast<std::size_t>(M));
    for (int m = 1; m <= M; ++m)
        gammas[std::size_t(m - 1)] = cx{x[std::size_t(2 * (m - 1))], x[std::size_t(2 * (m - 1) + 1)]};
    out.tail = laurent_tail(std::move(gammas));
    return out;
}

} // namespace minstab
