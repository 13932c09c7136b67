#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "minstab/rng.hpp"
#include "minstab/transforms.hpp"
#include "minstab/variations.hpp"
#include "support.hpp"

using namespace minstab;
using testsupport::random_equivalent_family;
using testsupport::sample_tuple;

TEST_CASE("reich-strebel delta vanishes at mu = 0 across the catalog") {
    disk_grid g(24, 64);
    std::vector<cx> zero(g.size(), cx{});
    std::vector<weierstrass_data> catalog;
    catalog.push_back(enneper_family(1, 1.2));
    catalog.push_back(enneper_family(2, 1.1));
    catalog.push_back(planar_pair(polynomial{cx{3.0}, cx{0.0}, cx{1.0}}));
    for (const auto& w : catalog)
        for (int i = 0; i < w.n(); ++i) CHECK(reich_strebel_delta(w, i, zero, g) == 0.0);
}

TEST_CASE("reich-strebel delta for a constant Beltrami field on flat pair data") {
    // first coordinate of (1, i): Hopf coefficient is identically 1
    auto w = planar_pair(polynomial{cx{1.0}});
    disk_grid g(32, 64);
    for (cx c : {cx{0.3, 0.0}, cx{-0.2, 0.4}, cx{0.0, -0.6}}) {
        std::vector<cx> mu(g.size(), c);
        double expect = (-4.0 * pi * std::real(c) + 4.0 * pi * std::norm(c)) / (1.0 - std::norm(c));
        CHECK(reich_strebel_delta(w, 0, mu, g) == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("reich-strebel delta is nonnegative when the first term is killed pointwise") {
    auto w = enneper_family(1, 1.3);
    disk_grid g(32, 64);
    // mu = i t conj(phi)/|phi| makes Re(phi mu) = 0, leaving the positive term
    for (int i = 0; i < w.n(); ++i) {
        auto mu = g.sample([&](cx z) {
            cx phi = hopf_coeff(w, i, z);
            double a = std::abs(phi);
            if (a < 1e-12) return cx{};
            return cx{0.0, 0.5} * std::conj(phi) / a;
        });
        CHECK(reich_strebel_delta(w, i, mu, g) > 0.0);
    }
}

TEST_CASE("reich-strebel rejects non-quasiconformal fields") {
    auto w = planar_pair(polynomial{cx{1.0}});
    disk_grid g(8, 16);
    std::vector<cx> mu(g.size(), cx{1.2, 0.0});
    CHECK_THROWS_AS((void)reich_strebel_delta(w, 0, mu, g), not_quasiconformal);
}

TEST_CASE("finite inequality check: trivial and sign facts") {
    auto w = planar_pair(polynomial{cx{3.0}, cx{0.0}, cx{1.0}});
    disk_grid g(24, 64);
    std::vector<std::vector<cx>> zeros(2, std::vector<cx>(g.size(), cx{}));
    auto r0 = nmi_finite_check(w, zeros, g);
    CHECK(r0.lhs == 0.0);
    CHECK(r0.rhs == 0.0);
    CHECK(r0.holds);

    rng r(2);
    for (int trial = 0; trial < 50; ++trial) {
        cx amp = r.complex_in_disk(0.8);
        auto mu = g.sample([&](cx z) { return amp * (1.0 - std::norm(z)); });
        // equal fields on both coordinates: mutually homotopic for free
        auto res = nmi_finite_check(w, {mu, mu}, g);
        CHECK(res.holds);
        CHECK(res.rhs >= 0.0);
    }
}

TEST_CASE("infinitesimal inequality: monomial equal tuples sit on the boundary case") {
    auto w = enneper_family(1, 1.2);
    plane_grid g(8.0, 256);
    for (int n = 1; n <= 3; ++n) {
        auto mu = g.sample([&](cx z) {
            return std::norm(z) <= 1.0 ? std::pow(std::conj(z), n) : cx{};
        });
        std::vector<std::vector<cx>> tuple(3, mu);
        auto res = nmi_infinitesimal_check(w, g, tuple);
        // T of zbar^n chi vanishes inside the disk, so lhs collapses
        CHECK(std::abs(res.lhs) < 5e-3 * std::max(1.0, res.rhs));
        CHECK(res.rhs > 0.0);
        CHECK(res.holds);
        CHECK(res.equivalence_residual < 1e-10);
    }

    std::vector<std::vector<cx>> zeros(3, std::vector<cx>(g.size(), cx{}));
    auto r0 = nmi_infinitesimal_check(w, g, zeros);
    CHECK(r0.lhs == 0.0);
    CHECK(r0.rhs == 0.0);
    CHECK(r0.holds);
    CHECK(r0.equivalence_residual == 0.0);
}

TEST_CASE("infinitesimal inequality holds for pair data, equal and constructed tuples") {
    auto w = planar_pair(polynomial{cx{3.0}, cx{0.0}, cx{1.0}});
    plane_grid g(8.0, 256);
    rng r(5);
    for (int trial = 0; trial < 6; ++trial) {
        auto fam = random_equivalent_family(w, r);
        auto res = nmi_infinitesimal_check(w, g, sample_tuple(fam, g));
        CHECK(res.holds);
        CHECK(res.equivalence_residual < 1e-3);
    }
}

TEST_CASE("equivalence residual detects a non-equivalent tuple") {
    auto w = planar_pair(polynomial{cx{3.0}, cx{0.0}, cx{1.0}});
    plane_grid g(8.0, 256);
    auto fam = variation_family::reflect(w, laurent_tail::monomial(1));
    auto mu0 = fam.sample_mudot(0, g);
    auto mu1 = fam.sample_mudot(1, g);
    for (auto& v : mu1) v *= 2.0; // breaks P agreement outside the disk
    auto res = nmi_infinitesimal_check(w, g, {mu0, mu1});
    CHECK(res.equivalence_residual > 1e-2);
}

TEST_CASE("second-variation identities vanish on zero fields") {
    auto w = enneper_family(1, 1.2);
    plane_grid g(8.0, 128);
    std::vector<std::vector<cx>> zeros(3, std::vector<cx>(g.size(), cx{}));
    auto res = identity_P1_P2_check(w, g, zeros, 32, 64);
    CHECK(res.residual1 == 0.0);
    CHECK(res.residual2 == 0.0);
}

TEST_CASE("second-variation identities: residuals small and refining") {
    auto w = enneper_family(1, 1.2);
    rng r(13);
    auto fam = random_equivalent_family(w, r, 0.05, 0.35, testsupport::gentle_options(), 0.3, 0.4);

    plane_grid coarse(8.0, 256);
    auto res_c = identity_P1_P2_check(w, coarse, sample_tuple(fam, coarse), 64, 256);
    MESSAGE("P1 residual at 256: ", res_c.residual1, "  P2 residual: ", res_c.residual2);
    CHECK(res_c.residual1 < 1e-3);
    CHECK(res_c.residual2 < 1e-3);

    plane_grid fine(8.0, 512);
    auto res_f = identity_P1_P2_check(w, fine, sample_tuple(fam, fine), 128, 512);
    MESSAGE("P1 residual at 512: ", res_f.residual1, "  P2 residual: ", res_f.residual2);
    CHECK(res_f.residual1 < 0.5 * res_c.residual1 + 1e-9);
    CHECK(res_f.residual2 < 0.5 * res_c.residual2 + 1e-9);
}

TEST_CASE("finite-difference second derivative matches 8 (rhs - lhs) along corrected paths") {
    auto w = enneper_family(1, 1.2);
    rng r(19);
    auto fam = random_equivalent_family(w, r, 0.2, 0.15);
    plane_grid pg(8.0, 256);
    disk_grid dg(48, 128);

    auto tuple = sample_tuple(fam, pg);
    auto nmi = nmi_infinitesimal_check(w, pg, tuple);
    double expect = 8.0 * (nmi.rhs - nmi.lhs);

    // corrected second-order paths mu(t) = t mudot - t^2 mudot T(mudot),
    // sampled on the polar grid (analytic mudot, interpolated T)
    std::vector<std::vector<cx>> mud_disk, mut_disk;
    for (int i = 0; i < w.n(); ++i) {
        auto t_plane = beurling_T(pg, tuple[std::size_t(i)]);
        mud_disk.push_back(fam.sample_mudot(i, dg));
        std::vector<cx> tvals(dg.size());
        for (std::size_t idx = 0; idx < dg.size(); ++idx)
            tvals[idx] = pg.interp(t_plane, dg.node(idx));
        mut_disk.push_back(std::move(tvals));
    }
    auto delta = [&](double t) {
        double acc = 0.0;
        for (int i = 0; i < w.n(); ++i) {
            std::vector<cx> mu(dg.size());
            for (std::size_t idx = 0; idx < dg.size(); ++idx) {
                cx md = mud_disk[std::size_t(i)][idx];
                mu[idx] = t * md - t * t * md * mut_disk[std::size_t(i)][idx];
            }
            acc += reich_strebel_delta(w, i, mu, dg);
        }
        return acc;
    };
    for (double t : {0.02, 0.04}) {
        double d2 = (delta(t) + delta(-t)) / (t * t);
        MESSAGE("t = ", t, ": fd = ", d2, " expected = ", expect);
        CHECK(std::abs(d2 - expect) <= 0.02 * std::abs(expect));
    }
}

TEST_CASE("neumann series: identity at mu = 0 and geometric residual decay") {
    plane_grid g(8.0, 256);
    std::vector<cx> zero(g.size(), cx{});
    auto id = normal_solution_neumann(g, zero, {.order = 3});
    double worst = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) worst = std::max(worst, std::abs(id.f[i] - g.node(i)));
    CHECK(worst < 1e-12);
    CHECK(std::abs(id.f[g.origin_index()]) < 1e-13);

    auto mu = g.sample([](cx z) {
        double s = std::norm(z / 0.8);
        if (s >= 1.0) return cx{};
        double t = 1.0 - s;
        return cx{0.22, 0.08} * t * t * t * t;
    });
    double prev = 1e9;
    for (int order = 1; order <= 5; ++order) {
        auto res = normal_solution_neumann(g, mu, {.order = order});
        CHECK(std::abs(res.f[g.origin_index()]) < 1e-12);
        MESSAGE("order ", order, " beltrami residual ", res.beltrami_residual);
        if (order > 1 && prev > 1e-5) CHECK(res.beltrami_residual < 0.6 * prev);
        prev = res.beltrami_residual;
    }
}

TEST_CASE("neumann series rejects out-of-contract inputs") {
    plane_grid g(8.0, 64);
    std::vector<cx> big(g.size(), cx{});
    big[g.origin_index()] = cx{0.6, 0.0};
    CHECK_THROWS_AS((void)normal_solution_neumann(g, big, {.order = 2}), series_divergence_risk);
    std::vector<cx> ok(g.size(), cx{});
    CHECK_THROWS_AS((void)normal_solution_neumann(g, ok, {.order = 9}), std::domain_error);
}

TEST_CASE("energy dominates area after quasiconformal precomposition") {
    plane_grid g(8.0, 256);
    rng r(3);
    for (auto& w : {enneper_family(1, 1.2), enneper_family(1, 0.8)}) {
        for (int trial = 0; trial < 3; ++trial) {
            auto mu = g.sample([&](cx z) {
                cx acc{};
                for (int b = 0; b < 3; ++b) {
                    cx c = std::polar(0.4 * (b + 1) / 3.0, 2.1 * b + trial);
                    double s = std::norm((z - c) / 0.5);
                    if (s < 1.0) {
                        double t = 1.0 - s;
                        acc += r.complex_in_square(0.11) * t * t * t * t;
                    }
                }
                return acc;
            });
            auto f = normal_solution_neumann(g, mu, {.order = 4});
            auto ea = composed_energy_area_quadrature(w, g, f);
            CHECK(ea.min_jacobian > 0.0);
            CHECK(ea.energy >= ea.area - 1e-6 * std::abs(ea.energy));
        }
    }
}

TEST_CASE("ground truth: composed-map energies reproduce the quadratic model") {
    // the end-to-end anchor: finite differences of actual composed-map
    // energies against 8 (rhs - lhs) from the transform pipeline
    auto w = enneper_family(1, 1.2);
    rng r(29);
    auto fam = random_equivalent_family(w, r, 0.2, 0.15);
    plane_grid pg(8.0, 256);

    auto tuple = sample_tuple(fam, pg);
    auto nmi = nmi_infinitesimal_check(w, pg, tuple);
    double expect = 8.0 * (nmi.rhs - nmi.lhs);

    std::vector<std::vector<cx>> tvals;
    for (int i = 0; i < w.n(); ++i) tvals.push_back(beurling_T(pg, tuple[std::size_t(i)]));

    auto energy_at = [&](double t) {
        double total = 0.0;
        for (int i = 0; i < w.n(); ++i) {
            std::vector<cx> mu(pg.size());
            for (std::size_t idx = 0; idx < pg.size(); ++idx) {
                cx md = tuple[std::size_t(i)][idx];
                mu[idx] = t * md - t * t * md * tvals[std::size_t(i)][idx];
            }
            auto f = normal_solution_neumann(pg, mu, {.order = 5});
            for (std::size_t idx = 0; idx < pg.size(); ++idx) {
                cx z = pg.node(idx);
                if (std::norm(z) > 1.0) continue;
                cx fz = f.fz[idx], fzb = f.fzbar[idx];
                double J = std::norm(fz) - std::norm(fzb);
                cx p = w.p(i).eval(z);
                cx gw = (std::conj(fz) * p - std::conj(fzb) * std::conj(p)) / J;
                total += pg.cell_area() * 2.0 * std::norm(gw) * J;
            }
        }
        return total;
    };

    double e0 = energy_at(0.0);
    double t = 0.04;
    double d2 = (energy_at(t) - 2.0 * e0 + energy_at(-t)) / (t * t);
    MESSAGE("fd of true energies: ", d2, " model: ", expect);
    CHECK(std::abs(d2 - expect) <= 0.1 * std::max(std::abs(expect), 1.0));
}
