#pragma once

// shared helpers for the test suites

#include <tuple>
#include <vector>

#include "minstab/fft.hpp"
#include "minstab/plane_grid.hpp"
#include "minstab/rng.hpp"
#include "minstab/variations.hpp"

namespace testsupport {

using namespace minstab;

// smooth C^3 bump supported in |z - c| < w
inline cx bump(cx z, cx c, double w) {
    double s = std::norm((z - c) / w);
    if (s >= 1.0) return {};
    double t = 1.0 - s;
    return t * t * t * t;
}

inline std::vector<cx> random_disk_field(const plane_grid& g, rng& r, int nbumps = 5,
                                         double amp = 1.0) {
    std::vector<std::tuple<cx, double, cx>> parts;
    for (int b = 0; b < nbumps; ++b)
        parts.emplace_back(r.complex_in_disk(0.55), r.uniform(0.15, 0.4), r.complex_in_square(amp));
    return g.sample([&](cx z) {
        cx acc{};
        for (auto& [c, w, a] : parts) acc += a * bump(z, c, w);
        return acc;
    });
}

inline void band_limit(const plane_grid& g, std::vector<cx>& f, int kmax) {
    fft2_inplace(f, std::size_t(g.n()), false);
    for (int ky = 0; ky < g.n(); ++ky) {
        for (int kx = 0; kx < g.n(); ++kx) {
            int sx = kx < g.n() / 2 ? kx : kx - g.n();
            int sy = ky < g.n() / 2 ? ky : ky - g.n();
            if (sx * sx + sy * sy > kmax * kmax) f[g.index(kx, ky)] = cx{};
        }
    }
    fft2_inplace(f, std::size_t(g.n()), true);
}

// band-limited field with vanishing low holomorphic moments: exactly the
// class on which the multiplier path is self-consistent to roundoff
inline std::vector<cx> spectral_test_field(const plane_grid& g, rng& r, int kmax = 0) {
    if (kmax == 0) kmax = g.n() / 4;
    auto f = random_disk_field(g, r);
    band_limit(g, f, kmax);
    const auto& terms = detail::multipole_terms(cauchy_multipole_order);
    for (int pass = 0; pass < 3; ++pass) {
        auto c = detail::multipole_coefficients(g, f, cauchy_multipole_order);
        for (int k = 0; k <= cauchy_multipole_order; ++k) {
            auto beta = g.sample([&](cx z) { return terms[std::size_t(k)].field(z); });
            band_limit(g, beta, kmax);
            for (std::size_t i = 0; i < g.size(); ++i) f[i] -= c[std::size_t(k)] * beta[i];
        }
    }
    return f;
}

// mutually equivalent tuple: shared tail extension plus interior bumps
inline variation_family random_equivalent_family(const weierstrass_data& w, rng& r,
                                                 double tail_scale = 0.5, double bump_scale = 0.6,
                                                 variation_options opt = {}, double bw_lo = 0.15,
                                                 double bw_hi = 0.25) {
    return random_reflect_family(w, r, tail_scale, bump_scale, opt, bw_lo, bw_hi);
}

// gentler profile for tests that difference the fields numerically
inline variation_options gentle_options() {
    variation_options o;
    o.ring_inner = 0.55;
    o.ring_outer = 0.95;
    return o;
}

inline std::vector<std::vector<cx>> sample_tuple(const variation_family& fam, const plane_grid& g) {
    std::vector<std::vector<cx>> out;
    for (int i = 0; i < fam.n(); ++i) out.push_back(fam.sample_mudot(i, g));
    return out;
}

inline std::vector<std::vector<cx>> sample_tuple(const variation_family& fam, const disk_grid& g) {
    std::vector<std::vector<cx>> out;
    for (int i = 0; i < fam.n(); ++i) out.push_back(fam.sample_mudot(i, g));
    return out;
}

} // namespace testsupport
