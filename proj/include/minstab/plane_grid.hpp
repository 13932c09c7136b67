#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

#include "minstab/errors.hpp"
#include "minstab/fft.hpp"
#include "minstab/polynomial.hpp"

namespace minstab {

// Periodic square grid of side L centered at the origin, N x N nodes (N a
// power of two), used for Fourier-multiplier evaluation of the singular
// integral operators. Fields are row-major: value(ix, iy) at
// z = (-L/2 + ix h) + i(-L/2 + iy h), h = L/N.
class plane_grid {
public:
    plane_grid(double L, int N) : L_(L), N_(N), h_(L / double(N)) {
        if (!(L > 2.0)) throw std::invalid_argument("plane_grid: box must contain the unit disk");
        if (N < 8 || (N & (N - 1)) != 0) throw std::invalid_argument("plane_grid: N must be a power of two >= 8");
    }

    double box_side() const { return L_; }
    int n() const { return N_; }
    double spacing() const { return h_; }
    double cell_area() const { return h_ * h_; }
    std::size_t size() const { return std::size_t(N_) * std::size_t(N_); }

    std::size_t index(int ix, int iy) const {
        return std::size_t(iy) * std::size_t(N_) + std::size_t(ix);
    }
    cx node(int ix, int iy) const {
        return {-0.5 * L_ + h_ * double(ix), -0.5 * L_ + h_ * double(iy)};
    }
    cx node(std::size_t idx) const { return node(int(idx % std::size_t(N_)), int(idx / std::size_t(N_))); }
    std::size_t origin_index() const { return index(N_ / 2, N_ / 2); } // z = 0 is a grid node

    template <class F>
    std::vector<cx> sample(F&& f) const {
        std::vector<cx> out(size());
        for (int iy = 0; iy < N_; ++iy)
            for (int ix = 0; ix < N_; ++ix) out[index(ix, iy)] = f(node(ix, iy));
        return out;
    }

    cx integrate_box(const std::vector<cx>& f) const {
        cx acc{};
        for (const auto& v : f) acc += v;
        return acc * cell_area();
    }

    // restrict the Riemann sum to |z| <= radius
    cx integrate_disk(const std::vector<cx>& f, double radius = 1.0) const {
        cx acc{};
        const double r2 = radius * radius;
        for (std::size_t idx = 0; idx < f.size(); ++idx)
            if (std::norm(node(idx)) <= r2) acc += f[idx];
        return acc * cell_area();
    }

    double sup_norm(const std::vector<cx>& f) const {
        double m = 0.0;
        for (const auto& v : f) m = std::max(m, std::abs(v));
        return m;
    }

    double mean_abs_outside_disk(const std::vector<cx>& f, double radius = 1.0) const {
        double acc = 0.0;
        std::size_t cnt = 0;
        for (std::size_t idx = 0; idx < f.size(); ++idx)
            if (std::abs(node(idx)) > radius) {
                acc += std::abs(f[idx]);
                ++cnt;
            }
        return cnt ? acc / double(cnt) : 0.0;
    }

    // signed frequency for bin k
    double freq(int k) const {
        int ks = k < N_ / 2 ? k : k - N_;
        return 2.0 * pi * double(ks) / L_;
    }

    // apply a Fourier multiplier m(sigma), sigma = xi_x + i xi_y; the zero mode
    // is multiplied by zero_mode_factor
    std::vector<cx> apply_multiplier(const std::vector<cx>& f,
                                     const std::function<cx(cx)>& m,
                                     cx zero_mode_factor = cx{0.0}) const {
        std::vector<cx> a(f);
        fft2_inplace(a, std::size_t(N_), false);
        for (int ky = 0; ky < N_; ++ky) {
            for (int kx = 0; kx < N_; ++kx) {
                cx sigma{freq(kx), freq(ky)};
                std::size_t idx = index(kx, ky);
                if (kx == 0 && ky == 0)
                    a[idx] *= zero_mode_factor;
                else
                    a[idx] *= m(sigma);
            }
        }
        fft2_inplace(a, std::size_t(N_), true);
        return a;
    }

    // spectral d/dz and d/dzbar (exact for band-limited fields)
    std::vector<cx> dz_spectral(const std::vector<cx>& f) const {
        return apply_multiplier(f, [](cx s) { return cx{0.0, 0.5} * std::conj(s); });
    }
    std::vector<cx> dzbar_spectral(const std::vector<cx>& f) const {
        return apply_multiplier(f, [](cx s) { return cx{0.0, 0.5} * s; });
    }

    // 4th-order centered finite differences with periodic wrap; local, so
    // usable on fields that are smooth inside the box but not periodic
    std::vector<cx> dx_fd4(const std::vector<cx>& f) const {
        std::vector<cx> out(size());
        const double c = 1.0 / (12.0 * h_);
        for (int iy = 0; iy < N_; ++iy) {
            for (int ix = 0; ix < N_; ++ix) {
                auto at = [&](int dx) { return f[index((ix + dx + 2 * N_) % N_, iy)]; };
                out[index(ix, iy)] = c * (-at(2) + 8.0 * at(1) - 8.0 * at(-1) + at(-2));
            }
        }
        return out;
    }
    std::vector<cx> dy_fd4(const std::vector<cx>& f) const {
        std::vector<cx> out(size());
        const double c = 1.0 / (12.0 * h_);
        for (int iy = 0; iy < N_; ++iy) {
            for (int ix = 0; ix < N_; ++ix) {
                auto at = [&](int dy) { return f[index(ix, (iy + dy + 2 * N_) % N_)]; };
                out[index(ix, iy)] = c * (-at(2) + 8.0 * at(1) - 8.0 * at(-1) + at(-2));
            }
        }
        return out;
    }
    std::vector<cx> dz_fd4(const std::vector<cx>& f) const {
        auto fx = dx_fd4(f), fy = dy_fd4(f);
        std::vector<cx> out(size());
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = 0.5 * (fx[i] - cx{0.0, 1.0} * fy[i]);
        return out;
    }
    std::vector<cx> dzbar_fd4(const std::vector<cx>& f) const {
        auto fx = dx_fd4(f), fy = dy_fd4(f);
        std::vector<cx> out(size());
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = 0.5 * (fx[i] + cx{0.0, 1.0} * fy[i]);
        return out;
    }

    // Catmull-Rom bicubic interpolation at an arbitrary point strictly inside
    // the box (periodic wrap at the stencil edges).
    cx interp(const std::vector<cx>& f, cx z) const {
        double gx = (std::real(z) + 0.5 * L_) / h_;
        double gy = (std::imag(z) + 0.5 * L_) / h_;
        int ix = int(std::floor(gx)), iy = int(std::floor(gy));
        double tx = gx - double(ix), ty = gy - double(iy);
        auto wgt = [](double t, int k) {
            switch (k) {
            case -1: return 0.5 * (-t + 2.0 * t * t - t * t * t);
            case 0: return 0.5 * (2.0 - 5.0 * t * t + 3.0 * t * t * t);
            case 1: return 0.5 * (t + 4.0 * t * t - 3.0 * t * t * t);
            default: return 0.5 * (-t * t + t * t * t);
            }
        };
        cx acc{};
        for (int ky = -1; ky <= 2; ++ky) {
            double wy = wgt(ty, ky);
            int yy = ((iy + ky) % N_ + N_) % N_;
            for (int kx = -1; kx <= 2; ++kx) {
                int xx = ((ix + kx) % N_ + N_) % N_;
                acc += wy * wgt(tx, kx) * f[std::size_t(yy) * std::size_t(N_) + std::size_t(xx)];
            }
        }
        return acc;
    }

private:
    double L_;
    int N_;
    double h_;
};

namespace detail {

// Multipole reference family for the periodized Cauchy solve. The decay of
// P(h) at infinity is governed by the holomorphic moments m_k = int h zeta^k;
// the periodic multiplier path is exact only up to image sums of that tail.
// Projecting h onto the fields beta_k = zbar^k b(|z|^2), b(s) = (1-s)^6 on
// the disk, removes m_0..m_K and leaves a remainder whose free-space
// transform decays like z^{-(K+2)}. The beta_k have closed forms:
//   P(beta_k) = zbar^{k+1} Pk(s),   T(beta_k) = zbar^{k+2} Qk(s)   (s <= 1)
//   P(beta_k) = B_k / z^{k+1},      T(beta_k) = -(k+1) B_k / z^{k+2} (s > 1)
// with Pk, Qk polynomials in s and B_k = int_0^1 s^k (1-s)^6 ds.
struct multipole_term {
    int k;
    double Bk;
    double Pk_coeff[7]; // Pk(s) = sum_j Pk_coeff[j] s^j
    double Qk_coeff[6]; // Qk(s) = sum_j Qk_coeff[j] s^j

    static double binom6(int j) {
        static const double c[7] = {1, 6, 15, 20, 15, 6, 1};
        return c[j];
    }

    explicit multipole_term(int order) : k(order) {
        Bk = 0.0;
        for (int j = 0; j <= 6; ++j) {
            double cj = ((j % 2) ? -1.0 : 1.0) * binom6(j);
            Pk_coeff[j] = cj / double(k + j + 1);
            Bk += Pk_coeff[j];
        }
        for (int j = 1; j <= 6; ++j) {
            double cj = ((j % 2) ? -1.0 : 1.0) * binom6(j);
            Qk_coeff[j - 1] = cj * double(j) / double(k + j + 1);
        }
    }

    static double bump(double s) {
        if (s >= 1.0) return 0.0;
        double t = 1.0 - s;
        double t3 = t * t * t;
        return t3 * t3;
    }

    cx field(cx z) const {
        double s = std::norm(z);
        if (s >= 1.0) return {};
        cx zb = std::conj(z);
        cx p{1.0};
        for (int j = 0; j < k; ++j) p *= zb;
        return p * bump(s);
    }

    cx P(cx z) const {
        double s = std::norm(z);
        cx zb = std::conj(z);
        if (s <= 1.0) {
            double acc = 0.0, sp = 1.0;
            for (int j = 0; j <= 6; ++j) {
                acc += Pk_coeff[j] * sp;
                sp *= s;
            }
            cx p{1.0};
            for (int j = 0; j < k + 1; ++j) p *= zb;
            return p * acc;
        }
        cx zp{1.0};
        for (int j = 0; j < k + 1; ++j) zp *= z;
        return Bk / zp;
    }

    cx T(cx z) const {
        double s = std::norm(z);
        cx zb = std::conj(z);
        if (s <= 1.0) {
            double acc = 0.0, sp = 1.0;
            for (int j = 0; j <= 5; ++j) {
                acc += Qk_coeff[j] * sp;
                sp *= s;
            }
            cx p{1.0};
            for (int j = 0; j < k + 2; ++j) p *= zb;
            return p * acc;
        }
        cx zp{1.0};
        for (int j = 0; j < k + 2; ++j) zp *= z;
        return -double(k + 1) * Bk / zp;
    }
};

inline const std::vector<multipole_term>& multipole_terms(int K) {
    static thread_local std::vector<multipole_term> terms;
    for (int k = int(terms.size()); k <= K; ++k) terms.emplace_back(k);
    return terms;
}

} // namespace detail

// Result of the Cauchy-type solve: the field u = P(h) plus its structural
// derivatives (u_zbar = h reproduced through the operator's own decomposition,
// u_z = T(h)).
struct cauchy_result {
    std::vector<cx> value;
    std::vector<cx> dz;    // = T(h)
    std::vector<cx> dzbar; // = input (mean part re-synthesized analytically)
};

inline constexpr int cauchy_multipole_order = 3;

namespace detail {

// coefficients c_k zeroing the holomorphic moments of h - sum c_k beta_k;
// the beta_k moment matrix is diagonal: int beta_k zeta^j = pi B_k delta_jk
inline std::vector<cx> multipole_coefficients(const plane_grid& g, const std::vector<cx>& h, int K) {
    const auto& terms = multipole_terms(K);
    std::vector<cx> moments(std::size_t(K) + 1, cx{});
    for (std::size_t i = 0; i < g.size(); ++i) {
        cx z = g.node(i);
        if (std::norm(z) > 4.1) continue; // moments weighted inside; tails are zero for our inputs
        cx zp{1.0};
        for (int k = 0; k <= K; ++k) {
            moments[std::size_t(k)] += h[i] * zp;
            zp *= z;
        }
    }
    std::vector<cx> c(std::size_t(K) + 1);
    for (int k = 0; k <= K; ++k)
        c[std::size_t(k)] = moments[std::size_t(k)] * g.cell_area() / (pi * terms[std::size_t(k)].Bk);
    return c;
}

inline void check_disk_support(const plane_grid& g, const std::vector<cx>& h, const char* who) {
    double out = g.mean_abs_outside_disk(h, 1.0 + 2.0 * g.spacing());
    if (out > 1e-8 * (1.0 + g.sup_norm(h)))
        throw std::domain_error(std::string(who) + ": input not supported in the unit disk");
}

} // namespace detail

// P(h): solves du/dzbar = h with decay inside the box and P(h)(0) = 0.
// Low holomorphic moments of h ride on analytic reference fields (a periodic
// box cannot represent the slowly decaying part of the free-space solution);
// the remainder goes through the multiplier 2/(i sigma).
inline cauchy_result cauchy_P_full(const plane_grid& g, const std::vector<cx>& h,
                                   bool require_disk_support = false,
                                   int multipole_order = cauchy_multipole_order) {
    if (h.size() != g.size()) throw std::invalid_argument("cauchy_P: field size mismatch");
    if (require_disk_support) detail::check_disk_support(g, h, "cauchy_P");

    const auto& terms = detail::multipole_terms(multipole_order);
    auto c = detail::multipole_coefficients(g, h, multipole_order);

    std::vector<cx> h0(h);
    for (std::size_t i = 0; i < g.size(); ++i) {
        cx z = g.node(i);
        for (int k = 0; k <= multipole_order; ++k)
            h0[i] -= c[std::size_t(k)] * terms[std::size_t(k)].field(z);
    }
    cauchy_result r;
    r.value = g.apply_multiplier(h0, [](cx s) { return 2.0 / (cx{0.0, 1.0} * s); });
    r.dz = g.apply_multiplier(h0, [](cx s) { return std::conj(s) / s; });
    r.dzbar = std::move(h0);
    for (std::size_t i = 0; i < g.size(); ++i) {
        cx z = g.node(i);
        for (int k = 0; k <= multipole_order; ++k) {
            const auto& t = terms[std::size_t(k)];
            r.value[i] += c[std::size_t(k)] * t.P(z);
            r.dz[i] += c[std::size_t(k)] * t.T(z);
            r.dzbar[i] += c[std::size_t(k)] * t.field(z);
        }
    }
    cx at0 = r.value[g.origin_index()];
    for (auto& v : r.value) v -= at0;
    return r;
}

inline std::vector<cx> cauchy_P(const plane_grid& g, const std::vector<cx>& h,
                                bool require_disk_support = false,
                                int multipole_order = cauchy_multipole_order) {
    return cauchy_P_full(g, h, require_disk_support, multipole_order).value;
}

// Beurling transform T(h) = d/dz P(h), multiplier conj(sigma)/sigma.
inline std::vector<cx> beurling_T(const plane_grid& g, const std::vector<cx>& h,
                                  bool require_disk_support = false,
                                  int multipole_order = cauchy_multipole_order) {
    if (h.size() != g.size()) throw std::invalid_argument("beurling_T: field size mismatch");
    if (require_disk_support) detail::check_disk_support(g, h, "beurling_T");
    const auto& terms = detail::multipole_terms(multipole_order);
    auto c = detail::multipole_coefficients(g, h, multipole_order);
    std::vector<cx> h0(h);
    for (std::size_t i = 0; i < g.size(); ++i) {
        cx z = g.node(i);
        for (int k = 0; k <= multipole_order; ++k)
            h0[i] -= c[std::size_t(k)] * terms[std::size_t(k)].field(z);
    }
    auto out = g.apply_multiplier(h0, [](cx s) { return std::conj(s) / s; });
    for (std::size_t i = 0; i < g.size(); ++i) {
        cx z = g.node(i);
        for (int k = 0; k <= multipole_order; ++k)
            out[i] += c[std::size_t(k)] * terms[std::size_t(k)].T(z);
    }
    return out;
}

} // namespace minstab
