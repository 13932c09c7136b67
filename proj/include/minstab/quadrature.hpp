#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

#include "minstab/polynomial.hpp"

namespace minstab {

// Gauss-Legendre nodes/weights on [-1, 1], Newton iteration on P_n.
inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(std::size_t(n), 0.0);
    w.assign(std::size_t(n), 0.0);
    for (int i = 0; i < n; ++i) {
        // Chebyshev initial guess, refined by Newton
        double t = std::cos(pi * (double(i) + 0.75) / (double(n) + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = t;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / double(k);
                p0 = p1;
                p1 = p2;
            }
            dp = double(n) * (t * p1 - p0) / (t * t - 1.0);
            double dt = p1 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        x[std::size_t(n - 1 - i)] = t;
        w[std::size_t(n - 1 - i)] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
}

// Polar quadrature grid on the unit disk: Gauss-Legendre radii on [0,1],
// uniform angles. Integrates z^a zbar^b exactly for a + b <= 2*nr - 1 when
// a - b is not a nonzero multiple of ntheta.
class disk_grid {
public:
    disk_grid(int nr, int ntheta, double radius = 1.0) : nr_(nr), nt_(ntheta), radius_(radius) {
        if (nr < 1 || ntheta < 1) throw std::invalid_argument("disk_grid: empty grid");
        std::vector<double> gx, gw;
        gauss_legendre(nr, gx, gw);
        r_.resize(std::size_t(nr));
        wr_.resize(std::size_t(nr));
        for (int i = 0; i < nr; ++i) {
            double r = 0.5 * (gx[std::size_t(i)] + 1.0);
            r_[std::size_t(i)] = radius * r;
            // dA = r dr dtheta; extra 0.5 from mapping [-1,1] -> [0,1]
            wr_[std::size_t(i)] = radius * radius * 0.5 * gw[std::size_t(i)] * r * (2.0 * pi / double(ntheta));
        }
        theta_.resize(std::size_t(ntheta));
        node_.resize(std::size_t(nr) * std::size_t(ntheta));
        for (int j = 0; j < ntheta; ++j) theta_[std::size_t(j)] = 2.0 * pi * double(j) / double(ntheta);
        for (int i = 0; i < nr; ++i)
            for (int j = 0; j < ntheta; ++j)
                node_[index(i, j)] = std::polar(r_[std::size_t(i)], theta_[std::size_t(j)]);
    }

    int nr() const { return nr_; }
    int ntheta() const { return nt_; }
    double radius() const { return radius_; }
    std::size_t size() const { return node_.size(); }
    std::size_t index(int i, int j) const { return std::size_t(i) * std::size_t(nt_) + std::size_t(j); }
    cx node(std::size_t idx) const { return node_[idx]; }
    double weight(std::size_t idx) const { return wr_[idx / std::size_t(nt_)]; }
    const std::vector<cx>& nodes() const { return node_; }

    template <class F>
    cx integrate(F&& f) const {
        cx acc{};
        for (std::size_t idx = 0; idx < node_.size(); ++idx) acc += weight(idx) * f(node_[idx]);
        return acc;
    }

    cx integrate_samples(const std::vector<cx>& vals) const {
        if (vals.size() != node_.size()) throw std::invalid_argument("disk_grid: sample size mismatch");
        cx acc{};
        for (std::size_t idx = 0; idx < node_.size(); ++idx) acc += weight(idx) * vals[idx];
        return acc;
    }

    template <class F>
    std::vector<cx> sample(F&& f) const {
        std::vector<cx> out(node_.size());
        for (std::size_t idx = 0; idx < node_.size(); ++idx) out[idx] = f(node_[idx]);
        return out;
    }

private:
    int nr_, nt_;
    double radius_;
    std::vector<double> r_, theta_, wr_;
    std::vector<cx> node_;
};

// F(f) = Re int f_z f_zbar + int |f_zbar|^2 over the unit disk, by quadrature
// with derivatives supplied analytically by the field. Oracle counterpart of
// the closed-form spectral evaluation.
template <class Field>
double F_quadrature(const Field& f, const disk_grid& g) {
    double acc = 0.0;
    for (std::size_t idx = 0; idx < g.size(); ++idx) {
        cx z = g.node(idx);
        cx fz = f.dz(z);
        cx fzb = f.dzbar(z);
        acc += g.weight(idx) * (std::real(fz * fzb) + std::norm(fzb));
    }
    return acc;
}

} // namespace minstab
