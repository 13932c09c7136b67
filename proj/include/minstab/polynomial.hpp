#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace minstab {

using cx = std::complex<double>;

inline constexpr double pi = 3.141592653589793238462643383279502884;

// Complex polynomial p(z) = sum_j c[j] z^j, stored lowest degree first and kept
// trimmed (leading coefficient nonzero unless p == 0).
class polynomial {
public:
    polynomial() = default;
    explicit polynomial(std::vector<cx> coeffs) : c_(std::move(coeffs)) { trim(); }
    polynomial(std::initializer_list<cx> coeffs) : c_(coeffs) { trim(); }

    static polynomial monomial(int degree, cx coeff = 1.0) {
        std::vector<cx> c(std::size_t(degree) + 1, cx{0.0});
        c.back() = coeff;
        return polynomial(std::move(c));
    }

    bool is_zero() const { return c_.empty(); }
    int degree() const { return int(c_.size()) - 1; } // -1 for the zero polynomial

    cx coeff(int j) const {
        if (j < 0 || j >= int(c_.size())) return {};
        return c_[std::size_t(j)];
    }
    const std::vector<cx>& coeffs() const { return c_; }

    cx eval(cx z) const {
        cx acc{};
        for (std::size_t j = c_.size(); j-- > 0;) acc = acc * z + c_[j];
        return acc;
    }
    cx operator()(cx z) const { return eval(z); }

    polynomial operator+(const polynomial& q) const {
        std::vector<cx> r(std::max(c_.size(), q.c_.size()), cx{});
        for (std::size_t j = 0; j < c_.size(); ++j) r[j] += c_[j];
        for (std::size_t j = 0; j < q.c_.size(); ++j) r[j] += q.c_[j];
        return polynomial(std::move(r));
    }
    polynomial operator-(const polynomial& q) const { return *this + q.scaled(-1.0); }

    polynomial operator*(const polynomial& q) const {
        if (is_zero() || q.is_zero()) return {};
        std::vector<cx> r(c_.size() + q.c_.size() - 1, cx{});
        for (std::size_t a = 0; a < c_.size(); ++a)
            for (std::size_t b = 0; b < q.c_.size(); ++b) r[a + b] += c_[a] * q.c_[b];
        return polynomial(std::move(r));
    }

    polynomial scaled(cx s) const {
        std::vector<cx> r(c_);
        for (auto& v : r) v *= s;
        return polynomial(std::move(r));
    }

    polynomial derivative() const {
        if (c_.size() <= 1) return {};
        std::vector<cx> r(c_.size() - 1);
        for (std::size_t j = 1; j < c_.size(); ++j) r[j - 1] = double(j) * c_[j];
        return polynomial(std::move(r));
    }

    // A with A(0) = 0 and A' = p, exact in coefficients.
    polynomial antiderivative() const {
        if (is_zero()) return {};
        std::vector<cx> r(c_.size() + 1, cx{});
        for (std::size_t j = 0; j < c_.size(); ++j) r[j + 1] = c_[j] / double(j + 1);
        return polynomial(std::move(r));
    }

    // q(z) = r * p(r z), the rescaling that pulls p|D_r back to the unit disk.
    polynomial reparam_scale(double r) const {
        if (!(r > 0.0)) throw std::domain_error("reparam_scale: r must be positive");
        std::vector<cx> out(c_);
        double f = r;
        for (auto& v : out) {
            v *= f;
            f *= r;
        }
        return polynomial(std::move(out));
    }

    // max |p'| on the unit circle is bounded by sum_j j|c_j|
    double derivative_bound_on_circle() const {
        double b = 0.0;
        for (std::size_t j = 1; j < c_.size(); ++j) b += double(j) * std::abs(c_[j]);
        return b;
    }

    struct circle_min {
        double min_sampled;     // min over sampled angles of |p(e^{i theta})|
        double certified_lower; // lower bound for the true minimum on the circle
        double theta_argmin;
    };

    // Sampled minimum modulus on |z| = 1 with a Lipschitz certificate:
    // the true minimizer lies within half a sample spacing of some sample, and
    // |p| varies by at most max|p'| * arclength between them.
    circle_min min_modulus_on_circle(int samples = 0) const {
        const int min_samples = 4 * (degree() + 2);
        int n = std::max(samples, std::max(min_samples, 16));
        double best = std::numeric_limits<double>::infinity();
        double arg = 0.0;
        for (int k = 0; k < n; ++k) {
            double th = 2.0 * pi * double(k) / double(n);
            double v = std::abs(eval(std::polar(1.0, th)));
            if (v < best) {
                best = v;
                arg = th;
            }
        }
        double slack = derivative_bound_on_circle() * (pi / double(n));
        return {best, std::max(best - slack, 0.0), arg};
    }

    // winding number of theta -> p(e^{i theta}); equals the zero count inside
    // the unit disk when p has no zeros on the circle
    int winding_on_circle(int samples = 4096) const {
        double total = 0.0;
        cx prev = eval(cx{1.0, 0.0});
        for (int k = 1; k <= samples; ++k) {
            double th = 2.0 * pi * double(k) / double(samples);
            cx cur = eval(std::polar(1.0, th));
            total += std::arg(cur / prev);
            prev = cur;
        }
        return int(std::lround(total / (2.0 * pi)));
    }

private:
    void trim() {
        while (!c_.empty() && c_.back() == cx{0.0}) c_.pop_back();
    }

    std::vector<cx> c_;
};

inline polynomial operator*(cx s, const polynomial& p) { return p.scaled(s); }

// Finite anti-holomorphic tail phi(z) = sum_{m=1..M} gamma_m z^{-m}, the model
// for variations supported outside the unit disk. Trimmed at the far end.
class laurent_tail {
public:
    laurent_tail() = default;
    explicit laurent_tail(std::vector<cx> gammas) : g_(std::move(gammas)) { trim(); }

    static laurent_tail monomial(int m, cx gamma = 1.0) {
        if (m < 1) throw std::domain_error("laurent_tail: order must be >= 1");
        std::vector<cx> g(std::size_t(m), cx{});
        g.back() = gamma;
        return laurent_tail(std::move(g));
    }

    bool is_zero() const { return g_.empty(); }
    int max_order() const { return int(g_.size()); }

    cx gamma(int m) const { // coefficient of z^{-m}, m >= 1
        if (m < 1 || m > int(g_.size())) return {};
        return g_[std::size_t(m - 1)];
    }
    const std::vector<cx>& gammas() const { return g_; }

    cx eval(cx z) const {
        cx acc{};
        cx zin = 1.0 / z;
        cx p = zin;
        for (std::size_t i = 0; i < g_.size(); ++i) {
            acc += g_[i] * p;
            p *= zin;
        }
        return acc;
    }

    laurent_tail operator+(const laurent_tail& o) const {
        std::vector<cx> r(std::max(g_.size(), o.g_.size()), cx{});
        for (std::size_t i = 0; i < g_.size(); ++i) r[i] += g_[i];
        for (std::size_t i = 0; i < o.g_.size(); ++i) r[i] += o.g_[i];
        return laurent_tail(std::move(r));
    }

    laurent_tail scaled(cx s) const {
        std::vector<cx> r(g_);
        for (auto& v : r) v *= s;
        return laurent_tail(std::move(r));
    }

private:
    void trim() {
        while (!g_.empty() && g_.back() == cx{0.0}) g_.pop_back();
    }
    std::vector<cx> g_;
};

} // namespace minstab
