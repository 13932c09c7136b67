#pragma once

#include <complex>
#include <vector>

#include "minstab/polynomial.hpp"

namespace minstab {

// Harmonic extension of a trigonometric polynomial on the circle:
//   f(z) = sum_{k>=0} c_k z^k + sum_{k<0} c_k zbar^{-k},
// stored as coefficients c_k for k in [-K, K]. The restriction to |z| = 1 is
// sum_k c_k e^{ik theta}.
class harmonic_field {
public:
    harmonic_field() : K_(0), c_(1, cx{}) {}
    explicit harmonic_field(int K) : K_(K), c_(std::size_t(2 * K + 1), cx{}) {}

    int max_index() const { return K_; }

    cx coeff(int k) const {
        if (k < -K_ || k > K_) return {};
        return c_[std::size_t(k + K_)];
    }
    void set_coeff(int k, cx v) { c_.at(std::size_t(k + K_)) = v; }

    cx value(cx z) const {
        cx acc = coeff(0);
        cx zp = 1.0, zbp = 1.0;
        cx zb = std::conj(z);
        for (int k = 1; k <= K_; ++k) {
            zp *= z;
            zbp *= zb;
            acc += coeff(k) * zp + coeff(-k) * zbp;
        }
        return acc;
    }

    // d/dz: only the holomorphic part contributes
    cx dz(cx z) const {
        cx acc{};
        cx zp = 1.0;
        for (int k = 1; k <= K_; ++k) {
            acc += double(k) * coeff(k) * zp;
            zp *= z;
        }
        return acc;
    }

    // d/dzbar: only the anti-holomorphic part contributes
    cx dzbar(cx z) const {
        cx acc{};
        cx zbp = 1.0;
        cx zb = std::conj(z);
        for (int k = 1; k <= K_; ++k) {
            acc += double(k) * coeff(-k) * zbp;
            zbp *= zb;
        }
        return acc;
    }

    harmonic_field operator+(const harmonic_field& o) const {
        harmonic_field r(std::max(K_, o.K_));
        for (int k = -r.K_; k <= r.K_; ++k) r.set_coeff(k, coeff(k) + o.coeff(k));
        return r;
    }

    harmonic_field scaled(cx s) const {
        harmonic_field r(*this);
        for (auto& v : r.c_) v *= s;
        return r;
    }

private:
    int K_;
    std::vector<cx> c_; // c_[k + K_]
};

// Fourier coefficients of theta -> p(e^{i theta}) * phi(e^{i theta}) together
// with their harmonic extension: c_k = sum_m gamma_m a_{k+m}, k in
// [-M, deg p - 1].
inline harmonic_field boundary_fourier(const polynomial& p, const laurent_tail& phi) {
    const int M = phi.max_order();
    const int d = p.degree();
    const int K = std::max({M, d - 1, 0});
    harmonic_field f(K);
    if (p.is_zero() || phi.is_zero()) return f;
    for (int k = -M; k <= d - 1; ++k) {
        cx c{};
        for (int m = 1; m <= M; ++m) c += phi.gamma(m) * p.coeff(k + m);
        f.set_coeff(k, f.coeff(k) + c);
    }
    return f;
}

} // namespace minstab
