#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "minstab/errors.hpp"

namespace minstab {

// Dense symmetric matrix, row-major.
struct sym_matrix {
    int n = 0;
    std::vector<double> a; // n*n

    sym_matrix() = default;
    explicit sym_matrix(int size) : n(size), a(std::size_t(size) * std::size_t(size), 0.0) {}

    double& at(int i, int j) { return a[std::size_t(i) * std::size_t(n) + std::size_t(j)]; }
    double at(int i, int j) const { return a[std::size_t(i) * std::size_t(n) + std::size_t(j)]; }

    double max_asymmetry() const {
        double m = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) m = std::max(m, std::abs(at(i, j) - at(j, i)));
        return m;
    }
};

struct eigen_result {
    std::vector<double> values;          // ascending
    std::vector<std::vector<double>> vectors; // vectors[k] pairs with values[k]
};

// Cyclic Jacobi. Sizes here stay <= 128, where this is simple and accurate.
inline eigen_result jacobi_eigensymm(sym_matrix m, bool want_vectors = true) {
    const int n = m.n;
    std::vector<std::vector<double>> v;
    if (want_vectors) {
        v.assign(std::size_t(n), std::vector<double>(std::size_t(n), 0.0));
        for (int i = 0; i < n; ++i) v[std::size_t(i)][std::size_t(i)] = 1.0;
    }
    auto off = [&]() {
        double s = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) s += m.at(i, j) * m.at(i, j);
        return s;
    };
    double scale = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) scale = std::max(scale, std::abs(m.at(i, j)));
    const double tol = (scale > 0.0 ? scale : 1.0) * 1e-15;

    for (int sweep = 0; sweep < 100; ++sweep) {
        if (std::sqrt(off()) <= tol * double(n)) break;
        if (sweep == 99) throw numerical_failure("jacobi_eigensymm: no convergence in 100 sweeps");
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                double apq = m.at(p, q);
                if (std::abs(apq) <= tol * 1e-2) continue;
                double app = m.at(p, p), aqq = m.at(q, q);
                double tau = (aqq - app) / (2.0 * apq);
                double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                double c = 1.0 / std::sqrt(1.0 + t * t);
                double s = t * c;
                for (int k = 0; k < n; ++k) {
                    double akp = m.at(k, p), akq = m.at(k, q);
                    m.at(k, p) = c * akp - s * akq;
                    m.at(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    double apk = m.at(p, k), aqk = m.at(q, k);
                    m.at(p, k) = c * apk - s * aqk;
                    m.at(q, k) = s * apk + c * aqk;
                }
                if (want_vectors) {
                    for (int k = 0; k < n; ++k) {
                        double vkp = v[std::size_t(k)][std::size_t(p)];
                        double vkq = v[std::size_t(k)][std::size_t(q)];
                        v[std::size_t(k)][std::size_t(p)] = c * vkp - s * vkq;
                        v[std::size_t(k)][std::size_t(q)] = s * vkp + c * vkq;
                    }
                }
            }
        }
    }

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> diag(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) diag[std::size_t(i)] = m.at(i, i);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return diag[std::size_t(a)] < diag[std::size_t(b)]; });

    eigen_result r;
    r.values.resize(std::size_t(n));
    if (want_vectors) r.vectors.resize(std::size_t(n));
    for (int k = 0; k < n; ++k) {
        int src = order[std::size_t(k)];
        r.values[std::size_t(k)] = diag[std::size_t(src)];
        if (want_vectors) {
            auto& col = r.vectors[std::size_t(k)];
            col.resize(std::size_t(n));
            for (int i = 0; i < n; ++i) col[std::size_t(i)] = v[std::size_t(i)][std::size_t(src)];
        }
    }
    return r;
}

} // namespace minstab
