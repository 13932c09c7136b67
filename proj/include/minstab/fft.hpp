#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace minstab {

using cx = std::complex<double>;

namespace detail {

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Twiddle table for a given transform length, built once per call site size.
inline const std::vector<cx>& twiddles(std::size_t n) {
    static thread_local std::vector<std::vector<cx>> cache; // index = log2(n)
    std::size_t lg = 0;
    while ((std::size_t{1} << lg) < n) ++lg;
    if (cache.size() <= lg) cache.resize(lg + 1);
    auto& tw = cache[lg];
    if (tw.size() != n / 2) {
        tw.resize(n / 2);
        const double step = -2.0 * 3.141592653589793238462643383279502884 / double(n);
        for (std::size_t k = 0; k < n / 2; ++k)
            tw[k] = std::polar(1.0, step * double(k));
    }
    return tw;
}

} // namespace detail

// In-place iterative radix-2 FFT. inverse=true applies the conjugate transform
// and the 1/n normalization.
inline void fft_inplace(std::vector<cx>& a, bool inverse) {
    const std::size_t n = a.size();
    if (!detail::is_pow2(n)) throw std::invalid_argument("fft: length must be a power of two");
    if (n < 2) return;

    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    const auto& tw = detail::twiddles(n);
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t stride = n / len;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t k = 0; k < len / 2; ++k) {
                cx w = tw[k * stride];
                if (inverse) w = std::conj(w);
                cx u = a[i + k];
                cx v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
            }
        }
    }
    if (inverse) {
        const double s = 1.0 / double(n);
        for (auto& x : a) x *= s;
    }
}

// 2D FFT over a row-major n x n buffer.
inline void fft2_inplace(std::vector<cx>& a, std::size_t n, bool inverse) {
    if (a.size() != n * n) throw std::invalid_argument("fft2: buffer size mismatch");
    std::vector<cx> col(n);
    for (std::size_t r = 0; r < n; ++r) {
        col.assign(a.begin() + r * n, a.begin() + (r + 1) * n);
        fft_inplace(col, inverse);
        std::copy(col.begin(), col.end(), a.begin() + r * n);
    }
    for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t r = 0; r < n; ++r) col[r] = a[r * n + c];
        fft_inplace(col, inverse);
        for (std::size_t r = 0; r < n; ++r) a[r * n + c] = col[r];
    }
}

} // namespace minstab
