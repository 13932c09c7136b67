#pragma once

#include <complex>
#include <cstdint>

namespace minstab {

// splitmix64-based generator. Self-contained so that seeded runs produce the
// same stream on every platform (std:: distributions are not portable).
class rng {
public:
    explicit rng(std::uint64_t seed = 0) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    std::complex<double> complex_in_square(double half_side = 1.0) {
        double re = uniform(-half_side, half_side);
        double im = uniform(-half_side, half_side);
        return {re, im};
    }

    // uniform in the closed disk of given radius
    std::complex<double> complex_in_disk(double radius = 1.0) {
        for (;;) {
            auto z = complex_in_square(1.0);
            if (std::norm(z) <= 1.0) return z * radius;
        }
    }

private:
    std::uint64_t state_;
};

} // namespace minstab
