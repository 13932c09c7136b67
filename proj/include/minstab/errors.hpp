#pragma once

#include <stdexcept>
#include <string>

namespace minstab {

// Thrown when sum of squared coordinate polynomials is not identically zero.
struct minimality_violation : std::runtime_error {
    int coefficient_index;
    double residual;
    minimality_violation(const std::string& msg, int idx, double res)
        : std::runtime_error(msg), coefficient_index(idx), residual(res) {}
};

// Thrown when some coordinate polynomial (certifiably) vanishes on the unit circle.
struct admissibility_violation : std::runtime_error {
    int poly_index;
    double certified_min;
    admissibility_violation(const std::string& msg, int idx, double cmin)
        : std::runtime_error(msg), poly_index(idx), certified_min(cmin) {}
};

// Beltrami field with sup-norm >= 1.
struct not_quasiconformal : std::runtime_error {
    double sup_norm;
    not_quasiconformal(const std::string& msg, double s) : std::runtime_error(msg), sup_norm(s) {}
};

// Neumann series asked to run outside its contraction margin.
struct series_divergence_risk : std::runtime_error {
    double sup_norm;
    series_divergence_risk(const std::string& msg, double s) : std::runtime_error(msg), sup_norm(s) {}
};

// Operation not applicable to the given data (e.g. Gauss map for n != 3).
struct unsupported : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Solver failed to converge within its budget.
struct numerical_failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace minstab
