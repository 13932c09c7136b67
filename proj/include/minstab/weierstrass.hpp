#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "minstab/errors.hpp"
#include "minstab/polynomial.hpp"
#include "minstab/quadrature.hpp"

namespace minstab {

// Certified boundary nonvanishing threshold; below this a coordinate is
// declared inadmissible.
inline constexpr double boundary_zero_tolerance = 1e-9;

struct validation_issue {
    enum class kind { minimality, admissibility, empty } what = kind::empty;
    int index = -1;      // offending polynomial (admissibility) or coefficient power (minimality)
    double value = 0.0;  // residual or certified minimum
    std::string message;
};

// Validated Weierstrass-Enneper data: n >= 2 polynomials with sum p_i^2 = 0
// and each p_i certifiably nonvanishing on the unit circle. Immutable after
// construction.
class weierstrass_data {
public:
    static std::optional<validation_issue> check(const std::vector<polynomial>& polys) {
        if (polys.size() < 2)
            return validation_issue{validation_issue::kind::empty, -1, 0.0,
                                    "need at least two coordinate polynomials"};
        bool all_zero = true;
        for (const auto& p : polys) all_zero = all_zero && p.is_zero();
        if (all_zero)
            return validation_issue{validation_issue::kind::empty, -1, 0.0,
                                    "all coordinate polynomials are zero"};

        // sum of squares, with a per-power roundoff scale so large
        // coefficients (e.g. rescaled high-degree data) are judged fairly
        polynomial sum;
        for (const auto& p : polys) sum = sum + p * p;
        int worst_j = -1;
        double worst_ratio = 0.0, worst_res = 0.0;
        for (int j = 0; j <= sum.degree(); ++j) {
            double res = std::abs(sum.coeff(j));
            if (res == 0.0) continue;
            double scale = 0.0;
            for (const auto& p : polys)
                for (int a = 0; a <= j; ++a) scale += std::abs(p.coeff(a)) * std::abs(p.coeff(j - a));
            double tol = 1e-12 * std::max(1.0, scale);
            if (res / tol > worst_ratio) {
                worst_ratio = res / tol;
                worst_res = res;
                worst_j = j;
            }
        }
        if (worst_ratio > 1.0) {
            std::ostringstream os;
            os << "sum of squared polynomials is not zero: coefficient of z^" << worst_j
               << " has residual " << worst_res;
            return validation_issue{validation_issue::kind::minimality, worst_j, worst_res, os.str()};
        }

        for (std::size_t i = 0; i < polys.size(); ++i) {
            if (polys[i].is_zero()) continue; // zero coordinate contributes nothing
            // escalate the sampling until the certificate resolves; data close
            // to a boundary zero needs slack below the sampled minimum
            polynomial::circle_min cm{0.0, 0.0, 0.0};
            for (int samples = std::max(2048, 8 * (polys[i].degree() + 1)); samples <= 131072;
                 samples *= 4) {
                cm = polys[i].min_modulus_on_circle(samples);
                if (cm.certified_lower > boundary_zero_tolerance) break;
            }
            if (cm.certified_lower <= boundary_zero_tolerance) {
                std::ostringstream os;
                os << "coordinate " << i << " vanishes (or cannot be certified nonvanishing) on the unit circle; "
                   << "certified minimum " << cm.certified_lower;
                return validation_issue{validation_issue::kind::admissibility, int(i), cm.certified_lower, os.str()};
            }
        }
        return std::nullopt;
    }

    static weierstrass_data validate(std::vector<polynomial> polys, std::string label = "") {
        if (auto issue = check(polys)) {
            switch (issue->what) {
            case validation_issue::kind::minimality:
                throw minimality_violation(issue->message, issue->index, issue->value);
            case validation_issue::kind::admissibility:
                throw admissibility_violation(issue->message, issue->index, issue->value);
            default:
                throw std::invalid_argument(issue->message);
            }
        }
        return weierstrass_data(std::move(polys), std::move(label));
    }

    int n() const { return int(p_.size()); }
    const polynomial& p(int i) const { return p_.at(std::size_t(i)); }
    const std::vector<polynomial>& polys() const { return p_; }
    const polynomial& antiderivative(int i) const { return A_.at(std::size_t(i)); }
    const std::string& label() const { return label_; }

    // h_i(z) = 2 Re A_i(z), so that dh_i/dz = p_i exactly
    std::vector<double> surface_eval(cx z) const {
        std::vector<double> out(p_.size());
        for (std::size_t i = 0; i < p_.size(); ++i) out[i] = 2.0 * std::real(A_[i].eval(z));
        return out;
    }

private:
    weierstrass_data(std::vector<polynomial> polys, std::string label)
        : p_(std::move(polys)), label_(std::move(label)) {
        A_.reserve(p_.size());
        for (const auto& p : p_) A_.push_back(p.antiderivative());
    }

    std::vector<polynomial> p_;
    std::vector<polynomial> A_;
    std::string label_;
};

// Enneper-type data (1/2(1-z^{2k}), i/2(1+z^{2k}), z^k) pulled back from the
// disk of radius r. k = 1, r = 1 is the classical surface, inadmissible here
// because p_1 vanishes at +-1.
inline weierstrass_data enneper_family(int k, double r) {
    if (k < 1) throw std::domain_error("enneper_family: k must be >= 1");
    if (!(r > 0.0)) throw std::domain_error("enneper_family: r must be positive");
    polynomial one{cx{1.0}};
    polynomial z2k = polynomial::monomial(2 * k);
    polynomial p1 = (one - z2k).scaled(0.5);
    polynomial p2 = (one + z2k).scaled(cx{0.0, 0.5});
    polynomial p3 = polynomial::monomial(k);
    std::ostringstream label;
    label << "enneper k=" << k << " r=" << r;
    return weierstrass_data::validate(
        {p1.reparam_scale(r), p2.reparam_scale(r), p3.reparam_scale(r)}, label.str());
}

// (p, i p): valid for any boundary-nonvanishing p since p^2 + (ip)^2 = 0.
inline weierstrass_data planar_pair(const polynomial& p, std::string label = "pair") {
    return weierstrass_data::validate({p, p.scaled(cx{0.0, 1.0})}, std::move(label));
}

// Built-in surfaces: "enneper" takes k and r; the pair entries give n = 2
// data for the positivity checks.
inline weierstrass_data catalog_surface(const std::string& name, int k = 1, double r = 1.2) {
    if (name == "enneper") return enneper_family(k, r);
    if (name == "pair2") return planar_pair(polynomial{cx{3.0}, cx{0.0}, cx{1.0}}, "pair2");
    if (name == "pair3")
        return planar_pair(polynomial{cx{4.0}, cx{-1.0}, cx{0.0}, cx{1.0}}, "pair3");
    throw std::invalid_argument("unknown catalog surface: " + name);
}

// closed form: int_{D_rho} |p|^2 dA = pi sum_j |a_j|^2 rho^{2j+2}/(j+1)
inline double poly_sq_integral_disk(const polynomial& p, double rho) {
    double acc = 0.0;
    double rp = rho * rho;
    for (int j = 0; j <= p.degree(); ++j) {
        acc += std::norm(p.coeff(j)) * rp / double(j + 1);
        rp *= rho * rho;
    }
    return pi * acc;
}

struct energy_area_result {
    double energy;          // closed form, = area for weakly conformal maps
    double area;            // equal to energy by minimality
    double area_quadrature; // disk-quadrature cross-check of the same integral
};

// Energy of h|_{D_rho} with density 2 sum_i |p_i|^2; area coincides because the
// map is weakly conformal. The quadrature value integrates the conformal area
// density directly.
inline energy_area_result energy_and_area(const weierstrass_data& w, double rho = 1.0,
                                          int nr = 64, int ntheta = 128) {
    if (!(rho > 0.0) || rho > 1.0) throw std::domain_error("energy_and_area: need 0 < rho <= 1");
    double e = 0.0;
    for (int i = 0; i < w.n(); ++i) e += 2.0 * poly_sq_integral_disk(w.p(i), rho);
    disk_grid g(nr, ntheta, rho);
    double q = 0.0;
    for (std::size_t idx = 0; idx < g.size(); ++idx) {
        cx z = g.node(idx);
        double dens = 0.0;
        for (int i = 0; i < w.n(); ++i) dens += std::norm(w.p(i).eval(z));
        q += g.weight(idx) * 2.0 * dens;
    }
    return {e, e, q};
}

struct surface_sample {
    int nr = 0;
    int ntheta = 0;
    std::vector<std::vector<double>> points;   // center first, then ring-major
    std::vector<double> jacobian;              // conformal density 2 sum_i |p_i|^2 per vertex
    std::vector<std::array<int, 3>> triangles; // indices into points
};

// Polar triangulation of h(D): 1 + nr*ntheta vertices, fan at the center,
// two triangles per quad between rings.
inline surface_sample sample_surface(const weierstrass_data& w, int nr, int ntheta) {
    if (nr < 1 || ntheta < 3) throw std::domain_error("sample_surface: need nr >= 1, ntheta >= 3");
    surface_sample s;
    s.nr = nr;
    s.ntheta = ntheta;
    auto push = [&](cx z) {
        s.points.push_back(w.surface_eval(z));
        double dens = 0.0;
        for (int i = 0; i < w.n(); ++i) dens += std::norm(w.p(i).eval(z));
        s.jacobian.push_back(2.0 * dens);
    };
    push(cx{0.0});
    for (int i = 1; i <= nr; ++i) {
        double r = double(i) / double(nr);
        for (int j = 0; j < ntheta; ++j) push(std::polar(r, 2.0 * pi * double(j) / double(ntheta)));
    }
    auto vid = [&](int ring, int j) { return 1 + (ring - 1) * ntheta + (j % ntheta); };
    for (int j = 0; j < ntheta; ++j) s.triangles.push_back({0, vid(1, j), vid(1, j + 1)});
    for (int ring = 1; ring < nr; ++ring) {
        for (int j = 0; j < ntheta; ++j) {
            int a = vid(ring, j), b = vid(ring, j + 1), c = vid(ring + 1, j), d = vid(ring + 1, j + 1);
            s.triangles.push_back({a, c, d});
            s.triangles.push_back({a, d, b});
        }
    }
    return s;
}

// ASCII OBJ. For n > 3 the first three coordinates are written and a warning
// comment recorded in the header; n = 2 embeds with zero third coordinate.
inline std::string obj_export(const weierstrass_data& w, const surface_sample& s) {
    std::ostringstream os;
    os.setf(std::ios::fmtflags(0), std::ios::floatfield);
    os.precision(17);
    os << "# " << (w.label().empty() ? std::string("surface") : w.label()) << "\n";
    if (w.n() > 3) os << "# warning: ambient dimension " << w.n() << ", writing first three coordinates\n";
    for (const auto& pt : s.points) {
        double x = pt.size() > 0 ? pt[0] : 0.0;
        double y = pt.size() > 1 ? pt[1] : 0.0;
        double z = pt.size() > 2 ? pt[2] : 0.0;
        os << "v " << x << " " << y << " " << z << "\n";
    }
    for (const auto& t : s.triangles)
        os << "f " << t[0] + 1 << " " << t[1] + 1 << " " << t[2] + 1 << "\n";
    return os.str();
}

} // namespace minstab
