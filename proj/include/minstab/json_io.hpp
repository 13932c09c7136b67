#pragma once

#include <bit>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "minstab/plane_grid.hpp"
#include "minstab/polynomial.hpp"
#include "minstab/schwarz.hpp"
#include "minstab/spectral.hpp"
#include "minstab/weierstrass.hpp"

namespace minstab {

using ordered_json = nlohmann::ordered_json;

// Polynomials travel as arrays of [re, im] pairs, lowest degree first.
inline ordered_json poly_to_json(const polynomial& p) {
    ordered_json arr = ordered_json::array();
    for (int j = 0; j <= p.degree(); ++j)
        arr.push_back({std::real(p.coeff(j)), std::imag(p.coeff(j))});
    return arr;
}

inline polynomial poly_from_json(const ordered_json& arr) {
    if (!arr.is_array()) throw std::invalid_argument("polynomial: expected an array of [re, im] pairs");
    std::vector<cx> c;
    for (const auto& e : arr) {
        if (!e.is_array() || e.size() != 2)
            throw std::invalid_argument("polynomial: each coefficient must be [re, im]");
        c.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
    return polynomial(std::move(c));
}

inline ordered_json surface_to_json(const weierstrass_data& w, double r = 1.0) {
    ordered_json j;
    j["label"] = w.label();
    j["n"] = w.n();
    ordered_json polys = ordered_json::array();
    for (const auto& p : w.polys()) polys.push_back(poly_to_json(p));
    j["polys"] = polys;
    j["r"] = r;
    return j;
}

// descriptor {label, n, polys, r}; r != 1 rescales the data to the unit disk
inline weierstrass_data surface_from_json(const ordered_json& j) {
    if (!j.contains("polys")) throw std::invalid_argument("surface: missing polys");
    std::vector<polynomial> polys;
    for (const auto& pj : j["polys"]) polys.push_back(poly_from_json(pj));
    if (j.contains("n") && j["n"].get<std::size_t>() != polys.size())
        throw std::invalid_argument("surface: n does not match the number of polynomials");
    double r = j.value("r", 1.0);
    if (r != 1.0)
        for (auto& p : polys) p = p.reparam_scale(r);
    std::string label = j.value("label", std::string{});
    return weierstrass_data::validate(std::move(polys), std::move(label));
}

inline ordered_json quadratic_form_to_json(const quadratic_form_report& rep) {
    ordered_json j;
    j["basis"] = rep.basis_labels;
    ordered_json gram = ordered_json::array();
    for (int a = 0; a < rep.gram.n; ++a)
        for (int b = 0; b < rep.gram.n; ++b) gram.push_back(rep.gram.at(a, b));
    j["gram"] = gram;
    j["eigenvalues"] = rep.eigenvalues;
    j["index"] = rep.index;
    j["tolerance"] = rep.tolerance;
    return j;
}

inline ordered_json schwarz_to_json(const schwarz_report& rep) {
    ordered_json j;
    j["rho"] = rep.rho;
    j["theta0"] = rep.theta0;
    j["lambda1"] = rep.lambda1;
    if (rep.inconclusive)
        j["inconclusive"] = true;
    else
        j["unstable"] = rep.unstable;
    j["enclosure"] = rep.enclosure;
    return j;
}

// Grid field file: one line of JSON header {"L":..,"N":..,"support":".."}
// followed by N*N little-endian float64 pairs (re, im), row-major.
static_assert(std::endian::native == std::endian::little,
              "field files are little-endian; byte-swap before porting");

inline void write_field(const std::string& path, const plane_grid& g, const std::vector<cx>& f,
                        const std::string& support = "disk") {
    if (f.size() != g.size()) throw std::invalid_argument("write_field: size mismatch");
    ordered_json hdr;
    hdr["L"] = g.box_side();
    hdr["N"] = g.n();
    hdr["support"] = support;
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("write_field: cannot open " + path);
    os << hdr.dump() << "\n";
    std::vector<double> buf;
    buf.reserve(2 * f.size());
    for (const auto& v : f) {
        buf.push_back(std::real(v));
        buf.push_back(std::imag(v));
    }
    os.write(reinterpret_cast<const char*>(buf.data()),
             std::streamsize(buf.size() * sizeof(double)));
    if (!os) throw std::runtime_error("write_field: short write to " + path);
}

struct field_file {
    double L = 0.0;
    int N = 0;
    std::string support;
    std::vector<cx> values;
};

inline field_file read_field(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("read_field: cannot open " + path);
    std::string header;
    if (!std::getline(is, header)) throw std::runtime_error("read_field: missing header");
    ordered_json hdr = ordered_json::parse(header);
    field_file ff;
    ff.L = hdr.at("L").get<double>();
    ff.N = hdr.at("N").get<int>();
    ff.support = hdr.value("support", std::string{});
    std::size_t count = std::size_t(ff.N) * std::size_t(ff.N);
    std::vector<double> buf(2 * count);
    is.read(reinterpret_cast<char*>(buf.data()), std::streamsize(buf.size() * sizeof(double)));
    if (std::size_t(is.gcount()) != buf.size() * sizeof(double))
        throw std::runtime_error("read_field: truncated payload in " + path);
    ff.values.reserve(count);
    for (std::size_t i = 0; i < count; ++i) ff.values.emplace_back(buf[2 * i], buf[2 * i + 1]);
    return ff;
}

// temp-file-then-rename so concurrent readers never see partial output
inline void atomic_write_text(const std::string& path, const std::string& text) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary);
        if (!os) throw std::runtime_error("cannot open " + tmp);
        os << text;
        if (!os) throw std::runtime_error("short write to " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("cannot rename " + tmp + " to " + path);
}

} // namespace minstab
