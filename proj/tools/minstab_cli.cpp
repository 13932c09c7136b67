// minstab: stability analysis of polynomial minimal-surface data on the disk.
// Subcommands: validate, destab, index, nmi, schwarz, mesh, energy, report.
// Exit codes: 0 success, 1 usage/IO, 2 validation failure, 3 numerical failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "minstab/json_io.hpp"
#include "minstab/minstab.hpp"
#include "minstab/rng.hpp"

using namespace minstab;

namespace {

struct options {
    std::string config;
    std::string catalog;
    std::string surface_file;
    int k = 1;
    double r = 1.2;
    std::uint64_t seed = 0;
    std::string output;

    int m_min = 1, m_max = 4;
    int gamma_grid = 0;

    int M = 6;
    double tolerance = -1.0;

    std::string mode = "finite";
    int trials = 100;
    std::vector<std::string> field_files;
    std::string construction;
    int m = 1;
    int grid_n = 256;
    double grid_l = 8.0;
    int nr = 48, ntheta = 128;

    double rho = 1.0;
    int mesh_nr = 32, mesh_ntheta = 64;
};

weierstrass_data resolve_surface(const options& opt) {
    if (!opt.surface_file.empty() && !opt.catalog.empty())
        throw CLI::ValidationError("give exactly one surface source: --catalog or --surface");
    if (!opt.surface_file.empty()) {
        std::ifstream is(opt.surface_file);
        if (!is) throw std::runtime_error("cannot open surface file: " + opt.surface_file);
        ordered_json j = ordered_json::parse(is); // parse_error maps to usage
        return surface_from_json(j);
    }
    if (opt.catalog.empty()) throw CLI::ValidationError("need --catalog or --surface");
    return catalog_surface(opt.catalog, opt.k, opt.r);
}

void emit(const options& opt, const ordered_json& j) {
    std::string text = j.dump(2);
    text.push_back('\n');
    if (!opt.output.empty())
        atomic_write_text(opt.output, text);
    else
        std::cout << text;
}

ordered_json cmd_validate(const options& opt) {
    ordered_json rep;
    rep["schema"] = 1;
    auto w = resolve_surface(opt); // throws on invalid data
    rep["valid"] = true;
    rep["surface"] = surface_to_json(w);
    return rep;
}

ordered_json destab_scan(const weierstrass_data& w, const options& opt) {
    if (opt.m_min < 1 || opt.m_max < opt.m_min)
        throw CLI::ValidationError("destab: need 1 <= m-min <= m-max");
    ordered_json rep;
    rep["schema"] = 1;
    rep["surface"] = w.label();
    ordered_json rows = ordered_json::array();
    int first_flagged = 0;
    for (int m = opt.m_min; m <= opt.m_max; ++m) {
        auto res = destab_search_single_m(w, m);
        ordered_json row;
        row["m"] = m;
        row["min_eigenvalue"] = res.min_eigenvalue;
        row["gamma_star"] = {std::real(res.gamma_star), std::imag(res.gamma_star)};
        row["destabilizing"] = res.min_eigenvalue < 0.0;
        double csum_canon = 0.0, csum_printed = 0.0;
        for (int i = 0; i < w.n(); ++i) {
            csum_canon += C_canonical(w.p(i), cx{1.0}, m);
            csum_printed += C_printed(w.p(i), cx{1.0}, m);
        }
        row["C_canonical_sum_gamma1"] = csum_canon;
        row["C_printed_sum_gamma1"] = csum_printed;
        if (opt.gamma_grid > 1) {
            double best = 0.0;
            int best_j = 0;
            for (int j = 0; j < opt.gamma_grid; ++j) {
                double v = F_alpha(w, laurent_tail::monomial(
                                          m, std::polar(1.0, pi * double(j) / double(opt.gamma_grid))));
                if (v < best) {
                    best = v;
                    best_j = j;
                }
            }
            row["gamma_grid_min"] = best;
            row["gamma_grid_angle"] = pi * double(best_j) / double(opt.gamma_grid);
        }
        if (res.min_eigenvalue < 0.0 && first_flagged == 0) first_flagged = m;
        rows.push_back(row);
    }
    rep["per_m"] = rows;
    if (first_flagged > 0) rep["first_destabilizing_m"] = first_flagged;
    rep["unstable"] = first_flagged > 0;
    return rep;
}

ordered_json cmd_index(const weierstrass_data& w, const options& opt) {
    if (opt.tolerance != -1.0 && !(opt.tolerance > 0.0))
        throw CLI::ValidationError("--tolerance must be positive");
    auto rep = gram_index(w, opt.M, opt.tolerance);
    ordered_json j = quadratic_form_to_json(rep);
    j["schema"] = 1;
    j["surface"] = w.label();
    std::fprintf(stderr, "index %d at truncation M=%d (smallest eigenvalue %.6g)\n", rep.index,
                 opt.M, rep.eigenvalues.empty() ? 0.0 : rep.eigenvalues.front());
    return j;
}

std::vector<std::vector<cx>> load_plane_fields(const options& opt, const plane_grid& g, int n) {
    std::vector<std::vector<cx>> fields;
    for (const auto& path : opt.field_files) {
        auto ff = read_field(path);
        if (ff.N != g.n() || std::abs(ff.L - g.box_side()) > 1e-12)
            throw std::runtime_error("field file grid mismatch: " + path);
        fields.push_back(std::move(ff.values));
    }
    if (int(fields.size()) != n)
        throw std::runtime_error("need one field file per coordinate");
    return fields;
}

ordered_json cmd_nmi(const weierstrass_data& w, const options& opt) {
    ordered_json rep;
    rep["schema"] = 1;
    rep["surface"] = w.label();
    rep["mode"] = opt.mode;
    rng r(opt.seed);

    if (opt.mode == "finite") {
        disk_grid dg(opt.nr, opt.ntheta);
        if (!opt.field_files.empty()) {
            plane_grid pg(opt.grid_l, opt.grid_n);
            auto plane_fields = load_plane_fields(opt, pg, w.n());
            std::vector<std::vector<cx>> mus;
            for (auto& f : plane_fields)
                mus.push_back(dg.sample([&](cx z) { return pg.interp(f, z); }));
            auto res = nmi_finite_check(w, mus, dg);
            rep["lhs"] = res.lhs;
            rep["rhs"] = res.rhs;
            rep["holds"] = res.holds;
            rep["tolerance"] = res.tolerance;
            return rep;
        }
        int violations = 0;
        double worst_margin = std::numeric_limits<double>::infinity();
        for (int t = 0; t < opt.trials; ++t) {
            auto mu = random_beltrami_field(dg, r);
            std::vector<std::vector<cx>> mus(std::size_t(w.n()), mu);
            auto res = nmi_finite_check(w, mus, dg);
            if (!res.holds) ++violations;
            worst_margin = std::min(worst_margin, res.rhs + res.tolerance - res.lhs);
        }
        rep["trials"] = opt.trials;
        rep["violations"] = violations;
        rep["holds"] = violations == 0;
        rep["worst_margin"] = worst_margin;
        return rep;
    }

    if (opt.mode != "infinitesimal") throw CLI::ValidationError("--mode must be finite or infinitesimal");
    plane_grid pg(opt.grid_l, opt.grid_n);

    if (opt.construction == "destab") {
        if (opt.catalog != "enneper")
            throw unsupported("--construction destab needs the enneper catalog (interior zeros known)");
        auto tail = laurent_tail::monomial(opt.m);
        auto zeros = enneper_interior_zeros(opt.k, opt.r);
        variation_options vopt;
        vopt.ring_inner = 0.80;
        vopt.ring_outer = 0.95;
        auto pipe = run_destab_pipeline(w, tail, zeros, pg, vopt);
        rep["lhs"] = pipe.lhs;
        rep["rhs"] = pipe.rhs;
        rep["holds"] = pipe.holds;
        rep["equivalence_residual"] = pipe.equivalence_residual;
        ordered_json model;
        model["f_alpha"] = pipe.f_alpha;
        model["dent_cost"] = pipe.dent_cost_model;
        model["predicted_quadratic"] = pipe.predicted_quadratic;
        model["dents"] = pipe.dent_count;
        model["dents_resolved"] = pipe.dents_resolved;
        rep["capacity_model"] = model;
        rep["note"] = "rhs - lhs approaches f_alpha from above as the grid refines (1/log rate)";
        return rep;
    }

    if (!opt.field_files.empty()) {
        auto mudots = load_plane_fields(opt, pg, w.n());
        auto res = nmi_infinitesimal_check(w, pg, mudots);
        rep["lhs"] = res.lhs;
        rep["rhs"] = res.rhs;
        rep["holds"] = res.holds;
        rep["tolerance"] = res.tolerance;
        rep["equivalence_residual"] = res.equivalence_residual;
        return rep;
    }

    int violations = 0;
    double worst_margin = std::numeric_limits<double>::infinity();
    double worst_equiv = 0.0;
    for (int t = 0; t < opt.trials; ++t) {
        auto fam = random_reflect_family(w, r);
        std::vector<std::vector<cx>> mudots;
        for (int i = 0; i < w.n(); ++i) mudots.push_back(fam.sample_mudot(i, pg));
        auto res = nmi_infinitesimal_check(w, pg, mudots);
        if (!res.holds) ++violations;
        worst_margin = std::min(worst_margin, res.rhs + res.tolerance - res.lhs);
        worst_equiv = std::max(worst_equiv, res.equivalence_residual);
    }
    rep["trials"] = opt.trials;
    rep["violations"] = violations;
    rep["holds"] = violations == 0;
    rep["worst_margin"] = worst_margin;
    rep["worst_equivalence_residual"] = worst_equiv;
    return rep;
}

ordered_json cmd_schwarz(const weierstrass_data& w) {
    auto rep = schwarz_verdict(w);
    ordered_json j = schwarz_to_json(rep);
    j["schema"] = 1;
    j["surface"] = w.label();
    std::fprintf(stderr, "lambda1 = %.8f -> %s\n", rep.lambda1,
                 rep.inconclusive ? "inconclusive" : (rep.unstable ? "unstable" : "no instability"));
    return j;
}

ordered_json cmd_energy(const weierstrass_data& w, const options& opt) {
    auto ea = energy_and_area(w, opt.rho);
    ordered_json j;
    j["schema"] = 1;
    j["surface"] = w.label();
    j["rho"] = opt.rho;
    j["energy"] = ea.energy;
    j["area"] = ea.area;
    j["area_quadrature"] = ea.area_quadrature;
    return j;
}

ordered_json cmd_mesh(const weierstrass_data& w, const options& opt) {
    auto s = sample_surface(w, opt.mesh_nr, opt.mesh_ntheta);
    std::string obj = obj_export(w, s);
    std::string path = opt.output.empty() ? "surface.obj" : opt.output;
    atomic_write_text(path, obj);
    ordered_json j;
    j["schema"] = 1;
    j["surface"] = w.label();
    j["vertices"] = s.points.size();
    j["triangles"] = s.triangles.size();
    j["output"] = path;
    std::cout << j.dump(2) << "\n";
    return j;
}

ordered_json cmd_report(const weierstrass_data& w, options opt) {
    ordered_json rep;
    rep["schema"] = 1;
    rep["surface"] = surface_to_json(w);
    rep["seed"] = opt.seed;
    rep["destab"] = destab_scan(w, opt);
    rep["index"] = quadratic_form_to_json(gram_index(w, opt.M, opt.tolerance));
    if (w.n() == 3) {
        try {
            rep["schwarz"] = schwarz_to_json(schwarz_verdict(w));
        } catch (const unsupported& e) {
            rep["schwarz"] = ordered_json{{"unsupported", e.what()}};
        }
    }
    auto ea = energy_and_area(w, 1.0);
    rep["energy"] = ordered_json{
        {"energy", ea.energy}, {"area", ea.area}, {"area_quadrature", ea.area_quadrature}};

    options nmi_opt = opt;
    nmi_opt.mode = "finite";
    nmi_opt.trials = 50;
    auto fin = cmd_nmi(w, nmi_opt);
    fin.erase("schema");
    rep["nmi_finite"] = fin;
    nmi_opt.mode = "infinitesimal";
    nmi_opt.trials = 5;
    auto inf = cmd_nmi(w, nmi_opt);
    inf.erase("schema");
    rep["nmi_infinitesimal"] = inf;

    bool unstable = rep["destab"]["unstable"].get<bool>() || rep["index"]["index"].get<int>() > 0;
    rep["unstable"] = unstable;
    return rep;
}

// defaults from --config file; explicit flags then override during parse
void preload_config(int argc, char** argv, options& opt) {
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--config") {
            std::ifstream is(argv[i + 1]);
            if (!is) throw std::runtime_error(std::string("cannot open config: ") + argv[i + 1]);
            ordered_json j = ordered_json::parse(is);
            opt.catalog = j.value("catalog", opt.catalog);
            opt.surface_file = j.value("surface", opt.surface_file);
            opt.k = j.value("k", opt.k);
            opt.r = j.value("r", opt.r);
            opt.seed = j.value("seed", opt.seed);
            opt.output = j.value("output", opt.output);
            opt.m_min = j.value("m_min", opt.m_min);
            opt.m_max = j.value("m_max", opt.m_max);
            opt.M = j.value("M", opt.M);
            opt.tolerance = j.value("tolerance", opt.tolerance);
            opt.mode = j.value("mode", opt.mode);
            opt.trials = j.value("trials", opt.trials);
            opt.grid_n = j.value("grid_n", opt.grid_n);
            opt.grid_l = j.value("grid_l", opt.grid_l);
            opt.nr = j.value("nr", opt.nr);
            opt.ntheta = j.value("ntheta", opt.ntheta);
            opt.rho = j.value("rho", opt.rho);
            opt.mesh_nr = j.value("mesh_nr", opt.mesh_nr);
            opt.mesh_ntheta = j.value("mesh_ntheta", opt.mesh_ntheta);
        }
    }
}

void add_surface_opts(CLI::App* cmd, options& opt) {
    cmd->add_option("--config", opt.config, "JSON run configuration (flags override)");
    cmd->add_option("--catalog", opt.catalog, "built-in surface: enneper | pair2 | pair3");
    cmd->add_option("--surface", opt.surface_file, "JSON surface descriptor file");
    cmd->add_option("--k", opt.k, "enneper exponent");
    cmd->add_option("--r", opt.r, "enneper disk radius");
    cmd->add_option("--seed", opt.seed, "seed for random trials");
    cmd->add_option("-o,--output", opt.output, "write the JSON report here (atomic)");
}

} // namespace

int main(int argc, char** argv) {
    options opt;
    try {
        preload_config(argc, argv, opt);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }

    CLI::App app{"stability analysis for polynomial minimal-surface data on the unit disk"};
    app.require_subcommand(1);

    auto* v = app.add_subcommand("validate", "check minimality and boundary admissibility");
    add_surface_opts(v, opt);

    auto* d = app.add_subcommand("destab", "search monomial tails for destabilizing variations");
    add_surface_opts(d, opt);
    d->add_option("--m-min", opt.m_min, "lowest tail order");
    d->add_option("--m-max", opt.m_max, "highest tail order");
    d->add_option("--gamma-grid", opt.gamma_grid, "optional unit-circle gamma scan resolution");

    auto* ix = app.add_subcommand("index", "eigenvalues and negativity index of the variation form");
    add_surface_opts(ix, opt);
    ix->add_option("--M", opt.M, "tail truncation order");
    ix->add_option("--tolerance", opt.tolerance, "negativity tolerance (default 1e-9 * spectral radius)");

    auto* nm = app.add_subcommand("nmi", "finite or infinitesimal inequality checks");
    add_surface_opts(nm, opt);
    nm->add_option("--mode", opt.mode, "finite | infinitesimal")->required();
    nm->add_option("--trials", opt.trials, "number of seeded random trials");
    nm->add_option("--field", opt.field_files, "grid field file, one per coordinate");
    nm->add_option("--construction", opt.construction, "destab: tail-driven interior extensions");
    nm->add_option("--m", opt.m, "tail order for --construction destab");
    nm->add_option("--grid-n", opt.grid_n, "plane grid resolution (power of two)");
    nm->add_option("--grid-l", opt.grid_l, "plane grid box side");
    nm->add_option("--nr", opt.nr, "radial quadrature nodes (finite mode)");
    nm->add_option("--ntheta", opt.ntheta, "angular quadrature nodes (finite mode)");

    auto* sc = app.add_subcommand("schwarz", "spherical-cap eigenvalue instability certificate");
    add_surface_opts(sc, opt);

    auto* me = app.add_subcommand("mesh", "export the surface as an OBJ mesh");
    add_surface_opts(me, opt);
    me->add_option("--nr", opt.mesh_nr, "radial rings");
    me->add_option("--ntheta", opt.mesh_ntheta, "angular sectors");

    auto* en = app.add_subcommand("energy", "energy and area of the surface over a subdisk");
    add_surface_opts(en, opt);
    en->add_option("--rho", opt.rho, "subdisk radius in (0, 1]");

    auto* rp = app.add_subcommand("report", "aggregate analysis document");
    add_surface_opts(rp, opt);
    rp->add_option("--M", opt.M, "tail truncation order");
    rp->add_option("--m-min", opt.m_min, "lowest tail order");
    rp->add_option("--m-max", opt.m_max, "highest tail order");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp") {
            app.exit(e);
            return 0;
        }
        app.exit(e);
        return 1;
    }

    try {
        if (v->parsed()) {
            emit(opt, cmd_validate(opt));
        } else if (d->parsed()) {
            emit(opt, destab_scan(resolve_surface(opt), opt));
        } else if (ix->parsed()) {
            emit(opt, cmd_index(resolve_surface(opt), opt));
        } else if (nm->parsed()) {
            emit(opt, cmd_nmi(resolve_surface(opt), opt));
        } else if (sc->parsed()) {
            emit(opt, cmd_schwarz(resolve_surface(opt)));
        } else if (me->parsed()) {
            cmd_mesh(resolve_surface(opt), opt);
        } else if (en->parsed()) {
            emit(opt, cmd_energy(resolve_surface(opt), opt));
        } else if (rp->parsed()) {
            emit(opt, cmd_report(resolve_surface(opt), opt));
        }
    } catch (const minimality_violation& e) {
        ordered_json j{{"schema", 1}, {"valid", false}, {"violation", "minimality"},
                       {"coefficient_index", e.coefficient_index}, {"residual", e.residual},
                       {"message", e.what()}};
        emit(opt, j);
        return 2;
    } catch (const admissibility_violation& e) {
        ordered_json j{{"schema", 1}, {"valid", false}, {"violation", "admissibility"},
                       {"poly_index", e.poly_index}, {"certified_min", e.certified_min},
                       {"message", e.what()}};
        emit(opt, j);
        return 2;
    } catch (const not_quasiconformal& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const unsupported& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const series_divergence_risk& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const numerical_failure& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
