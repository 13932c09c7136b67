#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "minstab/json_io.hpp"

#ifndef MINSTAB_CLI_PATH
#error "MINSTAB_CLI_PATH must be defined"
#endif

namespace {

using nlohmann::json;

struct run_result {
    int exit_code;
    std::string out;
};

run_result run(const std::string& args) {
    std::string out_file = "cli_stdout.tmp";
    std::string cmd = std::string(MINSTAB_CLI_PATH) + " " + args + " > " + out_file + " 2> cli_stderr.tmp";
    int rc = std::system(cmd.c_str());
    run_result r;
    r.exit_code = WEXITSTATUS(rc);
    std::ifstream is(out_file, std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    r.out = ss.str();
    return r;
}

std::string slurp(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("validate: catalog surfaces and exit codes") {
    auto ok = run("validate --catalog enneper --k 1 --r 1.2");
    CHECK(ok.exit_code == 0);
    auto j = json::parse(ok.out);
    CHECK(j["valid"] == true);
    CHECK(j["surface"]["n"] == 3);

    auto bad = run("validate --catalog enneper --k 1 --r 1.0");
    CHECK(bad.exit_code == 2);
    auto jb = json::parse(bad.out);
    CHECK(jb["valid"] == false);
    CHECK(jb["violation"] == "admissibility");

    auto usage = run("validate");
    CHECK(usage.exit_code == 1);

    auto unknown = run("validate --catalog doughnut");
    CHECK(unknown.exit_code == 1);
}

TEST_CASE("validate: surface files, malformed and minimality-breaking") {
    {
        std::ofstream os("surf_ok.json");
        os << R"({"label":"pair from file","n":2,"polys":[[[3,0],[0,0],[1,0]],[[0,3],[0,0],[0,1]]],"r":1.0})";
    }
    CHECK(run("validate --surface surf_ok.json").exit_code == 0);

    {
        std::ofstream os("surf_broken.json");
        os << R"({"label":"broken","polys":[[[1,0]],[[0,1]],[[0.5,0]]]})";
    }
    auto broken = run("validate --surface surf_broken.json");
    CHECK(broken.exit_code == 2);
    CHECK(json::parse(broken.out)["violation"] == "minimality");

    {
        std::ofstream os("surf_malformed.json");
        os << "{ not json";
    }
    CHECK(run("validate --surface surf_malformed.json").exit_code == 1);
    CHECK(run("validate --surface no_such_file.json").exit_code == 1);
}

TEST_CASE("destab scan flags the stretched surface at m = 1") {
    auto res = run("destab --catalog enneper --r 1.2 --m-min 1 --m-max 4");
    CHECK(res.exit_code == 0);
    auto j = json::parse(res.out);
    CHECK(j["unstable"] == true);
    CHECK(j["first_destabilizing_m"] == 1);
    double v = j["per_m"][0]["C_canonical_sum_gamma1"].get<double>();
    CHECK(v == doctest::Approx(3.14159265358979 * 0.72 * (1.0 - 1.44)).epsilon(1e-10));

    auto stable = run("destab --catalog enneper --r 0.8 --m-min 1 --m-max 4");
    auto js = json::parse(stable.out);
    CHECK(js["unstable"] == false);
    CHECK_FALSE(js.contains("first_destabilizing_m"));

    // empty tail range is a usage error
    CHECK(run("destab --catalog enneper --r 1.2 --m-min 3 --m-max 1").exit_code == 1);

    auto scanned = run("destab --catalog enneper --r 1.2 --m-min 1 --m-max 2 --gamma-grid 16");
    CHECK(scanned.exit_code == 0);
    auto jg = json::parse(scanned.out);
    CHECK(jg["per_m"][0]["gamma_grid_min"].get<double>() < 0.0);
}

TEST_CASE("index reports") {
    auto res = run("index --catalog enneper --r 1.2 --M 6");
    CHECK(res.exit_code == 0);
    auto j = json::parse(res.out);
    CHECK(j["index"].get<int>() >= 1);
    CHECK(j["eigenvalues"].size() == 12);
    CHECK(j["gram"].size() == 144);

    auto pair = run("index --catalog pair2 --M 8");
    CHECK(json::parse(pair.out)["index"] == 0);

    CHECK(run("index --catalog pair2 --M 8 --tolerance -1e-3").exit_code == 1);
    CHECK(run("index --catalog pair2 --M 200").exit_code == 1);
    CHECK(run("index --catalog pair2 --surface surf_ok.json").exit_code == 1); // two sources
}

TEST_CASE("nmi subcommand, both modes") {
    auto fin = run("nmi --mode finite --catalog pair2 --trials 25 --seed 3");
    CHECK(fin.exit_code == 0);
    auto j = json::parse(fin.out);
    CHECK(j["holds"] == true);
    CHECK(j["violations"] == 0);

    auto inf = run("nmi --mode infinitesimal --catalog pair2 --trials 3 --seed 5 --grid-n 128");
    CHECK(inf.exit_code == 0);
    auto ji = json::parse(inf.out);
    CHECK(ji["holds"] == true);

    auto destab = run("nmi --mode infinitesimal --catalog enneper --r 1.2 --construction destab --grid-n 256");
    CHECK(destab.exit_code == 0);
    auto jd = json::parse(destab.out);
    CHECK(jd["capacity_model"]["f_alpha"].get<double>() < 0.0);
    CHECK(jd.contains("lhs"));
    CHECK(jd.contains("rhs"));

    CHECK(run("nmi --catalog pair2").exit_code == 1); // --mode required
}

TEST_CASE("schwarz subcommand") {
    auto res = run("schwarz --catalog enneper --r 1.2");
    CHECK(res.exit_code == 0);
    auto j = json::parse(res.out);
    CHECK(j["unstable"] == true);
    CHECK(j["lambda1"].get<double>() < 2.0);

    auto pair = run("schwarz --catalog pair2");
    CHECK(pair.exit_code == 2); // gauss map needs n = 3
}

TEST_CASE("mesh export") {
    auto res = run("mesh --catalog enneper --r 1.2 --nr 8 --ntheta 12 -o mesh_out.obj");
    CHECK(res.exit_code == 0);
    auto j = json::parse(res.out);
    CHECK(j["vertices"] == 8 * 12 + 1);
    std::string obj = slurp("mesh_out.obj");
    int vcount = 0;
    std::istringstream is(obj);
    std::string line;
    while (std::getline(is, line))
        if (line.rfind("v ", 0) == 0) ++vcount;
    CHECK(vcount == 97);
}

TEST_CASE("energy subcommand") {
    auto res = run("energy --catalog enneper --r 1.2 --rho 0.5");
    CHECK(res.exit_code == 0);
    auto j = json::parse(res.out);
    CHECK(j["energy"].get<double>() == doctest::Approx(j["area"].get<double>()).epsilon(1e-14));
    CHECK(j["energy"].get<double>() ==
          doctest::Approx(j["area_quadrature"].get<double>()).epsilon(1e-8));
}

TEST_CASE("config file provides defaults and flags override") {
    {
        std::ofstream os("run_config.json");
        os << R"({"catalog":"enneper","k":1,"r":1.2,"M":4})";
    }
    auto res = run("index --config run_config.json");
    CHECK(res.exit_code == 0);
    CHECK(json::parse(res.out)["eigenvalues"].size() == 8);

    auto overridden = run("index --config run_config.json --M 6");
    CHECK(json::parse(overridden.out)["eigenvalues"].size() == 12);
}

TEST_CASE("report is deterministic for a fixed seed") {
    auto a = run("report --catalog enneper --r 1.2 --seed 42 -o report_a.json");
    auto b = run("report --catalog enneper --r 1.2 --seed 42 -o report_b.json");
    CHECK(a.exit_code == 0);
    CHECK(b.exit_code == 0);
    std::string ta = slurp("report_a.json"), tb = slurp("report_b.json");
    CHECK(ta.size() > 0);
    CHECK(ta == tb);

    auto j = json::parse(ta);
    CHECK(j["schema"] == 1);
    CHECK(j["unstable"] == true);
    CHECK(j["destab"]["unstable"] == true);
    CHECK(j["index"]["index"].get<int>() >= 1);
    CHECK(j["schwarz"]["unstable"] == true);
    CHECK(j["nmi_finite"]["holds"] == true);

    auto c = run("report --catalog enneper --r 1.2 --seed 43 -o report_c.json");
    CHECK(c.exit_code == 0);
    CHECK(slurp("report_c.json") != ta); // different seed, different trials
}

TEST_CASE("report on pair data skips the gauss-map section") {
    auto res = run("report --catalog pair2 --seed 1 -o report_pair.json");
    CHECK(res.exit_code == 0);
    auto j = json::parse(slurp("report_pair.json"));
    CHECK_FALSE(j.contains("schwarz"));
    CHECK(j["unstable"] == false);
    CHECK(j["index"]["index"] == 0);
    CHECK(j["nmi_finite"]["holds"] == true);
    CHECK(j["nmi_infinitesimal"]["holds"] == true);
}

TEST_CASE("field files round-trip through the nmi checks") {
    using namespace minstab;
    plane_grid g(8.0, 128);
    auto mu = g.sample([](cx z) {
        double s = std::norm(z / 0.7);
        if (s >= 1.0) return cx{};
        double t = 1.0 - s;
        return cx{0.3, 0.1} * t * t * t;
    });
    write_field("field_a.bin", g, mu, "disk");
    write_field("field_b.bin", g, mu, "disk");

    auto ff = read_field("field_a.bin");
    CHECK(ff.N == 128);
    CHECK(ff.L == 8.0);
    CHECK(ff.support == "disk");
    double worst = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) worst = std::max(worst, std::abs(ff.values[i] - mu[i]));
    CHECK(worst == 0.0); // bit-exact payload

    auto inf = run("nmi --mode infinitesimal --catalog pair2 --grid-n 128 "
                   "--field field_a.bin --field field_b.bin");
    CHECK(inf.exit_code == 0);
    auto j = json::parse(inf.out);
    CHECK(j["holds"] == true);
    CHECK(j["equivalence_residual"].get<double>() < 1e-10); // identical fields

    auto fin = run("nmi --mode finite --catalog pair2 --grid-n 128 "
                   "--field field_a.bin --field field_b.bin");
    CHECK(fin.exit_code == 0);
    CHECK(json::parse(fin.out)["holds"] == true);

    auto wrong = run("nmi --mode finite --catalog pair2 --grid-n 256 --field field_a.bin --field field_b.bin");
    CHECK(wrong.exit_code == 1); // grid mismatch is an input error
}
