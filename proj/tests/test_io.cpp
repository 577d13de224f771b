#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "adsql/io.hpp"

using namespace adsql;

TEST_CASE("field round trip") {
    SphereGrid g(6);
    const Field f = 0.3 + g.xt(0) * g.xt(2), h = g.sin_theta();
    Json j = field_to_json(g, {"f", "h"}, {f, h});
    CHECK(j["schema"] == "adsql.field.v1");
    CHECK(j["lmax"] == 6);
    CHECK(j["ntheta"] == g.ntheta());
    CHECK(j["nphi"] == g.nphi());
    CHECK(j["values"][0].size() == static_cast<size_t>(g.size()));
    CHECK(j["values"][0][g.nphi()] == f(g.nphi()));

    const Json back = Json::parse(j.dump());
    auto comps = field_from_json(g, back, {"h", "f"});
    CHECK((comps[0] - h).abs().maxCoeff() == 0.0);
    CHECK((comps[1] - f).abs().maxCoeff() == 0.0);

    CHECK_THROWS_AS(field_from_json(g, back, {"missing"}), FormatError);
    CHECK_THROWS_AS(field_from_json(SphereGrid(4), back, {"f"}), FormatError);
    Json wrong = back;
    wrong["schema"] = "adsql.field.v0";
    CHECK_THROWS_AS(field_from_json(g, wrong, {"f"}), FormatError);
    wrong = back;
    wrong["values"][0].erase(0);
    CHECK_THROWS_AS(field_from_json(g, wrong, {"f"}), FormatError);
}

TEST_CASE("embedding, charges and reports") {
    SphereGrid g(6);
    EmbeddingMap X = EmbeddingMap::round(g, 2.0, V3(0.1, 0, 0));
    X.tau = 0.05 * g.xt(1);
    const Json j = embedding_to_json(g, X);
    for (const char* k : {"tau", "X1", "X2", "X3"}) CHECK(j.contains(k));
    const EmbeddingMap Y = embedding_from_json(g, Json::parse(j.dump()));
    CHECK(sup(Y.tau - X.tau) == 0.0);
    for (int i = 0; i < 3; ++i) CHECK(sup(Y.X[i] - X.X[i]) == 0.0);

    ChargeSet c;
    c.E = 1.25;
    c.P = V3(0.1, -0.2, 1e-17);
    c.C = V3(1.0 / 3.0, 0, 0);
    c.J = V3(0, 0, -2);
    const ChargeSet d = charges_from_json(Json::parse(charges_to_json(c).dump()));
    CHECK(d.E == c.E);
    CHECK(d.P == c.P);
    CHECK(d.C == c.C);
    CHECK(d.J == c.J);
    CHECK_THROWS_AS(charges_from_json(Json{{"schema", "adsql.charges.v1"}, {"E", 1.0}}), FormatError);

    RestMass bad;
    bad.beta = -1;
    const Json rm = rest_mass_to_json(bad);
    CHECK(rm["m"].is_null());
    CHECK(rm["valid"] == false);
    CHECK(rest_mass_to_json(rest_mass(c))["schema"] == "adsql.rest_mass.v1");

    EmbeddingSolution s;
    s.iterations = 2;
    s.residual_history = {1e-2, 1e-6, 1e-13};
    s.gauge_report = {{"c1", 1e-14}, {"j3", -2e-15}};
    const Json r = solver_report_to_json(s);
    CHECK(r["schema"] == "adsql.solver_report.v1");
    CHECK(r["residual_history"].size() == 3);
    CHECK(r["gauge_report"][1]["label"] == "j3");

    const ScalarStats st = field_stats(g, g.xt(2), SurfaceMetric::round(g, 2.0));
    CHECK(std::abs(st.mean) < 1e-15);
    CHECK(st.max <= 1.0);
    const Json q = qle_record_to_json(0.5, st, st, {{"res_tau", 1e-12}});
    CHECK(q["schema"] == "adsql.qle.v1");
    CHECK(q["rho_stats"]["sup"] == st.sup);
    CHECK(q["residual_norms"]["res_tau"] == 1e-12);
}

TEST_CASE("csv writer") {
    std::ostringstream os;
    CsvWriter w(os, "energy", {"r", "E"});
    w.row({CsvWriter::num(2.0), CsvWriter::num(0.1)});
    CHECK_THROWS_AS(w.row({"1"}), std::invalid_argument);
    CHECK(os.str() == "# schema: adsql.energy.v1\nr,E\n2,0.1\n");
    CHECK(std::stod(CsvWriter::num(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("toml subset") {
    const auto doc = TomlDocument::parse(R"(
# comment
lmax = 12
tol = 1e-9
name = "run one"  # trailing
path = 'C:\raw'
flag = true
radii = [20, 40,
         80]  # multi-line
model = {type = "sads", m = 0.5}

[solver]
max_iter = 30
"quoted key".x = -1_000
)");
    CHECK(doc.get_number("lmax", 0) == 12);
    CHECK(doc.get_number("tol", 0) == 1e-9);
    CHECK(doc.get_string("name", "") == "run one");
    CHECK(doc.get_string("path", "") == "C:\\raw");
    CHECK(doc.get_bool("flag", false));
    CHECK(doc.get_numbers("radii", {}) == std::vector<double>{20, 40, 80});
    CHECK(doc.get_string("model.type", "") == "sads");
    CHECK(doc.get_number("model.m", 0) == 0.5);
    CHECK(doc.get_number("solver.max_iter", 0) == 30);
    CHECK(doc.get_number("solver.quoted key.x", 0) == -1000);
    CHECK(doc.get_number("absent", 7) == 7);
    CHECK_THROWS_AS(doc.get_number("name", 0), FormatError);
    CHECK_THROWS_AS(doc.get_numbers("lmax", {}), FormatError);

    for (const char* bad : {"x = ", "x = [1, 2", "x = \"open", "= 3", "x = 1 y = 2", "x = 1\nx = 2", "[t\nx=1",
                            "[[t]]", "x = [[1]]", "x = {a = 1,}", "x = abc", "x = {a = 1", "[t]\n[t]"}) {
        CAPTURE(bad);
        CHECK_THROWS_AS(TomlDocument::parse(bad), FormatError);
    }
    CHECK_THROWS_AS(TomlDocument::parse_file("/nonexistent/config.toml"), FormatError);
}

TEST_CASE("model config") {
    SphereGrid g(6);
    auto sads = model_from_config(g, TomlDocument::parse("model = {type = \"sads\", m = 1.0}"));
    CHECK(sads.name.find("sads") != std::string::npos);
    auto dflt = model_from_config(g, TomlDocument::parse(""));
    CHECK(sup(dflt.sample(g, 5.0).g_rr - sads.sample(g, 5.0).g_rr) == 0.0);
    CHECK_THROWS_AS(model_from_config(g, TomlDocument::parse("model.type = \"kerr\"")), FormatError);
    CHECK_THROWS_AS(model_from_config(g, TomlDocument::parse("model.m = -1")), FormatError);
    CHECK_THROWS_AS(model_from_config(g, TomlDocument::parse("model.type = \"custom\"")), FormatError);

    const std::string path = "adsql_test_coefficients.json";
    const Field z = g.constant(0.0);
    const Json f = field_to_json(g, {"grr5", "gab1_tt", "gab1_tp", "gab1_pp", "kra3_th", "kra3_ph"},
                                 {g.constant(2.0), z, z, z, z, z});
    std::ofstream(path) << f.dump();
    auto custom = model_from_config(g, TomlDocument::parse("[model]\ntype = \"custom\"\nfile = \"" + path + "\""));
    const auto s = custom.sample(g, 10.0);
    CHECK(sup(s.g_rr - (1.0 / 101.0 + 2.0 / 1e5)) < 1e-15);
    std::remove(path.c_str());
}
