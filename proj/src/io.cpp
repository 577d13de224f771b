#include "adsql/io.hpp"

#include <charconv>
#include <fstream>
#include <ostream>

namespace adsql {

std::string schema_tag(const std::string& kind) { return "adsql." + kind + ".v" + std::to_string(kSchemaVersion); }

void expect_schema(const Json& j, const std::string& kind) {
    const std::string want = schema_tag(kind);
    if (!j.is_object() || !j.contains("schema") || !j["schema"].is_string() || j["schema"].get<std::string>() != want)
        throw FormatError("expected schema " + want);
}

Json field_to_json(const SphereGrid& grid, const std::vector<std::string>& names, const std::vector<Field>& comps) {
    if (names.size() != comps.size()) throw std::invalid_argument("field_to_json: names and components differ in count");
    Json j;
    j["schema"] = schema_tag("field");
    j["lmax"] = grid.lmax();
    j["ntheta"] = grid.ntheta();
    j["nphi"] = grid.nphi();
    j["component_names"] = names;
    Json vals = Json::array();
    for (const Field& f : comps) {
        grid.check(f);
        vals.push_back(std::vector<double>(f.data(), f.data() + f.size()));
    }
    j["values"] = std::move(vals);
    return j;
}

std::vector<Field> field_from_json(const SphereGrid& grid, const Json& j, const std::vector<std::string>& names) {
    expect_schema(j, "field");
    try {
        if (j.at("lmax").get<int>() != grid.lmax() || j.at("ntheta").get<int>() != grid.ntheta() ||
            j.at("nphi").get<int>() != grid.nphi())
            throw FormatError("field: grid does not match (lmax " + std::to_string(j.at("lmax").get<int>()) + ")");
        const auto stored = j.at("component_names").get<std::vector<std::string>>();
        const Json& vals = j.at("values");
        if (!vals.is_array() || vals.size() != stored.size()) throw FormatError("field: values do not match component_names");
        std::vector<Field> out;
        for (const std::string& name : names) {
            size_t k = 0;
            while (k < stored.size() && stored[k] != name) ++k;
            if (k == stored.size()) throw FormatError("field: missing component " + name);
            const auto v = vals[k].get<std::vector<double>>();
            if (static_cast<int>(v.size()) != grid.size()) throw FormatError("field: wrong length for " + name);
            out.push_back(Eigen::Map<const Field>(v.data(), grid.size()));
        }
        return out;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("field: ") + e.what());
    }
}

Json embedding_to_json(const SphereGrid& grid, const EmbeddingMap& X) {
    Json j;
    j["schema"] = schema_tag("embedding");
    j["tau"] = field_to_json(grid, {"tau"}, {X.tau});
    for (int i = 0; i < 3; ++i) {
        const std::string n = "X" + std::to_string(i + 1);
        j[n] = field_to_json(grid, {n}, {X.X[static_cast<size_t>(i)]});
    }
    return j;
}

EmbeddingMap embedding_from_json(const SphereGrid& grid, const Json& j) {
    expect_schema(j, "embedding");
    EmbeddingMap X;
    try {
        X.tau = field_from_json(grid, j.at("tau"), {"tau"})[0];
        for (int i = 0; i < 3; ++i) {
            const std::string n = "X" + std::to_string(i + 1);
            X.X[static_cast<size_t>(i)] = field_from_json(grid, j.at(n), {n})[0];
        }
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("embedding: ") + e.what());
    }
    return X;
}

namespace {

Json vec3(const V3& v) { return Json::array({v(0), v(1), v(2)}); }

V3 vec3_from(const Json& j) {
    const auto v = j.get<std::vector<double>>();
    if (v.size() != 3) throw FormatError("expected a 3-vector");
    return V3(v[0], v[1], v[2]);
}

}  // namespace

Json charges_to_json(const ChargeSet& c) {
    Json j;
    j["schema"] = schema_tag("charges");
    j["E"] = c.E;
    j["P"] = vec3(c.P);
    j["C"] = vec3(c.C);
    j["J"] = vec3(c.J);
    return j;
}

ChargeSet charges_from_json(const Json& j) {
    expect_schema(j, "charges");
    ChargeSet c;
    try {
        c.E = j.at("E").get<double>();
        c.P = vec3_from(j.at("P"));
        c.C = vec3_from(j.at("C"));
        c.J = vec3_from(j.at("J"));
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("charges: ") + e.what());
    }
    return c;
}

Json rest_mass_to_json(const RestMass& m) {
    Json j;
    j["schema"] = schema_tag("rest_mass");
    j["m"] = m.valid ? Json(m.m) : Json(nullptr);
    j["alpha"] = m.alpha;
    j["beta"] = m.beta;
    j["valid"] = m.valid;
    return j;
}

Json solver_report_to_json(const EmbeddingSolution& s) {
    Json j;
    j["schema"] = schema_tag("solver_report");
    j["iterations"] = s.iterations;
    j["residual"] = s.residual;
    j["residual_history"] = s.residual_history;
    Json g = Json::array();
    for (const GaugeMode& m : s.gauge_report) g.push_back({{"label", m.label}, {"coefficient", m.coefficient}});
    j["gauge_report"] = std::move(g);
    j["convex"] = s.convex;
    return j;
}

ScalarStats field_stats(const SphereGrid& grid, const Field& f, const SurfaceMetric& metric) {
    grid.check(f);
    ScalarStats s;
    s.min = f.minCoeff();
    s.max = f.maxCoeff();
    s.sup = f.abs().maxCoeff();
    s.mean = integrate(grid, f, metric) / integrate(grid, grid.constant(1.0), metric);
    return s;
}

Json qle_record_to_json(double E, const ScalarStats& rho, const ScalarStats& j_norm,
                        const std::map<std::string, double>& residual_norms) {
    auto stats = [](const ScalarStats& s) {
        return Json{{"min", s.min}, {"max", s.max}, {"mean", s.mean}, {"sup", s.sup}};
    };
    Json j;
    j["schema"] = schema_tag("qle");
    j["E"] = E;
    j["rho_stats"] = stats(rho);
    j["j_stats"] = stats(j_norm);
    Json r = Json::object();
    for (const auto& [k, v] : residual_norms) r[k] = v;
    j["residual_norms"] = std::move(r);
    return j;
}

CsvWriter::CsvWriter(std::ostream& os, const std::string& kind, const std::vector<std::string>& columns,
                     const std::vector<std::string>& notes)
    : os_(os), ncol_(columns.size()) {
    os_ << "# schema: " << schema_tag(kind) << '\n';
    for (const std::string& n : notes) os_ << "# " << n << '\n';
    for (size_t k = 0; k < columns.size(); ++k) os_ << (k ? "," : "") << columns[k];
    os_ << '\n';
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    if (cells.size() != ncol_) throw std::invalid_argument("CsvWriter: wrong number of cells");
    for (size_t k = 0; k < cells.size(); ++k) os_ << (k ? "," : "") << cells[k];
    os_ << '\n';
}

std::string CsvWriter::num(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

SliceModel model_from_config(const SphereGrid& grid, const TomlDocument& doc, const std::string& prefix) {
    const std::string type = doc.get_string(prefix + ".type", "sads");
    if (type == "sads") {
        const double m = doc.get_number(prefix + ".m", 1.0);
        if (m < 0) throw FormatError("model: mass must be non-negative");
        return sads_model(m);
    }
    if (type == "custom") {
        const std::string path = doc.get_string(prefix + ".file", "");
        if (path.empty()) throw FormatError("model: custom model needs a file");
        std::ifstream in(path);
        if (!in) throw FormatError("model: cannot open " + path);
        Json j;
        try {
            j = Json::parse(in);
        } catch (const nlohmann::json::exception& e) {
            throw FormatError("model: " + std::string(e.what()));
        }
        const auto f = field_from_json(grid, j, {"grr5", "gab1_tt", "gab1_tp", "gab1_pp", "kra3_th", "kra3_ph"});
        return coefficient_model(f[0], SymTensor{f[1], f[2], f[3]}, OneForm{f[4], f[5]});
    }
    throw FormatError("model: unknown type '" + type + "'");
}

}  // namespace adsql
