#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "adsql/charges.hpp"

namespace adsql {

using Json = nlohmann::json;  // keys sorted on output

struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// every record carries "schema": "adsql.<kind>.v<kSchemaVersion>"
inline constexpr int kSchemaVersion = 1;
std::string schema_tag(const std::string& kind);
// throws FormatError unless j["schema"] matches the tag for kind
void expect_schema(const Json& j, const std::string& kind);

// {lmax, ntheta, nphi, component_names, values: one latitude-major array per component}
Json field_to_json(const SphereGrid& grid, const std::vector<std::string>& names, const std::vector<Field>& comps);
std::vector<Field> field_from_json(const SphereGrid& grid, const Json& j, const std::vector<std::string>& names);

Json embedding_to_json(const SphereGrid& grid, const EmbeddingMap& X);
EmbeddingMap embedding_from_json(const SphereGrid& grid, const Json& j);

Json charges_to_json(const ChargeSet& c);
ChargeSet charges_from_json(const Json& j);
Json rest_mass_to_json(const RestMass& m);

Json solver_report_to_json(const EmbeddingSolution& s);

struct ScalarStats {
    double min = 0, max = 0, mean = 0, sup = 0;  // mean w.r.t. the surface measure
};
ScalarStats field_stats(const SphereGrid& grid, const Field& f, const SurfaceMetric& metric);

Json qle_record_to_json(double E, const ScalarStats& rho, const ScalarStats& j_norm,
                        const std::map<std::string, double>& residual_norms);

// comma-separated rows after a "# schema: ..." line, optional "# " notes and a header line
class CsvWriter {
public:
    CsvWriter(std::ostream& os, const std::string& kind, const std::vector<std::string>& columns,
              const std::vector<std::string>& notes = {});
    void row(const std::vector<std::string>& cells);
    static std::string num(double v);

private:
    std::ostream& os_;
    size_t ncol_;
};

// TOML subset: key = value, [table] headers, dotted keys, strings, numbers,
// booleans, flat arrays and inline tables. Keys are flattened to "table.key".
struct TomlValue;
using TomlArray = std::vector<TomlValue>;
struct TomlValue {
    std::variant<bool, double, std::string, TomlArray> v;
};

class TomlDocument {
public:
    static TomlDocument parse(const std::string& text);
    static TomlDocument parse_file(const std::string& path);

    bool has(const std::string& key) const { return entries_.count(key) != 0; }
    const std::map<std::string, TomlValue>& entries() const { return entries_; }

    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_number(const std::string& key, double fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<double> get_numbers(const std::string& key, const std::vector<double>& fallback) const;

private:
    std::map<std::string, TomlValue> entries_;
    const TomlValue* find(const std::string& key) const;
};

// model = {type = "sads", m = 1.0} or {type = "custom", file = "coefficients.json"};
// the custom file holds grr5, gab1_tt, gab1_tp, gab1_pp, kra3_th, kra3_ph on the given grid
SliceModel model_from_config(const SphereGrid& grid, const TomlDocument& doc, const std::string& prefix = "model");

}  // namespace adsql
