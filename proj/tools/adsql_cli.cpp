// adsql: command-line driver. Exit codes: 0 pass, 1 numerical failure, 2 usage error.
#include <CLI11.hpp>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <thread>

#include "adsql/io.hpp"

using namespace adsql;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

bool given(const CLI::App& app, const std::string& flag) {
    const CLI::Option* o = app.get_option_no_throw(flag);
    return o && o->count() > 0;
}

struct RunConfig {
    std::string config_path;
    int lmax = 16;
    std::string model;  // "sads", "ads", "sads:<m>"; empty: take it from the config
    std::vector<double> radii;
    double tol = 0;
    std::string out;
    unsigned seed = 1;
    std::vector<double> observer;  // A, B1..3, D1..3, F1..3
    double perturbation = 0;
    int shape_degree = 2;  // embed: top degree of the random conformal factor
    int samples = 50;
    std::optional<double> evolve_t;
    std::vector<double> E, P, C, J;  // evolve: injected charges
    TomlDocument doc;
};

// flags given on the command line win over the config file
struct Resolver {
    const CLI::App& app;
    RunConfig& c;

    bool given(const std::string& flag) const { return ::given(app, flag); }

    void number(const std::string& flag, const std::string& key, double& v, double fallback) const {
        if (!given(flag)) v = c.doc.get_number(key, fallback);
    }
    void numbers(const std::string& flag, const std::string& key, std::vector<double>& v,
                 const std::vector<double>& fallback) const {
        if (!given(flag)) v = c.doc.get_numbers(key, fallback);
    }
};

int thread_cap() {
    const char* env = std::getenv("ADSQL_THREADS");
    const int hw = std::max(1u, std::thread::hardware_concurrency());
    if (!env || !*env) return hw;
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (*end != '\0' || n < 1) throw UsageError("ADSQL_THREADS must be a positive integer");
    return static_cast<int>(std::min<long>(n, 256));
}

// runs fn(0..n-1) on up to thread_cap() workers; results are indexed, so output order is fixed
void parallel_for(int n, const std::function<void(int)>& fn) {
    const int workers = std::min(thread_cap(), n);
    std::vector<std::exception_ptr> errors(static_cast<size_t>(n));
    std::atomic<int> next{0};
    auto work = [&] {
        for (int k; (k = next++) < n;) {
            try {
                fn(k);
            } catch (...) {
                errors[static_cast<size_t>(k)] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

SliceModel resolve_model(const SphereGrid& grid, const RunConfig& c, std::string& label) {
    if (c.model.empty()) {
        label = c.doc.get_string("model.type", "sads");
        return model_from_config(grid, c.doc);
    }
    label = c.model;
    const auto colon = c.model.find(':');
    const std::string type = c.model.substr(0, colon);
    double m = 1.0;
    if (type == "ads") {
        m = 0.0;
    } else if (type != "sads") {
        throw UsageError("--model: expected sads, ads or sads:<m>");
    }
    if (colon != std::string::npos) {
        try {
            size_t used = 0;
            m = std::stod(c.model.substr(colon + 1), &used);
            if (used != c.model.size() - colon - 1) throw std::invalid_argument("");
        } catch (const std::exception&) {
            throw UsageError("--model: bad mass in '" + c.model + "'");
        }
    }
    if (m < 0) throw UsageError("--model: mass must be non-negative");
    return sads_model(m);
}

KillingField resolve_observer(const RunConfig& c) {
    if (c.observer.empty()) return time_field();
    if (c.observer.size() != 10) throw UsageError("observer: expected 10 numbers A, B1..3, D1..3, F1..3");
    const auto& o = c.observer;
    return observer_field(o[0], V3(o[1], o[2], o[3]), V3(o[4], o[5], o[6]), V3(o[7], o[8], o[9]));
}

// round embedding at the area radius when sigma is round to within tol, Newton otherwise
EmbeddingSolution embed_for(const SphereGrid& grid, const SurfaceMetric& sigma, double tol) {
    const double area = integrate(grid, grid.constant(1.0), sigma);
    const double ra = std::sqrt(area / (4.0 * std::numbers::pi));
    const ReferenceChart ads = ReferenceChart::make(ChartKind::AdS);
    EmbeddingSolution round = embed_round(grid, ra, ads);
    if (metric_mismatch(SurfaceMetric::round(grid, ra), sigma) <= tol) return round;
    NewtonOptions opt;
    opt.tol = std::min(opt.tol, tol);
    return embed_newton(grid, sigma, round.embedding, opt);
}

// random band-limited shape with degrees lmin..lmax and sup norm 1
Field random_shape(const SphereGrid& grid, unsigned seed, int lmin, int lmax) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> nd;
    Vec c = Vec::Zero(grid.nmodes());
    for (int l = lmin; l <= std::min(lmax, grid.lmax()); ++l)
        for (int m = -l; m <= l; ++m) c(SphereGrid::mode(l, m)) = nd(rng);
    const Field f = grid.synthesize(c);
    return f / f.abs().maxCoeff();
}

ChargeSet charges_from(const RunConfig& c) {
    auto vec = [](const std::vector<double>& v, const char* name) {
        if (v.empty()) return V3(V3::Zero());
        if (v.size() != 3) throw UsageError(std::string(name) + ": expected 3 numbers");
        return V3(v[0], v[1], v[2]);
    };
    ChargeSet q;
    if (c.E.size() > 1) throw UsageError("E: expected one number");
    q.E = c.E.empty() ? 0.0 : c.E[0];
    q.P = vec(c.P, "P");
    q.C = vec(c.C, "C");
    q.J = vec(c.J, "J");
    return q;
}

void emit(const RunConfig& c, const std::string& text) {
    if (c.out.empty() || c.out == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(c.out);
    if (!f) throw UsageError("cannot write " + c.out);
    f << text;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------- identities

int cmd_identities(const RunConfig& c) {
    const SphereGrid grid(c.lmax);
    const auto corpus = identity_corpus(grid);
    std::vector<Json> rows(corpus.size());
    std::vector<double> worst(corpus.size());
    parallel_for(static_cast<int>(corpus.size()), [&](int k) {
        const CorpusEntry& e = corpus[static_cast<size_t>(k)];
        const auto G = surface_geometry(grid, e.X, e.chart);
        const IdentityResiduals R = projection_residuals(grid, G);
        const double cons = conservation_residual(grid, G);
        Json r;
        r["name"] = e.name;
        r["kappa"] = e.chart.kappa;
        Json res{{"e4_decomposition", R.e4_decomposition},
                 {"dt_decomposition", R.dt_decomposition},
                 {"mean_curvature_projection", R.mean_curvature_projection},
                 {"connection_relation", R.connection_relation},
                 {"area_relation", R.area_relation},
                 {"conservation", cons}};
        if (R.potential_laplacian >= 0) {
            res["potential_laplacian"] = R.potential_laplacian;
            res["potential_gradient"] = R.potential_gradient;
        }
        r["residuals"] = res;
        r["gauge_relations"] = {{"gauge_angle", R.gauge_angle}, {"gauge_connection", R.gauge_connection}};
        const double m = std::max(R.max(), cons);
        r["max"] = m;
        r["pass"] = m < c.tol;
        rows[static_cast<size_t>(k)] = r;
        worst[static_cast<size_t>(k)] = m;
    });
    double mx = 0;
    for (double w : worst) mx = std::max(mx, w);
    Json out;
    out["schema"] = schema_tag("identities");
    out["lmax"] = c.lmax;
    out["threshold"] = c.tol;
    out["entries"] = rows;
    out["max_residual"] = mx;
    out["pass"] = mx < c.tol;
    emit(c, dump(out));
    return mx < c.tol ? 0 : 1;
}

// ---------------------------------------------------------------- energy

int cmd_energy(const RunConfig& c) {
    const SphereGrid grid(c.lmax);
    std::string label;
    const SliceModel model = resolve_model(grid, c, label);
    const KillingField T0 = resolve_observer(c);
    QleOptions qopt;
    qopt.isometry_tol = c.tol;

    struct Row {
        double E = NAN, rho = NAN, Eopt = NAN;
        std::string status = "ok";
    };
    std::vector<Row> rows(c.radii.size());
    parallel_for(static_cast<int>(c.radii.size()), [&](int k) {
        Row& row = rows[static_cast<size_t>(k)];
        const double r = c.radii[static_cast<size_t>(k)];
        PhysicalSurfaceData data;
        try {
            data = slice_sphere_data(grid, model, r);
        } catch (const std::domain_error&) {
            row.status = "error:inside_horizon";
            return;
        }
        try {
            const EmbeddingSolution sol = embed_for(grid, data.sigma, c.tol);
            row.E = quasilocal_energy_invariant(grid, data, sol.embedding, T0, qopt);
            row.rho = field_stats(grid, density_pair(grid, data, sol.embedding, qopt).rho, data.sigma).mean;
            try {
                row.Eopt = optimize_observer(grid, data, sol).energy;
            } catch (const PreconditionError&) {
                row.status = "error:observer_precondition";
            }
        } catch (const ObserverError&) {
            row.status = "error:observer";
        } catch (const ConvergenceError&) {
            row.status = "error:embedding_convergence";
        } catch (const RigidityError&) {
            row.status = "error:embedding_rigidity";
        } catch (const DegenerateDataError&) {
            row.status = "error:degenerate";
        }
    });

    std::ostringstream os;
    CsvWriter w(os, "energy", {"r", "E", "rho_mean", "E_opt", "status"},
                {"model: " + label + ", lmax: " + std::to_string(c.lmax),
                 "r: coordinate radius; E: quasi-local energy for the observer; rho_mean: mean energy density; "
                 "E_opt: energy minimized over static observers; status: ok or an error marker"});
    bool ok = true;
    for (size_t k = 0; k < rows.size(); ++k) {
        const Row& r = rows[k];
        ok = ok && r.status == "ok";
        w.row({CsvWriter::num(c.radii[k]), CsvWriter::num(r.E), CsvWriter::num(r.rho), CsvWriter::num(r.Eopt),
               r.status});
    }
    emit(c, os.str());
    return ok ? 0 : 1;
}

// ---------------------------------------------------------------- embed

int cmd_embed(const RunConfig& c) {
    const SphereGrid grid(c.lmax);
    std::string label;
    const SliceModel model = resolve_model(grid, c, label);
    const double r = c.radii.at(0);
    PhysicalSurfaceData data;
    try {
        data = slice_sphere_data(grid, model, r);
    } catch (const std::domain_error& e) {
        std::cerr << "embed: " << e.what() << "\n";
        return 1;
    }
    if (c.perturbation != 0.0) {
        const Field f = 1.0 + c.perturbation * random_shape(grid, c.seed, 2, c.shape_degree);
        const SymTensor& g = data.sigma.g;
        data.sigma = SurfaceMetric(SymTensor{f * g.tt, f * g.tp, f * g.pp});
    }

    Json out;
    out["schema"] = schema_tag("embed");
    out["model"] = label;
    out["lmax"] = c.lmax;
    out["r"] = r;
    out["perturbation"] = c.perturbation;
    out["seed"] = c.seed;
    int code = 0;
    try {
        const double area = integrate(grid, grid.constant(1.0), data.sigma);
        const EmbeddingMap guess = EmbeddingMap::round(grid, std::sqrt(area / (4.0 * std::numbers::pi)));
        NewtonOptions nopt;
        nopt.tol = c.tol;
        const EmbeddingSolution sol = embed_newton(grid, data.sigma, guess, nopt);
        out["solver"] = solver_report_to_json(sol);
        const KernelReport ker = linearization_kernel(grid, guess);
        out["round_kernel"] = {{"dimension", ker.dimension}, {"gap", ker.gap}};
        QleOptions qopt;
        qopt.isometry_tol = std::max(1e-8, c.tol);
        const auto geom = checked_geometry(grid, data, sol.embedding, qopt);
        const DensityPair d = density_pair(grid, data, geom);
        const OptimalResidual res = optimal_embedding_residual(grid, data, geom);
        const Field jn = norm2(data.sigma, d.j).sqrt();
        out["qle"] = qle_record_to_json(quasilocal_energy_invariant(grid, data, sol.embedding, time_field(), qopt),
                                        field_stats(grid, d.rho, data.sigma), field_stats(grid, jn, data.sigma),
                                        {{"metric_mismatch", sol.residual},
                                         {"optimal_tau", sup(res.res_tau)},
                                         {"optimal_X", sup(res.res_X)}});
        out["embedding"] = embedding_to_json(grid, sol.embedding);
    } catch (const ConvergenceError& e) {
        out["error"] = e.what();
        out["residual_history"] = e.residual_history;
        code = 1;
    } catch (const RigidityError& e) {
        out["error"] = e.what();
        code = 1;
    } catch (const DegenerateDataError& e) {
        out["error"] = e.what();
        code = 1;
    }
    emit(c, dump(out));
    return code;
}

// ---------------------------------------------------------------- variation

int cmd_variation(const RunConfig& c) {
    const SphereGrid grid(c.lmax);
    const ReferenceChart ads = ReferenceChart::make(ChartKind::AdS);
    const double zero_tol = 1e-9;
    std::vector<Json> rows(c.radii.size());
    std::vector<int> pass(c.radii.size(), 0);
    parallel_for(static_cast<int>(c.radii.size()), [&](int k) {
        const double r = c.radii[static_cast<size_t>(k)];
        const auto geom = surface_geometry(grid, EmbeddingMap::round(grid, r), ads);
        auto norm2f = [&](const Field& f) { return integrate(grid, f * f, geom.sigma); };

        Json zero = Json::array();
        bool ok = true;
        for (int i = -1; i < 3; ++i) {
            const Field f = i < 0 ? grid.constant(1.0) : Field(grid.xt(i));
            const double q = second_variation_form(grid, geom, f) / norm2f(f);
            zero.push_back(q);
            ok = ok && std::abs(q) < zero_tol;
        }
        Json degree = Json::array();
        for (int l = 0; l <= std::min(6, grid.lmax()); ++l) {
            const Field f = grid.harmonic(l, 0);
            degree.push_back({{"l", l}, {"ratio", second_variation_form(grid, geom, f) / norm2f(f)}});
        }
        double lo = INFINITY;
        int positive = 0;
        for (int s = 0; s < c.samples; ++s) {
            const Field f = random_shape(grid, c.seed + 7919u * static_cast<unsigned>(s), 2, std::min(8, grid.lmax()));
            const double q = second_variation_form(grid, geom, f) / norm2f(f);
            lo = std::min(lo, q);
            if (q > 0) ++positive;
        }
        ok = ok && positive == c.samples;
        Json row;
        row["r"] = r;
        row["zero_modes"] = zero;
        row["per_degree"] = degree;
        row["samples"] = c.samples;
        row["positive"] = positive;
        row["min_ratio"] = c.samples ? Json(lo) : Json(nullptr);
        row["pass"] = ok;
        rows[static_cast<size_t>(k)] = row;
        pass[static_cast<size_t>(k)] = ok;
    });
    bool all = true;
    for (int p : pass) all = all && p;
    Json out;
    out["schema"] = schema_tag("variation");
    out["lmax"] = c.lmax;
    out["seed"] = c.seed;
    out["zero_mode_threshold"] = zero_tol;
    out["spheres"] = rows;
    out["pass"] = all;
    emit(c, dump(out));
    return all ? 0 : 1;
}

// ---------------------------------------------------------------- charges

Json evolved(const ChargeSet& q, double t) {
    const ChargeSet a = evolve_charges(q, t), b = evolve_charges_rk4(q, t);
    return {{"t", t},
            {"charges", charges_to_json(a)},
            {"rest_mass", rest_mass_to_json(rest_mass(a))},
            {"rk4_delta", std::max((a.P - b.P).cwiseAbs().maxCoeff(), (a.C - b.C).cwiseAbs().maxCoeff())}};
}

int cmd_charges(const RunConfig& c) {
    const SphereGrid grid(c.lmax);
    std::string label;
    const SliceModel model = resolve_model(grid, c, label);
    Json out;
    out["schema"] = schema_tag("charge_report");
    out["model"] = label;
    out["lmax"] = c.lmax;
    out["radii"] = c.radii;
    try {
        const ChargeSet def = total_charges(grid, extract_asymptotics(grid, model, c.radii));
        const ChargeSet ham = hamiltonian_charge_set(grid, model, c.radii);
        const LimitEstimate ql = quasilocal_limit(grid, model, time_field(), c.radii);
        out["charges"] = charges_to_json(def);
        out["hamiltonian"] = charges_to_json(ham);
        out["hamiltonian_delta"] = {{"E", std::abs(ham.E - def.E)},
                                    {"P", (ham.P - def.P).cwiseAbs().maxCoeff()},
                                    {"C", (ham.C - def.C).cwiseAbs().maxCoeff()},
                                    {"J", (ham.J - def.J).cwiseAbs().maxCoeff()}};
        out["quasilocal_energy_limit"] = {{"value", ql.value}, {"spread", ql.spread}, {"samples", ql.samples}};
        out["rest_mass"] = rest_mass_to_json(rest_mass(def));
        if (c.evolve_t) out["evolved"] = evolved(def, *c.evolve_t);
    } catch (const ExtractionError& e) {
        std::cerr << "charges: " << e.what() << "\n";
        return 1;
    } catch (const LimitError& e) {
        std::cerr << "charges: " << e.what() << "\n";
        return 1;
    } catch (const std::domain_error& e) {
        std::cerr << "charges: " << e.what() << "\n";
        return 1;
    }
    emit(c, dump(out));
    return 0;
}

int cmd_evolve(const RunConfig& c) {
    const ChargeSet q = charges_from(c);
    Json out;
    out["schema"] = schema_tag("evolution");
    out["initial"] = charges_to_json(q);
    out["initial_rest_mass"] = rest_mass_to_json(rest_mass(q));
    out["evolved"] = evolved(q, c.evolve_t.value_or(0.0));
    emit(c, dump(out));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"adsql: quasi-local energy and charges with an AdS reference"};
    app.require_subcommand(1);
    RunConfig c;
    double evolve_t = 0, tol = 0;
    std::vector<double> radii, observer;
    double perturbation = 0, shape_degree = 0, samples = 0, seed = 0, lmax = 0;

    auto common = [&](CLI::App* s) {
        s->add_option("--config", c.config_path, "TOML config file");
        s->add_option("--lmax", lmax, "band limit (default 16)")->type_name("INT");
        s->add_option("--tol", tol, "threshold or solver tolerance");
        s->add_option("--out", c.out, "output file (default stdout)");
        s->add_option("--seed", seed, "seed for randomized inputs")->type_name("INT");
    };
    auto with_model = [&](CLI::App* s) {
        s->add_option("--model", c.model, "sads, ads or sads:<m>");
        s->add_option("--radii", radii, "coordinate radii")->delimiter(',');
    };

    auto* identities = app.add_subcommand("identities", "geometric identity residuals over the embedding corpus");
    common(identities);
    auto* energy = app.add_subcommand("energy", "CSV of quasi-local energy over radii");
    common(energy);
    with_model(energy);
    energy->add_option("--observer", observer, "A,B1,B2,B3,D1,D2,D3,F1,F2,F3")->delimiter(',');
    auto* embed = app.add_subcommand("embed", "isometric embedding of a model sphere");
    common(embed);
    with_model(embed);
    embed->add_option("--perturb", perturbation, "relative conformal perturbation of the metric");
    embed->add_option("--shape-degree", shape_degree, "top harmonic degree of the perturbation (default 2)")
        ->type_name("INT");
    auto* variation = app.add_subcommand("variation", "second variation on round spheres");
    common(variation);
    variation->add_option("--radii", radii, "sphere radii")->delimiter(',');
    variation->add_option("--samples", samples, "random test functions per sphere")->type_name("INT");
    auto* charges = app.add_subcommand("charges", "total charges, Hamiltonian cross-check, rest mass");
    common(charges);
    with_model(charges);
    charges->add_option("--evolve-t", evolve_t, "evolve the charges to this time");
    auto* evolve = app.add_subcommand("evolve", "closed-form evolution of injected charges");
    common(evolve);
    evolve->add_option("--t", evolve_t, "time");
    for (const char* n : {"E", "P", "C", "J"}) {
        std::vector<double>* dst = n[0] == 'E' ? &c.E : n[0] == 'P' ? &c.P : n[0] == 'C' ? &c.C : &c.J;
        evolve->add_option(std::string("--") + n, *dst, std::string(n) + " components")->delimiter(',');
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    CLI::App* cmd = app.get_subcommands().front();
    const std::string name = cmd->get_name();
    try {
        if (!c.config_path.empty()) c.doc = TomlDocument::parse_file(c.config_path);
        const Resolver r{*cmd, c};

        double v = 0;
        r.number("--lmax", "lmax", v, 16);
        if (given(*cmd, "--lmax")) v = lmax;
        if (v < 2 || v > 128 || v != std::floor(v)) throw UsageError("lmax must be an integer in 2..128");
        c.lmax = static_cast<int>(v);

        r.number("--seed", "seed", v, 1);
        if (given(*cmd, "--seed")) v = seed;
        if (v < 0 || v != std::floor(v) || v > 4294967295.0) throw UsageError("seed must be a non-negative integer");
        c.seed = static_cast<unsigned>(v);

        const double default_tol = name == "identities" ? 1e-8 : name == "embed" ? 1e-10 : 1e-8;
        r.number("--tol", "tol", c.tol, default_tol);
        if (given(*cmd, "--tol")) c.tol = tol;
        if (!(c.tol > 0)) throw UsageError("tol must be positive");

        if (c.out.empty()) c.out = c.doc.get_string("out", "");

        const std::vector<double> default_radii = name == "energy"      ? std::vector<double>{2, 5, 10, 20, 40}
                                                  : name == "embed"     ? std::vector<double>{2}
                                                  : name == "variation" ? std::vector<double>{1, 2}
                                                                        : std::vector<double>{20, 40, 80, 160};
        r.numbers("--radii", "radii", c.radii, default_radii);
        if (given(*cmd, "--radii")) c.radii = radii;
        if (c.radii.empty()) throw UsageError("radii must not be empty");
        for (double x : c.radii)
            if (!(x > 0)) throw UsageError("radii must be positive");
        if (name == "charges" && c.radii.size() < 3) throw UsageError("charges needs at least three radii");

        r.numbers("--observer", "observer", c.observer, {});
        if (given(*cmd, "--observer")) c.observer = observer;
        r.number("--perturb", "perturbation", c.perturbation, 0.0);
        if (given(*cmd, "--perturb")) c.perturbation = perturbation;
        r.number("--shape-degree", "shape_degree", v, 2);
        if (given(*cmd, "--shape-degree")) v = shape_degree;
        if (v < 2 || v != std::floor(v)) throw UsageError("shape degree must be an integer >= 2");
        c.shape_degree = static_cast<int>(v);
        r.number("--samples", "samples", v, 50);
        if (given(*cmd, "--samples")) v = samples;
        if (v < 0 || v != std::floor(v)) throw UsageError("samples must be a non-negative integer");
        c.samples = static_cast<int>(v);

        const char* tkey = name == "evolve" ? "t" : "evolve_t";
        const char* tflag = name == "evolve" ? "--t" : "--evolve-t";
        if (given(*cmd, tflag))
            c.evolve_t = evolve_t;
        else if (c.doc.has(tkey))
            c.evolve_t = c.doc.get_number(tkey, 0.0);

        if (name == "evolve") {
            if (!given(*cmd, "--E") && c.doc.has("charges.E")) c.E = {c.doc.get_number("charges.E", 0)};
            r.numbers("--P", "charges.P", c.P, {});
            r.numbers("--C", "charges.C", c.C, {});
            r.numbers("--J", "charges.J", c.J, {});
        }
        thread_cap();

        if (name == "identities") return cmd_identities(c);
        if (name == "energy") return cmd_energy(c);
        if (name == "embed") return cmd_embed(c);
        if (name == "variation") return cmd_variation(c);
        if (name == "charges") return cmd_charges(c);
        return cmd_evolve(c);
    } catch (const UsageError& e) {
        std::cerr << name << ": " << e.what() << "\n";
        return 2;
    } catch (const FormatError& e) {
        std::cerr << name << ": " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << name << ": " << e.what() << "\n";
        return 1;
    }
}
