#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "adsql/qle.hpp"

using namespace adsql;

namespace {

const ReferenceChart ads = ReferenceChart::make(ChartKind::AdS);

EmbeddingMap graph(const SphereGrid& g) {
    auto X = EmbeddingMap::round(g, 2.0, V3(0.1, -0.1, 0.05));
    X.tau = 0.1 * g.xt(0) + 0.05 * g.xt(1) * g.xt(2);
    return X;
}

// isometric data that differs from the image: |H| and alpha_H perturbed
PhysicalSurfaceData generic_data(const SphereGrid& g, const ReferenceSurfaceGeometry& G) {
    PhysicalSurfaceData P{G.sigma, G.H0_norm * (1.0 - 0.05 * g.xt(2) - 0.02 * g.xt(0) * g.xt(1)), G.alpha_H0};
    const OneForm a = gradient(g, g.xt(1)), b = rotate(G.sigma, gradient(g, g.xt(2)));
    P.alpha_H.th += 0.03 * a.th + 0.02 * b.th;
    P.alpha_H.ph += 0.03 * a.ph + 0.02 * b.ph;
    return P;
}

double closed_form(double m, double r) {
    const double s = 1 + r * r;
    return r * std::sqrt(s) * (std::sqrt(s) - std::sqrt(s - 2 * m / r));
}

}  // namespace

TEST_CASE("rigidity: reference image data") {
    SphereGrid g(16);
    for (bool perturbed : {false, true}) {
        auto X = perturbed ? graph(g) : EmbeddingMap::round(g, 1.5);
        auto G = surface_geometry(g, X, ads);
        PhysicalSurfaceData R{G.sigma, G.H0_norm, G.alpha_H0};
        CHECK(std::abs(quasilocal_energy(g, R, X)) < 1e-10);
        CHECK(std::abs(quasilocal_energy_invariant(g, R, X)) < 1e-10);
        auto d = density_pair(g, R, G);
        CHECK(sup(d.rho) < 1e-9);
        CHECK(one_form_sup(G.sigma, d.j) < 1e-9);
        auto r = optimal_embedding_residual(g, R, G);
        CHECK(sup(r.res_tau) < 1e-8);
        CHECK(sup(r.res_X) < 1e-8);
    }
}

TEST_CASE("closed-form energy of Schwarzschild-AdS spheres") {
    SphereGrid g(16);
    auto D = sads_sphere(g, 1.0, 2.0);
    auto X = EmbeddingMap::round(g, 2.0);
    const double E = quasilocal_energy(g, D, X);
    CHECK(std::abs(E - (10 - 4 * std::sqrt(5.0))) < 1e-9);
    CHECK(std::abs(E - closed_form(1.0, 2.0)) < 1e-9);
    for (double r : {10.0, 20.0, 40.0}) {
        const double Er = quasilocal_energy(g, sads_sphere(g, 1.0, r), EmbeddingMap::round(g, r));
        CHECK(std::abs(Er - closed_form(1.0, r)) < 1e-9);
        const double excess = 1.0 / (2 * r * (1 + r * r));
        CHECK(std::abs((Er - 1.0) / excess - 1.0) < 0.05);
    }
    CHECK(std::abs(quasilocal_energy(g, sads_sphere(g, 0.0, 3.0), EmbeddingMap::round(g, 3.0))) < 1e-12);
}

TEST_CASE("densities") {
    SphereGrid g(12);
    auto D = sads_sphere(g, 1.0, 2.0);
    auto G = surface_geometry(g, EmbeddingMap::round(g, 2.0), ads);
    auto d = density_pair(g, D, G);
    CHECK(sup(d.rho - (std::sqrt(5.0) - 2) / std::sqrt(5.0)) < 1e-12);
    CHECK(sup(d.j) < 1e-14);

    // tau = 0 with generic alpha: rho = (H0 - |H|)/Omega and j = alpha_H - alpha_H0
    auto Gs = surface_geometry(g, EmbeddingMap::round(g, 1.2, V3(0.2, 0, 0)), ads);
    PhysicalSurfaceData P{Gs.sigma, Gs.H0_norm - 0.1 * g.xt(2) * g.xt(2), gradient(g, g.xt(0))};
    auto ds = density_pair(g, P, Gs);
    CHECK(sup(ds.rho - (Gs.H0_norm - P.H_norm) / Gs.Omega) < 1e-13);
    CHECK(sup(OneForm{ds.j.th - (P.alpha_H.th - Gs.alpha_H0.th), ds.j.ph - (P.alpha_H.ph - Gs.alpha_H0.ph)}) < 1e-13);
}

TEST_CASE("the three energy expressions agree") {
    SphereGrid g(16);
    auto X = graph(g);
    auto G = surface_geometry(g, X, ads);
    auto P = generic_data(g, G);
    const double chart = energy_static_observer(g, P, G);
    const double inv = quasilocal_energy_invariant(g, P, X);
    const double dens = energy_from_densities(g, P, G, density_pair(g, P, G));
    CHECK(std::abs(chart) > 1e-7);
    CHECK(std::abs(chart - inv) < 1e-9);
    CHECK(std::abs(chart - dens) < 1e-9);
    CHECK(std::abs(conserved_quantity(g, P, X, time_field(), time_field()) - chart) < 1e-10);
}

TEST_CASE("general observers") {
    SphereGrid g(16);
    auto K = killing_basis(ads);
    auto X = graph(g);
    auto P = generic_data(g, surface_geometry(g, X, ads));

    // observer in the orbit of d/dt: conjugation agrees with the invariant form
    M5 L0 = isometry_exp(K[4] * 0.3 + K[1] * 0.2 + K[8] * 0.4, 1.0);
    KillingField T{"T", L0 * time_field().M * L0.inverse()};
    CHECK(std::abs(quasilocal_energy(g, P, X, T) - quasilocal_energy_invariant(g, P, X, T)) < 1e-9);
    // multiple of an orbit element: degree-one homogeneity
    KillingField T2 = time_field() + K[1] * 0.1;
    CHECK(std::abs(quasilocal_energy(g, P, X, T2) - quasilocal_energy_invariant(g, P, X, T2)) < 1e-9);
    CHECK(std::abs(quasilocal_energy(g, P, X, time_field() * 2.0) - 2.0 * quasilocal_energy(g, P, X)) < 1e-12);

    // equivariance: move X and T0 together
    for (int idx : {9, 7, 5, 3}) {
        M5 L = isometry_exp(K[idx], 0.35);
        auto Y = apply_isometry(L, X);
        KillingField TY{"TY", L * T.M * L.inverse()};
        CHECK(std::abs(quasilocal_energy(g, P, Y, TY) - quasilocal_energy(g, P, X, T)) < 1e-9);
    }

    CHECK_THROWS_AS(quasilocal_energy(g, P, X, K[9]), ObserverError);
    CHECK_THROWS_AS(quasilocal_energy(g, P, X, time_field() * -1.0), ObserverError);
    CHECK_THROWS_AS(conserved_quantity(g, P, X, time_field() * 2.0, K[1]), ObserverError);
}

TEST_CASE("conserved quantities") {
    SphereGrid g(16);
    auto K = killing_basis(ads);
    auto D = sads_sphere(g, 1.0, 2.0);
    auto X = EmbeddingMap::round(g, 2.0);
    CHECK(std::abs(conserved_quantity(g, D, X, time_field(), time_field()) - quasilocal_energy(g, D, X)) < 1e-10);
    CHECK(std::abs(conserved_quantity(g, D, X, time_field(), K[9])) < 1e-12);
    auto D20 = sads_sphere(g, 1.0, 20.0);
    auto X20 = EmbeddingMap::round(g, 20.0);
    CHECK(std::abs(conserved_quantity(g, D20, X20, time_field(), K[1])) < 1e-10);
}

TEST_CASE("optimal embedding residual on round data") {
    SphereGrid g(12);
    auto D = sads_sphere(g, 1.0, 3.0);
    auto G = surface_geometry(g, EmbeddingMap::round(g, 3.0), ads);
    auto r = optimal_embedding_residual(g, D, G);
    auto d = density_pair(g, D, G);
    CHECK(sup(r.res_tau) < 1e-13);
    CHECK(sup(r.res_X - d.rho * std::sqrt(10.0)) < 1e-13);
    // pairing vanishes for slice translations: int rho Omega dOmega = 0
    for (int i = 0; i < 3; ++i) {
        std::array<Field, 3> dX{g.constant(0), g.constant(0), g.constant(0)};
        dX[i] = g.constant(1.0);
        CHECK(std::abs(first_variation_pairing(g, G, r, g.constant(0), dX)) < 1e-13);
    }
}

TEST_CASE("preconditions") {
    SphereGrid g(8);
    auto X = EmbeddingMap::round(g, 2.0);
    CHECK_THROWS_AS(quasilocal_energy(g, sads_sphere(g, 1.0, 2.1), X), PreconditionError);
    auto D = sads_sphere(g, 1.0, 2.0);
    D.H_norm(3) = -1.0;
    CHECK_THROWS_AS(quasilocal_energy(g, D, X), DegenerateDataError);
}

TEST_CASE("second variation form") {
    for (double r : {1.0, 2.0}) {
        SphereGrid g(16);
        auto G = surface_geometry(g, EmbeddingMap::round(g, r), ads);
        CHECK(std::abs(second_variation_form(g, G, g.constant(1.0))) < 1e-12);
        const Field dens = second_variation_density(g, G, g.xt(0));
        CHECK(sup(dens - (1 + r * r) * (3 * g.xt(0) * g.xt(0) - 1) / (r * r * r)) < 1e-11);
        CHECK(std::abs(second_variation_form(g, G, g.xt(0))) < 1e-11);
    }
    auto Q = [](int L) {
        SphereGrid g(L);
        auto G = surface_geometry(g, EmbeddingMap::round(g, 1.0), ads);
        return second_variation_form(g, G, g.xt(0) * g.xt(1));
    };
    const double q16 = Q(16), q24 = Q(24);
    CHECK(q16 > 0.0);
    CHECK(std::abs(q16 - q24) < 1e-9);

    SphereGrid g(8);
    auto X = EmbeddingMap::round(g, 1.0);
    X.tau = 0.1 * g.xt(0);
    CHECK_THROWS_AS(second_variation_form(g, surface_geometry(g, X, ads), g.xt(0)), PreconditionError);
}
