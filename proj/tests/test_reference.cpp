#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "adsql/reference.hpp"

using namespace adsql;

namespace {

// 4-metric of the static chart written out independently of the library
Eigen::Matrix4d metric4(double kappa, const V4& p) {
    const V3 x = p.tail<3>();
    const double O2 = 1.0 - kappa * x.squaredNorm();
    Eigen::Matrix4d g = Eigen::Matrix4d::Zero();
    g(0, 0) = -O2;
    g.bottomRightCorner<3, 3>() = M3::Identity() + kappa * x * x.transpose() / O2;
    return g;
}

template <class F>
auto d4(F f, const V4& p, int mu, double h = 1e-3) {
    V4 e = V4::Zero();
    e(mu) = h;
    return (8.0 * (f(p + e) - f(p - e)) - (f(p + 2 * e) - f(p - 2 * e))) / (12.0 * h);
}

double killing_residual(const KillingField& K, const V4& p) {
    auto Kf = [&](const V4& q) -> V4 { return K.eval(q(0), q.tail<3>()); };
    auto gf = [&](const V4& q) -> Eigen::Matrix4d { return metric4(-1.0, q); };
    const Eigen::Matrix4d g = gf(p);
    const V4 k = Kf(p);
    Eigen::Matrix4d L = Eigen::Matrix4d::Zero();
    Eigen::Matrix4d dK;  // dK(rho, mu) = d_mu K^rho
    for (int mu = 0; mu < 4; ++mu) dK.col(mu) = d4(Kf, p, mu);
    for (int rho = 0; rho < 4; ++rho) L += k(rho) * d4(gf, p, rho);
    L += dK.transpose() * g + g * dK;
    return L.cwiseAbs().maxCoeff();
}

// mean curvature vector as the trace of the Hessian of the coordinate
// functions: Delta_sigma X^mu + sigma^{ab} Gamma^mu_{nu la} X^nu_a X^la_b
Vec4F mean_curvature_oracle(const SphereGrid& grid, const EmbeddingMap& X, double kappa,
                            const SurfaceMetric& sigma) {
    std::array<const Field*, 4> c{&X.tau, &X.X[0], &X.X[1], &X.X[2]};
    std::array<OneForm, 4> d;
    Vec4F H;
    for (int mu = 0; mu < 4; ++mu) {
        d[mu] = gradient(grid, *c[mu]);
        H[mu] = laplacian(grid, *c[mu], sigma);
    }
    for (int q = 0; q < grid.size(); ++q) {
        V4 p(X.tau(q), X.X[0](q), X.X[1](q), X.X[2](q));
        // Christoffels by differentiating the independent metric
        Eigen::Matrix4d gi = metric4(kappa, p).inverse();
        std::array<Eigen::Matrix4d, 4> dg;
        for (int m = 0; m < 4; ++m) dg[m] = d4([&](const V4& y) { return metric4(kappa, y); }, p, m, 1e-4);
        V4 a(d[0].th(q), d[1].th(q), d[2].th(q), d[3].th(q));
        V4 b(d[0].ph(q), d[1].ph(q), d[2].ph(q), d[3].ph(q));
        for (int mu = 0; mu < 4; ++mu) {
            double acc = 0.0;
            for (int nu = 0; nu < 4; ++nu)
                for (int la = 0; la < 4; ++la) {
                    double G = 0.0;
                    for (int r = 0; r < 4; ++r)
                        G += 0.5 * gi(mu, r) * (dg[nu](r, la) + dg[la](r, nu) - dg[r](nu, la));
                    acc += G * (sigma.inv.tt(q) * a(nu) * a(la) + 2 * sigma.inv.tp(q) * a(nu) * b(la) +
                                sigma.inv.pp(q) * b(nu) * b(la));
                }
            H[mu](q) += acc;
        }
    }
    return H;
}

}  // namespace

TEST_CASE("static charts") {
    auto ads = ReferenceChart::make(ChartKind::AdS);
    auto ds = ReferenceChart::make(ChartKind::dS);
    CHECK(ads.Omega(V3::Zero()) == 1.0);
    CHECK(ds.Omega(V3::Zero()) == 1.0);
    CHECK(std::abs(ads.Omega(V3(0, 0, 2)) - std::sqrt(5.0)) < 1e-15);
    CHECK(std::abs(ds.Omega(V3(0.3, 0.4, 0)) - std::sqrt(0.75)) < 1e-15);
    CHECK_THROWS_AS(ds.Omega(V3(1.0, 0.5, 0)), EmbeddingError);

    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    for (int trial = 0; trial < 10; ++trial) {
        V3 x(u(rng), u(rng), u(rng));
        CHECK(ads.static_residual(x) < 1e-12);
        CHECK(ds.static_residual(x) < 1e-12);
        // independent oracle: finite-difference Hessian and Christoffels from the metric
        for (const auto& ch : {ads, ds}) {
            auto Of = [&](const V4& p) { return ch.Omega(p.tail<3>()); };
            auto gf = [&](const V4& p) { return metric4(ch.kappa, p); };
            V4 p(0, x(0), x(1), x(2));
            M3 R;
            std::array<Eigen::Matrix4d, 4> dg;
            for (int m = 0; m < 4; ++m) dg[m] = d4(gf, p, m);
            const Eigen::Matrix4d gi = gf(p).inverse();
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) {
                    double hij = d4([&](const V4& y) { return d4(Of, y, i + 1); }, p, j + 1, 1e-2);
                    for (int l = 0; l < 3; ++l) {
                        double G = 0.0;
                        for (int r = 1; r < 4; ++r)
                            G += 0.5 * gi(l + 1, r) * (dg[i + 1](r, j + 1) + dg[j + 1](r, i + 1) - dg[r](i + 1, j + 1));
                        hij -= G * d4(Of, p, l + 1);
                    }
                    R(i, j) = hij + ch.kappa * ch.Omega(x) * gf(p)(i + 1, j + 1);
                }
            CHECK(R.cwiseAbs().maxCoeff() < 1e-6);
        }
    }
}

TEST_CASE("Killing basis") {
    auto ads = ReferenceChart::make(ChartKind::AdS);
    auto K = killing_basis(ads);
    REQUIRE(K.size() == 10);
    CHECK_THROWS_AS(killing_basis(ReferenceChart::make(ChartKind::dS)), UnsupportedError);

    const V3 x(0.3, -1.2, 0.7);
    const double O = ads.Omega(x);
    CHECK((K[0].eval(0.0, x) - V4(1, 0, 0, 0)).norm() < 1e-15);
    for (int i = 0; i < 3; ++i) {
        const V4 p = K[1 + i].eval(0.0, x), c = K[4 + i].eval(0.0, x);
        CHECK(p.tail<3>().norm() < 1e-15);        // normal to the slice
        CHECK(std::abs(c(0)) < 1e-15);            // tangent to the slice
        CHECK(std::abs(c(1 + i) - O) < 1e-14);
        // <dt, p^i> = -Omega y^i with signature (-,+,+,+,-)
        CHECK(std::abs(ads.inner(x, K[0].eval(0.0, x), p) + O * x(i)) < 1e-14);
    }

    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        V4 p(u(rng), u(rng), u(rng), u(rng));
        for (const auto& k : K) worst = std::max(worst, killing_residual(k, p));
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("observer conjugation") {
    double lam = 0;
    M5 L = conjugate_to_time(time_field(), lam);
    CHECK(std::abs(lam - 1.0) < 1e-14);
    CHECK((L - M5::Identity()).cwiseAbs().maxCoeff() < 1e-12);

    auto K = killing_basis(ReferenceChart::make(ChartKind::AdS));
    KillingField gen = K[4] * 0.4 + K[2] * 0.3 + K[9] * 0.2;
    M5 L0 = isometry_exp(gen, 1.0);
    KillingField T{"T", L0 * (2.0 * time_field().M) * L0.inverse()};
    L = conjugate_to_time(T, lam);
    CHECK(std::abs(lam - 2.0) < 1e-12);
    CHECK((L * T.M * L.inverse() - 2.0 * time_field().M).cwiseAbs().maxCoeff() < 1e-11);
    CHECK((L.transpose() * eta5() * L - eta5()).cwiseAbs().maxCoeff() < 1e-11);
    CHECK(L.determinant() == doctest::Approx(1.0));

    CHECK_THROWS_AS(conjugate_to_time(K[9], lam), ObserverError);
    CHECK_THROWS_AS(conjugate_to_time(time_field() * -1.0, lam), ObserverError);
    CHECK_THROWS_AS(conjugate_to_time(K[1], lam), ObserverError);
}

TEST_CASE("round spheres") {
    SphereGrid g(12);
    auto ads = ReferenceChart::make(ChartKind::AdS);
    for (double r : {0.5, 1.0, 2.0}) {
        auto G = surface_geometry(g, EmbeddingMap::round(g, r), ads);
        const double H = 2 * std::sqrt(1 + r * r) / r;
        CHECK(sup(G.H0_norm - H) < 1e-12);
        CHECK(sup(G.Hhat - H) < 1e-12);
        CHECK((G.H0_e3 < 0).all());
        CHECK(sup(G.alpha_H0) < 1e-12);
        CHECK(sup(G.theta) < 1e-14);
        CHECK(sup(G.B) < 1e-14);
        CHECK(sup(G.A - std::sqrt(1 + r * r)) < 1e-14);
        CHECK(sup(G.e3_Omega - r) < 1e-12);
        CHECK(conservation_residual(g, G) < 1e-12);
        CHECK(projection_residuals(g, G).max() < 1e-10);
    }
    auto G2 = surface_geometry(g, EmbeddingMap::round(g, 2.0), ads);
    CHECK(std::abs(G2.H0_norm(0) - std::sqrt(5.0)) < 1e-12);

    // potential identity on the unit sphere: (Delta + 2 kappa) Omega = -2 sqrt 2 = -H0 e3(Omega)
    auto G1 = surface_geometry(g, EmbeddingMap::round(g, 1.0), ads);
    CHECK(sup(2 * ads.kappa * G1.Omega + 2 * std::sqrt(2.0)) < 1e-14);
    CHECK(sup(G1.H0_norm * G1.e3_Omega - 2 * std::sqrt(2.0)) < 1e-12);

    // dS: H = 2 sqrt(1 - r^2) / r
    auto ds = ReferenceChart::make(ChartKind::dS);
    auto Gd = surface_geometry(g, EmbeddingMap::round(g, 0.5), ds);
    CHECK(sup(Gd.H0_norm - 2 * std::sqrt(0.75) / 0.5) < 1e-12);
    CHECK(projection_residuals(g, Gd).max() < 1e-10);
}

TEST_CASE("perturbed graph: mean curvature against an independent oracle") {
    SphereGrid g(16);
    auto ads = ReferenceChart::make(ChartKind::AdS);
    auto X = EmbeddingMap::round(g, 2.0);
    X.tau = 0.1 * g.xt(0);
    auto G = surface_geometry(g, X, ads);
    // projection is still the coordinate sphere
    CHECK(sup(G.Hhat - std::sqrt(5.0)) < 1e-10);
    Vec4F H = mean_curvature_oracle(g, X, ads.kappa, G.sigma);
    double e3 = 0, e4 = 0;
    for (int q = 0; q < g.size(); ++q) {
        V3 x(X.X[0](q), X.X[1](q), X.X[2](q));
        V4 h(H[0](q), H[1](q), H[2](q), H[3](q));
        e3 = std::max(e3, std::abs(ads.inner(x, h, V4(G.e3[0](q), G.e3[1](q), G.e3[2](q), G.e3[3](q))) - G.H0_e3(q)));
        e4 = std::max(e4, std::abs(ads.inner(x, h, V4(G.e4[0](q), G.e4[1](q), G.e4[2](q), G.e4[3](q))) - G.H0_e4(q)));
    }
    CHECK(e3 < 1e-7);
    CHECK(e4 < 1e-7);
    auto R = projection_residuals(g, G);
    CHECK(R.mean_curvature_projection < 1e-8);
    CHECK(R.max() < 1e-8);
    CHECK(R.potential_laplacian == -1.0);
}

TEST_CASE("conservation law converges spectrally") {
    auto ads = ReferenceChart::make(ChartKind::AdS);
    auto res = [&](int L, bool quadratic) {
        SphereGrid g(L);
        auto X = EmbeddingMap::round(g, 2.0);
        X.tau = quadratic ? Field(0.2 * g.harmonic(2, 1)) : Field(0.2 * g.xt(0));
        return conservation_residual(g, surface_geometry(g, X, ads));
    };
    // the linear graph is resolved to rounding already at lmax = 8
    CHECK(res(16, false) < 1e-8);
    CHECK(res(8, false) < 1e-12);
    const double r8 = res(8, true), r16 = res(16, true);
    CHECK(r16 < 1e-8);
    CHECK(r8 / r16 >= 1e3);
}

TEST_CASE("mean curvature gauge relations") {
    auto ads = ReferenceChart::make(ChartKind::AdS);
    auto gauge = [&](int L) {
        SphereGrid g(L);
        auto X = EmbeddingMap::round(g, 2.0);
        X.tau = 0.2 * g.harmonic(2, 1);
        return projection_residuals(g, surface_geometry(g, X, ads)).gauge_max();
    };
    const double r12 = gauge(12), r16 = gauge(16), r24 = gauge(24);
    CHECK(r16 < 1e-6);
    CHECK(r24 < 1e-10);
    CHECK(r12 / r24 > 1e4);
}

TEST_CASE("isometry invariance of |H0| and alpha_H0") {
    SphereGrid g(16);
    auto ads = ReferenceChart::make(ChartKind::AdS);
    auto K = killing_basis(ads);
    auto X = EmbeddingMap::round(g, 1.5, V3(0.1, 0, -0.2));
    X.tau = 0.05 * g.xt(0) * g.xt(2);
    auto G = surface_geometry(g, X, ads);
    for (int idx : {9, 4, 2}) {  // rotation, slice translation, boost
        auto Y = apply_isometry(isometry_exp(K[idx], 0.3), X);
        auto GY = surface_geometry(g, Y, ads);
        CHECK(sup(GY.H0_norm - G.H0_norm) < 1e-9);
        CHECK(one_form_sup(G.sigma, OneForm{GY.alpha_H0.th - G.alpha_H0.th, GY.alpha_H0.ph - G.alpha_H0.ph}) < 1e-9);
        CHECK(sup(GY.sigma.g.tt - G.sigma.g.tt) < 1e-11);
    }
}

TEST_CASE("degenerate input") {
    SphereGrid g(8);
    auto ads = ReferenceChart::make(ChartKind::AdS);
    auto X = EmbeddingMap::round(g, 1.0);
    X.tau = 3.0 * g.xt(0);  // steep enough to make the induced metric Lorentzian
    CHECK_THROWS_AS(surface_geometry(g, X, ads), EmbeddingError);
    SphereGrid h(10);
    CHECK_THROWS_AS(surface_geometry(h, X, ads), DimensionError);
}
