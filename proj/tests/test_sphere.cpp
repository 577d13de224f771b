#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "adsql/sphere.hpp"

using namespace adsql;
constexpr double pi = std::numbers::pi;

namespace {

// a smooth non-round metric: pullback of the ellipsoid diag(1.2, 0.9, 1.1) scaled
SurfaceMetric ellipsoid_metric(const SphereGrid& g) {
    const double a[3] = {1.2, 0.9, 1.1};
    Field tt = Field::Zero(g.size()), tp = tt, pp = tt;
    for (int k = 0; k < 3; ++k) {
        tt += a[k] * a[k] * g.xt_th(k) * g.xt_th(k);
        tp += a[k] * a[k] * g.xt_th(k) * g.xt_ph(k);
        pp += a[k] * a[k] * g.xt_ph(k) * g.xt_ph(k);
    }
    return SurfaceMetric({tt, tp, pp});
}

}  // namespace

TEST_CASE("grid sizes and total weight") {
    SphereGrid g(16);
    CHECK(g.ntheta() == 17);
    CHECK(g.nphi() == 33);
    CHECK(std::abs(g.weights().sum() - 4 * pi) < 1e-13);
    CHECK_THROWS_AS(SphereGrid(8, 5, 20), std::invalid_argument);
}

TEST_CASE("harmonics are orthonormal under the quadrature") {
    SphereGrid g(12);
    const Mat& Y = g.synth();
    Mat G = Y.transpose() * g.weights().matrix().asDiagonal() * Y;
    CHECK((G - Mat::Identity(G.rows(), G.cols())).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("integrals against the round metric") {
    SphereGrid g(16);
    auto round = SurfaceMetric::round(g);
    CHECK(std::abs(integrate(g, g.constant(1.0), round) - 4 * pi) < 1e-13);
    CHECK(std::abs(integrate(g, g.xt(0), round)) < 1e-14);
    CHECK(std::abs(integrate(g, g.xt(0) * g.xt(0), round) - 4 * pi / 3) < 1e-13);
    auto r2 = SurfaceMetric::round(g, 2.0);
    CHECK(std::abs(integrate(g, g.constant(1.0), r2) - 16 * pi) < 1e-12);
    SphereGrid other(8);
    CHECK_THROWS_AS(integrate(g, other.constant(1.0), round), DimensionError);
}

TEST_CASE("gradient: constants, chain rule, finite differences") {
    SphereGrid g(16);
    CHECK(sup(gradient(g, g.constant(3.0))) < 1e-12);

    const double r = 1.7;
    auto m = SurfaceMetric::round(g, r);
    const Field& x = g.xt(0);
    Field expect = (1.0 - x * x) / (r * r);
    CHECK(sup(norm2(m, gradient(g, x)) - expect) < 1e-12);

    // f = exp(sin th cos ph) + cos^2 th: compare d/dtheta against central differences
    auto f_of = [](double t, double p) { return std::exp(std::sin(t) * std::cos(p)) + std::cos(t) * std::cos(t); };
    Field f(g.size());
    for (int q = 0; q < g.size(); ++q) f(q) = f_of(g.theta(q), g.phi(q));
    OneForm df = gradient(g, f);
    const double h = 1e-4;
    double worst = 0.0;
    for (int q = 0; q < g.size(); ++q) {
        const double fd = (f_of(g.theta(q) + h, g.phi(q)) - f_of(g.theta(q) - h, g.phi(q))) / (2 * h);
        const double fdp = (f_of(g.theta(q), g.phi(q) + h) - f_of(g.theta(q), g.phi(q) - h)) / (2 * h);
        worst = std::max({worst, std::abs(fd - df.th(q)), std::abs(fdp - df.ph(q))});
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("laplacian eigenvalues on round spheres") {
    SphereGrid g(16);
    for (double r : {1.0, 2.5}) {
        auto m = SurfaceMetric::round(g, r);
        for (int l = 0; l <= 6; ++l) {
            for (int mm : {-l, 0, l}) {
                Field Y = g.harmonic(l, mm);
                Field L = laplacian(g, Y, m);
                CHECK(sup(L + l * (l + 1) / (r * r) * Y) < 1e-10);
            }
        }
    }
    auto unit = SurfaceMetric::round(g);
    CHECK(sup(divergence(g, gradient(g, g.xt(0)), unit) + 2 * g.xt(0)) < 1e-12);
    CHECK(sup(divergence(g, OneForm{g.constant(0), g.constant(0)}, unit)) == 0.0);
}

TEST_CASE("divergence theorem and adjointness for a non-round metric") {
    SphereGrid g(20);
    auto m = ellipsoid_metric(g);
    Field f = g.xt(0) * g.xt(1) + 0.3 * g.xt(2);
    Field u = (g.xt(2) * g.xt(2) + 0.5 * g.xt(0)).exp();
    OneForm w = gradient(g, u);
    w.th *= (1.0 + 0.2 * g.xt(1));
    w.ph *= (1.0 + 0.2 * g.xt(1));
    CHECK(std::abs(integrate(g, divergence(g, w, m), m)) < 1e-10);
    const double lhs = integrate(g, f * divergence(g, w, m), m);
    const double rhs = -integrate(g, pair(gradient(g, f), raise(m, w)), m);
    CHECK(std::abs(lhs - rhs) < 1e-10);
}

TEST_CASE("curl") {
    SphereGrid g(16);
    auto unit = SurfaceMetric::round(g);
    auto m = ellipsoid_metric(g);
    Field u = (g.xt(0) * g.xt(2)).exp();
    CHECK(sup(curl(g, gradient(g, u), m)) < 1e-10);
    CHECK(sup(curl(g, OneForm{g.constant(0), g.constant(0)}, unit)) == 0.0);
    // curl of the rotated gradient is minus the laplacian: eps^{ab} eps_{bc} = -delta^a_c
    OneForm w = rotate(unit, gradient(g, g.xt(0)));
    CHECK(sup(curl(g, w, unit) - 2 * g.xt(0)) < 1e-12);
    // the contraction eps^{ab} nabla_b w_a has the opposite sign
    CHECK(sup(-curl(g, w, unit) + 2 * g.xt(0)) < 1e-12);
}

TEST_CASE("spectral convergence of the laplacian of an analytic field") {
    auto err = [](int lmax) {
        SphereGrid g(lmax);
        auto m = SurfaceMetric::round(g);
        // Delta e^{x} = e^x (1 - x^2) - 2 x e^x on the unit sphere
        const Field& x = g.xt(0);
        Field f = x.exp();
        Field exact = f * (1.0 - x * x) - 2.0 * x * f;
        return sup(laplacian(g, f, m) - exact);
    };
    const double e8 = err(8), e16 = err(16);
    CHECK(e16 < 1e-10);
    CHECK(e8 / e16 > 100.0);
}
