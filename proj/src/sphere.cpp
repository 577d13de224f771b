#include "adsql/sphere.hpp"

#include <gsl/gsl_integration.h>

#include <cmath>
#include <numbers>

namespace adsql {

namespace {

constexpr double kPi = std::numbers::pi;

// Fully normalized associated Legendre functions (no Condon-Shortley phase)
// and their theta-derivatives at one colatitude. lam[l][m], l >= m >= 0.
void legendre_table(int lmax, double th, Mat& lam, Mat& dlam) {
    const double x = std::cos(th), s = std::sin(th);
    lam.setZero(lmax + 1, lmax + 1);
    dlam.setZero(lmax + 1, lmax + 1);
    lam(0, 0) = 1.0 / std::sqrt(4.0 * kPi);
    for (int m = 1; m <= lmax; ++m)
        lam(m, m) = std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * s * lam(m - 1, m - 1);
    for (int m = 0; m < lmax; ++m) lam(m + 1, m) = std::sqrt(2.0 * m + 3.0) * x * lam(m, m);
    for (int m = 0; m <= lmax; ++m) {
        for (int l = m + 2; l <= lmax; ++l) {
            const double a = std::sqrt((4.0 * l * l - 1.0) / (double(l) * l - double(m) * m));
            const double b = std::sqrt((double(l - 1) * (l - 1) - double(m) * m) /
                                       (4.0 * (l - 1) * (l - 1) - 1.0));
            lam(l, m) = a * (x * lam(l - 1, m) - b * lam(l - 2, m));
        }
    }
    for (int l = 0; l <= lmax; ++l) {
        for (int m = 0; m <= l; ++m) {
            double prev = 0.0;
            if (l > m)
                prev = std::sqrt((2.0 * l + 1.0) * (double(l) * l - double(m) * m) / (2.0 * l - 1.0)) *
                       lam(l - 1, m);
            dlam(l, m) = (l * x * lam(l, m) - prev) / s;
        }
    }
}

}  // namespace

SphereGrid::SphereGrid(int lmax, int ntheta, int nphi)
    : lmax_(lmax), nth_(ntheta > 0 ? ntheta : lmax + 1), nph_(nphi > 0 ? nphi : 2 * lmax + 1) {
    if (lmax < 1) throw std::invalid_argument("SphereGrid: lmax must be >= 1");
    if (nth_ < lmax + 1 || nph_ < 2 * lmax + 1)
        throw std::invalid_argument("SphereGrid: too few nodes for lmax");

    th_.resize(nth_);
    Field wth(nth_);
    gsl_integration_glfixed_table* tab = gsl_integration_glfixed_table_alloc(nth_);
    for (int i = 0; i < nth_; ++i) {
        double xi, wi;
        gsl_integration_glfixed_point(-1.0, 1.0, i, &xi, &wi, tab);
        // north to south: theta increasing
        th_(nth_ - 1 - i) = std::acos(xi);
        wth(nth_ - 1 - i) = wi;
    }
    gsl_integration_glfixed_table_free(tab);
    ph_.resize(nph_);
    for (int j = 0; j < nph_; ++j) ph_(j) = 2.0 * kPi * j / nph_;

    const int n = size();
    thq_.resize(n);
    phq_.resize(n);
    sinq_.resize(n);
    w_.resize(n);
    for (int k = 0; k < 3; ++k) {
        x_[k].resize(n);
        xth_[k].resize(n);
        xph_[k].resize(n);
    }
    for (int i = 0; i < nth_; ++i) {
        for (int j = 0; j < nph_; ++j) {
            const int q = i * nph_ + j;
            const double t = th_(i), p = ph_(j);
            const double st = std::sin(t), ct = std::cos(t), sp = std::sin(p), cp = std::cos(p);
            thq_(q) = t;
            phq_(q) = p;
            sinq_(q) = st;
            w_(q) = wth(i) * 2.0 * kPi / nph_;
            x_[0](q) = st * cp;
            x_[1](q) = st * sp;
            x_[2](q) = ct;
            xth_[0](q) = ct * cp;
            xth_[1](q) = ct * sp;
            xth_[2](q) = -st;
            xph_[0](q) = -st * sp;
            xph_[1](q) = st * cp;
            xph_[2](q) = 0.0;
        }
    }

    const int nm = nmodes();
    Y_.resize(n, nm);
    Yth_.resize(n, nm);
    Yph_.resize(n, nm);
    Mat lam, dlam;
    for (int i = 0; i < nth_; ++i) {
        legendre_table(lmax_, th_(i), lam, dlam);
        for (int j = 0; j < nph_; ++j) {
            const int q = i * nph_ + j;
            const double p = ph_(j);
            for (int l = 0; l <= lmax_; ++l) {
                Y_(q, mode(l, 0)) = lam(l, 0);
                Yth_(q, mode(l, 0)) = dlam(l, 0);
                Yph_(q, mode(l, 0)) = 0.0;
                for (int m = 1; m <= l; ++m) {
                    const double c = std::cos(m * p), s = std::sin(m * p), r2 = std::sqrt(2.0);
                    Y_(q, mode(l, m)) = r2 * lam(l, m) * c;
                    Y_(q, mode(l, -m)) = r2 * lam(l, m) * s;
                    Yth_(q, mode(l, m)) = r2 * dlam(l, m) * c;
                    Yth_(q, mode(l, -m)) = r2 * dlam(l, m) * s;
                    Yph_(q, mode(l, m)) = -m * r2 * lam(l, m) * s;
                    Yph_(q, mode(l, -m)) = m * r2 * lam(l, m) * c;
                }
            }
        }
    }
    A_ = Y_.transpose() * w_.matrix().asDiagonal();
    Dth_ = Yth_ * A_;
    Dph_ = Yph_ * A_;
}

Vec SphereGrid::analyze(const Field& f) const {
    check(f);
    return A_ * f.matrix();
}

Field SphereGrid::synthesize(const Vec& c) const {
    if (c.size() != nmodes()) throw DimensionError("synthesize: coefficient count mismatch");
    return (Y_ * c).array();
}

Field SphereGrid::d_theta(const Field& f) const {
    check(f);
    return (Dth_ * f.matrix()).array();
}

Field SphereGrid::d_phi(const Field& f) const {
    check(f);
    return (Dph_ * f.matrix()).array();
}

void SphereGrid::check(const Field& f, const char* what) const {
    if (f.size() != size())
        throw DimensionError(std::string(what) + ": node count " + std::to_string(f.size()) +
                             " does not match grid size " + std::to_string(size()));
}

Field nodewise_det(const SymTensor& g) { return g.tt * g.pp - g.tp * g.tp; }

SurfaceMetric::SurfaceMetric(SymTensor g_) : g(std::move(g_)) {
    det = nodewise_det(g);
    inv = SymTensor{g.pp / det, -g.tp / det, g.tt / det};
}

SurfaceMetric SurfaceMetric::round(const SphereGrid& grid, double radius) {
    const double r2 = radius * radius;
    const Field& s = grid.sin_theta();
    return SurfaceMetric(SymTensor{grid.constant(r2), grid.constant(0.0), r2 * s * s});
}

Field SurfaceMetric::density(const SphereGrid& grid) const {
    grid.check(det, "metric");
    return det.sqrt() / grid.sin_theta();
}

double integrate(const SphereGrid& grid, const Field& f, const SurfaceMetric& metric) {
    grid.check(f, "integrand");
    const Field d = metric.density(grid);
    const Field& w = grid.weights();
    double acc = 0.0;
    for (int q = 0; q < grid.size(); ++q) acc += w(q) * f(q) * d(q);
    return acc;
}

double integrate_round(const SphereGrid& grid, const Field& f) {
    grid.check(f, "integrand");
    const Field& w = grid.weights();
    double acc = 0.0;
    for (int q = 0; q < grid.size(); ++q) acc += w(q) * f(q);
    return acc;
}

OneForm gradient(const SphereGrid& grid, const Field& f) { return {grid.d_theta(f), grid.d_phi(f)}; }

VectorField raise(const SurfaceMetric& m, const OneForm& w) {
    return {m.inv.tt * w.th + m.inv.tp * w.ph, m.inv.tp * w.th + m.inv.pp * w.ph};
}

OneForm lower(const SurfaceMetric& m, const VectorField& v) {
    return {m.g.tt * v.th + m.g.tp * v.ph, m.g.tp * v.th + m.g.pp * v.ph};
}

VectorField gradient_raised(const SphereGrid& grid, const Field& f, const SurfaceMetric& metric) {
    return raise(metric, gradient(grid, f));
}

// Components V^a are not smooth at the poles, so the vector is carried to
// R^3 (W^k = mu V^a d_a x~^k, smooth) before differentiating. Then
// div_round W = sum_k d_a W^k round^{ab} d_b x~^k and div_g V = div_round(mu V)/mu.
Field divergence(const SphereGrid& grid, const VectorField& v, const SurfaceMetric& metric) {
    grid.check(v.th, "vector");
    grid.check(v.ph, "vector");
    const Field mu = metric.density(grid);
    const Field& s = grid.sin_theta();
    Field out = Field::Zero(grid.size());
    for (int k = 0; k < 3; ++k) {
        const Field Wk = mu * (v.th * grid.xt_th(k) + v.ph * grid.xt_ph(k));
        out += grid.d_theta(Wk) * grid.xt_th(k) + grid.d_phi(Wk) * grid.xt_ph(k) / (s * s);
    }
    return out / mu;
}

Field divergence(const SphereGrid& grid, const OneForm& w, const SurfaceMetric& metric) {
    return divergence(grid, raise(metric, w), metric);
}

Field laplacian(const SphereGrid& grid, const Field& f, const SurfaceMetric& metric) {
    return divergence(grid, gradient(grid, f), metric);
}

// eps^{ab} nabla_a w_b = div of V^a = eps^{ab} w_b
Field curl(const SphereGrid& grid, const OneForm& w, const SurfaceMetric& metric) {
    const Field rd = metric.det.sqrt();
    return divergence(grid, VectorField{w.ph / rd, -w.th / rd}, metric);
}

Field pair(const OneForm& w, const VectorField& v) { return w.th * v.th + w.ph * v.ph; }

Field norm2(const SurfaceMetric& m, const OneForm& w) { return pair(w, raise(m, w)); }

OneForm rotate(const SurfaceMetric& m, const OneForm& w) {
    const VectorField up = raise(m, w);
    const Field rd = m.det.sqrt();
    return {rd * up.ph, -rd * up.th};
}

double sup(const Field& f) { return f.size() ? f.abs().maxCoeff() : 0.0; }
double sup(const OneForm& w) { return std::max(sup(w.th), sup(w.ph)); }

}  // namespace adsql
