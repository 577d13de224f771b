#include "adsql/embed.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace adsql {

namespace {

constexpr double kEightPi = 8.0 * std::numbers::pi;

V3 point(const EmbeddingMap& X, int q) { return V3(X.X[0](q), X.X[1](q), X.X[2](q)); }

// d_k g_ij for g = delta + kappa x x^T / Omega^2
M3 metric_derivative(const ReferenceChart& c, const V3& x, int k) {
    const double O2 = 1.0 - c.kappa * x.squaredNorm();
    M3 d = M3::Zero();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            d(i, j) = c.kappa * ((i == k) * x(j) + (j == k) * x(i)) / O2 +
                      2.0 * c.kappa * c.kappa * x(i) * x(j) * x(k) / (O2 * O2);
    return d;
}

struct Tangents {
    std::array<Field, 3> th, ph;
};

Tangents tangents(const SphereGrid& grid, const EmbeddingMap& X) {
    Tangents t;
    for (int i = 0; i < 3; ++i) {
        t.th[i] = grid.d_theta(X.X[i]);
        t.ph[i] = grid.d_phi(X.X[i]);
    }
    return t;
}

// row scaling: quadrature weight and the sin(theta) factors of the phi components
struct RowScale {
    Field tt, tp, pp;
};

RowScale row_scale(const SphereGrid& grid) {
    const Field sw = grid.weights().sqrt();
    const Field& s = grid.sin_theta();
    return {sw, sw / s, sw / (s * s)};
}

Vec weighted_mismatch(const SphereGrid& grid, const SurfaceMetric& pull, const SurfaceMetric& sigma) {
    const int n = grid.size();
    const RowScale w = row_scale(grid);
    Vec F(3 * n);
    F.segment(0, n) = ((pull.g.tt - sigma.g.tt) * w.tt).matrix();
    F.segment(n, n) = ((pull.g.tp - sigma.g.tp) * w.tp).matrix();
    F.segment(2 * n, n) = ((pull.g.pp - sigma.g.pp) * w.pp).matrix();
    return F;
}

EmbeddingMap from_coefficients(const SphereGrid& grid, const Vec& c) {
    const int nm = grid.nmodes();
    EmbeddingMap X{grid.constant(0.0), {}};
    for (int i = 0; i < 3; ++i) X.X[i] = grid.synthesize(c.segment(i * nm, nm));
    return X;
}

// slice Killing fields (c1..c3, j1..j3) along a tau = 0 image
std::vector<std::array<Field, 3>> rigid_fields(const EmbeddingMap& X) {
    const auto K = killing_basis(ReferenceChart::make(ChartKind::AdS));
    std::vector<std::array<Field, 3>> out;
    for (int r = 4; r < 10; ++r) {
        const Vec4F k = killing_on_surface(K[r], X);
        out.push_back({k[1], k[2], k[3]});
    }
    return out;
}

bool convex_image(const SphereGrid& grid, const EmbeddingMap& X) {
    const auto G = surface_geometry(grid, X, ReferenceChart::make(ChartKind::AdS));
    return (nodewise_det(G.hhat) > 0.0).all() && (G.hhat.tt > 0.0).all();
}

std::vector<GaugeMode> gauge_report(const SphereGrid& grid, const EmbeddingMap& X, const EmbeddingMap& guess,
                                    const SurfaceMetric& sigma) {
    static const char* labels[6] = {"c1", "c2", "c3", "j1", "j2", "j3"};
    const ReferenceChart chart = ReferenceChart::make(ChartKind::AdS);
    const auto R = rigid_fields(X);
    const double area = integrate(grid, grid.constant(1.0), sigma);
    std::vector<GaugeMode> out;
    for (int r = 0; r < 6; ++r) {
        Field kd = Field::Zero(grid.size()), kk = Field::Zero(grid.size());
        for (int q = 0; q < grid.size(); ++q) {
            const M3 g = chart.metric(point(X, q));
            const V3 k(R[r][0](q), R[r][1](q), R[r][2](q));
            const V3 d(X.X[0](q) - guess.X[0](q), X.X[1](q) - guess.X[1](q), X.X[2](q) - guess.X[2](q));
            kd(q) = k.dot(g * d);
            kk(q) = k.dot(g * k);
        }
        const double nk = std::sqrt(integrate(grid, kk, sigma));
        out.push_back({labels[r], integrate(grid, kd, sigma) / (nk * std::sqrt(area))});
    }
    return out;
}

}  // namespace

namespace {

SurfaceMetric pullback_from(const EmbeddingMap& X, const Tangents& t, const ReferenceChart& chart) {
    const int n = static_cast<int>(X.X[0].size());
    SymTensor s{Field(n), Field(n), Field(n)};
    for (int q = 0; q < n; ++q) {
        const M3 g = chart.metric(point(X, q));
        const V3 a(t.th[0](q), t.th[1](q), t.th[2](q)), b(t.ph[0](q), t.ph[1](q), t.ph[2](q));
        s.tt(q) = a.dot(g * a);
        s.tp(q) = a.dot(g * b);
        s.pp(q) = b.dot(g * b);
    }
    return SurfaceMetric(s);
}

}  // namespace

SurfaceMetric pullback_metric(const SphereGrid& grid, const EmbeddingMap& X, const ReferenceChart& chart) {
    return pullback_from(X, tangents(grid, X), chart);
}

EmbeddingSolution embed_round(const SphereGrid& grid, double area_radius, const ReferenceChart& chart) {
    if (!(area_radius > 0.0)) throw std::domain_error("embed_round: radius must be positive");
    if (chart.kind() == ChartKind::dS && area_radius >= 0.9)
        throw std::domain_error("embed_round: dS radius too close to the horizon");
    EmbeddingSolution sol;
    sol.embedding = EmbeddingMap::round(grid, area_radius);
    // exact tangents of the coordinate sphere
    Tangents t;
    for (int i = 0; i < 3; ++i) {
        t.th[i] = area_radius * grid.xt_th(i);
        t.ph[i] = area_radius * grid.xt_ph(i);
    }
    sol.residual = metric_mismatch(pullback_from(sol.embedding, t, chart), SurfaceMetric::round(grid, area_radius));
    sol.residual_history = {sol.residual};
    sol.gauge_report = {{"c1", 0}, {"c2", 0}, {"c3", 0}, {"j1", 0}, {"j2", 0}, {"j3", 0}};
    sol.convex = true;
    return sol;
}

Mat embedding_linearization(const SphereGrid& grid, const EmbeddingMap& X) {
    const ReferenceChart chart = ReferenceChart::make(ChartKind::AdS);
    const int n = grid.size(), nm = grid.nmodes();
    const Tangents t = tangents(grid, X);
    const RowScale w = row_scale(grid);
    const Mat& S = grid.synth();
    const Mat St = grid.Dth() * S, Sp = grid.Dph() * S;

    Mat J(3 * n, 3 * nm);
    for (int j = 0; j < 3; ++j) {
        // delta sigma_ab = (g X_a)_j dX^j_b + (g X_b)_j dX^j_a + dX^j (d_j g)(X_a, X_b)
        Field gt(n), gp(n), ctt(n), ctp(n), cpp(n);
        for (int q = 0; q < n; ++q) {
            const V3 x = point(X, q);
            const M3 g = chart.metric(x), dg = metric_derivative(chart, x, j);
            const V3 a(t.th[0](q), t.th[1](q), t.th[2](q)), b(t.ph[0](q), t.ph[1](q), t.ph[2](q));
            gt(q) = (g * a)(j);
            gp(q) = (g * b)(j);
            ctt(q) = a.dot(dg * a);
            ctp(q) = a.dot(dg * b);
            cpp(q) = b.dot(dg * b);
        }
        auto D = [](const Field& f) { return f.matrix().asDiagonal(); };
        J.block(0, j * nm, n, nm) = D(w.tt) * (D(2.0 * gt) * St + D(ctt) * S);
        J.block(n, j * nm, n, nm) = D(w.tp) * (D(gt) * Sp + D(gp) * St + D(ctp) * S);
        J.block(2 * n, j * nm, n, nm) = D(w.pp) * (D(2.0 * gp) * Sp + D(cpp) * S);
    }
    return J;
}

IsometricDirection isometric_completion(const SphereGrid& grid, const EmbeddingMap& X, const Field& dtau,
                                        const std::array<Field, 3>& W) {
    const ReferenceChart chart = ReferenceChart::make(ChartKind::AdS);
    const int n = grid.size(), nm = grid.nmodes();
    grid.check(dtau, "dtau");
    const RowScale w = row_scale(grid);
    const Mat& S = grid.synth();
    const OneForm t = gradient(grid, X.tau), dt = gradient(grid, dtau);

    // sigma = slice pullback - Omega^2 dtau^2: the slice part plus -2 Omega dOmega(dX) tau_a tau_b
    Mat J = embedding_linearization(grid, X);
    for (int j = 0; j < 3; ++j) {
        Field c(n);
        for (int q = 0; q < n; ++q) {
            const V3 x = point(X, q);
            c(q) = -2.0 * chart.Omega(x) * chart.dOmega(x)(j);
        }
        auto D = [](const Field& f) { return f.matrix().asDiagonal(); };
        J.block(0, j * nm, n, nm) += D(w.tt * c * t.th * t.th) * S;
        J.block(n, j * nm, n, nm) += D(w.tp * c * t.th * t.ph) * S;
        J.block(2 * n, j * nm, n, nm) += D(w.pp * c * t.ph * t.ph) * S;
    }
    Field O2(n);
    for (int q = 0; q < n; ++q) O2(q) = 1.0 - chart.kappa * point(X, q).squaredNorm();
    Vec b(3 * n);
    b.segment(0, n) = (w.tt * O2 * 2.0 * t.th * dt.th).matrix();
    b.segment(n, n) = (w.tp * O2 * (t.th * dt.ph + dt.th * t.ph)).matrix();
    b.segment(2 * n, n) = (w.pp * O2 * 2.0 * t.ph * dt.ph).matrix();

    Vec cw(3 * nm);
    for (int i = 0; i < 3; ++i) cw.segment(i * nm, nm) = grid.analyze(W[static_cast<size_t>(i)]);
    // J (cw + d) = b with d of least norm
    const Vec r0 = b - J * cw;
    Eigen::CompleteOrthogonalDecomposition<Mat> cod;
    cod.setThreshold(1e-10);
    cod.compute(J);
    const Vec c = cw + cod.solve(r0);

    IsometricDirection out;
    for (int i = 0; i < 3; ++i) out.dX[static_cast<size_t>(i)] = grid.synthesize(c.segment(i * nm, nm));
    out.residual = (J * c - b).norm() / std::max(b.norm(), (J * cw).norm());
    return out;
}

KernelReport linearization_kernel(const SphereGrid& grid, const EmbeddingMap& X, double rel_threshold) {
    Eigen::BDCSVD<Mat> svd(embedding_linearization(grid, X));
    KernelReport rep;
    rep.singular = svd.singularValues().reverse();
    const double cut = rel_threshold * rep.singular(rep.singular.size() - 1);
    while (rep.dimension < rep.singular.size() && rep.singular(rep.dimension) < cut) ++rep.dimension;
    if (rep.dimension > 0 && rep.dimension < rep.singular.size())
        rep.gap = rep.singular(rep.dimension) / std::max(rep.singular(rep.dimension - 1), 1e-300);
    return rep;
}

EmbeddingSolution embed_newton(const SphereGrid& grid, const SurfaceMetric& sigma, const EmbeddingMap& guess,
                               const NewtonOptions& opt) {
    const ReferenceChart chart = ReferenceChart::make(ChartKind::AdS);
    const int n = grid.size(), nm = grid.nmodes();
    grid.check(sigma.det, "sigma");
    if (sup(guess.tau) != 0.0) throw std::invalid_argument("embed_newton: guess must lie in the static slice");

    Vec c(3 * nm);
    for (int i = 0; i < 3; ++i) c.segment(i * nm, nm) = grid.analyze(guess.X[i]);
    const EmbeddingMap start = from_coefficients(grid, c);

    EmbeddingSolution sol;
    EmbeddingMap X = start;
    Vec F = weighted_mismatch(grid, pullback_metric(grid, X, chart), sigma);
    for (int it = 0;; ++it) {
        const double res = metric_mismatch(pullback_metric(grid, X, chart), sigma);
        sol.residual_history.push_back(res);
        if (res <= opt.tol) {
            sol.embedding = X;
            sol.residual = res;
            sol.iterations = it;
            break;
        }
        if (it == opt.max_iter)
            throw ConvergenceError("embed_newton: no convergence in " + std::to_string(opt.max_iter) + " iterations",
                                   sol.residual_history);

        const Mat J = embedding_linearization(grid, X);
        // gauge rows: step orthogonal to the rigid motions of the current image
        const auto R = rigid_fields(X);
        const double scale = J.colwise().norm().mean();
        Mat A(3 * n + 6, 3 * nm);
        A.topRows(3 * n) = J;
        for (int r = 0; r < 6; ++r) {
            Vec row = Vec::Zero(3 * nm);
            for (int j = 0; j < 3; ++j) {
                Field gk = Field::Zero(n);
                for (int q = 0; q < n; ++q) {
                    const V3 k(R[r][0](q), R[r][1](q), R[r][2](q));
                    gk(q) = (chart.metric(point(X, q)) * k)(j);
                }
                row.segment(j * nm, nm) = grid.synth().transpose() * (grid.weights() * gk).matrix();
            }
            A.row(3 * n + r) = scale * row.transpose() / row.norm();
        }
        Vec b = Vec::Zero(3 * n + 6);
        b.head(3 * n) = -F;

        Eigen::ColPivHouseholderQR<Mat> qr;
        qr.setThreshold(1e-10);
        qr.compute(A);
        if (qr.rank() < A.cols())
            throw RigidityError("embed_newton: linearization is singular beyond the rigid motions");
        const Vec dc = qr.solve(b);

        double step = 1.0;
        const double f0 = F.squaredNorm();
        bool accepted = false;
        for (int h = 0; h < 40; ++h, step *= 0.5) {
            const Vec trial = c + step * dc;
            const EmbeddingMap Xt = from_coefficients(grid, trial);
            const Vec Ft = weighted_mismatch(grid, pullback_metric(grid, Xt, chart), sigma);
            if (Ft.squaredNorm() < f0) {
                c = trial;
                X = Xt;
                F = Ft;
                accepted = true;
                break;
            }
        }
        if (!accepted)
            throw ConvergenceError("embed_newton: damping failed to reduce the residual", sol.residual_history);
    }
    sol.gauge_report = gauge_report(grid, sol.embedding, start, sigma);
    sol.convex = convex_image(grid, sol.embedding);
    return sol;
}

double minkowski(const V4h& a, const V4h& b) { return a(0) * b(0) + a(1) * b(1) + a(2) * b(2) - a(3) * b(3); }

V4h hyperboloid_base(const V3& x) { return V4h(x(0), x(1), x(2), std::sqrt(1.0 + x.squaredNorm())); }

// chord form: <a - b, a - b> = 4 sinh^2(d/2), accurate for nearby points
double hyperbolic_distance(const V4h& a, const V4h& b) {
    const V4h d = a - b;
    return 2.0 * std::asinh(0.5 * std::sqrt(std::max(0.0, minkowski(d, d))));
}

namespace {

Field energy_gap(const SphereGrid& grid, const PhysicalSurfaceData& data, const EmbeddingMap& X,
                 ReferenceSurfaceGeometry& G) {
    if (sup(X.tau) != 0.0) throw PreconditionError("observer optimization needs a static-slice embedding");
    G = checked_geometry(grid, data, X);
    return G.H0_norm - data.H_norm;
}

V4h moment(const SphereGrid& grid, const ReferenceSurfaceGeometry& G, const Field& gap) {
    V4h Z;
    for (int k = 0; k < 3; ++k) Z(k) = integrate(grid, G.X.X[k] * gap, G.sigma) / kEightPi;
    Z(3) = integrate(grid, G.Omega * gap, G.sigma) / kEightPi;
    return Z;
}

V4h normalize(const V4h& v) { return v / std::sqrt(-minkowski(v, v)); }

}  // namespace

V4h observer_moment(const SphereGrid& grid, const PhysicalSurfaceData& data, const EmbeddingMap& X) {
    ReferenceSurfaceGeometry G;
    const Field gap = energy_gap(grid, data, X, G);
    return moment(grid, G, gap);
}

double observer_objective(const SphereGrid& grid, const PhysicalSurfaceData& data, const EmbeddingMap& X,
                          const V4h& P) {
    return -minkowski(observer_moment(grid, data, X), P);
}

ObserverOptimum optimize_observer(const SphereGrid& grid, const PhysicalSurfaceData& data,
                                  const EmbeddingSolution& X0) {
    ReferenceSurfaceGeometry G;
    const Field gap = energy_gap(grid, data, X0.embedding, G);
    const double scale = sup(G.H0_norm);
    ObserverOptimum out;
    if (sup(gap) <= 1e-12 * scale) return out;
    if (gap.minCoeff() < -1e-12 * scale)
        throw PreconditionError("H0 - |H| changes sign; the objective need not be convex");

    const V4h Z = moment(grid, G, gap);
    auto F = [&](const V4h& P) { return -minkowski(Z, P); };
    // Riemannian gradient on the hyperboloid; along geodesics F'' = F, so Newton is v = -grad / F
    auto grad = [&](const V4h& P) -> V4h { return -Z - minkowski(Z, P) * P; };

    V4h P(0, 0, 0, 1);
    double f = F(P);
    V4h gr = grad(P);
    int it = 0;
    for (; it < 100; ++it) {
        const double gn = std::sqrt(std::max(0.0, minkowski(gr, gr)));
        if (gn <= 1e-13 * std::max(1.0, f)) break;
        const V4h v = -gr / f;
        double t = 1.0;
        bool moved = false;
        for (int h = 0; h < 60; ++h, t *= 0.5) {
            const V4h Pt = normalize(P + t * v);
            const double ft = F(Pt);
            if (ft <= f - 1e-4 * t * gn * gn / f) {
                P = Pt;
                f = ft;
                moved = true;
                break;
            }
        }
        gr = grad(P);
        if (!moved) break;
    }
    out.hyperboloid = P;
    out.base_point = P.head<3>();
    out.energy = f;
    out.gradient_norm = std::sqrt(std::max(0.0, minkowski(gr, gr)));
    out.iterations = it;
    if (!(out.gradient_norm <= 1e-10))
        throw ConvergenceError("optimize_observer: gradient did not vanish", {out.gradient_norm});
    return out;
}

}  // namespace adsql
