#include "adsql/qle.hpp"

#include <cmath>
#include <numbers>

namespace adsql {

namespace {

constexpr double kEightPi = 8.0 * std::numbers::pi;

// <K, X_a> along the image, as a one-form
OneForm tangential(const ReferenceSurfaceGeometry& G, const Vec4F& K) {
    const int n = static_cast<int>(K[0].size());
    OneForm out{Field(n), Field(n)};
    for (int q = 0; q < n; ++q) {
        const V3 x(G.X.X[0](q), G.X.X[1](q), G.X.X[2](q));
        const V4 k(K[0](q), K[1](q), K[2](q), K[3](q));
        out.th(q) = G.chart.inner(x, k, V4(G.X_th[0](q), G.X_th[1](q), G.X_th[2](q), G.X_th[3](q)));
        out.ph(q) = G.chart.inner(x, k, V4(G.X_ph[0](q), G.X_ph[1](q), G.X_ph[2](q), G.X_ph[3](q)));
    }
    return out;
}

Field self_inner(const ReferenceSurfaceGeometry& G, const Vec4F& K) {
    const int n = static_cast<int>(K[0].size());
    Field out(n);
    for (int q = 0; q < n; ++q) {
        const V3 x(G.X.X[0](q), G.X.X[1](q), G.X.X[2](q));
        const V4 k(K[0](q), K[1](q), K[2](q), K[3](q));
        out(q) = G.chart.inner(x, k, k);
    }
    return out;
}

void require_future_timelike(const ReferenceSurfaceGeometry& G, const Vec4F& K) {
    if ((self_inner(G, K) >= 0.0).any()) throw ObserverError("observer is not timelike along the surface");
    if ((K[0] <= 0.0).any()) throw ObserverError("observer is not future directed along the surface");
}

// asinh(rho B / (|H0||H|))
Field gauge_potential(const ReferenceSurfaceGeometry& G, const PhysicalSurfaceData& data, const Field& rho) {
    return asinh_field(rho * G.B / (G.H0_norm * data.H_norm));
}

// one invariant-form integrand: sqrt(N^2 H^2 + d^2) - d asinh(d / (H N)) + alpha(T^T)
Field invariant_integrand(const Field& N, const Field& H, const Field& d, const Field& alphaT) {
    return (N * N * H * H + d * d).sqrt() - d * asinh_field(d / (H * N)) + alphaT;
}

}  // namespace

double metric_mismatch(const SurfaceMetric& a, const SurfaceMetric& b) {
    double worst = 0.0;
    for (int q = 0; q < a.det.size(); ++q) {
        Eigen::Matrix2d A, B;
        A << a.g.tt(q), a.g.tp(q), a.g.tp(q), a.g.pp(q);
        B << b.g.tt(q), b.g.tp(q), b.g.tp(q), b.g.pp(q);
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::Matrix2d> es(A - B, B, Eigen::EigenvaluesOnly);
        worst = std::max(worst, es.eigenvalues().cwiseAbs().maxCoeff());
    }
    return worst;
}

ReferenceSurfaceGeometry checked_geometry(const SphereGrid& grid, const PhysicalSurfaceData& data,
                                          const EmbeddingMap& X, const QleOptions& opt) {
    grid.check(data.H_norm, "|H|");
    if ((data.H_norm <= 0.0).any()) throw DegenerateDataError("|H| must be positive");
    ReferenceSurfaceGeometry G = surface_geometry(grid, X, ReferenceChart::make(ChartKind::AdS));
    const double mis = metric_mismatch(G.sigma, data.sigma);
    if (!(mis <= opt.isometry_tol))
        throw PreconditionError("embedding is not isometric to the data metric (mismatch " + std::to_string(mis) + ")");
    return G;
}

double energy_static_observer(const SphereGrid& grid, const PhysicalSurfaceData& data,
                              const ReferenceSurfaceGeometry& G) {
    const Field& Om = G.Omega;
    const Field& H = data.H_norm;
    const Field ref = Om * G.Hhat * G.w;
    const Field phys = (G.A * G.A * H * H + G.B * G.B).sqrt() - G.B * asinh_field(G.B / (H * G.A)) -
                       Om * Om * pair(data.alpha_H, G.grad_tau);
    return (integrate(grid, ref, G.sigma) - integrate(grid, phys, G.sigma)) / kEightPi;
}

double quasilocal_energy(const SphereGrid& grid, const PhysicalSurfaceData& data, const EmbeddingMap& X,
                         const KillingField& T0, const QleOptions& opt) {
    double lambda = 1.0;
    const M5 L = conjugate_to_time(T0, lambda);
    {
        const ReferenceSurfaceGeometry G0 = checked_geometry(grid, data, X, opt);
        require_future_timelike(G0, killing_on_surface(T0, X));
    }
    const EmbeddingMap Y = apply_isometry(L, X);
    return lambda * energy_static_observer(grid, data, checked_geometry(grid, data, Y, opt));
}

double quasilocal_energy_invariant(const SphereGrid& grid, const PhysicalSurfaceData& data, const EmbeddingMap& X,
                                   const KillingField& T0, const QleOptions& opt) {
    const ReferenceSurfaceGeometry G = checked_geometry(grid, data, X, opt);
    const Vec4F T = killing_on_surface(T0, X);
    require_future_timelike(G, T);
    const OneForm Tt = tangential(G, T);
    const Field N = (-self_inner(G, T) + norm2(G.sigma, Tt)).sqrt();
    const VectorField Tup = raise(G.sigma, Tt);
    const Field d = divergence(grid, Tup, G.sigma);
    const Field ref = invariant_integrand(N, G.H0_norm, d, pair(G.alpha_H0, Tup));
    const Field phys = invariant_integrand(N, data.H_norm, d, pair(data.alpha_H, Tup));
    return (integrate(grid, ref, G.sigma) - integrate(grid, phys, G.sigma)) / kEightPi;
}

DensityPair density_pair(const SphereGrid& grid, const PhysicalSurfaceData& data, const ReferenceSurfaceGeometry& G) {
    const Field& H = data.H_norm;
    const Field& H0 = G.H0_norm;
    const Field A2 = G.A * G.A, B2 = G.B * G.B;
    // conjugate form: no cancellation when |H| is close to |H0|
    DensityPair d;
    d.rho = (H0 * H0 - H * H) / ((A2 * H0 * H0 + B2).sqrt() + (A2 * H * H + B2).sqrt());
    const OneForm dg = gradient(grid, gauge_potential(G, data, d.rho));
    const Field O2 = G.Omega * G.Omega;
    d.j.th = d.rho * O2 * G.dtau.th - dg.th - G.alpha_H0.th + data.alpha_H.th;
    d.j.ph = d.rho * O2 * G.dtau.ph - dg.ph - G.alpha_H0.ph + data.alpha_H.ph;
    return d;
}

DensityPair density_pair(const SphereGrid& grid, const PhysicalSurfaceData& data, const EmbeddingMap& X,
                         const QleOptions& opt) {
    return density_pair(grid, data, checked_geometry(grid, data, X, opt));
}

double energy_from_densities(const SphereGrid& grid, const PhysicalSurfaceData& data,
                             const ReferenceSurfaceGeometry& G, const DensityPair& d) {
    const Field O2 = G.Omega * G.Omega;
    const Field gt2 = pair(G.dtau, G.grad_tau);
    const Field f = d.rho * (O2 + O2 * O2 * gt2) + G.B * gauge_potential(G, data, d.rho) -
                    O2 * pair(G.alpha_H0, G.grad_tau) + O2 * pair(data.alpha_H, G.grad_tau);
    return integrate(grid, f, G.sigma) / kEightPi;
}

double conserved_quantity(const SphereGrid& grid, const PhysicalSurfaceData& data, const EmbeddingMap& X,
                          const KillingField& T0, const KillingField& K, const QleOptions& opt) {
    double lambda = 1.0;
    const M5 L = conjugate_to_time(T0, lambda);
    if (std::abs(lambda - 1.0) > 1e-10) throw ObserverError("observer must be an isometric image of d/dt");
    const EmbeddingMap Y = apply_isometry(L, X);
    const ReferenceSurfaceGeometry G = checked_geometry(grid, data, Y, opt);
    const KillingField KY{K.label, L * K.M * L.inverse()};
    const Vec4F k = killing_on_surface(KY, Y);
    const DensityPair d = density_pair(grid, data, G);
    // <K, d/dt> = -Omega^2 K^t
    const Field kt = -G.Omega * G.Omega * k[0];
    const Field f = kt * d.rho + pair(d.j, raise(G.sigma, tangential(G, k)));
    return -integrate(grid, f, G.sigma) / kEightPi;
}

OptimalResidual optimal_embedding_residual(const SphereGrid& grid, const PhysicalSurfaceData& data,
                                           const ReferenceSurfaceGeometry& G) {
    const DensityPair d = density_pair(grid, data, G);
    const Field& Om = G.Omega;
    const Field O2 = Om * Om;
    const Field psi = gauge_potential(G, data, d.rho);
    const OneForm dpsi = gradient(grid, psi);
    const OneForm v{O2 * dpsi.th - d.rho * O2 * O2 * G.dtau.th + O2 * (G.alpha_H0.th - data.alpha_H.th),
                    O2 * dpsi.ph - d.rho * O2 * O2 * G.dtau.ph + O2 * (G.alpha_H0.ph - data.alpha_H.ph)};
    OptimalResidual r;
    r.res_tau = divergence(grid, v, G.sigma);
    const Field gt2 = pair(G.dtau, G.grad_tau);
    r.res_X = d.rho * Om * (1.0 + 2.0 * O2 * gt2) - 2.0 * Om * pair(dpsi, G.grad_tau) +
              2.0 * Om * pair(OneForm{data.alpha_H.th - G.alpha_H0.th, data.alpha_H.ph - G.alpha_H0.ph}, G.grad_tau);
    return r;
}

OptimalResidual optimal_embedding_residual(const SphereGrid& grid, const PhysicalSurfaceData& data,
                                           const EmbeddingMap& X, const QleOptions& opt) {
    return optimal_embedding_residual(grid, data, checked_geometry(grid, data, X, opt));
}

double first_variation_pairing(const SphereGrid& grid, const ReferenceSurfaceGeometry& G, const OptimalResidual& r,
                               const Field& dtau, const std::array<Field, 3>& dX) {
    Field dOmega = Field::Zero(grid.size());
    for (int q = 0; q < grid.size(); ++q) {
        const V3 x(G.X.X[0](q), G.X.X[1](q), G.X.X[2](q));
        const V3 dO = G.chart.dOmega(x);
        dOmega(q) = dO(0) * dX[0](q) + dO(1) * dX[1](q) + dO(2) * dX[2](q);
    }
    return integrate(grid, dtau * r.res_tau + dOmega * r.res_X, G.sigma) / kEightPi;
}

Field second_variation_density(const SphereGrid& grid, const ReferenceSurfaceGeometry& G, const Field& f) {
    if (sup(G.X.tau) > 1e-14) throw PreconditionError("second variation needs a static-slice surface");
    const SymTensor& h = G.hhat;
    if ((nodewise_det(h) <= 0.0).any() || (h.tt <= 0.0).any())
        throw PreconditionError("surface is not convex");
    const Field& Om = G.Omega;
    const OneForm df = gradient(grid, f);
    const VectorField up = raise(G.sigma, df);
    const Field L = divergence(grid, VectorField{Om * Om * up.th, Om * Om * up.ph}, G.sigma);
    const Field hff = h.tt * up.th * up.th + 2.0 * h.tp * up.th * up.ph + h.pp * up.ph * up.ph;
    return L * L / (G.H0_norm * Om) - Om * Om * Om * hff + Om * Om * pair(df, up) * G.e3_Omega;
}

double second_variation_form(const SphereGrid& grid, const ReferenceSurfaceGeometry& G, const Field& f) {
    return integrate(grid, second_variation_density(grid, G, f), G.sigma);
}

}  // namespace adsql
