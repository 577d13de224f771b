#pragma once

#include "adsql/physical.hpp"

namespace adsql {

struct PreconditionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// largest |eigenvalue| of b^{-1}(a - b) over the nodes
double metric_mismatch(const SurfaceMetric& a, const SurfaceMetric& b);

struct QleOptions {
    double isometry_tol = 1e-8;
};

// Geometry of X checked against data.sigma; throws PreconditionError on mismatch.
ReferenceSurfaceGeometry checked_geometry(const SphereGrid& grid, const PhysicalSurfaceData& data,
                                          const EmbeddingMap& X, const QleOptions& opt = {});

// chart form with T0 = d/dt
double energy_static_observer(const SphereGrid& grid, const PhysicalSurfaceData& data,
                              const ReferenceSurfaceGeometry& geom);

// T0 = lambda * (isometry image of d/dt); evaluated as lambda * E(Lambda X, d/dt)
double quasilocal_energy(const SphereGrid& grid, const PhysicalSurfaceData& data, const EmbeddingMap& X,
                         const KillingField& T0 = time_field(), const QleOptions& opt = {});

// the observer-invariant expression, evaluated directly for any timelike T0
double quasilocal_energy_invariant(const SphereGrid& grid, const PhysicalSurfaceData& data, const EmbeddingMap& X,
                                   const KillingField& T0 = time_field(), const QleOptions& opt = {});

struct DensityPair {
    Field rho;
    OneForm j;
};

// densities for T0 = d/dt
DensityPair density_pair(const SphereGrid& grid, const PhysicalSurfaceData& data,
                         const ReferenceSurfaceGeometry& geom);
DensityPair density_pair(const SphereGrid& grid, const PhysicalSurfaceData& data, const EmbeddingMap& X,
                         const QleOptions& opt = {});
double energy_from_densities(const SphereGrid& grid, const PhysicalSurfaceData& data,
                             const ReferenceSurfaceGeometry& geom, const DensityPair& d);

// -(1/8pi) int [<K, T0> rho + j(K^T)]; T0 must be an isometric image of d/dt
double conserved_quantity(const SphereGrid& grid, const PhysicalSurfaceData& data, const EmbeddingMap& X,
                          const KillingField& T0, const KillingField& K, const QleOptions& opt = {});

struct OptimalResidual {
    Field res_tau, res_X;
};
OptimalResidual optimal_embedding_residual(const SphereGrid& grid, const PhysicalSurfaceData& data,
                                           const EmbeddingMap& X, const QleOptions& opt = {});
OptimalResidual optimal_embedding_residual(const SphereGrid& grid, const PhysicalSurfaceData& data,
                                           const ReferenceSurfaceGeometry& geom);
// (1/8pi) int [dtau res_tau + dX^i d_i Omega res_X]
double first_variation_pairing(const SphereGrid& grid, const ReferenceSurfaceGeometry& geom, const OptimalResidual& r,
                               const Field& dtau, const std::array<Field, 3>& dX);

// nodewise integrand and its integral Q(f); geom must be a convex static-slice surface
Field second_variation_density(const SphereGrid& grid, const ReferenceSurfaceGeometry& geom, const Field& f);
double second_variation_form(const SphereGrid& grid, const ReferenceSurfaceGeometry& geom, const Field& f);

}  // namespace adsql
