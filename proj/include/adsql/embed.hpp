#pragma once

#include <string>
#include <vector>

#include "adsql/qle.hpp"

namespace adsql {

struct ConvergenceError : std::runtime_error {
    ConvergenceError(const std::string& what, std::vector<double> history)
        : std::runtime_error(what), residual_history(std::move(history)) {}
    std::vector<double> residual_history;
};
struct RigidityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GaugeMode {
    std::string label;
    double coefficient = 0;  // normalized L2 component of (X - guess) along the mode
};

struct EmbeddingSolution {
    EmbeddingMap embedding;
    double residual = 0;  // metric_mismatch(pullback, sigma)
    int iterations = 0;
    std::vector<double> residual_history;
    std::vector<GaugeMode> gauge_report;
    bool convex = false;  // checked on the returned image
};

// pullback of the chart metric of the static slice
SurfaceMetric pullback_metric(const SphereGrid& grid, const EmbeddingMap& X, const ReferenceChart& chart);

EmbeddingSolution embed_round(const SphereGrid& grid, double area_radius, const ReferenceChart& chart);

struct NewtonOptions {
    double tol = 1e-10;
    int max_iter = 50;
};

// static-slice (tau = 0) embedding into H^3 near the guess
EmbeddingSolution embed_newton(const SphereGrid& grid, const SurfaceMetric& sigma, const EmbeddingMap& guess,
                               const NewtonOptions& opt = {});

// weighted collocation Jacobian of X -> pullback in harmonic coefficients of X^1..X^3
Mat embedding_linearization(const SphereGrid& grid, const EmbeddingMap& X);

// Completes a time-direction variation dtau of a (tau, X) image to a solution of the
// linearized isometric-embedding equation: dX is the least-squares closest field to
// W with d/ds pullback(tau + s dtau, X + s dX) = 0. residual is the remaining weighted
// linearized metric change relative to the one dtau alone would cause.
struct IsometricDirection {
    std::array<Field, 3> dX;
    double residual = 0;
};
IsometricDirection isometric_completion(const SphereGrid& grid, const EmbeddingMap& X, const Field& dtau,
                                        const std::array<Field, 3>& W);

struct KernelReport {
    int dimension = 0;
    double gap = 0;    // first singular value above the threshold over the last one below
    Vec singular;      // ascending
};
KernelReport linearization_kernel(const SphereGrid& grid, const EmbeddingMap& X, double rel_threshold = 1e-8);

// Static potentials centred at P on the hyperboloid: Omega_P(x) = -<Y(x), P>,
// P = (p1, p2, p3, p4) with -p4^2 + |p|^2 = -1.
using V4h = Eigen::Vector4d;
double minkowski(const V4h& a, const V4h& b);
V4h hyperboloid_base(const V3& x);
double hyperbolic_distance(const V4h& a, const V4h& b);

// Z = (1/8pi) int Y (H0 - |H|) dSigma over the static-slice image
V4h observer_moment(const SphereGrid& grid, const PhysicalSurfaceData& data, const EmbeddingMap& X);
// F(P) = (1/8pi) int Omega_P (H0 - |H|) dSigma
double observer_objective(const SphereGrid& grid, const PhysicalSurfaceData& data, const EmbeddingMap& X,
                          const V4h& P);

struct ObserverOptimum {
    V3 base_point = V3::Zero();  // chart coordinates in H^3
    V4h hyperboloid = V4h(0, 0, 0, 1);
    double energy = 0;
    double gradient_norm = 0;
    int iterations = 0;
};
ObserverOptimum optimize_observer(const SphereGrid& grid, const PhysicalSurfaceData& data,
                                  const EmbeddingSolution& X0);

}  // namespace adsql
