#pragma once

#include <array>
#include <string>
#include <vector>

#include "adsql/sphere.hpp"

namespace adsql {

using V3 = Eigen::Vector3d;
using M3 = Eigen::Matrix3d;
using V4 = Eigen::Vector4d;   // (t, x1, x2, x3)
using V5 = Eigen::Matrix<double, 5, 1>;
using M5 = Eigen::Matrix<double, 5, 5>;
using Vec4F = std::array<Field, 4>;

struct UnsupportedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DegenerateDataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct EmbeddingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ObserverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ChartKind { AdS, dS };

// -Omega^2 dt^2 + g_ij dx^i dx^j in Cartesian-type chart coordinates, where
// g_ij = delta_ij + kappa x_i x_j / Omega^2 and Omega = sqrt(1 - kappa |x|^2).
struct ReferenceChart {
    double kappa = -1.0;

    static ReferenceChart make(ChartKind kind);
    ChartKind kind() const { return kappa < 0 ? ChartKind::AdS : ChartKind::dS; }

    double Omega(const V3& x) const;
    V3 dOmega(const V3& x) const;
    M3 hessOmega(const V3& x) const;  // coordinate second derivatives
    M3 metric(const V3& x) const;
    M3 inverse(const V3& x) const;
    // spatial connection: Gamma^l_ij = kappa x^l g_ij
    double gamma(int l, int i, int j, const V3& x) const;
    // spacetime connection Gamma^mu_{nu lambda}, index 0 = t
    std::array<Eigen::Matrix4d, 4> gamma4(const V3& x) const;
    double inner(const V3& x, const V4& u, const V4& v) const;
    // nabla^2 Omega + kappa Omega g, max entry
    double static_residual(const V3& x) const;
};

// Killing field K = M y on R^{3,2}, y = (Omega sin t, x, Omega cos t),
// metric diag(-1, 1, 1, 1, -1).
struct KillingField {
    std::string label;
    M5 M = M5::Zero();

    V4 eval(double t, const V3& x) const;
    KillingField operator+(const KillingField& o) const { return {label + "+" + o.label, M + o.M}; }
    KillingField operator*(double s) const { return {label, M * s}; }
};

V5 hyperboloid_point(double t, const V3& x);
void chart_point(const V5& y, double& t, V3& x);
const Eigen::Matrix<double, 5, 5>& eta5();

// order: time, p1..p3, c1..c3, j1..j3
std::vector<KillingField> killing_basis(const ReferenceChart& chart);
KillingField time_field();
// A dt + B.p + D.c + F.j
KillingField observer_field(double A, const V3& B, const V3& D, const V3& F);

struct EmbeddingMap {
    Field tau;
    std::array<Field, 3> X;

    static EmbeddingMap round(const SphereGrid& grid, double r, const V3& center = V3::Zero());
};

// chart components of K along the image, K^mu at each node
Vec4F killing_on_surface(const KillingField& K, const EmbeddingMap& X);

// Lambda X for Lambda in SO(3,2); result re-expressed in the static chart
EmbeddingMap apply_isometry(const M5& Lambda, const EmbeddingMap& X);
M5 isometry_exp(const KillingField& K, double s);
// Finds lambda > 0 and Lambda with Lambda_* T0 = lambda dt, i.e.
// Lambda M Lambda^{-1} = lambda M_t. Throws ObserverError outside that orbit.
M5 conjugate_to_time(const KillingField& T0, double& lambda);

struct ReferenceSurfaceGeometry {
    ReferenceChart chart;
    EmbeddingMap X;
    SurfaceMetric sigma, sigma_hat;
    Field H0_norm, theta, Hhat, A, B, w, Omega, e3_Omega;
    Field H0_e3, H0_e4;  // <H0, e3>, <H0, e4> in the static frame
    OneForm alpha_H0, alpha_e3, dtau;
    SymTensor hhat;
    VectorField grad_tau;      // sigma-raised gradient of tau
    std::array<Field, 3> nu;   // outward slice normal of the projected surface
    Vec4F e3, e4;              // static frame along the image
    Vec4F X_th, X_ph;          // spacetime tangents
};

ReferenceSurfaceGeometry surface_geometry(const SphereGrid& grid, const EmbeddingMap& X,
                                          const ReferenceChart& chart);

struct IdentityResiduals {
    double e4_decomposition = 0, dt_decomposition = 0;
    double mean_curvature_projection = 0, connection_relation = 0, area_relation = 0;
    double potential_laplacian = -1, potential_gradient = -1;  // -1: not applicable (tau != 0)
    // mean-curvature-gauge relations (involve one more derivative)
    double gauge_angle = 0, gauge_connection = 0;
    double max() const;  // projection and potential identities only
    double gauge_max() const { return std::max(gauge_angle, gauge_connection); }
};

IdentityResiduals projection_residuals(const SphereGrid& grid, const ReferenceSurfaceGeometry& geom);
double conservation_residual(const SphereGrid& grid, const ReferenceSurfaceGeometry& geom);

// metric helpers shared by later modules
double one_form_sup(const SurfaceMetric& m, const OneForm& w);
Field asinh_field(const Field& f);

// round AdS/dS spheres and tau = eps * Y_lm graphs over them (eps in {0.05, 0.2}, l <= 2)
struct CorpusEntry {
    std::string name;
    ReferenceChart chart;
    EmbeddingMap X;
};
std::vector<CorpusEntry> identity_corpus(const SphereGrid& grid);

}  // namespace adsql
