#pragma once

#include <Eigen/Dense>
#include <memory>
#include <stdexcept>
#include <string>

namespace adsql {

using Field = Eigen::ArrayXd;  // nodal values, latitude-major
using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

struct DimensionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Gauss-Legendre in cos(theta) times uniform phi. Node q = i*nphi + j.
class SphereGrid {
public:
    explicit SphereGrid(int lmax, int ntheta = 0, int nphi = 0);

    int lmax() const { return lmax_; }
    int ntheta() const { return nth_; }
    int nphi() const { return nph_; }
    int size() const { return nth_ * nph_; }
    int nmodes() const { return (lmax_ + 1) * (lmax_ + 1); }

    double theta(int q) const { return th_(q / nph_); }
    double phi(int q) const { return ph_(q % nph_); }
    const Field& theta_nodes() const { return thq_; }
    const Field& phi_nodes() const { return phq_; }
    const Field& sin_theta() const { return sinq_; }
    const Field& weights() const { return w_; }  // sums to 4*pi

    // unit-sphere embedding x~^k and its coordinate derivatives
    const Field& xt(int k) const { return x_[k]; }
    const Field& xt_th(int k) const { return xth_[k]; }
    const Field& xt_ph(int k) const { return xph_[k]; }

    // real orthonormal harmonics; column index l*l + l + m
    static int mode(int l, int m) { return l * l + l + m; }
    const Mat& synth() const { return Y_; }
    Vec analyze(const Field& f) const;
    Field synthesize(const Vec& c) const;
    Field harmonic(int l, int m) const { return Y_.col(mode(l, m)).array(); }

    Field d_theta(const Field& f) const;
    Field d_phi(const Field& f) const;
    const Mat& Dth() const { return Dth_; }
    const Mat& Dph() const { return Dph_; }

    void check(const Field& f, const char* what = "field") const;
    Field constant(double c) const { return Field::Constant(size(), c); }

private:
    int lmax_, nth_, nph_;
    Field th_, ph_, thq_, phq_, sinq_, w_;
    Field x_[3], xth_[3], xph_[3];
    Mat Y_, Yth_, Yph_, A_, Dth_, Dph_;
};

using GridPtr = std::shared_ptr<const SphereGrid>;

struct OneForm {
    Field th, ph;
};
struct VectorField {
    Field th, ph;
};
struct SymTensor {
    Field tt, tp, pp;
};

struct SurfaceMetric {
    SymTensor g, inv;
    Field det;

    SurfaceMetric() = default;
    explicit SurfaceMetric(SymTensor g_);
    static SurfaceMetric round(const SphereGrid& grid, double radius = 1.0);
    // sqrt(det g) / sin(theta): density relative to the unit round measure
    Field density(const SphereGrid& grid) const;
};

Field nodewise_det(const SymTensor& g);

double integrate(const SphereGrid& grid, const Field& f, const SurfaceMetric& metric);
double integrate_round(const SphereGrid& grid, const Field& f);

OneForm gradient(const SphereGrid& grid, const Field& f);
VectorField raise(const SurfaceMetric& metric, const OneForm& w);
OneForm lower(const SurfaceMetric& metric, const VectorField& v);
VectorField gradient_raised(const SphereGrid& grid, const Field& f, const SurfaceMetric& metric);

Field divergence(const SphereGrid& grid, const VectorField& v, const SurfaceMetric& metric);
Field divergence(const SphereGrid& grid, const OneForm& w, const SurfaceMetric& metric);
Field laplacian(const SphereGrid& grid, const Field& f, const SurfaceMetric& metric);
Field curl(const SphereGrid& grid, const OneForm& w, const SurfaceMetric& metric);

Field pair(const OneForm& w, const VectorField& v);
Field norm2(const SurfaceMetric& metric, const OneForm& w);
// eps_{a}^{c} w_c rotated by the metric volume form, eps_{th ph} = +sqrt(det)
OneForm rotate(const SurfaceMetric& metric, const OneForm& w);

double sup(const Field& f);
double sup(const OneForm& w);

}  // namespace adsql
