#include "adsql/physical.hpp"

#include <cmath>
#include <stdexcept>

namespace adsql {

namespace {

SymTensor round_tensor(const SphereGrid& grid, double c) {
    const Field& s = grid.sin_theta();
    return {grid.constant(c), grid.constant(0.0), c * s * s};
}

Field round_trace(const SphereGrid& grid, const SymTensor& t) {
    const Field& s = grid.sin_theta();
    return t.tt + t.pp / (s * s);
}

}  // namespace

PhysicalSurfaceData sads_sphere(const SphereGrid& grid, double m, double r) {
    if (m < 0.0) throw std::domain_error("sads_sphere: negative mass");
    if (!(r > 0.0) || 1.0 + r * r - 2.0 * m / r <= 0.0)
        throw std::domain_error("sads_sphere: radius is inside the horizon");
    const double H = 2.0 / r * std::sqrt(1.0 + r * r - 2.0 * m / r);
    return {SurfaceMetric::round(grid, r), grid.constant(H), OneForm{grid.constant(0.0), grid.constant(0.0)}};
}

PhysicalSurfaceData perturbed_data(const PhysicalSurfaceData& base, const SymTensor& ds, const Field& dH,
                                   const OneForm& da, double eps) {
    const SymTensor& g = base.sigma.g;
    PhysicalSurfaceData out{SurfaceMetric(SymTensor{g.tt + eps * ds.tt, g.tp + eps * ds.tp, g.pp + eps * ds.pp}),
                            base.H_norm + eps * dH,
                            OneForm{base.alpha_H.th + eps * da.th, base.alpha_H.ph + eps * da.ph}};
    if ((out.H_norm <= 0.0).any()) throw DegenerateDataError("perturbed |H| is not positive");
    if ((out.sigma.det <= 0.0).any()) throw EmbeddingError("perturbed metric is not Riemannian");
    return out;
}

SliceModel sads_model(double m) {
    return {m == 0.0 ? "ads" : "sads", [m](const SphereGrid& grid, double r) {
                const double d = 1.0 + r * r - 2.0 * m / r;
                if (d <= 0.0) throw std::domain_error("sads model: radius is inside the horizon");
                SliceSample s;
                s.g_rr = grid.constant(1.0 / d);
                s.g_ab = round_tensor(grid, r * r);
                s.dg_ab = round_tensor(grid, 2.0 * r);
                s.k_rr = grid.constant(0.0);
                s.k_ra = OneForm{grid.constant(0.0), grid.constant(0.0)};
                s.k_ab = round_tensor(grid, 0.0);
                return s;
            }};
}

SliceModel coefficient_model(const Field& grr5, const SymTensor& gab1, const OneForm& kra3) {
    return {"coefficients", [=](const SphereGrid& grid, double r) {
                grid.check(grr5, "grr5");
                SliceSample s;
                s.g_rr = 1.0 / (1.0 + r * r) + grr5 / std::pow(r, 5);
                const SymTensor bg = round_tensor(grid, r * r), dbg = round_tensor(grid, 2.0 * r);
                s.g_ab = {bg.tt + gab1.tt / r, bg.tp + gab1.tp / r, bg.pp + gab1.pp / r};
                s.dg_ab = {dbg.tt - gab1.tt / (r * r), dbg.tp - gab1.tp / (r * r), dbg.pp - gab1.pp / (r * r)};
                s.k_rr = grid.constant(0.0);
                s.k_ra = OneForm{kra3.th / std::pow(r, 3), kra3.ph / std::pow(r, 3)};
                s.k_ab = round_tensor(grid, 0.0);
                return s;
            }};
}

PhysicalSurfaceData slice_sphere_data(const SphereGrid& grid, const SliceModel& model, double r) {
    const SliceSample s = model.sample(grid, r);
    SurfaceMetric sigma(s.g_ab);
    const SymTensor& si = sigma.inv;
    const Field rg = s.g_rr.sqrt();
    const Field h = 0.5 * (si.tt * s.dg_ab.tt + 2.0 * si.tp * s.dg_ab.tp + si.pp * s.dg_ab.pp) / rg;
    const Field trk = si.tt * s.k_ab.tt + 2.0 * si.tp * s.k_ab.tp + si.pp * s.k_ab.pp;
    const Field H2 = h * h - trk * trk;
    if ((H2 <= 0.0).any()) throw DegenerateDataError("mean curvature vector of the slice sphere is not spacelike");
    const Field H = H2.sqrt();
    const OneForm dth = gradient(grid, Field(-asinh_field(-trk / H)));
    return {sigma, H, OneForm{-s.k_ra.th / rg + dth.th, -s.k_ra.ph / rg + dth.ph}};
}

PolynomialFit limit_weights(const std::vector<double>& radii) {
    const int n = static_cast<int>(radii.size());
    if (n < 3) throw std::invalid_argument("need at least three radii");
    for (int j = 1; j < n; ++j)
        if (!(radii[j] > radii[j - 1])) throw std::invalid_argument("radii must be strictly increasing");
    if (!(radii[0] > 0.0)) throw std::invalid_argument("radii must be positive");
    Mat V(n, n);
    for (int j = 0; j < n; ++j)
        for (int p = 0; p < n; ++p) V(j, p) = std::pow(radii[0] / radii[j], p);
    Eigen::JacobiSVD<Mat> svd(V);
    PolynomialFit fit;
    fit.condition = svd.singularValues()(0) / svd.singularValues()(n - 1);
    if (!(fit.condition <= 1e12)) throw ExtractionError("ill-conditioned radial fit");
    fit.coefficients = V.transpose().fullPivLu().solve(Vec::Unit(n, 0));
    return fit;
}

AsymptoticData extract_asymptotics(const SphereGrid& grid, const SliceModel& model, const std::vector<double>& radii) {
    const PolynomialFit fit = limit_weights(radii);
    const int n = grid.size();
    AsymptoticData out{Field::Zero(n), Field::Zero(n), OneForm{Field::Zero(n), Field::Zero(n)}};
    for (size_t j = 0; j < radii.size(); ++j) {
        const double r = radii[j], wj = fit.coefficients(static_cast<Eigen::Index>(j));
        const SliceSample s = model.sample(grid, r);
        const SymTensor bg = round_tensor(grid, r * r);
        out.grr5 += wj * std::pow(r, 5) * (s.g_rr - 1.0 / (1.0 + r * r));
        out.gab1_trace += wj * r * round_trace(grid, SymTensor{s.g_ab.tt - bg.tt, s.g_ab.tp - bg.tp, s.g_ab.pp - bg.pp});
        out.kra3.th += wj * std::pow(r, 3) * s.k_ra.th;
        out.kra3.ph += wj * std::pow(r, 3) * s.k_ra.ph;
    }
    return out;
}

}  // namespace adsql
