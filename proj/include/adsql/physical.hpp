#pragma once

#include <functional>
#include <vector>

#include "adsql/reference.hpp"

namespace adsql {

struct ExtractionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PhysicalSurfaceData {
    SurfaceMetric sigma;
    Field H_norm;
    OneForm alpha_H;
};

// coordinate sphere r of Schwarzschild-AdS with mass m (time symmetric)
PhysicalSurfaceData sads_sphere(const SphereGrid& grid, double m, double r);

PhysicalSurfaceData perturbed_data(const PhysicalSurfaceData& base, const SymTensor& dsigma, const Field& dH,
                                   const OneForm& dalpha, double eps);

// Initial data (g, k) in polar coordinates (r, theta, phi) with g_ra = 0,
// sampled on the sphere of radius r. Angular components are coordinate components.
struct SliceSample {
    Field g_rr;
    SymTensor g_ab, dg_ab;  // dg_ab = d/dr g_ab
    Field k_rr;
    OneForm k_ra;
    SymTensor k_ab;
};

struct SliceModel {
    std::string name;
    std::function<SliceSample(const SphereGrid&, double r)> sample;
};

SliceModel sads_model(double m);
// g_rr = 1/(1+r^2) + grr5/r^5, g_ab = r^2 round_ab + gab1_ab / r, k_ra = kra3_a / r^3
SliceModel coefficient_model(const Field& grr5, const SymTensor& gab1, const OneForm& kra3);

// physical triple (sigma, |H|, alpha_H) of the coordinate sphere of radius r
PhysicalSurfaceData slice_sphere_data(const SphereGrid& grid, const SliceModel& model, double r);

struct AsymptoticData {
    Field grr5, gab1_trace;
    OneForm kra3;
};

// c_0 of sum_p c_p (r_min/r)^p through the samples, one column per node
struct PolynomialFit {
    Vec coefficients;  // weights w_j with c_0 = sum_j w_j F(r_j)
    double condition = 0;
};
PolynomialFit limit_weights(const std::vector<double>& radii);

AsymptoticData extract_asymptotics(const SphereGrid& grid, const SliceModel& model, const std::vector<double>& radii);

}  // namespace adsql
