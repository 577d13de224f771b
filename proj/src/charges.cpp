#include "adsql/charges.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace adsql {

namespace {

constexpr double kEightPi = 8.0 * std::numbers::pi;

}  // namespace

ChargeSet total_charges(const SphereGrid& grid, const AsymptoticData& asym) {
    if (grid.lmax() < 4) throw std::invalid_argument("total_charges: lmax must be at least 4");
    grid.check(asym.grr5, "grr5");
    const SurfaceMetric unit = SurfaceMetric::round(grid);
    const Field mass = asym.grr5 + 1.5 * asym.gab1_trace;
    const Field div = divergence(grid, asym.kra3, unit);
    // eps^{ab} D_b k_a = -curl k
    const Field rot = -curl(grid, asym.kra3, unit);
    ChargeSet c;
    c.E = integrate_round(grid, mass) / kEightPi;
    for (int i = 0; i < 3; ++i) {
        c.P(i) = integrate_round(grid, grid.xt(i) * mass) / kEightPi;
        c.C(i) = integrate_round(grid, grid.xt(i) * div) / kEightPi;
        c.J(i) = integrate_round(grid, grid.xt(i) * rot) / kEightPi;
    }
    return c;
}

double killing_charge(const ChargeSet& c, int k) {
    if (k == 0) return c.E;
    if (k <= 3) return c.P(k - 1);
    if (k <= 6) return -c.C(k - 4);
    if (k <= 9) return -c.J(k - 7);
    throw std::out_of_range("killing_charge: index must be in 0..9");
}

LimitEstimate extrapolate(const std::vector<double>& radii, const std::vector<double>& samples) {
    if (radii.size() != samples.size()) throw std::invalid_argument("extrapolate: size mismatch");
    const PolynomialFit fit = limit_weights(radii);
    const int n = static_cast<int>(radii.size());
    LimitEstimate out;
    out.radii = radii;
    out.samples = samples;
    for (int j = 0; j < n; ++j) out.value += fit.coefficients(j) * samples[static_cast<size_t>(j)];

    // successive estimates must settle; roundoff in the samples grows like a power of r
    double biggest = 0;
    for (double v : samples) biggest = std::max(biggest, std::abs(v));
    const double scale = 1e-6 * (1.0 + biggest);
    const double first = std::abs(samples[1] - samples[0]), last = std::abs(samples[n - 1] - samples[n - 2]);
    if (last > first && last > scale)
        throw LimitError("extrapolation: successive estimates are diverging");

    for (int drop = 0; drop < n; ++drop) {
        std::vector<double> r, s;
        for (int j = 0; j < n; ++j)
            if (j != drop) {
                r.push_back(radii[static_cast<size_t>(j)]);
                s.push_back(samples[static_cast<size_t>(j)]);
            }
        double v = 0;
        if (r.size() >= 3) {
            const PolynomialFit f = limit_weights(r);
            for (size_t j = 0; j < r.size(); ++j) v += f.coefficients(static_cast<Eigen::Index>(j)) * s[j];
        } else {
            // a + b/r through two points
            v = (s[1] * r[1] - s[0] * r[0]) / (r[1] - r[0]);
        }
        out.spread = std::max(out.spread, std::abs(v - out.value));
    }
    return out;
}

double hamiltonian_flux(const SphereGrid& grid, const SliceModel& model, const KillingField& K, double r) {
    const SliceSample s = model.sample(grid, r);
    const SurfaceMetric sigma(s.g_ab);
    const int n = grid.size();
    const double S = 1.0 + r * r, Om = std::sqrt(S);
    const Field& st = grid.sin_theta();

    // K = V n + Y on t = 0, with V = (M y)^0 and Y^i = (M y)^i, y = (0, r x, Omega)
    Field V(n), dV(n), Yr(n), Yth(n), Yph(n);
    for (int q = 0; q < n; ++q) {
        const V3 xt(grid.xt(0)(q), grid.xt(1)(q), grid.xt(2)(q));
        V5 y;
        y << 0.0, r * xt(0), r * xt(1), r * xt(2), Om;
        V5 dy;
        dy << 0.0, xt(0), xt(1), xt(2), r / Om;
        const V5 k = K.M * y;
        V(q) = k(0);
        dV(q) = (K.M * dy)(0);
        const V3 Y(k(1), k(2), k(3));
        Yr(q) = xt.dot(Y);
        const V3 eth(grid.xt_th(0)(q), grid.xt_th(1)(q), grid.xt_th(2)(q));
        const V3 eph(grid.xt_ph(0)(q), grid.xt_ph(1)(q), grid.xt_ph(2)(q));
        Yth(q) = eth.dot(Y) / r;
        Yph(q) = eph.dot(Y) / (r * st(q) * st(q));
    }

    const Field e_rr = s.g_rr - 1.0 / S;
    const Field T = (s.g_ab.tt - r * r) + (s.g_ab.pp - r * r * st * st) / (st * st);
    const Field dT = (s.dg_ab.tt - 2.0 * r) + (s.dg_ab.pp - 2.0 * r * st * st) / (st * st);
    const Field U = 0.5 * (V * Om * (2.0 * S * e_rr / r + T / (r * r * r) - dT / (r * r)) + Om * dV * T / (r * r));

    const Field rg = s.g_rr.sqrt();
    const SymTensor& gi = sigma.inv;
    const Field trk = s.k_rr / s.g_rr + gi.tt * s.k_ab.tt + 2.0 * gi.tp * s.k_ab.tp + gi.pp * s.k_ab.pp;
    const Field W = (s.k_rr * Yr + s.k_ra.th * Yth + s.k_ra.ph * Yph) / rg - trk * rg * Yr;

    return integrate_round(grid, (U + W) * r * r) / kEightPi;
}

LimitEstimate hamiltonian_charges(const SphereGrid& grid, const SliceModel& model, const KillingField& K,
                                  const std::vector<double>& radii) {
    std::vector<double> samples;
    for (double r : radii) samples.push_back(hamiltonian_flux(grid, model, K, r));
    return extrapolate(radii, samples);
}

ChargeSet hamiltonian_charge_set(const SphereGrid& grid, const SliceModel& model, const std::vector<double>& radii) {
    const auto K = killing_basis(ReferenceChart::make(ChartKind::AdS));
    std::array<double, 10> h{};
    for (int k = 0; k < 10; ++k) h[static_cast<size_t>(k)] = hamiltonian_charges(grid, model, K[k], radii).value;
    ChargeSet c;
    c.E = h[0];
    for (int i = 0; i < 3; ++i) {
        c.P(i) = h[static_cast<size_t>(1 + i)];
        c.C(i) = 0.0 - h[static_cast<size_t>(4 + i)];
        c.J(i) = 0.0 - h[static_cast<size_t>(7 + i)];
    }
    return c;
}

double quasilocal_energy_at(const SphereGrid& grid, const SliceModel& model, const KillingField& T0, double r,
                            const QleOptions& opt) {
    const PhysicalSurfaceData data = slice_sphere_data(grid, model, r);
    const double area = integrate(grid, grid.constant(1.0), data.sigma);
    const double ra = std::sqrt(area / (4.0 * std::numbers::pi));
    EmbeddingMap X = EmbeddingMap::round(grid, ra);
    if (metric_mismatch(SurfaceMetric::round(grid, ra), data.sigma) > opt.isometry_tol) {
        NewtonOptions nopt;
        nopt.tol = std::min(1e-10, opt.isometry_tol);
        X = embed_newton(grid, data.sigma, X, nopt).embedding;
    }
    // invariant form: also covers observers outside the orbit of d/dt (e.g. d/dt + j)
    return quasilocal_energy_invariant(grid, data, X, T0, opt);
}

LimitEstimate quasilocal_limit(const SphereGrid& grid, const SliceModel& model, const KillingField& T0,
                               const std::vector<double>& radii, const QleOptions& opt) {
    std::vector<double> samples;
    for (double r : radii) samples.push_back(quasilocal_energy_at(grid, model, T0, r, opt));
    return extrapolate(radii, samples);
}

ChargeSet evolve_charges(const ChargeSet& c0, double t) {
    ChargeSet c = c0;
    const double co = std::cos(t), si = std::sin(t);
    c.P = c0.P * co - c0.C * si;
    c.C = c0.C * co + c0.P * si;
    return c;
}

ChargeSet evolve_charges_rk4(const ChargeSet& c0, double t, double max_step) {
    using State = Eigen::Matrix<double, 6, 1>;
    auto rhs = [](const State& u) {
        State d;
        d.head<3>() = -u.tail<3>();
        d.tail<3>() = u.head<3>();
        return d;
    };
    State u;
    u << c0.P, c0.C;
    const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(t) / max_step)));
    const double h = t / steps;
    for (int k = 0; k < steps; ++k) {
        const State k1 = rhs(u), k2 = rhs(u + 0.5 * h * k1), k3 = rhs(u + 0.5 * h * k2), k4 = rhs(u + h * k3);
        u += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    ChargeSet c = c0;
    c.P = u.head<3>();
    c.C = u.tail<3>();
    return c;
}

RestMass rest_mass(const ChargeSet& c) {
    const V3 &p = c.P, &q = c.C, &j = c.J;
    const double E = c.E;
    RestMass m;
    m.alpha = E * E + j.squaredNorm() - p.squaredNorm() - q.squaredNorm();
    const double base = E * E - j.squaredNorm() - p.squaredNorm() - q.squaredNorm();
    m.beta = base * base - 4.0 * j.cross(p).squaredNorm() - 4.0 * p.cross(q).squaredNorm() -
             4.0 * q.cross(j).squaredNorm() + 8.0 * E * q.dot(p.cross(j));
    if (m.beta >= 0.0) {
        const double m2 = 0.5 * (m.alpha + std::sqrt(m.beta));
        if (m2 >= 0.0) {
            m.m = std::sqrt(m2);
            m.valid = true;
        }
    }
    return m;
}

}  // namespace adsql
