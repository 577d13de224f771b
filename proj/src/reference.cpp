#include "adsql/reference.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

namespace adsql {

namespace {

V3 node_x(const EmbeddingMap& X, int q) { return {X.X[0](q), X.X[1](q), X.X[2](q)}; }

V4 node4(const Vec4F& f, int q) { return {f[0](q), f[1](q), f[2](q), f[3](q)}; }

Vec4F zeros4(int n) { return {Field::Zero(n), Field::Zero(n), Field::Zero(n), Field::Zero(n)}; }

// covariant derivative of a spacetime vector field n along the surface
// direction with tangent Xa: d_a n^mu + Gamma^mu_{nu la} Xa^nu n^la
std::array<Vec4F, 2> surface_derivative(const SphereGrid& grid, const ReferenceChart& chart,
                                        const EmbeddingMap& X, const Vec4F& n, const Vec4F& Xth,
                                        const Vec4F& Xph) {
    std::array<Vec4F, 2> out;
    for (int mu = 0; mu < 4; ++mu) {
        out[0][mu] = grid.d_theta(n[mu]);
        out[1][mu] = grid.d_phi(n[mu]);
    }
    for (int q = 0; q < grid.size(); ++q) {
        const auto G = chart.gamma4(node_x(X, q));
        const V4 nq = node4(n, q), a0 = node4(Xth, q), a1 = node4(Xph, q);
        for (int mu = 0; mu < 4; ++mu) {
            out[0][mu](q) += a0.dot(G[mu] * nq);
            out[1][mu](q) += a1.dot(G[mu] * nq);
        }
    }
    return out;
}

Field inner_field(const ReferenceChart& chart, const EmbeddingMap& X, const Vec4F& u, const Vec4F& v) {
    const int n = static_cast<int>(u[0].size());
    Field out(n);
    for (int q = 0; q < n; ++q) out(q) = chart.inner(node_x(X, q), node4(u, q), node4(v, q));
    return out;
}

double sup4(const Vec4F& v) {
    double m = 0.0;
    for (const auto& f : v) m = std::max(m, sup(f));
    return m;
}

}  // namespace

// ---------------------------------------------------------------- chart

ReferenceChart ReferenceChart::make(ChartKind kind) {
    ReferenceChart c;
    c.kappa = kind == ChartKind::AdS ? -1.0 : 1.0;
    return c;
}

double ReferenceChart::Omega(const V3& x) const {
    const double s = 1.0 - kappa * x.squaredNorm();
    if (s <= 0.0) throw EmbeddingError("point beyond the static horizon");
    return std::sqrt(s);
}

V3 ReferenceChart::dOmega(const V3& x) const { return -kappa * x / Omega(x); }

M3 ReferenceChart::hessOmega(const V3& x) const {
    const double O = Omega(x);
    return -kappa * M3::Identity() / O - kappa * kappa * x * x.transpose() / (O * O * O);
}

M3 ReferenceChart::metric(const V3& x) const {
    const double O = Omega(x);
    return M3::Identity() + kappa * x * x.transpose() / (O * O);
}

M3 ReferenceChart::inverse(const V3& x) const { return M3::Identity() - kappa * x * x.transpose(); }

double ReferenceChart::gamma(int l, int i, int j, const V3& x) const {
    const double O2 = 1.0 - kappa * x.squaredNorm();
    const double gij = (i == j ? 1.0 : 0.0) + kappa * x(i) * x(j) / O2;
    return kappa * x(l) * gij;
}

std::array<Eigen::Matrix4d, 4> ReferenceChart::gamma4(const V3& x) const {
    std::array<Eigen::Matrix4d, 4> G;
    for (auto& m : G) m.setZero();
    const double O = Omega(x);
    const V3 dO = dOmega(x);
    const M3 g = metric(x);
    for (int i = 0; i < 3; ++i) {
        G[0](0, i + 1) = G[0](i + 1, 0) = dO(i) / O;
        G[i + 1](0, 0) = -kappa * O * O * x(i);
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) G[i + 1](j + 1, k + 1) = kappa * x(i) * g(j, k);
    }
    return G;
}

double ReferenceChart::inner(const V3& x, const V4& u, const V4& v) const {
    const double O = Omega(x);
    return -O * O * u(0) * v(0) + u.tail<3>().dot(metric(x) * v.tail<3>());
}

double ReferenceChart::static_residual(const V3& x) const {
    const M3 H = hessOmega(x);
    const V3 dO = dOmega(x);
    const M3 g = metric(x);
    M3 R = H + kappa * Omega(x) * g;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int l = 0; l < 3; ++l) R(i, j) -= gamma(l, i, j, x) * dO(l);
    return R.cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------- Killing fields

const M5& eta5() {
    static const M5 e = [] {
        M5 m = M5::Identity();
        m(0, 0) = m(4, 4) = -1.0;
        return m;
    }();
    return e;
}

V5 hyperboloid_point(double t, const V3& x) {
    const double O = std::sqrt(1.0 + x.squaredNorm());
    V5 y;
    y << O * std::sin(t), x(0), x(1), x(2), O * std::cos(t);
    return y;
}

void chart_point(const V5& y, double& t, V3& x) {
    t = std::atan2(y(0), y(4));
    x = y.segment<3>(1);
}

V4 KillingField::eval(double t, const V3& x) const {
    const V5 y = hyperboloid_point(t, x);
    const V5 k = M * y;
    const double O2 = 1.0 + x.squaredNorm();
    V4 out;
    out(0) = (y(4) * k(0) - y(0) * k(4)) / O2;
    out.tail<3>() = k.segment<3>(1);
    return out;
}

KillingField time_field() {
    KillingField K{"time", M5::Zero()};
    K.M(0, 4) = 1.0;
    K.M(4, 0) = -1.0;
    return K;
}

std::vector<KillingField> killing_basis(const ReferenceChart& chart) {
    if (chart.kind() != ChartKind::AdS)
        throw UnsupportedError("Killing basis is only available for the AdS chart");
    std::vector<KillingField> out{time_field()};
    for (int i = 1; i <= 3; ++i) {
        KillingField p{"p" + std::to_string(i), M5::Zero()};
        p.M(0, i) = p.M(i, 0) = 1.0;
        out.push_back(p);
    }
    for (int i = 1; i <= 3; ++i) {
        KillingField c{"c" + std::to_string(i), M5::Zero()};
        c.M(4, i) = c.M(i, 4) = 1.0;
        out.push_back(c);
    }
    for (int k = 0; k < 3; ++k) {
        KillingField j{"j" + std::to_string(k + 1), M5::Zero()};
        // eps_{ijk} y^i d/dy^j
        const int i1 = (k + 1) % 3, j1 = (k + 2) % 3;
        j.M(1 + j1, 1 + i1) = 1.0;
        j.M(1 + i1, 1 + j1) = -1.0;
        out.push_back(j);
    }
    return out;
}

KillingField observer_field(double A, const V3& B, const V3& D, const V3& F) {
    const auto basis = killing_basis(ReferenceChart::make(ChartKind::AdS));
    KillingField T{"observer", A * basis[0].M};
    for (int i = 0; i < 3; ++i) T.M += B(i) * basis[1 + i].M + D(i) * basis[4 + i].M + F(i) * basis[7 + i].M;
    return T;
}

EmbeddingMap EmbeddingMap::round(const SphereGrid& grid, double r, const V3& center) {
    EmbeddingMap X;
    X.tau = grid.constant(0.0);
    for (int k = 0; k < 3; ++k) X.X[k] = center(k) + r * grid.xt(k);
    return X;
}

Vec4F killing_on_surface(const KillingField& K, const EmbeddingMap& X) {
    const int n = static_cast<int>(X.tau.size());
    Vec4F out = zeros4(n);
    for (int q = 0; q < n; ++q) {
        const V4 k = K.eval(X.tau(q), node_x(X, q));
        for (int mu = 0; mu < 4; ++mu) out[mu](q) = k(mu);
    }
    return out;
}

EmbeddingMap apply_isometry(const M5& L, const EmbeddingMap& X) {
    EmbeddingMap out = X;
    for (int q = 0; q < X.tau.size(); ++q) {
        const V5 y = L * hyperboloid_point(X.tau(q), node_x(X, q));
        double t;
        V3 x;
        chart_point(y, t, x);
        out.tau(q) = t;
        for (int k = 0; k < 3; ++k) out.X[k](q) = x(k);
    }
    return out;
}

M5 isometry_exp(const KillingField& K, double s) { return M5((K.M * s).exp()); }

M5 conjugate_to_time(const KillingField& T0, double& lambda) {
    const M5& eta = eta5();
    const M5& M = T0.M;
    if ((M.transpose() * eta + eta * M).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + M.norm()))
        throw ObserverError("observer is not a Killing field of AdS");
    Eigen::JacobiSVD<M5> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto sv = svd.singularValues();
    const double scale = sv(0);
    if (scale == 0.0 || sv(2) > 1e-10 * scale)
        throw ObserverError("observer is not conjugate to a multiple of d/dt (rank != 2)");
    // eta-orthonormal basis of the image plane
    V5 p1 = svd.matrixU().col(0), p2 = svd.matrixU().col(1);
    const double n1 = p1.dot(eta * p1);
    if (n1 >= -1e-12) throw ObserverError("observer image plane is not timelike");
    p1 /= std::sqrt(-n1);
    p2 += p2.dot(eta * p1) * p1;
    const double n2 = p2.dot(eta * p2);
    if (n2 >= -1e-12) throw ObserverError("observer image plane is not timelike");
    p2 /= std::sqrt(-n2);
    auto project = [&](const V5& v) -> V5 { return -v.dot(eta * p1) * p1 - v.dot(eta * p2) * p2; };

    // prefer the frame closest to the standard one so that d/dt maps to the identity
    V5 u = project(V5::Unit(4));
    if (u.dot(eta * u) > -1e-6) u = p1;
    u /= std::sqrt(-u.dot(eta * u));
    const V5 Mu = M * u;
    const double l2 = -Mu.dot(eta * Mu);
    if (l2 <= 0.0) throw ObserverError("observer image plane is not timelike");
    lambda = std::sqrt(l2);
    if ((M * Mu + l2 * u).norm() > 1e-9 * (1.0 + l2))
        throw ObserverError("observer is not an elliptic rotation of the time plane");

    M5 B;
    B.col(4) = u;
    B.col(0) = Mu / lambda;
    Eigen::Matrix<double, 5, 6> cand;
    cand << V5::Unit(1), V5::Unit(2), V5::Unit(3), svd.matrixV().rightCols<3>();
    int found = 0;
    for (int c = 0; c < 6 && found < 3; ++c) {
        V5 k = cand.col(c) - project(cand.col(c));
        for (int b = 0; b < found; ++b) k -= k.dot(eta * B.col(1 + b)) * B.col(1 + b);
        const double kk = k.dot(eta * k);
        if (kk < -1e-12) throw ObserverError("observer kernel is not spacelike");
        if (kk < 1e-6) continue;
        B.col(1 + found++) = k / std::sqrt(kk);
    }
    if (found < 3) throw ObserverError("observer kernel is degenerate");
    Eigen::Matrix2d T;
    T << B(0, 0), B(0, 4), B(4, 0), B(4, 4);
    if (T.determinant() <= 0.0) throw ObserverError("observer is past-directed");
    if (B.determinant() < 0.0) B.col(1) = -B.col(1);
    return B.inverse();
}

// ---------------------------------------------------------------- surface geometry

double one_form_sup(const SurfaceMetric& m, const OneForm& w) { return std::sqrt(sup(norm2(m, w))); }

Field asinh_field(const Field& f) { return f.unaryExpr([](double v) { return std::asinh(v); }); }

ReferenceSurfaceGeometry surface_geometry(const SphereGrid& grid, const EmbeddingMap& X,
                                          const ReferenceChart& chart) {
    const int n = grid.size();
    grid.check(X.tau, "tau");
    for (const auto& f : X.X) grid.check(f, "embedding");

    Vec4F Xth, Xph;
    Xth[0] = grid.d_theta(X.tau);
    Xph[0] = grid.d_phi(X.tau);
    for (int k = 0; k < 3; ++k) {
        Xth[k + 1] = grid.d_theta(X.X[k]);
        Xph[k + 1] = grid.d_phi(X.X[k]);
    }

    Field Om(n), e3Om(n);
    SymTensor sh{Field(n), Field(n), Field(n)};
    std::array<Field, 3> nu{Field(n), Field(n), Field(n)};
    for (int q = 0; q < n; ++q) {
        const V3 x = node_x(X, q);
        const M3 g = chart.metric(x);
        const V3 a(Xth[1](q), Xth[2](q), Xth[3](q)), b(Xph[1](q), Xph[2](q), Xph[3](q));
        sh.tt(q) = a.dot(g * a);
        sh.tp(q) = a.dot(g * b);
        sh.pp(q) = b.dot(g * b);
        const V3 N = a.cross(b);
        V3 up = chart.inverse(x) * N;
        const double nn = N.dot(up);
        if (!(nn > 0.0)) throw EmbeddingError("projected surface is degenerate");
        up /= std::sqrt(nn);
        for (int k = 0; k < 3; ++k) nu[k](q) = up(k);
        Om(q) = chart.Omega(x);
        e3Om(q) = up.dot(chart.dOmega(x));
    }
    const Field& tt = Xth[0];
    const Field& tp = Xph[0];
    SymTensor s{sh.tt - Om * Om * tt * tt, sh.tp - Om * Om * tt * tp, sh.pp - Om * Om * tp * tp};
    if ((nodewise_det(s) <= 0.0).any()) throw EmbeddingError("induced metric is not Riemannian");
    if ((nodewise_det(sh) <= 0.0).any()) throw EmbeddingError("projected metric is not Riemannian");

    ReferenceSurfaceGeometry G;
    G.chart = chart;
    G.X = X;
    G.sigma = SurfaceMetric(s);
    G.sigma_hat = SurfaceMetric(sh);
    G.X_th = Xth;
    G.X_ph = Xph;
    G.nu = nu;
    G.Omega = Om;
    G.e3_Omega = e3Om;
    G.dtau = OneForm{tt, tp};
    G.grad_tau = raise(G.sigma, G.dtau);
    const Field gt2 = pair(G.dtau, G.grad_tau);
    G.w = (1.0 + Om * Om * gt2).sqrt();
    G.A = Om * G.w;
    G.B = divergence(grid, VectorField{Om * Om * G.grad_tau.th, Om * Om * G.grad_tau.ph}, G.sigma);

    G.e3 = {Field::Zero(n), nu[0], nu[1], nu[2]};
    // e4 = (dt + Omega^2 grad tau) / (Omega w)
    for (int mu = 0; mu < 4; ++mu) {
        const Field lift = Om * Om * (G.grad_tau.th * Xth[mu] + G.grad_tau.ph * Xph[mu]);
        G.e4[mu] = ((mu == 0 ? 1.0 : 0.0) + lift) / G.A;
    }

    const auto De3 = surface_derivative(grid, chart, X, G.e3, Xth, Xph);
    const auto De4 = surface_derivative(grid, chart, X, G.e4, Xth, Xph);

    // <H0, n> = -sigma^{ab} <D_a n, X_b>
    auto normal_component = [&](const std::array<Vec4F, 2>& Dn) {
        const Field a00 = inner_field(chart, X, Dn[0], Xth), a01 = inner_field(chart, X, Dn[0], Xph);
        const Field a10 = inner_field(chart, X, Dn[1], Xth), a11 = inner_field(chart, X, Dn[1], Xph);
        const SymTensor& si = G.sigma.inv;
        return Field(-(si.tt * a00 + si.tp * (a01 + a10) + si.pp * a11));
    };
    G.H0_e3 = normal_component(De3);
    G.H0_e4 = normal_component(De4);
    const Field H2 = G.H0_e3 * G.H0_e3 - G.H0_e4 * G.H0_e4;
    if ((H2 < 1e-20).any()) throw DegenerateDataError("mean curvature vector is not spacelike");
    G.H0_norm = H2.sqrt();

    G.alpha_e3 = OneForm{inner_field(chart, X, De3[0], G.e4), inner_field(chart, X, De3[1], G.e4)};

    // second fundamental form of the projected surface in the slice
    {
        Vec4F Xth_hat = Xth, Xph_hat = Xph;
        Xth_hat[0] = Field::Zero(n);
        Xph_hat[0] = Field::Zero(n);
        const auto Dnu = surface_derivative(grid, chart, X, G.e3, Xth_hat, Xph_hat);
        const Field h00 = inner_field(chart, X, Dnu[0], Xth_hat), h01 = inner_field(chart, X, Dnu[0], Xph_hat);
        const Field h10 = inner_field(chart, X, Dnu[1], Xth_hat), h11 = inner_field(chart, X, Dnu[1], Xph_hat);
        G.hhat = SymTensor{h00, 0.5 * (h01 + h10), h11};
        const SymTensor& si = G.sigma_hat.inv;
        G.Hhat = si.tt * h00 + 2.0 * si.tp * G.hhat.tp + si.pp * h11;
    }

    G.theta = -asinh_field(G.B / (G.H0_norm * G.A));

    // mean curvature gauge: e3' = -H0/|H0| = c e3 + s e4, e4' = s e3 + c e4
    {
        const Field c = -G.H0_e3 / G.H0_norm, sh4 = G.H0_e4 / G.H0_norm;
        Vec4F f3, f4;
        for (int mu = 0; mu < 4; ++mu) {
            f3[mu] = c * G.e3[mu] + sh4 * G.e4[mu];
            f4[mu] = sh4 * G.e3[mu] + c * G.e4[mu];
        }
        const auto Df3 = surface_derivative(grid, chart, X, f3, Xth, Xph);
        G.alpha_H0 = OneForm{inner_field(chart, X, Df3[0], f4), inner_field(chart, X, Df3[1], f4)};
    }
    return G;
}

// ---------------------------------------------------------------- identities

double IdentityResiduals::max() const {
    double m = std::max({e4_decomposition, dt_decomposition, mean_curvature_projection, connection_relation,
                         area_relation});
    return std::max({m, potential_laplacian, potential_gradient});
}

IdentityResiduals projection_residuals(const SphereGrid& grid, const ReferenceSurfaceGeometry& G) {
    IdentityResiduals R;
    const Field& Om = G.Omega;
    const VectorField gh = raise(G.sigma_hat, G.dtau);  // projected gradient of tau

    // e4 = w (dt / Omega + Omega grad^ tau), grad^ tau spatial
    {
        Vec4F r;
        r[0] = G.e4[0] - G.w / Om;
        for (int mu = 1; mu < 4; ++mu)
            r[mu] = G.e4[mu] - G.w * Om * (gh.th * G.X_th[mu] + gh.ph * G.X_ph[mu]);
        r[0] *= Om;
        R.e4_decomposition = sup4(r);
    }
    // dt = Omega w e4 - Omega^2 grad tau
    {
        Vec4F r;
        for (int mu = 0; mu < 4; ++mu)
            r[mu] = (mu == 0 ? 1.0 : 0.0) - Om * G.w * G.e4[mu] +
                    Om * Om * (G.grad_tau.th * G.X_th[mu] + G.grad_tau.ph * G.X_ph[mu]);
        r[0] *= Om;
        R.dt_decomposition = sup4(r);
    }
    R.mean_curvature_projection = sup(G.Hhat + G.H0_e3 + Om / G.w * pair(G.alpha_e3, G.grad_tau));
    {
        const SymTensor& h = G.hhat;
        const Field gth = Om * (h.tt * gh.th + h.tp * gh.ph) - G.e3_Omega * G.dtau.th;
        const Field gph = Om * (h.tp * gh.th + h.pp * gh.ph) - G.e3_Omega * G.dtau.ph;
        R.connection_relation = one_form_sup(G.sigma, OneForm{G.alpha_e3.th - G.w * gth, G.alpha_e3.ph - G.w * gph});
    }
    {
        const Field hat2 = pair(G.dtau, gh), full2 = pair(G.dtau, G.grad_tau);
        R.area_relation = sup((1.0 - Om * Om * hat2) * (1.0 + Om * Om * full2) - 1.0);
    }
    if (sup(G.X.tau) == 0.0) {
        const double kappa = G.chart.kappa;
        R.potential_laplacian = sup(laplacian(grid, Om, G.sigma) + 2.0 * kappa * Om + G.Hhat * G.e3_Omega);
        const OneForm de = gradient(grid, G.e3_Omega);
        const VectorField dO = gradient_raised(grid, Om, G.sigma);
        const SymTensor& h = G.hhat;
        R.potential_gradient = one_form_sup(
            G.sigma, OneForm{de.th - (h.tt * dO.th + h.tp * dO.ph), de.ph - (h.tp * dO.th + h.pp * dO.ph)});
    }
    R.gauge_angle = sup(G.H0_norm * (-G.B / (G.H0_norm * G.A)) - G.H0_e4);
    {
        const OneForm dth = gradient(grid, G.theta);
        R.gauge_connection =
            one_form_sup(G.sigma, OneForm{G.alpha_H0.th - (G.alpha_e3.th - dth.th),
                                          G.alpha_H0.ph - (G.alpha_e3.ph - dth.ph)});
    }
    return R;
}

double conservation_residual(const SphereGrid& grid, const ReferenceSurfaceGeometry& G) {
    const Field& Om = G.Omega;
    const double lhs = integrate(grid, Om * G.Hhat * G.w, G.sigma);
    const Field rhs = (G.A * G.A * G.H0_norm * G.H0_norm + G.B * G.B).sqrt() + G.B * G.theta -
                      Om * Om * pair(G.alpha_H0, G.grad_tau);
    return std::abs(lhs - integrate(grid, rhs, G.sigma));
}

std::vector<CorpusEntry> identity_corpus(const SphereGrid& grid) {
    const ReferenceChart ads = ReferenceChart::make(ChartKind::AdS), ds = ReferenceChart::make(ChartKind::dS);
    struct Spec {
        const char* chart;
        double r, eps;
        int l, m;
    };
    const Spec specs[] = {{"ads", 1.0, 0, 0, 0},    {"ads", 2.0, 0, 0, 0},    {"ds", 0.5, 0, 0, 0},
                          {"ads", 2.0, 0.05, 1, 0}, {"ads", 2.0, 0.2, 2, 1},  {"ads", 1.0, 0.05, 2, 2},
                          {"ads", 2.0, 0.2, 1, 1},  {"ds", 0.5, 0.05, 2, 0},  {"ds", 0.5, 0.2, 2, -1}};
    std::vector<CorpusEntry> out;
    for (const Spec& s : specs) {
        const bool is_ads = std::string(s.chart) == "ads";
        CorpusEntry e{"", is_ads ? ads : ds, EmbeddingMap::round(grid, s.r)};
        std::string name = std::string(s.chart) + "_r" + std::to_string(s.r).substr(0, 3);
        if (s.eps != 0.0) {
            if (s.l > grid.lmax()) continue;
            e.X.tau = s.eps * grid.harmonic(s.l, s.m);
            name += "_tau" + std::to_string(s.eps).substr(0, 4) + "Y" + std::to_string(s.l) + std::to_string(s.m);
        }
        e.name = name;
        out.push_back(std::move(e));
    }
    return out;
}

}  // namespace adsql
