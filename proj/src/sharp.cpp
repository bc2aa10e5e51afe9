#include "sharp.h"

#include <cmath>

#include "errors.h"
#include "interp.h"
#include "poisson.h"

namespace sharplab {

namespace {

struct CurveJacobian {
    Eigen::ArrayXd M11, M12, M21, M22, div;
};

CurveJacobian jacobian_on_curve(const Grid& g, const Vec2Field& field,
                                const InterfaceCurve& curve) {
    VectorDerivs m = vector_derivs(g, field);
    CurveJacobian cj;
    cj.M11 = sample_on_curve(g, m.M11, curve);
    cj.M12 = sample_on_curve(g, m.M12, curve);
    cj.M21 = sample_on_curve(g, m.M21, curve);
    cj.M22 = sample_on_curve(g, m.M22, curve);
    cj.div = cj.M11 + cj.M22;
    return cj;
}

Eigen::ArrayXd tangential_divergence(const CurveJacobian& m, const InterfaceCurve& c) {
    Eigen::ArrayXd nMn = c.n1 * (m.M11 * c.n1 + m.M12 * c.n2) +
                         c.n2 * (m.M21 * c.n1 + m.M22 * c.n2);
    return m.div - nMn;
}

double polyline_length(const Eigen::ArrayXd& x, const Eigen::ArrayXd& y, bool closed) {
    double len = 0.0;
    for (long k = 1; k < x.size(); ++k)
        len += std::hypot(x(k) - x(k - 1), y(k) - y(k - 1));
    if (closed)
        len += std::hypot(x(0) - x(x.size() - 1), y(0) - y(y.size() - 1));
    return len;
}

void require_orthogonal_contact(const InterfaceCurve& curve) {
    for (const auto& ep : curve.endpoints)
        if (ep.ortho_defect > 1e-8)
            throw GeometryError("interface does not meet the boundary orthogonally");
}

} // namespace

Eigen::ArrayXd sample_on_curve(const Grid& g, const Array2& f, const InterfaceCurve& curve) {
    CubicSpline2D sp(g, f);
    Eigen::ArrayXd out(curve.x1.size());
    for (long k = 0; k < out.size(); ++k)
        out(k) = sp(curve.x1(k), curve.x2(k));
    return out;
}

Eigen::ArrayXd arc_derivative(const InterfaceCurve& curve, const Eigen::ArrayXd& f) {
    const long n = f.size();
    const double ds = curve.ds;
    Eigen::ArrayXd d(n);
    if (curve.closed) {
        for (long k = 0; k < n; ++k)
            d(k) = (f((k + 1) % n) - f((k - 1 + n) % n)) / (2.0 * ds);
        return d;
    }
    for (long k = 1; k + 1 < n; ++k)
        d(k) = (f(k + 1) - f(k - 1)) / (2.0 * ds);
    d(0) = (-3.0 * f(0) + 4.0 * f(1) - f(2)) / (2.0 * ds);
    d(n - 1) = (3.0 * f(n - 1) - 4.0 * f(n - 2) + f(n - 3)) / (2.0 * ds);
    return d;
}

Array2 sharp_indicator(const InterfaceCurve& curve, const Grid& g) {
    Array2 d = signed_distance(curve, g);
    return d.unaryExpr([](double v) { return v < 0.0 ? 1.0 : (v > 0.0 ? -1.0 : 0.0); });
}

double geometric_first_variation(const Grid& g, const InterfaceCurve& curve,
                                 const Vec2Field& eta) {
    CurveJacobian m = jacobian_on_curve(g, eta, curve);
    return (curve.w * tangential_divergence(m, curve)).sum();
}

double geometric_second_variation(const Grid& g, const InterfaceCurve& curve,
                                  const Vec2Field& eta, const Vec2Field& zeta) {
    CurveJacobian me = jacobian_on_curve(g, eta, curve);
    CurveJacobian mz = jacobian_on_curve(g, zeta, curve);
    Eigen::ArrayXd dge = tangential_divergence(me, curve);
    Eigen::ArrayXd dgz = tangential_divergence(mz, curve);
    Eigen::ArrayXd nMt = curve.n1 * (me.M11 * curve.tau1 + me.M12 * curve.tau2) +
                         curve.n2 * (me.M21 * curve.tau1 + me.M22 * curve.tau2);
    Eigen::ArrayXd tMt = curve.tau1 * (me.M11 * curve.tau1 + me.M12 * curve.tau2) +
                         curve.tau2 * (me.M21 * curve.tau1 + me.M22 * curve.tau2);
    return (curve.w * (dgz + dge * dge + nMt * nMt - tMt * tMt)).sum();
}

VarPair12 curve_length_family_oracle(const Grid& g, const InterfaceCurve& curve,
                                     const Vec2Field& eta, const Vec2Field& zeta,
                                     double t0) {
    CubicSpline2D e1(g, eta.c1), e2(g, eta.c2), z1(g, zeta.c1), z2(g, zeta.c2);
    const long n = curve.x1.size();
    Eigen::ArrayXd v1(n), v2(n), a1(n), a2(n);
    for (long k = 0; k < n; ++k) {
        v1(k) = e1(curve.x1(k), curve.x2(k));
        v2(k) = e2(curve.x1(k), curve.x2(k));
        a1(k) = z1(curve.x1(k), curve.x2(k));
        a2(k) = z2(curve.x1(k), curve.x2(k));
    }
    auto length_at = [&](double t) {
        Eigen::ArrayXd x = curve.x1 + t * v1 + 0.5 * t * t * a1;
        Eigen::ArrayXd y = curve.x2 + t * v2 + 0.5 * t * t * a2;
        return polyline_length(x, y, curve.closed);
    };
    double l0 = length_at(0.0);
    auto d1f = [&](double t) { return (length_at(t) - length_at(-t)) / (2.0 * t); };
    auto d2f = [&](double t) { return (length_at(t) - 2.0 * l0 + length_at(-t)) / (t * t); };
    VarPair12 out;
    out.first = (4.0 * d1f(0.5 * t0) - d1f(t0)) / 3.0;
    out.second = (4.0 * d2f(0.5 * t0) - d2f(t0)) / 3.0;
    return out;
}

double normal_speed_second_variation(const InterfaceCurve& curve, const NormalSpeed& xi,
                                     const Domain& dom) {
    (void)dom;
    require_orthogonal_contact(curve);
    if (xi.xi.size() != curve.s.size())
        throw ConfigError("normal speed values must match interface node count");
    // In the plane the mean-curvature and |A|^2 terms coincide and cancel,
    // leaving the tangential gradient plus the contact term.
    Eigen::ArrayXd dxi = arc_derivative(curve, xi.xi);
    double value = (curve.w * dxi * dxi).sum();
    for (size_t e = 0; e < curve.endpoints.size(); ++e) {
        long node = (e == 0) ? 0 : curve.s.size() - 1;
        value -= curve.endpoints[e].boundary_curvature * xi.xi(node) * xi.xi(node);
    }
    return value;
}

double ok_sharp_second_variation(const InterfaceCurve& curve, const NormalSpeed& xi,
                                 double gamma, const Grid& g, const Array2& v0,
                                 const GreenKernel& G) {
    require_orthogonal_contact(curve);
    if (gamma < 0.0)
        throw ConfigError("gamma must be nonnegative");
    Eigen::ArrayXd dxi = arc_derivative(curve, xi.xi);
    double value =
        (curve.w * (dxi * dxi - curve.kappa * curve.kappa * xi.xi * xi.xi)).sum();
    for (size_t e = 0; e < curve.endpoints.size(); ++e) {
        long node = (e == 0) ? 0 : curve.s.size() - 1;
        value -= curve.endpoints[e].boundary_curvature * xi.xi(node) * xi.xi(node);
    }
    if (gamma > 0.0) {
        Gradient dv = gradient(g, v0);
        Eigen::ArrayXd dvn = sample_on_curve(g, dv.g1, curve) * curve.n1 +
                             sample_on_curve(g, dv.g2, curve) * curve.n2;
        value += 8.0 * gamma * green_surface_form(G, curve, xi);
        value += 4.0 * gamma * (curve.w * dvn * xi.xi * xi.xi).sum();
    }
    return value;
}

CriticalityAudit criticality_audit(const InterfaceCurve& curve, double gamma,
                                   const Grid& g, const Array2* v0) {
    CriticalityAudit rep;
    Eigen::ArrayXd lam = curve.kappa; // (N-1) H with N = 2
    if (gamma > 0.0) {
        if (v0 == nullptr)
            throw ConfigError("criticality audit with gamma > 0 requires the potential v0");
        lam += 4.0 * gamma * sample_on_curve(g, *v0, curve);
    }
    rep.lambda_estimate = (curve.w * lam).sum() / curve.length;
    rep.H_residual = (lam - rep.lambda_estimate).abs().maxCoeff();
    for (const auto& ep : curve.endpoints)
        rep.orthogonality_defect = std::max(rep.orthogonality_defect, ep.ortho_defect);
    return rep;
}

nlohmann::ordered_json LimitPrediction::to_json() const {
    nlohmann::ordered_json j;
    j["gamma"] = gamma;
    j["thm32.first"] = thm32_first;
    j["thm32.second_geometric"] = thm32_second_geometric;
    j["thm32.term_nn"] = thm32_term_nn;
    j["thm32.second"] = thm32_second;
    j["thm51.first"] = thm51_first;
    j["thm51.term_greens"] = thm51_term_greens;
    j["thm51.term_gradv0"] = thm51_term_gradv0;
    j["thm51.term_accel"] = thm51_term_accel;
    j["thm51.second"] = thm51_second;
    j["thm61.first"] = thm61_first;
    j["thm61.term_divgamma"] = thm61_term_divgamma;
    j["thm61.second"] = thm61_second;
    return j;
}

LimitPrediction limit_prediction(const InterfaceCurve& curve, const Domain& dom,
                                 const Vec2Field& eta, const Vec2Field& zeta,
                                 double gamma) {
    if (dom.shape != Shape::rectangle)
        throw ConfigError("limit predictions are assembled on rectangle domains");
    const Grid& g = dom.rect;
    require_tangent(g, eta);
    if (gamma < 0.0)
        throw ConfigError("gamma must be nonnegative");

    Vec2Field Z = advect_field(g, eta);
    Vec2Field diff{zeta.c1 - Z.c1, zeta.c2 - Z.c2, false};
    {
        double defect = 0.0;
        for (const auto& bn : dom.boundary) {
            long i = bn.index % g.n1, j = bn.index / g.n1;
            defect = std::max(defect, std::abs(diff.c1(i, j) * bn.nu1 +
                                               diff.c2(i, j) * bn.nu2));
        }
        double scale = std::max({1.0, zeta.c1.abs().maxCoeff(), zeta.c2.abs().maxCoeff()});
        if (defect > 1e-8 * scale)
            throw GeometryError(
                "acceleration field must match the advected normal flux on the boundary");
    }

    LimitPrediction lp;
    lp.gamma = gamma;

    CurveJacobian me = jacobian_on_curve(g, eta, curve);
    Eigen::ArrayXd nMn = curve.n1 * (me.M11 * curve.n1 + me.M12 * curve.n2) +
                         curve.n2 * (me.M21 * curve.n1 + me.M22 * curve.n2);
    double dE = geometric_first_variation(g, curve, eta);
    lp.thm32_first = (4.0 / 3.0) * dE;
    lp.thm32_second_geometric = geometric_second_variation(g, curve, eta, Z);
    lp.thm32_term_nn = (curve.w * nMn * nMn).sum();
    lp.thm32_second = (4.0 / 3.0) * (lp.thm32_second_geometric + lp.thm32_term_nn);

    Array2 u0 = sharp_indicator(curve, g);
    Array2 v0 = poisson_solve(g, u0);
    Gradient dv0 = gradient(g, v0);
    Eigen::ArrayXd v0c = sample_on_curve(g, v0, curve);
    Eigen::ArrayXd e1c = sample_on_curve(g, eta.c1, curve);
    Eigen::ArrayXd e2c = sample_on_curve(g, eta.c2, curve);
    Eigen::ArrayXd etan = e1c * curve.n1 + e2c * curve.n2;
    Eigen::ArrayXd gradv0_eta = sample_on_curve(g, dv0.g1, curve) * e1c +
                                sample_on_curve(g, dv0.g2, curve) * e2c;
    Eigen::ArrayXd accel1 = sample_on_curve(g, diff.c1, curve);
    Eigen::ArrayXd accel2 = sample_on_curve(g, diff.c2, curve);

    lp.thm51_first = 4.0 * (curve.w * v0c * etan).sum();
    GreenKernel G = GreenKernel::rectangle(g.L1, g.L2);
    NormalSpeed xi = make_normal_speed(curve, etan);
    lp.thm51_term_greens = 8.0 * green_surface_form(G, curve, xi);
    lp.thm51_term_gradv0 = 4.0 * (curve.w * gradv0_eta * etan).sum();
    Eigen::ArrayXd accel_n = (accel1 + me.div * e1c) * curve.n1 +
                             (accel2 + me.div * e2c) * curve.n2;
    lp.thm51_term_accel = 4.0 * (curve.w * v0c * accel_n).sum();
    lp.thm51_second = lp.thm51_term_greens + lp.thm51_term_gradv0 + lp.thm51_term_accel;

    CurveJacobian mdiff = jacobian_on_curve(g, diff, curve);
    lp.thm61_term_divgamma = (curve.w * tangential_divergence(mdiff, curve)).sum();
    lp.thm61_first = (4.0 / 3.0) * (dE + 4.0 * gamma * (curve.w * v0c * etan).sum());
    lp.thm61_second =
        (4.0 / 3.0) * (lp.thm32_second_geometric + lp.thm32_term_nn +
                       lp.thm61_term_divgamma + gamma * lp.thm51_second);
    return lp;
}

} // namespace sharplab
