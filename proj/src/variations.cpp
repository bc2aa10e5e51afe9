#include "variations.h"

#include <cmath>

#include "errors.h"
#include "interp.h"
#include "poisson.h"

namespace sharplab {

namespace {

void check_grid(const Grid& g, const Array2& a, const char* what) {
    if (a.rows() != g.n1 || a.cols() != g.n2)
        throw ConfigError(std::string(what) + ": field shape does not match grid");
}

VarPair gateaux_local(const Integrand& f, const Grid& g, const Array2& u,
                      const Array2& phi) {
    Gradient du = gradient(g, u);
    Gradient dphi = gradient(g, phi);
    const Array2 &p1 = du.g1, &p2 = du.g2;
    Array2 first = f.Fz(u, p1, p2) * phi + f.Fp1(u, p1, p2) * dphi.g1 +
                   f.Fp2(u, p1, p2) * dphi.g2;
    Array2 second = f.Fzz(u, p1, p2) * phi * phi +
                    2.0 * phi * (f.Fzp1(u, p1, p2) * dphi.g1 + f.Fzp2(u, p1, p2) * dphi.g2) +
                    f.Fp11(u, p1, p2) * dphi.g1 * dphi.g1 +
                    2.0 * f.Fp12(u, p1, p2) * dphi.g1 * dphi.g2 +
                    f.Fp22(u, p1, p2) * dphi.g2 * dphi.g2;
    return {integrate(g, first), integrate(g, second)};
}

VarPair gateaux_nonlocal(const Grid& g, const Array2& u, const Array2& phi) {
    Array2 vu = poisson_solve(g, u);
    Array2 vphi = poisson_solve(g, phi);
    double first = 2.0 * integrate(g, vu * phi);
    double second = 2.0 * integrate(g, vphi * phi);
    double byparts = 2.0 * face_dirichlet_form(g, vphi);
    if (std::abs(byparts - second) > 1e-8 * std::max(1.0, std::abs(second)))
        throw SolverError("nonlocal second variation failed the integration-by-parts self-check");
    return {first, second};
}

// delta B and delta^2 B along (eta, zeta) through phi = -grad u . eta and X0.
VarPair inner_nonlocal_direct(const Grid& g, const Array2& u, const Array2& phi,
                              const Array2& X0) {
    Array2 vu = poisson_solve(g, u);
    Array2 vphi = poisson_solve(g, phi);
    double first = 2.0 * integrate(g, vu * phi);
    double second = 2.0 * integrate(g, vphi * phi) + 2.0 * integrate(g, vu * X0);
    return {first, second};
}

double functional_value(const Functional& fn, const Grid& g, const Array2& u) {
    switch (fn.kind) {
    case Functional::Kind::local: {
        Gradient du = gradient(g, u);
        return integrate(g, fn.f.F(u, du.g1, du.g2));
    }
    case Functional::Kind::nonlocal_b:
        return nonlocal_energy(g, u);
    case Functional::Kind::ohta_kawasaki: {
        Gradient du = gradient(g, u);
        return integrate(g, fn.f.F(u, du.g1, du.g2)) +
               (4.0 / 3.0) * fn.params.gamma * nonlocal_energy(g, u);
    }
    }
    return 0.0;
}

struct MapOracle {
    const Grid& g;
    CubicSpline2D se1, se2, sz1, sz2, su;
    Array2 node1, node2;
    double diam;

    MapOracle(const Grid& grid, const Array2& u, const Vec2Field& eta, const Vec2Field& zeta)
        : g(grid), se1(grid, eta.c1), se2(grid, eta.c2), sz1(grid, zeta.c1),
          sz2(grid, zeta.c2), su(grid, u), node1(coord1(grid)), node2(coord2(grid)),
          diam(std::hypot(grid.L1, grid.L2)) {}

    // Solve x + t eta(y) + (t^2/2) zeta(y) = x_node for y by fixed point.
    void invert(double t, Array2& y1, Array2& y2) const {
        y1 = node1;
        y2 = node2;
        const double half_t2 = 0.5 * t * t;
        const double tol = 1e-15 * diam;
        for (int it = 0; it < 50; ++it) {
            double delta = 0.0;
            for (long j = 0; j < y1.cols(); ++j)
                for (long i = 0; i < y1.rows(); ++i) {
                    double a = y1(i, j), b = y2(i, j);
                    double n1 = node1(i, j) - t * se1(a, b) - half_t2 * sz1(a, b);
                    double n2 = node2(i, j) - t * se2(a, b) - half_t2 * sz2(a, b);
                    delta = std::max(delta, std::max(std::abs(n1 - a), std::abs(n2 - b)));
                    y1(i, j) = n1;
                    y2(i, j) = n2;
                }
            if (delta < tol)
                return;
        }
    }

    Array2 pullback(double t) const {
        Array2 y1, y2;
        invert(t, y1, y2);
        return su.eval(y1, y2);
    }
};

} // namespace

Functional local_functional(Integrand f) {
    Functional fn;
    fn.kind = Functional::Kind::local;
    fn.f = std::move(f);
    return fn;
}

Functional nonlocal_functional() {
    Functional fn;
    fn.kind = Functional::Kind::nonlocal_b;
    return fn;
}

Functional ohta_kawasaki_functional(const ModelParams& p) {
    p.validate();
    Functional fn;
    fn.kind = Functional::Kind::ohta_kawasaki;
    fn.f = ac_integrand(p.eps);
    fn.params = p;
    return fn;
}

VarPair gateaux(const Functional& fn, const Grid& g, const Array2& u, const Array2& phi) {
    check_grid(g, u, "gateaux");
    check_grid(g, phi, "gateaux");
    switch (fn.kind) {
    case Functional::Kind::local:
        return gateaux_local(fn.f, g, u, phi);
    case Functional::Kind::nonlocal_b:
        return gateaux_nonlocal(g, u, phi);
    case Functional::Kind::ohta_kawasaki: {
        VarPair loc = gateaux_local(fn.f, g, u, phi);
        VarPair nl = gateaux_nonlocal(g, u, phi);
        double w = (4.0 / 3.0) * fn.params.gamma;
        return {loc.first + w * nl.first, loc.second + w * nl.second};
    }
    }
    return {};
}

VarPair inner_direct(const Functional& fn, const Grid& g, const Array2& u,
                     const Vec2Field& eta, const Vec2Field& zeta) {
    check_grid(g, u, "inner_direct");
    check_grid(g, eta.c1, "inner_direct");
    check_grid(g, zeta.c1, "inner_direct");

    Gradient du = gradient(g, u);
    Array2 phi = -(du.g1 * eta.c1 + du.g2 * eta.c2);
    VariationFields vf = variation_fields(g, eta, zeta, u);

    VarPair local{};
    if (fn.kind != Functional::Kind::nonlocal_b) {
        const Integrand& f = fn.f;
        const Array2 &p1 = du.g1, &p2 = du.g2;
        Gradient dphi = gradient(g, phi);
        Gradient dx0 = gradient(g, vf.X0);
        Array2 first = f.Fz(u, p1, p2) * phi + f.Fp1(u, p1, p2) * dphi.g1 +
                       f.Fp2(u, p1, p2) * dphi.g2;
        Array2 second =
            f.Fzz(u, p1, p2) * phi * phi +
            2.0 * phi * (f.Fzp1(u, p1, p2) * dphi.g1 + f.Fzp2(u, p1, p2) * dphi.g2) +
            f.Fp11(u, p1, p2) * dphi.g1 * dphi.g1 +
            2.0 * f.Fp12(u, p1, p2) * dphi.g1 * dphi.g2 +
            f.Fp22(u, p1, p2) * dphi.g2 * dphi.g2 + f.Fz(u, p1, p2) * vf.X0 +
            f.Fp1(u, p1, p2) * dx0.g1 + f.Fp2(u, p1, p2) * dx0.g2;
        local = {integrate(g, first), integrate(g, second)};
    }
    if (fn.kind == Functional::Kind::local)
        return local;

    VarPair nl = inner_nonlocal_direct(g, u, phi, vf.X0);
    if (fn.kind == Functional::Kind::nonlocal_b)
        return nl;
    double w = (4.0 / 3.0) * fn.params.gamma;
    return {local.first + w * nl.first, local.second + w * nl.second};
}

VarPair inner_tangent(const Functional& fn, const Grid& g, const Array2& u,
                      const Vec2Field& eta) {
    check_grid(g, u, "inner_tangent");
    require_tangent(g, eta);

    Gradient du = gradient(g, u);
    VectorDerivs m = vector_derivs(g, eta);
    Vec2Field zero = Vec2Field::zero(g);
    VariationFields vf = variation_fields(g, eta, zero, u);
    Array2 g1 = du.g1 * m.M11 + du.g2 * m.M21; // (grad eta)^T grad u
    Array2 g2 = du.g1 * m.M12 + du.g2 * m.M22;

    VarPair local{};
    if (fn.kind != Functional::Kind::nonlocal_b) {
        const Integrand& f = fn.f;
        const Array2 &p1 = du.g1, &p2 = du.g2;
        Array2 fp1 = f.Fp1(u, p1, p2), fp2 = f.Fp2(u, p1, p2);
        Array2 first = f.F(u, p1, p2) * m.div - (fp1 * g1 + fp2 * g2);
        Array2 second = f.F(u, p1, p2) * vf.X - 2.0 * (fp1 * g1 + fp2 * g2) * m.div -
                        2.0 * (fp1 * vf.Y.c1 + fp2 * vf.Y.c2) +
                        f.Fp11(u, p1, p2) * g1 * g1 + 2.0 * f.Fp12(u, p1, p2) * g1 * g2 +
                        f.Fp22(u, p1, p2) * g2 * g2;
        local = {integrate(g, first), integrate(g, second)};
    }
    if (fn.kind == Functional::Kind::local)
        return local;

    // Divergence form of the nonlocal second variation at zeta = Z: no second
    // derivatives of u appear.
    Array2 phi = -(du.g1 * eta.c1 + du.g2 * eta.c2);
    Array2 vu = poisson_solve(g, u);
    Array2 vphi = poisson_solve(g, phi);
    Gradient dvu = gradient(g, vu);
    double first = 2.0 * integrate(g, vu * phi);
    double second = 2.0 * integrate(g, vphi * phi) -
                    2.0 * integrate(g, (dvu.g1 * eta.c1 + dvu.g2 * eta.c2) *
                                           (du.g1 * eta.c1 + du.g2 * eta.c2)) -
                    2.0 * integrate(g, vu * (du.g1 * eta.c1 + du.g2 * eta.c2) * m.div);
    VarPair nl{first, second};
    if (fn.kind == Functional::Kind::nonlocal_b)
        return nl;
    double w = (4.0 / 3.0) * fn.params.gamma;
    return {local.first + w * nl.first, local.second + w * nl.second};
}

VarPair inner_fd_oracle(const Functional& fn, const Grid& g, const Array2& u,
                        const Vec2Field& eta, const Vec2Field& zeta, double t0,
                        OracleReading reading) {
    check_grid(g, u, "inner_fd_oracle");
    double speed = std::max(
        std::max(eta.c1.abs().maxCoeff(), eta.c2.abs().maxCoeff()),
        std::max(zeta.c1.abs().maxCoeff(), zeta.c2.abs().maxCoeff()));
    if (speed == 0.0)
        return {0.0, 0.0};
    double diam = std::hypot(g.L1, g.L2);
    if (t0 <= 0.0)
        t0 = 1e-2 * diam / speed;
    double escape = t0 * speed + 0.5 * t0 * t0 * speed;
    if (escape >= 0.5 * std::min(g.L1, g.L2))
        throw SolverError("deformation step moves nodes too far; reduce t0");

    std::function<double(double)> value;
    if (reading == OracleReading::fixed_domain) {
        auto oracle = std::make_shared<MapOracle>(g, u, eta, zeta);
        value = [oracle, &fn, &g](double t) {
            return functional_value(fn, g, oracle->pullback(t));
        };
    } else {
        if (fn.kind != Functional::Kind::local)
            throw ConfigError("transported reading is defined for local integrands only");
        VectorDerivs me = vector_derivs(g, eta);
        VectorDerivs mz = vector_derivs(g, zeta);
        Gradient du = gradient(g, u);
        Array2 uc = u;
        value = [me, mz, du, uc, &fn, &g](double t) {
            double h = 0.5 * t * t;
            Array2 J11 = 1.0 + t * me.M11 + h * mz.M11;
            Array2 J12 = t * me.M12 + h * mz.M12;
            Array2 J21 = t * me.M21 + h * mz.M21;
            Array2 J22 = 1.0 + t * me.M22 + h * mz.M22;
            Array2 det = J11 * J22 - J12 * J21;
            // p = J^{-T} grad u
            Array2 p1 = (J22 * du.g1 - J21 * du.g2) / det;
            Array2 p2 = (-J12 * du.g1 + J11 * du.g2) / det;
            return integrate(g, fn.f.F(uc, p1, p2) * det);
        };
    }

    double a0 = value(0.0);
    auto first_diff = [&](double t) { return (value(t) - value(-t)) / (2.0 * t); };
    auto second_diff = [&](double t) {
        return (value(t) - 2.0 * a0 + value(-t)) / (t * t);
    };
    double s1 = first_diff(t0), s2 = first_diff(0.5 * t0);
    double r1 = second_diff(t0), r2 = second_diff(0.5 * t0);
    return {(4.0 * s2 - s1) / 3.0, (4.0 * r2 - r1) / 3.0};
}

bool VariationReport::all_pass() const {
    for (const auto& [name, r] : residuals)
        if (!r.pass)
            return false;
    return true;
}

nlohmann::ordered_json VariationReport::to_json() const {
    nlohmann::ordered_json j;
    j["first_gateaux"] = first_gateaux;
    j["second_gateaux"] = second_gateaux;
    j["first_inner"] = first_inner;
    j["second_inner"] = second_inner;
    if (has_oracle) {
        j["oracle_first"] = oracle_first;
        j["oracle_second"] = oracle_second;
    }
    nlohmann::ordered_json res;
    for (const auto& [name, r] : residuals)
        res[name] = {{"value", r.value}, {"tolerance", r.tol}, {"pass", r.pass}};
    j["residuals"] = res;
    return j;
}

VariationReport identity_audit(const Grid& g, const Array2& u, const Vec2Field& eta,
                               const Vec2Field& zeta, const Integrand& f,
                               double newton_residual, unsigned zeta_seed) {
    VariationReport rep;
    Functional loc = local_functional(f);
    Functional nl = nonlocal_functional();

    Gradient du = gradient(g, u);
    Array2 phi = -(du.g1 * eta.c1 + du.g2 * eta.c2);
    VariationFields vf = variation_fields(g, eta, zeta, u);

    auto record = [&](const std::string& name, double lhs, double rhs) {
        double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
        ResidualEntry e;
        e.value = std::abs(lhs - rhs);
        e.tol = 1e-10 * scale;
        e.pass = e.value <= e.tol;
        rep.residuals[name] = e;
    };

    VarPair inner_loc = inner_direct(loc, g, u, eta, zeta);
    VarPair gat_loc = gateaux(loc, g, u, phi);
    VarPair gat_loc_x0 = gateaux(loc, g, u, vf.X0);
    rep.first_inner = inner_loc.first;
    rep.second_inner = inner_loc.second;
    rep.first_gateaux = gat_loc.first;
    rep.second_gateaux = gat_loc.second;
    record("first_identity_local", inner_loc.first, gat_loc.first);
    record("second_identity_local", inner_loc.second, gat_loc.second + gat_loc_x0.first);

    VarPair inner_nl = inner_direct(nl, g, u, eta, zeta);
    VarPair gat_nl = gateaux(nl, g, u, phi);
    VarPair gat_nl_x0 = gateaux(nl, g, u, vf.X0);
    record("first_identity_nonlocal", inner_nl.first, gat_nl.first);
    record("second_identity_nonlocal", inner_nl.second, gat_nl.second + gat_nl_x0.first);

    if (newton_residual >= 0.0) {
        std::mt19937_64 rng(zeta_seed);
        Vec2Field z1, z2;
        z1.c1 = random_trig_scalar(g, rng);
        z1.c2 = random_trig_scalar(g, rng);
        z2.c1 = random_trig_scalar(g, rng);
        z2.c2 = random_trig_scalar(g, rng);
        double a = inner_direct(loc, g, u, eta, z1).second;
        double b = inner_direct(loc, g, u, eta, z2).second;
        Array2 dz1 = du.g1 * (z1.c1 - z2.c1) + du.g2 * (z1.c2 - z2.c2);
        double bound = 10.0 * (newton_residual * g.area() * dz1.abs().maxCoeff() + 1e-12);
        ResidualEntry e;
        e.value = std::abs(a - b);
        e.tol = bound;
        e.pass = e.value <= e.tol;
        rep.residuals["zeta_independence"] = e;
    }
    return rep;
}

} // namespace sharplab
