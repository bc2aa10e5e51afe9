#include "geometry.h"

#include <algorithm>
#include <cmath>
#include <memory>

#include "errors.h"
#include "interp.h"

namespace sharplab {

namespace {

const double pi = std::acos(-1.0);

double plateau(double t) {
    double a = std::abs(t);
    if (a >= 1.0)
        return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - a * a));
}

} // namespace

double Domain::min_spacing() const {
    if (shape == Shape::rectangle)
        return std::min(rect.h1(), rect.h2());
    return std::min(disk.dr(), disk.R * disk.dt());
}

Domain build_domain_rectangle(double L1, double L2, int n1, int n2) {
    Domain dom;
    dom.shape = Shape::rectangle;
    dom.rect = make_grid(n1, n2, L1, L2);
    const Grid& g = dom.rect;
    auto push = [&](int i, int j, double nu1, double nu2, double wgt) {
        dom.boundary.push_back(
            {static_cast<long>(j) * g.n1 + i, nu1, nu2, 0.0, wgt});
    };
    for (int j = 1; j < g.n2 - 1; ++j) {
        push(0, j, -1.0, 0.0, g.h2());
        push(g.n1 - 1, j, 1.0, 0.0, g.h2());
    }
    for (int i = 1; i < g.n1 - 1; ++i) {
        push(i, 0, 0.0, -1.0, g.h1());
        push(i, g.n2 - 1, 0.0, 1.0, g.h1());
    }
    return dom;
}

Domain build_domain_disk(double R, int nr, int nt) {
    if (R <= 0.0)
        throw ConfigError("disk radius must be positive");
    if (nr < 16 || nt < 32)
        throw ConfigError("disk resolution must satisfy nr >= 16, nt >= 32");
    Domain dom;
    dom.shape = Shape::disk;
    DiskGrid& dg = dom.disk;
    dg.R = R;
    dg.nr = nr;
    dg.nt = nt;
    const double dr = dg.dr(), dt = dg.dt();

    dg.weights.resize(dg.size());
    dg.weights(0) = pi * 0.25 * dr * dr;
    for (int i = 1; i <= nr; ++i) {
        double rin = (i - 0.5) * dr;
        double rout = (i == nr) ? R : (i + 0.5) * dr;
        double area = 0.5 * (rout * rout - rin * rin) * dt;
        for (int j = 0; j < nt; ++j)
            dg.weights(dg.index(i, j)) = area;
    }

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(8 * dg.size());
    auto add_face = [&](long p, long q, double c) {
        trip.emplace_back(p, p, c);
        trip.emplace_back(q, q, c);
        trip.emplace_back(p, q, -c);
        trip.emplace_back(q, p, -c);
    };
    for (int j = 0; j < nt; ++j)
        add_face(0, dg.index(1, j), 0.5 * dt);
    for (int i = 1; i < nr; ++i)
        for (int j = 0; j < nt; ++j)
            add_face(dg.index(i, j), dg.index(i + 1, j), (i + 0.5) * dt);
    for (int i = 1; i <= nr; ++i) {
        double c = (i == nr) ? (0.5 * dr) / ((R - 0.25 * dr) * dt)
                             : dr / (i * dr * dt);
        for (int j = 0; j < nt; ++j)
            add_face(dg.index(i, j), dg.index(i, j + 1), c);
    }
    dg.stiffness.resize(dg.size(), dg.size());
    dg.stiffness.setFromTriplets(trip.begin(), trip.end());

    for (int j = 0; j < nt; ++j) {
        double th = j * dt;
        dom.boundary.push_back(
            {dg.index(nr, j), std::cos(th), std::sin(th), 1.0 / R, R * dt});
    }
    return dom;
}

InterfaceCurve build_interface_segment(const Domain& dom, double x) {
    if (dom.shape != Shape::rectangle)
        throw ConfigError("segment interface requires a rectangle domain");
    const Grid& g = dom.rect;
    if (x <= 0.0 || x >= g.L1)
        throw ConfigError("segment position must lie strictly inside the domain");
    InterfaceCurve c;
    c.kind = InterfaceKind::segment;
    c.seg_x = x;
    c.closed = false;
    int m = std::max(16, static_cast<int>(std::ceil(g.L2 / dom.min_spacing())));
    c.ds = g.L2 / m;
    c.length = g.L2;
    long n = m + 1;
    c.s.resize(n);
    c.x1.resize(n);
    c.x2.resize(n);
    c.n1 = Eigen::ArrayXd::Constant(n, 1.0);
    c.n2 = Eigen::ArrayXd::Zero(n);
    c.tau1 = Eigen::ArrayXd::Zero(n);
    c.tau2 = Eigen::ArrayXd::Constant(n, 1.0);
    c.kappa = Eigen::ArrayXd::Zero(n);
    c.w = Eigen::ArrayXd::Constant(n, c.ds);
    c.w(0) *= 0.5;
    c.w(n - 1) *= 0.5;
    for (long k = 0; k < n; ++k) {
        c.s(k) = k * c.ds;
        c.x1(k) = x;
        c.x2(k) = k * c.ds;
    }
    c.endpoints.push_back({x, 0.0, 0.0, -1.0, 0.0, 0.0});
    c.endpoints.push_back({x, g.L2, 0.0, 1.0, 0.0, 0.0});
    return c;
}

InterfaceCurve build_interface_circle(const Domain& dom, double c1, double c2, double r) {
    if (dom.shape != Shape::rectangle)
        throw ConfigError("circle interface requires a rectangle domain");
    const Grid& g = dom.rect;
    if (r <= 0.0)
        throw ConfigError("circle radius must be positive");
    double margin = std::min(std::min(c1 - r, g.L1 - c1 - r),
                             std::min(c2 - r, g.L2 - c2 - r));
    if (margin <= 0.0)
        throw ConfigError("circle must lie strictly inside the domain");
    InterfaceCurve c;
    c.kind = InterfaceKind::circle;
    c.closed = true;
    c.c1 = c1;
    c.c2 = c2;
    c.r = r;
    c.length = 2.0 * pi * r;
    int m = std::max(32, static_cast<int>(std::ceil(c.length / dom.min_spacing())));
    c.ds = c.length / m;
    c.s.resize(m);
    c.x1.resize(m);
    c.x2.resize(m);
    c.n1.resize(m);
    c.n2.resize(m);
    c.tau1.resize(m);
    c.tau2.resize(m);
    c.kappa = Eigen::ArrayXd::Constant(m, 1.0 / r);
    c.w = Eigen::ArrayXd::Constant(m, c.ds);
    for (long k = 0; k < m; ++k) {
        double th = 2.0 * pi * k / m;
        c.s(k) = r * th;
        c.x1(k) = c1 + r * std::cos(th);
        c.x2(k) = c2 + r * std::sin(th);
        c.n1(k) = std::cos(th);
        c.n2(k) = std::sin(th);
        c.tau1(k) = -std::sin(th);
        c.tau2(k) = std::cos(th);
    }
    return c;
}

InterfaceCurve build_interface_diameter(const Domain& dom) {
    if (dom.shape != Shape::disk)
        throw ConfigError("diameter interface requires a disk domain");
    const DiskGrid& dg = dom.disk;
    InterfaceCurve c;
    c.kind = InterfaceKind::diameter;
    c.closed = false;
    c.length = 2.0 * dg.R;
    int m = std::max(16, static_cast<int>(std::ceil(c.length / dom.min_spacing())));
    c.ds = c.length / m;
    long n = m + 1;
    c.s.resize(n);
    c.x1.resize(n);
    c.x2.resize(n);
    c.n1 = Eigen::ArrayXd::Zero(n);
    c.n2 = Eigen::ArrayXd::Constant(n, -1.0);
    c.tau1 = Eigen::ArrayXd::Constant(n, 1.0);
    c.tau2 = Eigen::ArrayXd::Zero(n);
    c.kappa = Eigen::ArrayXd::Zero(n);
    c.w = Eigen::ArrayXd::Constant(n, c.ds);
    c.w(0) *= 0.5;
    c.w(n - 1) *= 0.5;
    for (long k = 0; k < n; ++k) {
        c.s(k) = k * c.ds;
        c.x1(k) = -dg.R + k * c.ds;
        c.x2(k) = 0.0;
    }
    c.endpoints.push_back({-dg.R, 0.0, -1.0, 0.0, 0.0, 1.0 / dg.R});
    c.endpoints.push_back({dg.R, 0.0, 1.0, 0.0, 0.0, 1.0 / dg.R});
    return c;
}

NormalSpeed make_normal_speed(const InterfaceCurve& curve,
                              const std::function<double(double)>& f) {
    Eigen::ArrayXd v(curve.s.size());
    for (long k = 0; k < v.size(); ++k)
        v(k) = f(curve.s(k));
    return make_normal_speed(curve, v);
}

NormalSpeed make_normal_speed(const InterfaceCurve& curve, const Eigen::ArrayXd& values) {
    if (values.size() != curve.s.size())
        throw ConfigError("normal speed values must match interface node count");
    if (!values.isFinite().all())
        throw ConfigError("normal speed values must be finite");
    NormalSpeed xi;
    xi.xi = values;
    double mean = (curve.w * values).sum();
    double scale = std::max(1.0, values.abs().maxCoeff());
    xi.mean_zero = std::abs(mean) <= 1e-10 * scale * curve.length;
    return xi;
}

Array2 signed_distance(const InterfaceCurve& curve, const Grid& g) {
    Array2 d(g.n1, g.n2);
    for (int j = 0; j < g.n2; ++j)
        for (int i = 0; i < g.n1; ++i) {
            double x = g.x1(i), y = g.x2(j);
            switch (curve.kind) {
            case InterfaceKind::segment:
                d(i, j) = x - curve.seg_x;
                break;
            case InterfaceKind::circle:
                d(i, j) = std::hypot(x - curve.c1, y - curve.c2) - curve.r;
                break;
            case InterfaceKind::diameter:
                d(i, j) = -y;
                break;
            }
        }
    return d;
}

Eigen::ArrayXd signed_distance_disk(const InterfaceCurve& curve, const DiskGrid& dg) {
    if (curve.kind != InterfaceKind::diameter)
        throw ConfigError("disk signed distance is defined for the diameter interface");
    Eigen::ArrayXd d(dg.size());
    for (long idx = 0; idx < dg.size(); ++idx)
        d(idx) = -dg.x2(idx);
    return d;
}

Extension normal_speed_extension(const InterfaceCurve& curve, const Domain& dom,
                                 const NormalSpeed& xi, double cutoff_frac) {
    if (cutoff_frac <= 0.0 || cutoff_frac > 1.0)
        throw ConfigError("cutoff fraction must lie in (0, 1]");
    for (const auto& ep : curve.endpoints)
        if (ep.ortho_defect > 1e-8)
            throw GeometryError("interface does not meet the boundary orthogonally");
    if (xi.xi.size() != curve.s.size())
        throw ConfigError("normal speed values must match interface node count");

    Extension ext;
    if (curve.kind == InterfaceKind::segment) {
        const Grid& g = dom.rect;
        double clearance = std::min(curve.seg_x, g.L1 - curve.seg_x);
        double wd = cutoff_frac * clearance;
        auto sp = std::make_shared<MirrorSpline1D>(curve.length, xi.xi);
        double c = curve.seg_x;
        ext.e1 = [sp, c, wd](double x, double y) {
            return (*sp)(y)*plateau((x - c) / wd);
        };
        ext.e2 = [](double, double) { return 0.0; };
    } else if (curve.kind == InterfaceKind::circle) {
        const Grid& g = dom.rect;
        double wall = std::min(std::min(curve.c1 - curve.r, g.L1 - curve.c1 - curve.r),
                               std::min(curve.c2 - curve.r, g.L2 - curve.c2 - curve.r));
        double clearance = std::min(curve.r, wall);
        double wd = cutoff_frac * clearance;
        auto sp = std::make_shared<PeriodicSpline1D>(curve.length, xi.xi);
        double c1 = curve.c1, c2 = curve.c2, r = curve.r;
        auto radial = [sp, c1, c2, r, wd](double x, double y) {
            double rho = std::hypot(x - c1, y - c2);
            double q = plateau((rho - r) / wd);
            if (q == 0.0 || rho == 0.0)
                return 0.0;
            double th = std::atan2(y - c2, x - c1);
            if (th < 0.0)
                th += 2.0 * pi;
            return (*sp)(r * th) * q;
        };
        ext.e1 = [radial, c1, c2](double x, double y) {
            double v = radial(x, y);
            if (v == 0.0)
                return 0.0;
            double rho = std::hypot(x - c1, y - c2);
            return v * (x - c1) / rho;
        };
        ext.e2 = [radial, c1, c2](double x, double y) {
            double v = radial(x, y);
            if (v == 0.0)
                return 0.0;
            double rho = std::hypot(x - c1, y - c2);
            return v * (y - c2) / rho;
        };
    } else {
        double Rd = dom.disk.R;
        double wd = cutoff_frac * Rd;
        auto sp = std::make_shared<MirrorSpline1D>(curve.length, xi.xi);
        ext.e1 = [](double, double) { return 0.0; };
        ext.e2 = [sp, Rd, wd](double x, double y) {
            return -(*sp)(x + Rd) * plateau(y / wd);
        };
    }
    return ext;
}

Vec2Field extend_normal_speed(const InterfaceCurve& curve, const Domain& dom,
                              const NormalSpeed& xi, double cutoff_frac) {
    if (dom.shape != Shape::rectangle)
        throw ConfigError("grid extension requires a rectangle domain");
    Extension ext = normal_speed_extension(curve, dom, xi, cutoff_frac);
    const Grid& g = dom.rect;
    Vec2Field eta;
    eta.c1.resize(g.n1, g.n2);
    eta.c2.resize(g.n1, g.n2);
    for (int j = 0; j < g.n2; ++j)
        for (int i = 0; i < g.n1; ++i) {
            eta.c1(i, j) = ext.e1(g.x1(i), g.x2(j));
            eta.c2(i, j) = ext.e2(g.x1(i), g.x2(j));
        }
    eta.tangent = tangency_defect(g, eta) <= 1e-12;
    return eta;
}

void extend_normal_speed_disk(const InterfaceCurve& curve, const Domain& dom,
                              const NormalSpeed& xi, Eigen::ArrayXd& e1,
                              Eigen::ArrayXd& e2, double cutoff_frac) {
    if (dom.shape != Shape::disk)
        throw ConfigError("disk extension requires a disk domain");
    Extension ext = normal_speed_extension(curve, dom, xi, cutoff_frac);
    const DiskGrid& dg = dom.disk;
    e1.resize(dg.size());
    e2.resize(dg.size());
    for (long idx = 0; idx < dg.size(); ++idx) {
        e1(idx) = ext.e1(dg.x1(idx), dg.x2(idx));
        e2(idx) = ext.e2(dg.x1(idx), dg.x2(idx));
    }
    for (const auto& bn : dom.boundary) {
        double dot = e1(bn.index) * bn.nu1 + e2(bn.index) * bn.nu2;
        e1(bn.index) -= dot * bn.nu1;
        e2(bn.index) -= dot * bn.nu2;
    }
}

} // namespace sharplab
