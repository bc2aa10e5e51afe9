#include "newton.h"

#include <Eigen/SparseLU>

#include <cmath>
#include <cstdio>
#include <utility>
#include <vector>

#include "errors.h"
#include "poisson.h"
#include "stencil.h"

namespace sharplab {

namespace {

Eigen::SparseMatrix<double> spdiag(const Eigen::ArrayXd& d) {
    Eigen::SparseMatrix<double> D(d.size(), d.size());
    D.reserve(Eigen::VectorXi::Constant(static_cast<int>(d.size()), 1));
    for (Eigen::Index k = 0; k < d.size(); ++k)
        D.insert(k, k) = d(k);
    D.makeCompressed();
    return D;
}

// Bordered Newton matrix [[WJ, -w], [w^T/area, 0]] when constrained, WJ alone
// otherwise.  SparseLU tolerates the saddle structure and sign-indefinite
// blocks alike.
Eigen::SparseMatrix<double> bordered(const Eigen::SparseMatrix<double>& WJ,
                                     const Eigen::ArrayXd& w, double area, bool constrained) {
    if (!constrained)
        return WJ;
    const Eigen::Index n = WJ.rows();
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(WJ.nonZeros() + 2 * n);
    for (Eigen::Index c = 0; c < WJ.outerSize(); ++c)
        for (Eigen::SparseMatrix<double>::InnerIterator it(WJ, c); it; ++it)
            trip.emplace_back(it.row(), it.col(), it.value());
    for (Eigen::Index k = 0; k < n; ++k) {
        trip.emplace_back(k, n, -w(k));
        trip.emplace_back(n, k, w(k) / area);
    }
    Eigen::SparseMatrix<double> B(n + 1, n + 1);
    B.setFromTriplets(trip.begin(), trip.end());
    return B;
}

struct Factorized {
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    bool ok = false;
};

void factorize(Factorized& f, const Eigen::SparseMatrix<double>& B) {
    f.lu.compute(B);
    f.ok = (f.lu.info() == Eigen::Success);
    if (!f.ok)
        throw SolverError("Newton matrix is singular; an odd symmetry restriction "
                          "usually removes the troublesome mode");
}

} // namespace

void project_odd(const Grid& g, Array2& a) {
    for (int j = 0; j < g.n2; ++j) {
        for (int i = 0; 2 * i < g.n1; ++i) {
            int im = g.n1 - 1 - i;
            double v = 0.5 * (a(i, j) - a(im, j));
            a(i, j) = v;
            a(im, j) = -v;
        }
    }
}

void project_odd(const DiskGrid& dg, Eigen::ArrayXd& a) {
    a(0) = 0.0;
    for (int ring = 1; ring <= dg.nr; ++ring) {
        for (int j = 0; 2 * j <= dg.nt; ++j) {
            int jm = (dg.nt - j) % dg.nt;
            long k = dg.index(ring, j), km = dg.index(ring, jm);
            if (k == km) {
                a(k) = 0.0;
                continue;
            }
            double v = 0.5 * (a(k) - a(km));
            a(k) = v;
            a(km) = -v;
        }
    }
}

Eigen::ArrayXd profile_1d(double eps, double length, int n, double center) {
    if (eps <= 0.0 || length <= 0.0 || n < 3)
        throw ConfigError("profile_1d needs eps > 0, length > 0, n >= 3");
    Eigen::ArrayXd u(n);
    const double h = length / (n - 1);
    for (int i = 0; i < n; ++i)
        u(i) = std::tanh((i * h - center) / eps);
    return u;
}

Eigen::ArrayXd profile_1d(double eps, double length, int n) {
    return profile_1d(eps, length, n, 0.5 * length);
}

double allen_cahn_energy_1d(double length, const Eigen::ArrayXd& u, double eps) {
    const int n = static_cast<int>(u.size());
    if (n < 3)
        throw ConfigError("allen_cahn_energy_1d needs at least 3 nodes");
    const double h = length / (n - 1);
    Eigen::ArrayXd du(n);
    du(0) = (-3.0 * u(0) + 4.0 * u(1) - u(2)) / (2.0 * h);
    du(n - 1) = (3.0 * u(n - 1) - 4.0 * u(n - 2) + u(n - 3)) / (2.0 * h);
    for (int i = 1; i + 1 < n; ++i)
        du(i) = (u(i + 1) - u(i - 1)) / (2.0 * h);
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        double wi = (i == 0 || i == n - 1) ? 0.5 * h : h;
        double s = 1.0 - u(i) * u(i);
        total += wi * (0.5 * eps * du(i) * du(i) + 0.5 * s * s / eps);
    }
    return total;
}

namespace {

SolveResult solve_rectangle(const Domain& dom, const ModelParams& p,
                            const InterfaceCurve& curve, const SolveOptions& opts) {
    const Grid& g = dom.rect;
    const bool odd = (opts.symmetry == Symmetry::odd_across_interface);
    if (odd) {
        if (curve.kind != InterfaceKind::segment)
            throw ConfigError("odd restriction on the rectangle needs a vertical segment");
        if (std::abs(curve.seg_x - 0.5 * g.L1) > 1e-12 * std::max(1.0, g.L1))
            throw ConfigError("odd restriction needs the segment on the midline");
        if (p.has_mass && std::abs(p.mass) > 1e-14)
            throw ConfigError("odd restriction forces zero mean");
    }

    const Array2 wq = quad_weights(g);
    const double area = g.area();
    const Eigen::ArrayXd w = Eigen::Map<const Eigen::ArrayXd>(wq.data(), wq.size());

    Array2 u;
    if (opts.init) {
        if (opts.init->rows() != g.n1 || opts.init->cols() != g.n2)
            throw ConfigError("initial guess does not match the grid");
        u = *opts.init;
    } else {
        u = -(signed_distance(curve, g) / p.eps).tanh();
    }
    double lambda = 0.0;
    if (p.has_mass)
        u += p.mass - (wq * u).sum() / area;
    if (odd)
        project_odd(g, u);

    auto residual = [&](const Array2& uu, double lam) {
        Array2 r = -p.eps * laplacian_mirror(g, uu) +
                   (2.0 / p.eps) * (uu * uu * uu - uu);
        if (p.gamma != 0.0)
            r += (8.0 / 3.0) * p.gamma * poisson_solve(g, uu);
        if (lam != 0.0)
            r -= lam;
        return r;
    };

    const Eigen::SparseMatrix<double> A = neumann_laplacian(g);
    const Eigen::SparseMatrix<double> WA =
        Eigen::VectorXd(w).asDiagonal() * A;

    SolveResult out;
    out.shape = Shape::rectangle;
    out.symmetry = opts.symmetry;
    out.has_multiplier = p.has_mass;

    const long N = g.count();
    Array2 r = residual(u, lambda);
    double rnorm = r.abs().maxCoeff();
    int iter = 0;
    while (rnorm > opts.tol && iter < opts.max_iter) {
        ++iter;
        Eigen::Map<const Eigen::ArrayXd> uf(u.data(), N);
        Eigen::ArrayXd drpot = w * ((2.0 / p.eps) * (3.0 * uf * uf - 1.0));
        Eigen::SparseMatrix<double> WJ = p.eps * WA + spdiag(drpot);
        Eigen::SparseMatrix<double> B = bordered(WJ, w, area, p.has_mass);
        Factorized f;
        factorize(f, B);

        Eigen::VectorXd rhs0(p.has_mass ? N + 1 : N);
        rhs0.head(N) = -(w * Eigen::Map<const Eigen::ArrayXd>(r.data(), N)).matrix();
        if (p.has_mass)
            rhs0(N) = p.mass - (wq * u).sum() / area;

        Eigen::VectorXd sol = f.lu.solve(rhs0);
        if (p.gamma != 0.0) {
            // the nonlocal block of the Jacobian moves to the right-hand side;
            // the local factorization is reused across the sweeps
            Eigen::VectorXd prev = sol;
            int inner = 0;
            for (; inner < opts.max_inner; ++inner) {
                Array2 du = Eigen::Map<const Array2>(prev.data(), g.n1, g.n2);
                Array2 pv = poisson_solve(g, du);
                Eigen::VectorXd rhs = rhs0;
                rhs.head(N) -=
                    ((8.0 / 3.0) * p.gamma * w *
                     Eigen::Map<const Eigen::ArrayXd>(pv.data(), N))
                        .matrix();
                sol = f.lu.solve(rhs);
                double diff = (sol.head(N) - prev.head(N)).cwiseAbs().maxCoeff();
                double size = std::max(1.0, sol.head(N).cwiseAbs().maxCoeff());
                prev = sol;
                if (diff <= 1e-12 * size)
                    break;
            }
            if (inner == opts.max_inner)
                throw SolverError("nonlocal Newton correction did not settle");
        }

        Array2 du = Eigen::Map<const Array2>(sol.data(), g.n1, g.n2);
        double dlam = p.has_mass ? sol(N) : 0.0;
        if (odd)
            project_odd(g, du);

        double alpha = 1.0;
        Array2 rt;
        double rtnorm = rnorm;
        while (true) {
            Array2 ut = u + alpha * du;
            rt = residual(ut, lambda + alpha * dlam);
            rtnorm = rt.abs().maxCoeff();
            if (rtnorm < rnorm || alpha <= std::ldexp(1.0, -10))
                break;
            alpha *= 0.5;
        }
        u += alpha * du;
        lambda += alpha * dlam;
        r = std::move(rt);
        rnorm = rtnorm;
    }

    if (rnorm > opts.tol) {
        char msg[96];
        std::snprintf(msg, sizeof msg, "Newton did not converge; residual %.3e", rnorm);
        throw SolverError(msg);
    }

    out.u = std::move(u);
    out.residual_norm = rnorm;
    out.iterations = iter;
    out.multiplier = lambda;
    return out;
}

SolveResult solve_disk(const Domain& dom, const ModelParams& p, const InterfaceCurve& curve,
                       const SolveOptions& opts) {
    const DiskGrid& dg = dom.disk;
    if (p.gamma != 0.0)
        throw ConfigError("the nonlocal term is only wired to the rectangle domain");
    const bool odd = (opts.symmetry == Symmetry::odd_across_interface);
    if (odd && curve.kind != InterfaceKind::diameter)
        throw ConfigError("odd restriction on the disk needs the diameter interface");

    const Eigen::ArrayXd& w = dg.weights;
    const double area = w.sum();
    const long N = dg.size();

    Eigen::ArrayXd u;
    if (opts.init_polar) {
        if (opts.init_polar->size() != N)
            throw ConfigError("initial guess does not match the disk grid");
        u = *opts.init_polar;
    } else {
        u = -(signed_distance_disk(curve, dg) / p.eps).tanh();
    }
    double lambda = 0.0;
    if (p.has_mass)
        u += p.mass - (w * u).sum() / area;
    if (odd)
        project_odd(dg, u);

    const Eigen::SparseMatrix<double>& K = dg.stiffness;
    auto strong_residual = [&](const Eigen::ArrayXd& uu, double lam) {
        Eigen::ArrayXd r = p.eps * (K * uu.matrix()).array() / w +
                           (2.0 / p.eps) * (uu * uu * uu - uu);
        if (lam != 0.0)
            r -= lam;
        return r;
    };

    SolveResult out;
    out.shape = Shape::disk;
    out.symmetry = opts.symmetry;
    out.has_multiplier = p.has_mass;

    Eigen::ArrayXd r = strong_residual(u, lambda);
    double rnorm = r.abs().maxCoeff();
    int iter = 0;
    while (rnorm > opts.tol && iter < opts.max_iter) {
        ++iter;
        Eigen::SparseMatrix<double> H =
            p.eps * K + spdiag(w * ((2.0 / p.eps) * (3.0 * u * u - 1.0)));
        Eigen::SparseMatrix<double> B = bordered(H, w, area, p.has_mass);
        Factorized f;
        factorize(f, B);

        Eigen::VectorXd rhs(p.has_mass ? N + 1 : N);
        rhs.head(N) = -(w * r).matrix();
        if (p.has_mass)
            rhs(N) = p.mass - (w * u).sum() / area;
        Eigen::VectorXd sol = f.lu.solve(rhs);

        Eigen::ArrayXd du = sol.head(N).array();
        double dlam = p.has_mass ? sol(N) : 0.0;
        if (odd)
            project_odd(dg, du);

        double alpha = 1.0;
        Eigen::ArrayXd rt;
        double rtnorm = rnorm;
        while (true) {
            Eigen::ArrayXd ut = u + alpha * du;
            rt = strong_residual(ut, lambda + alpha * dlam);
            rtnorm = rt.abs().maxCoeff();
            if (rtnorm < rnorm || alpha <= std::ldexp(1.0, -10))
                break;
            alpha *= 0.5;
        }
        u += alpha * du;
        lambda += alpha * dlam;
        r = std::move(rt);
        rnorm = rtnorm;
    }

    if (rnorm > opts.tol) {
        char msg[96];
        std::snprintf(msg, sizeof msg, "Newton did not converge; residual %.3e", rnorm);
        throw SolverError(msg);
    }

    out.u_polar = std::move(u);
    out.residual_norm = rnorm;
    out.iterations = iter;
    out.multiplier = lambda;
    return out;
}

} // namespace

SolveResult solve_critical(const Domain& dom, const ModelParams& p,
                           const InterfaceCurve& curve, const SolveOptions& opts) {
    p.validate();
    if (dom.shape == Shape::rectangle)
        return solve_rectangle(dom, p, curve, opts);
    return solve_disk(dom, p, curve, opts);
}

MassCorrection mass_correction_field(const Grid& g, const Array2& u, const Vec2Field& eta,
                                     const Vec2Field& beta) {
    require_tangent(g, eta);
    require_tangent(g, beta);
    const Array2 w = quad_weights(g);
    VectorDerivs de = vector_derivs(g, eta);
    VectorDerivs db = vector_derivs(g, beta);
    double num = (w * u * de.div).sum();
    double den = (w * u * db.div).sum();
    double scale = u.abs().maxCoeff() * db.div.abs().maxCoeff() * g.area();
    if (std::abs(den) < 1e-8 * std::max(scale, 1e-300))
        throw ConfigError("correction field has no volume response against u");
    MassCorrection out;
    out.coefficient = -num / den;
    out.field.c1 = eta.c1 + out.coefficient * beta.c1;
    out.field.c2 = eta.c2 + out.coefficient * beta.c2;
    out.field.tangent = eta.tangent && beta.tangent;
    return out;
}

} // namespace sharplab
