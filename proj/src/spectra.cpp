#include "spectra.h"

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <random>
#include <string>

#include "errors.h"
#include "poisson.h"

namespace sharplab {

namespace {

using SpMat = Eigen::SparseMatrix<double>;

SpMat spdiag(const Eigen::ArrayXd& d) {
    SpMat D(d.size(), d.size());
    D.reserve(Eigen::VectorXi::Constant(static_cast<int>(d.size()), 1));
    for (Eigen::Index k = 0; k < d.size(); ++k)
        D.insert(k, k) = d(k);
    D.makeCompressed();
    return D;
}

SpMat restricted(const SpMat& S, const std::vector<long>& act) {
    std::vector<long> pos(S.rows(), -1);
    for (size_t a = 0; a < act.size(); ++a)
        pos[act[a]] = static_cast<long>(a);
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(S.nonZeros());
    for (int c = 0; c < S.outerSize(); ++c)
        for (SpMat::InnerIterator it(S, c); it; ++it) {
            long pr = pos[it.row()], pc = pos[it.col()];
            if (pr >= 0 && pc >= 0)
                trip.emplace_back(pr, pc, it.value());
        }
    SpMat out(static_cast<long>(act.size()), static_cast<long>(act.size()));
    out.setFromTriplets(trip.begin(), trip.end());
    return out;
}

std::vector<long> rect_interior(const Grid& g) {
    std::vector<long> act;
    act.reserve(static_cast<size_t>(g.n1 - 2) * (g.n2 - 2));
    for (int j = 1; j + 1 < g.n2; ++j)
        for (int i = 1; i + 1 < g.n1; ++i)
            act.push_back(static_cast<long>(j) * g.n1 + i);
    return act;
}

std::vector<long> disk_interior(const DiskGrid& dg) {
    std::vector<long> act;
    act.reserve(1 + static_cast<size_t>(dg.nr - 1) * dg.nt);
    act.push_back(0);
    for (int ring = 1; ring < dg.nr; ++ring)
        for (int j = 0; j < dg.nt; ++j)
            act.push_back(dg.index(ring, j));
    return act;
}

Eigen::ArrayXd gather(const Eigen::ArrayXd& full, const std::vector<long>& act) {
    if (act.empty())
        return full;
    Eigen::ArrayXd out(static_cast<long>(act.size()));
    for (size_t a = 0; a < act.size(); ++a)
        out(static_cast<long>(a)) = full(act[a]);
    return out;
}

} // namespace

LinearizedOperator assemble_linearized(const Domain& dom, const Array2& u,
                                       const ModelParams& p, OperatorBoundary b) {
    if (dom.shape != Shape::rectangle)
        throw ConfigError("grid field given but the domain is not a rectangle");
    p.validate();
    const Grid& g = dom.rect;
    if (u.rows() != g.n1 || u.cols() != g.n2)
        throw ConfigError("state does not match the grid");

    LinearizedOperator op;
    op.kind = (p.gamma != 0.0) ? OperatorKind::ok : OperatorKind::ac;
    op.boundary = b;
    op.shape = Shape::rectangle;
    op.grid = g;
    op.eps = p.eps;
    op.nl = (8.0 / 3.0) * p.gamma;
    op.full_size = g.count();

    Array2 wq = quad_weights(g);
    Eigen::ArrayXd w = Eigen::Map<const Eigen::ArrayXd>(wq.data(), wq.size());
    Eigen::Map<const Eigen::ArrayXd> uf(u.data(), u.size());
    Eigen::ArrayXd pot = (2.0 / p.eps) * (3.0 * uf * uf - 1.0);
    op.pot_floor = pot.minCoeff();

    SpMat S = spdiag(p.eps * w) * neumann_laplacian(g);
    S = S + spdiag(w * pot);
    if (b == OperatorBoundary::dirichlet) {
        op.active = rect_interior(g);
        op.S = restricted(S, op.active);
        op.w = gather(w, op.active);
    } else {
        op.S = std::move(S);
        op.w = std::move(w);
    }
    return op;
}

LinearizedOperator assemble_linearized(const Domain& dom, const Eigen::ArrayXd& u_polar,
                                       const ModelParams& p, OperatorBoundary b) {
    if (dom.shape != Shape::disk)
        throw ConfigError("polar field given but the domain is not a disk");
    p.validate();
    if (p.gamma != 0.0)
        throw ConfigError("the nonlocal term is only wired to the rectangle domain");
    const DiskGrid& dg = dom.disk;
    if (u_polar.size() != dg.size())
        throw ConfigError("state does not match the disk grid");

    LinearizedOperator op;
    op.kind = OperatorKind::ac;
    op.boundary = b;
    op.shape = Shape::disk;
    op.dgrid = dg;
    op.eps = p.eps;
    op.full_size = dg.size();

    Eigen::ArrayXd pot = (2.0 / p.eps) * (3.0 * u_polar * u_polar - 1.0);
    op.pot_floor = pot.minCoeff();
    SpMat S = p.eps * dg.stiffness + spdiag(dg.weights * pot);
    if (b == OperatorBoundary::dirichlet) {
        op.active = disk_interior(dg);
        op.S = restricted(S, op.active);
        op.w = gather(dg.weights, op.active);
    } else {
        op.S = std::move(S);
        op.w = dg.weights;
    }
    return op;
}

LinearizedOperator laplacian_operator(const Domain& dom, OperatorBoundary b) {
    LinearizedOperator op;
    op.kind = OperatorKind::ac;
    op.boundary = b;
    op.shape = dom.shape;
    op.eps = 1.0;
    op.pot_floor = 0.0;
    if (dom.shape == Shape::rectangle) {
        const Grid& g = dom.rect;
        op.grid = g;
        op.full_size = g.count();
        Array2 wq = quad_weights(g);
        Eigen::ArrayXd w = Eigen::Map<const Eigen::ArrayXd>(wq.data(), wq.size());
        SpMat S = spdiag(w) * neumann_laplacian(g);
        if (b == OperatorBoundary::dirichlet) {
            op.active = rect_interior(g);
            op.S = restricted(S, op.active);
            op.w = gather(w, op.active);
        } else {
            op.S = std::move(S);
            op.w = std::move(w);
        }
    } else {
        const DiskGrid& dg = dom.disk;
        op.dgrid = dg;
        op.full_size = dg.size();
        SpMat S = dg.stiffness;
        if (b == OperatorBoundary::dirichlet) {
            op.active = disk_interior(dg);
            op.S = restricted(S, op.active);
            op.w = gather(dg.weights, op.active);
        } else {
            op.S = S;
            op.w = dg.weights;
        }
    }
    return op;
}

Eigen::VectorXd full_vector(const LinearizedOperator& op, const Eigen::VectorXd& phi) {
    if (phi.size() != op.size())
        throw ConfigError("vector does not match the operator");
    if (op.active.empty())
        return phi;
    Eigen::VectorXd out = Eigen::VectorXd::Zero(op.full_size);
    for (size_t a = 0; a < op.active.size(); ++a)
        out(op.active[a]) = phi(static_cast<long>(a));
    return out;
}

Eigen::VectorXd apply_weighted(const LinearizedOperator& op, const Eigen::VectorXd& phi) {
    if (phi.size() != op.size())
        throw ConfigError("vector does not match the operator");
    Eigen::VectorXd y = op.S * phi;
    if (op.nl != 0.0) {
        Eigen::VectorXd f = full_vector(op, phi);
        Array2 fa = Eigen::Map<const Array2>(f.data(), op.grid.n1, op.grid.n2);
        Array2 v = poisson_solve(op.grid, fa);
        Eigen::Map<const Eigen::ArrayXd> vf(v.data(), v.size());
        Eigen::ArrayXd va = gather(vf, op.active);
        y += (op.nl * op.w * va).matrix();
    }
    return y;
}

double quadratic_form(const LinearizedOperator& op, const Eigen::VectorXd& phi) {
    return phi.dot(apply_weighted(op, phi));
}

double rayleigh(const LinearizedOperator& op, const Eigen::VectorXd& phi) {
    double den = (phi.array() * phi.array() * op.w).sum();
    if (den <= 0.0)
        throw ConfigError("Rayleigh quotient of the zero vector");
    return quadratic_form(op, phi) / den;
}

namespace {

// Pencil S phi = lambda W phi presented through callables, shared by the
// diffuse operators regardless of domain or nonlocal content.
struct PencilOps {
    long n = 0;
    const Eigen::ArrayXd* w = nullptr;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> apply;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> shift_solve;
    std::function<void(Eigen::VectorXd&)> constrain; // optional subspace projection
    double sigma = 0.0;
};

void fix_sign(Eigen::Ref<Eigen::VectorXd> phi) {
    Eigen::Index at = 0;
    phi.cwiseAbs().maxCoeff(&at);
    if (phi(at) < 0.0)
        phi = -phi;
}

SpectrumResult finalize(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& apply,
                        const Eigen::ArrayXd& w, Eigen::ArrayXd lambdas, Eigen::MatrixXd Phi) {
    const int k = static_cast<int>(lambdas.size());
    SpectrumResult out;
    out.eigenvalues = std::move(lambdas);
    out.residuals = Eigen::ArrayXd::Zero(k);
    out.rayleigh_gap = Eigen::ArrayXd::Zero(k);
    for (int i = 0; i < k; ++i) {
        double nrm = std::sqrt((Phi.col(i).array().square() * w).sum());
        Phi.col(i) /= nrm;
        fix_sign(Phi.col(i));
        Eigen::VectorXd r = apply(Phi.col(i)) - out.eigenvalues(i) * (w * Phi.col(i).array()).matrix();
        out.residuals(i) = std::sqrt((r.array().square() / w).sum());
        out.rayleigh_gap(i) = std::abs(Phi.col(i).dot(apply(Phi.col(i))) - out.eigenvalues(i));
    }
    double defect = 0.0;
    for (int i = 0; i < k; ++i)
        for (int j = 0; j <= i; ++j) {
            double gij = (Phi.col(i).array() * Phi.col(j).array() * w).sum();
            defect = std::max(defect, std::abs(gij - (i == j ? 1.0 : 0.0)));
        }
    out.gram_defect = defect;
    out.eigenfunctions = std::move(Phi);
    return out;
}

SpectrumResult lanczos_smallest(const PencilOps& P, int k, const EigenOptions& opts) {
    const Eigen::ArrayXd& w = *P.w;
    const long n = P.n;
    int cap = opts.max_subspace;
    if (n > 100000)
        cap = std::min(cap, 120);
    cap = static_cast<int>(std::min<long>(cap, n));
    const int jmin = std::min(std::max(4 * k + 20, 60), cap);

    auto wdot = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
        return (a.array() * b.array() * w).sum();
    };

    std::mt19937_64 rng(0x5eed5eedULL);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    Eigen::VectorXd z(n);
    for (long i = 0; i < n; ++i)
        z(i) = U(rng);
    if (P.constrain)
        P.constrain(z);

    std::vector<Eigen::VectorXd> V;
    std::vector<double> alpha, beta;
    V.push_back(z / std::sqrt(wdot(z, z)));

    double worst = -1.0;
    for (int j = 0; j < cap; ++j) {
        Eigen::VectorXd t = P.shift_solve((w * V[j].array()).matrix());
        double a = wdot(t, V[j]);
        alpha.push_back(a);
        t -= a * V[j];
        if (j > 0)
            t -= beta[j - 1] * V[j - 1];
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& v : V)
                t -= wdot(t, v) * v;
        double b = std::sqrt(wdot(t, t));
        if (b < 1e-13) {
            for (long i = 0; i < n; ++i)
                t(i) = U(rng);
            if (P.constrain)
                P.constrain(t);
            for (const auto& v : V)
                t -= wdot(t, v) * v;
            b = 0.0;
            beta.push_back(b);
            V.push_back(t / std::sqrt(wdot(t, t)));
        } else {
            beta.push_back(b);
            V.push_back(t / b);
        }

        const int m = j + 1;
        if (!(m >= jmin && (m % 10 == 0 || m == cap)))
            continue;

        Eigen::MatrixXd Tm = Eigen::MatrixXd::Zero(m, m);
        for (int i = 0; i < m; ++i) {
            Tm(i, i) = alpha[i];
            if (i + 1 < m) {
                Tm(i, i + 1) = beta[i];
                Tm(i + 1, i) = beta[i];
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Tm);
        if (es.info() != Eigen::Success)
            continue;
        int good = 0;
        for (int i = m - 1; i >= 0 && good < k; --i)
            if (es.eigenvalues()(i) > 0.0)
                ++good;
        if (good < k)
            continue;

        Eigen::ArrayXd lambdas(k);
        Eigen::MatrixXd Phi(n, k);
        for (int i = 0; i < k; ++i) {
            double theta = es.eigenvalues()(m - 1 - i);
            lambdas(i) = P.sigma + 1.0 / theta;
            Eigen::VectorXd y = es.eigenvectors().col(m - 1 - i);
            Eigen::VectorXd phi = Eigen::VectorXd::Zero(n);
            for (int l = 0; l < m; ++l)
                phi += y(l) * V[l];
            Phi.col(i) = phi;
        }
        bool ok = true;
        worst = -1.0;
        for (int i = 0; i < k; ++i) {
            double nrm = std::sqrt((Phi.col(i).array().square() * w).sum());
            Eigen::VectorXd r =
                P.apply(Phi.col(i) / nrm) - lambdas(i) * (w * Phi.col(i).array() / nrm).matrix();
            double res = std::sqrt((r.array().square() / w).sum());
            worst = std::max(worst, res);
            if (res > opts.certificate * (1.0 + std::abs(lambdas(i))))
                ok = false;
        }
        if (ok)
            return finalize(P.apply, w, std::move(lambdas), std::move(Phi));
    }
    throw SolverError("eigensolver did not certify " + std::to_string(k) +
                      " pairs; best residual " + std::to_string(worst));
}

SpectrumResult dense_smallest(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& apply,
                              const Eigen::ArrayXd& w, const SpMat* S_local_only, int k) {
    const long n = w.size();
    Eigen::ArrayXd ws = w.sqrt();
    Eigen::MatrixXd B(n, n);
    if (S_local_only) {
        B = Eigen::MatrixXd(*S_local_only);
        for (long j = 0; j < n; ++j)
            for (long i = 0; i < n; ++i)
                B(i, j) /= ws(i) * ws(j);
    } else {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
        for (long j = 0; j < n; ++j) {
            e(j) = 1.0 / ws(j);
            B.col(j) = apply(e).array() / ws;
            e(j) = 0.0;
        }
    }
    B = 0.5 * (B + B.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(B);
    if (es.info() != Eigen::Success)
        throw SolverError("dense eigensolve failed");
    Eigen::ArrayXd lambdas(k);
    Eigen::MatrixXd Phi(n, k);
    for (int i = 0; i < k; ++i) {
        lambdas(i) = es.eigenvalues()(i);
        Phi.col(i) = es.eigenvectors().col(i).array() / ws;
    }
    return finalize(apply, w, std::move(lambdas), std::move(Phi));
}

struct CertifiedShift {
    double sigma = 0.0;
    std::shared_ptr<Eigen::SimplicialLDLT<SpMat>> fact;
};

// Walk the shift down until the local pencil S - sigma W factors with
// positive inertia, which certifies sigma below the whole spectrum (the
// nonlocal part only adds a nonnegative form).
CertifiedShift certify_shift(const SpMat& S, const Eigen::ArrayXd& w, double sigma0) {
    double sigma = std::min(sigma0, -1e-12);
    for (int attempt = 0; attempt < 60; ++attempt) {
        SpMat M = S - sigma * spdiag(w);
        auto fact = std::make_shared<Eigen::SimplicialLDLT<SpMat>>();
        fact->compute(M);
        if (fact->info() == Eigen::Success && (fact->vectorD().array() > 0.0).all())
            return {sigma, fact};
        sigma *= 2.0;
    }
    throw SolverError("no certified spectral shift found");
}

} // namespace

SpectrumResult eigenpairs(const LinearizedOperator& op, int k, const EigenOptions& opts) {
    if (k < 1 || k > op.size())
        throw ConfigError("eigenpair count out of range");

    auto apply = [&op](const Eigen::VectorXd& x) { return apply_weighted(op, x); };

    if (op.size() < opts.dense_cutoff) {
        const SpMat* local = (op.nl == 0.0) ? &op.S : nullptr;
        return dense_smallest(apply, op.w, local, k);
    }

    double sigma0 = opts.shift;
    if (std::isnan(sigma0)) {
        if (op.pot_floor < 0.0)
            sigma0 = (op.shape == Shape::disk) ? -4.0 * op.eps : op.pot_floor - 0.5 / op.eps;
        else
            sigma0 = -1.0;
    }
    CertifiedShift cs = certify_shift(op.S, op.w, sigma0);

    PencilOps P;
    P.n = op.size();
    P.w = &op.w;
    P.apply = apply;
    P.sigma = cs.sigma;
    if (op.nl == 0.0) {
        auto fact = cs.fact;
        P.shift_solve = [fact](const Eigen::VectorXd& b) { return Eigen::VectorXd(fact->solve(b)); };
    } else {
        auto fact = cs.fact;
        double sigma = cs.sigma;
        const LinearizedOperator* po = &op;
        P.shift_solve = [fact, sigma, po](const Eigen::VectorXd& b) {
            auto A = [&](const Eigen::VectorXd& x) {
                return Eigen::VectorXd(apply_weighted(*po, x) - sigma * (po->w * x.array()).matrix());
            };
            Eigen::VectorXd x = Eigen::VectorXd::Zero(b.size());
            Eigen::VectorXd r = b;
            Eigen::VectorXd z = fact->solve(r);
            Eigen::VectorXd p = z;
            double rz = r.dot(z);
            const double target = 1e-13 * b.norm();
            for (int it = 0; it < 400; ++it) {
                if (r.norm() <= target)
                    return x;
                Eigen::VectorXd Ap = A(p);
                double al = rz / p.dot(Ap);
                x += al * p;
                r -= al * Ap;
                if (r.norm() <= target)
                    return x;
                z = fact->solve(r);
                double rz2 = r.dot(z);
                p = z + (rz2 / rz) * p;
                rz = rz2;
            }
            throw SolverError("inner solve for the nonlocal operator stalled");
        };
    }
    return lanczos_smallest(P, k, opts);
}

SpectrumResult eigenpairs_mean_zero(const LinearizedOperator& op, int k,
                                    const EigenOptions& opts) {
    if (k < 1 || k + 1 > op.size())
        throw ConfigError("eigenpair count out of range");
    const long n = op.size();
    const Eigen::ArrayXd& w = op.w;
    const double wsum = w.sum();

    auto mu_of = [&](const Eigen::VectorXd& r) { return r.sum() / wsum; };
    auto project = [&](Eigen::VectorXd& x) {
        double c = (w * x.array()).sum() / wsum;
        x.array() -= c;
    };
    // residual of S phi = lambda W phi + mu w, the constrained stationarity
    auto apply_c = [&](const Eigen::VectorXd& x) {
        Eigen::VectorXd y = apply_weighted(op, x);
        y.array() -= mu_of(y) * w;
        return y;
    };

    if (n < opts.dense_cutoff) {
        Eigen::ArrayXd ws = w.sqrt();
        Eigen::MatrixXd B(n, n);
        if (op.nl == 0.0) {
            B = Eigen::MatrixXd(op.S);
            for (long j = 0; j < n; ++j)
                for (long i = 0; i < n; ++i)
                    B(i, j) /= ws(i) * ws(j);
        } else {
            Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
            for (long j = 0; j < n; ++j) {
                e(j) = 1.0 / ws(j);
                B.col(j) = apply_weighted(op, e).array() / ws;
                e(j) = 0.0;
            }
        }
        B = 0.5 * (B + B.transpose()).eval();
        // reflect e1 onto the scaled constant, then drop that direction
        Eigen::VectorXd c = ws.matrix() / ws.matrix().norm();
        Eigen::VectorXd v = c;
        v(0) -= 1.0;
        double vn2 = v.squaredNorm();
        Eigen::MatrixXd H = Eigen::MatrixXd::Identity(n, n);
        if (vn2 > 0.0)
            H -= (2.0 / vn2) * (v * v.transpose());
        Eigen::MatrixXd Hc = H.rightCols(n - 1);
        Eigen::MatrixXd Bc = Hc.transpose() * B * Hc;
        Bc = 0.5 * (Bc + Bc.transpose()).eval();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Bc);
        if (es.info() != Eigen::Success)
            throw SolverError("dense constrained eigensolve failed");
        Eigen::ArrayXd lambdas(k);
        Eigen::MatrixXd Phi(n, k);
        for (int i = 0; i < k; ++i) {
            lambdas(i) = es.eigenvalues()(i);
            Eigen::VectorXd phi = (Hc * es.eigenvectors().col(i)).array() / ws;
            project(phi);
            Phi.col(i) = phi;
        }
        return finalize(apply_c, w, std::move(lambdas), std::move(Phi));
    }

    double sigma0 = opts.shift;
    if (std::isnan(sigma0)) {
        if (op.pot_floor < 0.0)
            sigma0 = (op.shape == Shape::disk) ? -4.0 * op.eps : op.pot_floor - 0.5 / op.eps;
        else
            sigma0 = -1.0;
    }
    // inertia on the unconstrained pencil; the constrained spectrum sits above
    CertifiedShift cs = certify_shift(op.S, op.w, sigma0);

    Eigen::SparseMatrix<double> Bord(n + 1, n + 1);
    {
        Eigen::SparseMatrix<double> M = op.S - cs.sigma * spdiag(w);
        std::vector<Eigen::Triplet<double>> trip;
        trip.reserve(M.nonZeros() + 2 * n);
        for (long c = 0; c < M.outerSize(); ++c)
            for (SpMat::InnerIterator it(M, c); it; ++it)
                trip.emplace_back(it.row(), it.col(), it.value());
        for (long i = 0; i < n; ++i) {
            trip.emplace_back(i, n, w(i));
            trip.emplace_back(n, i, w(i));
        }
        Bord.setFromTriplets(trip.begin(), trip.end());
    }
    auto blu = std::make_shared<Eigen::SparseLU<Eigen::SparseMatrix<double>>>();
    blu->compute(Bord);
    if (blu->info() != Eigen::Success)
        throw SolverError("bordered shift system is singular");

    PencilOps P;
    P.n = n;
    P.w = &op.w;
    P.apply = apply_c;
    P.sigma = cs.sigma;
    const LinearizedOperator* po = &op;
    P.shift_solve = [blu, po, project, n](const Eigen::VectorXd& b) {
        Eigen::VectorXd rhs(n + 1);
        rhs.head(n) = b;
        rhs(n) = 0.0;
        Eigen::VectorXd sol = blu->solve(rhs);
        Eigen::VectorXd phi = sol.head(n);
        if (po->nl != 0.0) {
            Eigen::VectorXd prev = phi;
            for (int inner = 0; inner < 60; ++inner) {
                Eigen::VectorXd f = full_vector(*po, prev);
                Array2 fa = Eigen::Map<const Array2>(f.data(), po->grid.n1, po->grid.n2);
                Array2 v = poisson_solve(po->grid, fa);
                Eigen::Map<const Eigen::ArrayXd> vf(v.data(), v.size());
                Eigen::ArrayXd va = vf;
                if (!po->active.empty()) {
                    va.resize(static_cast<long>(po->active.size()));
                    for (size_t a = 0; a < po->active.size(); ++a)
                        va(static_cast<long>(a)) = vf(po->active[a]);
                }
                rhs.head(n) = b - (po->nl * po->w * va).matrix();
                sol = blu->solve(rhs);
                Eigen::VectorXd next = sol.head(n);
                double diff = (next - prev).cwiseAbs().maxCoeff();
                double size = std::max(1.0, next.cwiseAbs().maxCoeff());
                prev = next;
                if (diff <= 1e-13 * size)
                    break;
            }
            phi = prev;
        }
        project(phi);
        return phi;
    };
    P.constrain = [project](Eigen::VectorXd& x) { project(x); };

    return lanczos_smallest(P, k, opts);
}

namespace {

Eigen::MatrixXd jacobi_local_form(const InterfaceCurve& curve) {
    const long m = curve.x1.size();
    const double ds = curve.ds;
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(m, m);
    const long faces = curve.closed ? m : m - 1;
    for (long f = 0; f < faces; ++f) {
        long i = f, j = (f + 1) % m;
        K(i, i) += 1.0 / ds;
        K(j, j) += 1.0 / ds;
        K(i, j) -= 1.0 / ds;
        K(j, i) -= 1.0 / ds;
    }
    for (long i = 0; i < m; ++i)
        K(i, i) -= curve.w(i) * curve.kappa(i) * curve.kappa(i);
    return K;
}

JacobiOperator jacobi_assemble(const InterfaceCurve& curve, JacobiBoundary b, double gamma,
                               const Eigen::ArrayXd* grad_v0_n, const GreenKernel* G,
                               const double* a_first, const double* a_last) {
    const long m = curve.x1.size();
    if (curve.closed != (b == JacobiBoundary::closed))
        throw ConfigError(curve.closed ? "closed interface takes the closed boundary kind"
                                       : "open interface needs robin or dirichlet ends");
    if (gamma != 0.0 && (grad_v0_n == nullptr || G == nullptr))
        throw ConfigError("nonlocal interface operator needs the potential slope and kernel");
    if (grad_v0_n && grad_v0_n->size() != m)
        throw ConfigError("potential slope must be sampled at the interface nodes");

    Eigen::MatrixXd Q = jacobi_local_form(curve);
    if (gamma != 0.0) {
        Q += 8.0 * gamma * green_surface_form_matrix(*G, curve);
        for (long i = 0; i < m; ++i)
            Q(i, i) += 4.0 * gamma * curve.w(i) * (*grad_v0_n)(i);
    }

    JacobiOperator op;
    op.boundary = b;
    op.gamma = gamma;
    if (b == JacobiBoundary::robin) {
        if (curve.endpoints.size() != 2)
            throw ConfigError("robin ends need endpoint data on the interface");
        double A0 = a_first ? *a_first : curve.endpoints[0].boundary_curvature;
        double A1 = a_last ? *a_last : curve.endpoints[1].boundary_curvature;
        Q(0, 0) -= A0;
        Q(m - 1, m - 1) -= A1;
    }
    if (b == JacobiBoundary::dirichlet) {
        op.active.reserve(m - 2);
        for (long i = 1; i + 1 < m; ++i)
            op.active.push_back(i);
        Eigen::MatrixXd Qi(m - 2, m - 2);
        for (long i = 1; i + 1 < m; ++i)
            for (long j = 1; j + 1 < m; ++j)
                Qi(i - 1, j - 1) = Q(i, j);
        op.Q = std::move(Qi);
        op.w = curve.w.segment(1, m - 2);
    } else {
        op.Q = std::move(Q);
        op.w = curve.w;
    }
    return op;
}

} // namespace

JacobiOperator jacobi_operator(const InterfaceCurve& curve, JacobiBoundary b) {
    return jacobi_assemble(curve, b, 0.0, nullptr, nullptr, nullptr, nullptr);
}

JacobiOperator jacobi_operator(const InterfaceCurve& curve, JacobiBoundary b, double gamma,
                               const Eigen::ArrayXd& grad_v0_n, const GreenKernel& G) {
    return jacobi_assemble(curve, b, gamma, &grad_v0_n, &G, nullptr, nullptr);
}

JacobiOperator jacobi_operator_robin(const InterfaceCurve& curve, double a_first,
                                     double a_last) {
    return jacobi_assemble(curve, JacobiBoundary::robin, 0.0, nullptr, nullptr, &a_first,
                           &a_last);
}

SpectrumResult eigenpairs(const JacobiOperator& op, int k, const EigenOptions& opts) {
    (void)opts;
    if (k < 1 || k > op.size())
        throw ConfigError("eigenpair count out of range");
    Eigen::MatrixXd W = Eigen::MatrixXd(op.w.matrix().asDiagonal());
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(op.Q, W);
    if (es.info() != Eigen::Success)
        throw SolverError("interface eigensolve failed");
    Eigen::ArrayXd lambdas(k);
    Eigen::MatrixXd Phi(op.size(), k);
    for (int i = 0; i < k; ++i) {
        lambdas(i) = es.eigenvalues()(i);
        Phi.col(i) = es.eigenvectors().col(i);
    }
    auto apply = [&op](const Eigen::VectorXd& x) { return Eigen::VectorXd(op.Q * x); };
    return finalize(apply, op.w, std::move(lambdas), std::move(Phi));
}

double rayleigh(const JacobiOperator& op, const Eigen::VectorXd& phi) {
    double den = (phi.array() * phi.array() * op.w).sum();
    if (den <= 0.0)
        throw ConfigError("Rayleigh quotient of the zero vector");
    return phi.dot(op.Q * phi) / den;
}

} // namespace sharplab
