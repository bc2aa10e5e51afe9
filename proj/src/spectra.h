#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <limits>
#include <vector>

#include "energies.h"
#include "geometry.h"
#include "green.h"

namespace sharplab {

enum class OperatorKind { ac, ok };
enum class OperatorBoundary { neumann, dirichlet };

// Linearization -eps lap + (2/eps)(3u^2 - 1) (+ (8/3) gamma (-lap)^{-1}) as a
// generalized pencil S phi = lambda W phi on the active degrees of freedom:
// S is the weighted local form matrix, W the quadrature diagonal.  Dirichlet
// removes the boundary nodes; the nonlocal part is applied through Poisson
// solves on the zero-extended field and never materialized.
struct LinearizedOperator {
    OperatorKind kind = OperatorKind::ac;
    OperatorBoundary boundary = OperatorBoundary::neumann;
    Shape shape = Shape::rectangle;
    Grid grid;
    DiskGrid dgrid;
    double eps = 1.0;
    double nl = 0.0;        // (8/3) gamma; zero means purely local
    double pot_floor = 0.0; // potential lower bound, seeds the automatic shift

    Eigen::SparseMatrix<double> S;
    Eigen::ArrayXd w;
    std::vector<long> active; // active dof -> full node id; empty = identity
    long full_size = 0;

    long size() const { return S.rows(); }
};

LinearizedOperator assemble_linearized(const Domain& dom, const Array2& u,
                                       const ModelParams& p, OperatorBoundary b);
LinearizedOperator assemble_linearized(const Domain& dom, const Eigen::ArrayXd& u_polar,
                                       const ModelParams& p, OperatorBoundary b);

// Plain -lap in the same container (unit coefficient, zero potential), for
// calibration against separable eigenvalues.
LinearizedOperator laplacian_operator(const Domain& dom, OperatorBoundary b);

// W A phi, including the nonlocal part.
Eigen::VectorXd apply_weighted(const LinearizedOperator& op, const Eigen::VectorXd& phi);
// phi^T (W A) phi; by construction identical to the quadrature of the
// corresponding quadratic form.
double quadratic_form(const LinearizedOperator& op, const Eigen::VectorXd& phi);
// scatter active dofs back to the full grid vector (zeros on removed nodes)
Eigen::VectorXd full_vector(const LinearizedOperator& op, const Eigen::VectorXd& phi);

enum class JacobiBoundary { robin, dirichlet, closed };

// Interface stability operator -d^2/ds^2 - |A|^2 with Robin, Dirichlet, or
// periodic ends, optionally plus the nonlocal pair 8 gamma (single layer) and
// 4 gamma (grad v0 . n) multiplier.  Dense; interfaces carry few nodes.
struct JacobiOperator {
    JacobiBoundary boundary = JacobiBoundary::closed;
    double gamma = 0.0;
    Eigen::MatrixXd Q;        // symmetric form matrix on active nodes
    Eigen::ArrayXd w;         // arclength weights on active nodes
    std::vector<long> active; // active dof -> curve node id

    long size() const { return Q.rows(); }
};

JacobiOperator jacobi_operator(const InterfaceCurve& curve, JacobiBoundary b);
JacobiOperator jacobi_operator(const InterfaceCurve& curve, JacobiBoundary b, double gamma,
                               const Eigen::ArrayXd& grad_v0_n, const GreenKernel& G);
// Robin with explicit endpoint coefficients instead of the stored ones.
JacobiOperator jacobi_operator_robin(const InterfaceCurve& curve, double a_first,
                                     double a_last);

struct SpectrumResult {
    Eigen::ArrayXd eigenvalues;     // ascending, with multiplicity
    Eigen::MatrixXd eigenfunctions; // columns, unit weighted-L2 norm, sign fixed
    Eigen::ArrayXd residuals;       // weighted-L2 strong residual per pair
    Eigen::ArrayXd rayleigh_gap;    // |<A phi, phi> - lambda| per pair
    double gram_defect = 0.0;
};

struct EigenOptions {
    double shift = std::numeric_limits<double>::quiet_NaN(); // NaN = automatic
    int max_subspace = 300;
    double certificate = 1e-8;
    long dense_cutoff = 1500;
};

SpectrumResult eigenpairs(const LinearizedOperator& op, int k, const EigenOptions& opts = {});
SpectrumResult eigenpairs(const JacobiOperator& op, int k, const EigenOptions& opts = {});

// Smallest pairs with the weighted mean constrained to zero: the stability
// eigenvalues of the mass-constrained problem.  Shift solves go through the
// bordered saddle system so the constraint is exact.
SpectrumResult eigenpairs_mean_zero(const LinearizedOperator& op, int k,
                                    const EigenOptions& opts = {});

double rayleigh(const LinearizedOperator& op, const Eigen::VectorXd& phi);
double rayleigh(const JacobiOperator& op, const Eigen::VectorXd& phi);

} // namespace sharplab
