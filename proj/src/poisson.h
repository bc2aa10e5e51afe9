#pragma once

#include <Eigen/Sparse>

#include "grid.h"

namespace sharplab {

struct PoissonResult {
    Array2 v;             // mean-zero solution of -lap v = u - mean(u), Neumann
    double mean = 0.0;    // area mean of the datum
    double residual = 0.0; // max-norm residual of the discrete system
};

// Discrete Neumann Poisson solve on the node-centered grid via cosine
// transforms; the operator is the mirrored five-point Laplacian, the same
// stencil the linearized operators assemble.
PoissonResult poisson_neumann(const Grid& g, const Array2& u);

// Convenience: just the solution field.
Array2 poisson_solve(const Grid& g, const Array2& u);

// Dirichlet form int |grad v|^2 evaluated as the face-difference sum that is
// algebraically identical to v^T W A v for the mirrored Laplacian.
double face_dirichlet_form(const Grid& g, const Array2& v);

// Sparse -Laplacian with mirror (Neumann) closure, node index j*n1+i.  The
// weighted product W*A is symmetric, which the implicit solvers rely on.
Eigen::SparseMatrix<double> neumann_laplacian(const Grid& g);

} // namespace sharplab
