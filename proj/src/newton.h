#pragma once

#include <Eigen/Sparse>

#include "energies.h"
#include "geometry.h"

namespace sharplab {

enum class Symmetry { none, odd_across_interface };

struct SolveOptions {
    Symmetry symmetry = Symmetry::none;
    double tol = 1e-10;       // max-norm target for the strong-form residual
    int max_iter = 60;
    int max_inner = 50;       // defect-correction sweeps for the nonlocal block
    const Array2* init = nullptr;               // rectangle initial guess
    const Eigen::ArrayXd* init_polar = nullptr; // disk initial guess
};

struct SolveResult {
    Shape shape = Shape::rectangle;
    Array2 u;               // rectangle solution
    Eigen::ArrayXd u_polar; // disk solution
    double residual_norm = 0.0;
    int iterations = 0;
    bool has_multiplier = false;
    double multiplier = 0.0;
    Symmetry symmetry = Symmetry::none;
};

// tanh((x - center)/eps) sampled on n uniform nodes over [0, length].
Eigen::ArrayXd profile_1d(double eps, double length, int n, double center);
Eigen::ArrayXd profile_1d(double eps, double length, int n);

// int (eps/2) u'^2 + (1-u^2)^2/(2 eps) with trapezoid weights and the same
// second-order differences the 2d code uses.
double allen_cahn_energy_1d(double length, const Eigen::ArrayXd& u, double eps);

// Damped Newton for the Euler-Lagrange equation
//   -eps lap u + (2/eps)(u^3 - u) + (8/3) gamma v = lambda,  v = (-lap)^{-1}(u - mean),
// with natural boundary conditions.  The mass constraint, when present, is a
// bordered row; the multiplier comes back in the result.  The curve fixes the
// default initial profile -tanh(d/eps) and the reflection axis for the odd
// restriction.
SolveResult solve_critical(const Domain& dom, const ModelParams& p,
                           const InterfaceCurve& curve, const SolveOptions& opts = {});

// Enforce the odd reflection symmetry of the rectangle lamella (mirror in the
// first coordinate) or the disk diameter (mirror in the angle).
void project_odd(const Grid& g, Array2& a);
void project_odd(const DiskGrid& dg, Eigen::ArrayXd& a);

// Volume-compatible correction: returns eta + h beta with h chosen so that
// int u div(eta + h beta) = 0, together with the coefficient h.
struct MassCorrection {
    Vec2Field field;
    double coefficient = 0.0;
};

MassCorrection mass_correction_field(const Grid& g, const Array2& u, const Vec2Field& eta,
                                     const Vec2Field& beta);

} // namespace sharplab
