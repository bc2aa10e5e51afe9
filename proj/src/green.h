#pragma once

#include <Eigen/Dense>

#include "geometry.h"
#include "grid.h"

namespace sharplab {

// Neumann Green's function, mean-zero in each argument.
//
// Rectangle: cosine eigen-series with the transverse modes resummed in closed
// form, leaving a geometrically convergent image sum (adaptive truncation,
// relative increments below 1e-8 long before the cap).  Disk: dense cache of
// discrete Poisson solves, one column per curve quadrature point, built once.
class GreenKernel {
public:
    static GreenKernel rectangle(double L1, double L2);
    static GreenKernel disk_at_curve(const Domain& dom, const InterfaceCurve& curve);

    // payload of the optional on-disk cache (SHARPLAB_CACHE)
    struct CacheBlob {
        Eigen::MatrixXd matrix;
    };

    bool pointwise() const { return strategy_ == Strategy::series; }

    // Direct evaluation (rectangle only).  Refuses nearly coincident points:
    // diagonal values must go through the singularity split.
    double operator()(double x1, double x2, double y1, double y2) const;

    // Kernel sampled at all curve node pairs; the diagonal is left at zero
    // (it is infinite) and must be handled by the caller's split.
    Eigen::MatrixXd curve_matrix(const InterfaceCurve& curve) const;

    double domain_diameter() const;

private:
    enum class Strategy { series, cache };
    Strategy strategy_ = Strategy::series;
    double L1_ = 0.0, L2_ = 0.0;
    double diam_ = 0.0;
    Eigen::MatrixXd cached_;
    Eigen::ArrayXd cx1_, cx2_;
};

// The double surface integral of the kernel against xi on both arguments.
// The free-space logarithm is split off: its xi-weighted rows combine an
// analytic panel integral with a difference quadrature whose integrand
// vanishes at the singularity; the smooth remainder is integrated directly
// with the diagonal recovered from neighbors.
double green_surface_form(const GreenKernel& G, const InterfaceCurve& curve,
                          const NormalSpeed& xi);

// Dense symmetric matrix of the same form, xi^T Q xi == green_surface_form;
// this is what the nonlocal interface operators assemble against.
Eigen::MatrixXd green_surface_form_matrix(const GreenKernel& G, const InterfaceCurve& curve);

// Independent check: smear the weighted surface measure onto the grid with a
// narrow normalized Gaussian, solve the Poisson problem, and pair the
// potential back with xi on the curve.
double green_surface_form_smeared(const Grid& g, const InterfaceCurve& curve,
                                  const NormalSpeed& xi, double sigma_in_h = 3.0);

} // namespace sharplab
