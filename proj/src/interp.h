#pragma once

#include "grid.h"

namespace sharplab {

// Cubic B-spline interpolation of a grid field with even (mirror) extension
// across each edge. Evaluation is valid anywhere; points beyond the boundary
// read the reflected field.
class CubicSpline2D {
public:
    CubicSpline2D(const Grid& g, const Array2& values);

    double operator()(double x1, double x2) const;

    // Evaluate at arrays of physical coordinates (same shape).
    Array2 eval(const Array2& x1, const Array2& x2) const;

    const Grid& grid() const { return grid_; }

private:
    Grid grid_;
    Array2 coef_;
};

// In-place cubic B-spline prefilter of one signal, mirror boundary.
void spline_filter_1d(double* c, long n, long stride);

// Periodic cubic spline interpolation of samples on a uniform closed grid
// (used for fields on closed curves).
class PeriodicSpline1D {
public:
    PeriodicSpline1D(double period, const Eigen::ArrayXd& values);
    double operator()(double s) const;

private:
    double period_;
    Eigen::ArrayXd coef_;
};

// Natural (mirror) cubic spline on [0, L] with uniform samples.
class MirrorSpline1D {
public:
    MirrorSpline1D(double length, const Eigen::ArrayXd& values);
    double operator()(double s) const;

private:
    double length_;
    Eigen::ArrayXd coef_;
};

} // namespace sharplab
