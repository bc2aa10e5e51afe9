#pragma once

#include "grid.h"

namespace sharplab {

// Finite differences on grid-shaped arrays, second order everywhere.
// Boundary closures are one-sided three/four point formulas.
Array2 d1(const Array2& f, double h);  // d/dx1 (along index i)
Array2 d2(const Array2& f, double h);  // d/dx2 (along index j)
Array2 d11(const Array2& f, double h); // d2/dx1^2
Array2 d22(const Array2& f, double h); // d2/dx2^2
Array2 d12(const Array2& f, double h1, double h2);

// Second derivatives with even reflection across boundaries. These match
// the discrete Neumann operator used by the Poisson solver and the
// linearized operators, so energy and operator stencils stay consistent.
Array2 d11_mirror(const Array2& f, double h);
Array2 d22_mirror(const Array2& f, double h);
Array2 laplacian_mirror(const Grid& g, const Array2& f);

struct Gradient {
    Array2 g1, g2;
};

Gradient gradient(const Grid& g, const Array2& f);

} // namespace sharplab
