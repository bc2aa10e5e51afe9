#pragma once

#include <random>

#include "grid.h"
#include "stencil.h"

namespace sharplab {

struct Vec2Field {
    Array2 c1, c2;
    bool tangent = false;

    static Vec2Field zero(const Grid& g) {
        return {Array2::Zero(g.n1, g.n2), Array2::Zero(g.n1, g.n2), true};
    }
};

// First and second derivatives of a scalar field, one stencil read shared by
// every formula downstream.
struct ScalarDerivs {
    Array2 d1, d2, d11, d12, d22;
};

ScalarDerivs scalar_derivs(const Grid& g, const Array2& u);

// Jacobian entries M_ij = d eta^i / dx_j plus divergence.
struct VectorDerivs {
    Array2 M11, M12, M21, M22, div;
};

VectorDerivs vector_derivs(const Grid& g, const Vec2Field& eta);

// Fields derived from a velocity eta and an acceleration zeta:
//   Z  = (eta . grad) eta
//   W  = Z - (div eta) eta
//   X0 = (D^2 u eta, eta) + grad u . (2Z - zeta)
//   X  = div Z + (div eta)^2 - trace((grad eta)^2)
//   Y  = 1/2 (grad Z)^T grad u - ((grad eta)^T)^2 grad u
struct VariationFields {
    Vec2Field Z, W;
    Array2 X0, X;
    Vec2Field Y;
};

VariationFields variation_fields(const Grid& g, const Vec2Field& eta, const Vec2Field& zeta,
                                 const Array2& u);
Vec2Field advect_field(const Grid& g, const Vec2Field& eta); // Z = (eta.grad) eta
Vec2Field curvature_correction(const Grid& g, const Vec2Field& eta); // W = Z - (div eta) eta

double tangency_defect(const Grid& g, const Vec2Field& eta);
void require_tangent(const Grid& g, const Vec2Field& eta);

// Smooth random probe fields: low trigonometric modes, bounded gradients.
Array2 random_trig_scalar(const Grid& g, std::mt19937_64& rng, int kmax = 3, double amp = 1.0);
Vec2Field random_trig_tangent(const Grid& g, std::mt19937_64& rng, int kmax = 3,
                              double amp = 0.5);

} // namespace sharplab
