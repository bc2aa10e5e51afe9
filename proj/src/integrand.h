#pragma once

#include <functional>

#include "grid.h"

namespace sharplab {

// Smooth energy density F(z, p) with the partial derivatives every variation
// formula consumes. Callbacks operate array-wise over grid samples.
struct Integrand {
    using Scalar = std::function<Array2(const Array2& z, const Array2& p1, const Array2& p2)>;

    Scalar F;
    Scalar Fz;
    Scalar Fzz;
    Scalar Fp1, Fp2;
    Scalar Fzp1, Fzp2;
    Scalar Fp11, Fp12, Fp22; // symmetric second derivative in p

    // Pointwise convenience used by the registration self-test.
    double f(double z, double p1, double p2) const;
};

// ac_integrand: eps |p|^2 / 2 + (1 - z^2)^2 / (2 eps)
Integrand ac_integrand(double eps);
// dirichlet_integrand: |p|^2 / 2
Integrand dirichlet_integrand();

// Compare supplied derivatives against central differences of F at random
// probe points; throws if any relative mismatch exceeds 1e-6.
void integrand_self_test(const Integrand& f, unsigned seed = 12345);

} // namespace sharplab
