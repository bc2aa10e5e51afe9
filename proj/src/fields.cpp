#include "fields.h"

#include <cmath>
#include <stdexcept>

namespace sharplab {

ScalarDerivs scalar_derivs(const Grid& g, const Array2& u) {
    ScalarDerivs d;
    d.d1 = sharplab::d1(u, g.h1());
    d.d2 = sharplab::d2(u, g.h2());
    d.d11 = sharplab::d11(u, g.h1());
    d.d22 = sharplab::d22(u, g.h2());
    d.d12 = sharplab::d2(d.d1, g.h2());
    return d;
}

VectorDerivs vector_derivs(const Grid& g, const Vec2Field& eta) {
    VectorDerivs m;
    m.M11 = d1(eta.c1, g.h1());
    m.M12 = d2(eta.c1, g.h2());
    m.M21 = d1(eta.c2, g.h1());
    m.M22 = d2(eta.c2, g.h2());
    m.div = m.M11 + m.M22;
    return m;
}

Vec2Field advect_field(const Grid& g, const Vec2Field& eta) {
    VectorDerivs m = vector_derivs(g, eta);
    Vec2Field Z;
    Z.c1 = eta.c1 * m.M11 + eta.c2 * m.M12;
    Z.c2 = eta.c1 * m.M21 + eta.c2 * m.M22;
    return Z;
}

Vec2Field curvature_correction(const Grid& g, const Vec2Field& eta) {
    VectorDerivs m = vector_derivs(g, eta);
    Vec2Field W;
    W.c1 = eta.c1 * m.M11 + eta.c2 * m.M12 - m.div * eta.c1;
    W.c2 = eta.c1 * m.M21 + eta.c2 * m.M22 - m.div * eta.c2;
    return W;
}

VariationFields variation_fields(const Grid& g, const Vec2Field& eta, const Vec2Field& zeta,
                                 const Array2& u) {
    VectorDerivs m = vector_derivs(g, eta);
    ScalarDerivs du = scalar_derivs(g, u);

    VariationFields vf;
    vf.Z.c1 = eta.c1 * m.M11 + eta.c2 * m.M12;
    vf.Z.c2 = eta.c1 * m.M21 + eta.c2 * m.M22;
    vf.W.c1 = vf.Z.c1 - m.div * eta.c1;
    vf.W.c2 = vf.Z.c2 - m.div * eta.c2;

    vf.X0 = du.d11 * eta.c1 * eta.c1 + 2.0 * du.d12 * eta.c1 * eta.c2 +
            du.d22 * eta.c2 * eta.c2 + du.d1 * (2.0 * vf.Z.c1 - zeta.c1) +
            du.d2 * (2.0 * vf.Z.c2 - zeta.c2);

    Array2 Z11 = d1(vf.Z.c1, g.h1()), Z12 = d2(vf.Z.c1, g.h2());
    Array2 Z21 = d1(vf.Z.c2, g.h1()), Z22 = d2(vf.Z.c2, g.h2());
    Array2 trM2 = m.M11 * m.M11 + 2.0 * m.M12 * m.M21 + m.M22 * m.M22;
    vf.X = Z11 + Z22 + m.div * m.div - trM2;

    vf.Y.c1 = 0.5 * (du.d1 * Z11 + du.d2 * Z21) -
              (du.d1 * (m.M11 * m.M11 + m.M21 * m.M12) +
               du.d2 * (m.M11 * m.M21 + m.M21 * m.M22));
    vf.Y.c2 = 0.5 * (du.d1 * Z12 + du.d2 * Z22) -
              (du.d1 * (m.M12 * m.M11 + m.M22 * m.M12) +
               du.d2 * (m.M12 * m.M21 + m.M22 * m.M22));
    return vf;
}

double tangency_defect(const Grid& g, const Vec2Field& eta) {
    double defect = 0.0;
    for (int j = 0; j < g.n2; ++j) {
        defect = std::max(defect, std::abs(eta.c1(0, j)));
        defect = std::max(defect, std::abs(eta.c1(g.n1 - 1, j)));
    }
    for (int i = 0; i < g.n1; ++i) {
        defect = std::max(defect, std::abs(eta.c2(i, 0)));
        defect = std::max(defect, std::abs(eta.c2(i, g.n2 - 1)));
    }
    return defect;
}

void require_tangent(const Grid& g, const Vec2Field& eta) {
    if (!eta.tangent)
        throw std::invalid_argument("vector field must carry the tangency flag");
    if (tangency_defect(g, eta) > 1e-10)
        throw std::invalid_argument("tangency flag set but eta.nu exceeds 1e-10 on the boundary");
}

namespace {

const double pi = 3.14159265358979323846;

} // namespace

Array2 random_trig_scalar(const Grid& g, std::mt19937_64& rng, int kmax, double amp) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Array2 u = Array2::Zero(g.n1, g.n2);
    for (int k = 0; k <= kmax; ++k) {
        for (int l = 0; l <= kmax; ++l) {
            double a = amp * gauss(rng) / (1.0 + k * k + l * l);
            double b = amp * gauss(rng) / (1.0 + k * k + l * l);
            for (int j = 0; j < g.n2; ++j) {
                double cy = std::cos(l * pi * g.x2(j) / g.L2);
                double sy = std::sin(l * pi * g.x2(j) / g.L2);
                for (int i = 0; i < g.n1; ++i) {
                    double cx = std::cos(k * pi * g.x1(i) / g.L1);
                    double sx = std::sin(k * pi * g.x1(i) / g.L1);
                    u(i, j) += a * cx * cy + b * sx * sy;
                }
            }
        }
    }
    return u;
}

Vec2Field random_trig_tangent(const Grid& g, std::mt19937_64& rng, int kmax, double amp) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vec2Field eta;
    eta.c1 = Array2::Zero(g.n1, g.n2);
    eta.c2 = Array2::Zero(g.n1, g.n2);
    eta.tangent = true;
    // component 1 vanishes on x1 edges, component 2 on x2 edges
    for (int k = 1; k <= kmax; ++k) {
        for (int l = 1; l <= kmax; ++l) {
            double a = amp * gauss(rng) / (k * k + l * l);
            double b = amp * gauss(rng) / (k * k + l * l);
            for (int j = 0; j < g.n2; ++j) {
                double cy = std::cos((l - 1) * pi * g.x2(j) / g.L2);
                double sy = std::sin(l * pi * g.x2(j) / g.L2);
                for (int i = 0; i < g.n1; ++i) {
                    double sx = std::sin(k * pi * g.x1(i) / g.L1);
                    double cx = std::cos((k - 1) * pi * g.x1(i) / g.L1);
                    eta.c1(i, j) += a * sx * cy;
                    eta.c2(i, j) += b * cx * sy;
                }
            }
        }
    }
    return eta;
}

} // namespace sharplab
