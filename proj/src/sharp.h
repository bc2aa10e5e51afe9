#pragma once

#include <nlohmann/json.hpp>

#include "fields.h"
#include "geometry.h"
#include "green.h"

namespace sharplab {

// Bicubic sample of a grid field at the curve nodes.
Eigen::ArrayXd sample_on_curve(const Grid& g, const Array2& f, const InterfaceCurve& curve);

// Arclength derivative of nodal values (periodic for closed curves,
// one-sided second order at open ends).
Eigen::ArrayXd arc_derivative(const InterfaceCurve& curve, const Eigen::ArrayXd& f);

// The +-1 phase field of the interface (+1 where the signed distance is
// negative) and its potential.
Array2 sharp_indicator(const InterfaceCurve& curve, const Grid& g);

// First variation of length along a grid velocity field:
// integral of the tangential divergence over the curve.
double geometric_first_variation(const Grid& g, const InterfaceCurve& curve,
                                 const Vec2Field& eta);

// Second variation of length along (eta, zeta).
double geometric_second_variation(const Grid& g, const InterfaceCurve& curve,
                                  const Vec2Field& eta, const Vec2Field& zeta);

// Independent check of the two variations above: move the curve nodes through
// x + t eta + (t^2/2) zeta and difference the deformed polyline lengths.
struct VarPair12 {
    double first = 0.0;
    double second = 0.0;
};
VarPair12 curve_length_family_oracle(const Grid& g, const InterfaceCurve& curve,
                                     const Vec2Field& eta, const Vec2Field& zeta,
                                     double t0 = 1e-3);

// Quadratic form of the length second variation in a normal speed xi,
// including the boundary curvature term at the contact points.
double normal_speed_second_variation(const InterfaceCurve& curve, const NormalSpeed& xi,
                                     const Domain& dom);

// Sharp second variation of the constrained nonlocal energy in xi.
double ok_sharp_second_variation(const InterfaceCurve& curve, const NormalSpeed& xi,
                                 double gamma, const Grid& g, const Array2& v0,
                                 const GreenKernel& G);

struct CriticalityAudit {
    double H_residual = 0.0;
    double lambda_estimate = 0.0;
    double orthogonality_defect = 0.0;
};

// Constancy of (N-1)H + 4 gamma v0 along the curve plus the contact angles.
CriticalityAudit criticality_audit(const InterfaceCurve& curve, double gamma,
                                   const Grid& g, const Array2* v0);

// Every right-hand side the three limit theorems predict for the diffuse
// variations, assembled from curve quadrature, the kernel form, and v0.
struct LimitPrediction {
    double gamma = 0.0;
    double thm32_first = 0.0;
    double thm32_second_geometric = 0.0;
    double thm32_term_nn = 0.0;
    double thm32_second = 0.0;
    double thm51_first = 0.0;
    double thm51_term_greens = 0.0;
    double thm51_term_gradv0 = 0.0;
    double thm51_term_accel = 0.0;
    double thm51_second = 0.0;
    double thm61_first = 0.0;
    double thm61_term_divgamma = 0.0;
    double thm61_second = 0.0;

    nlohmann::ordered_json to_json() const;
};

LimitPrediction limit_prediction(const InterfaceCurve& curve, const Domain& dom,
                                 const Vec2Field& eta, const Vec2Field& zeta,
                                 double gamma);

} // namespace sharplab
