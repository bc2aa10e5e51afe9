#include "flow.h"

#include <cmath>
#include <stdexcept>

namespace sharplab {

namespace {

struct Velocity {
    CubicSpline2D s1, s2;
    Velocity(const Grid& g, const Vec2Field& eta) : s1(g, eta.c1), s2(g, eta.c2) {}
    void eval(const Array2& p1, const Array2& p2, Array2& v1, Array2& v2) const {
        for (long j = 0; j < p1.cols(); ++j)
            for (long i = 0; i < p1.rows(); ++i) {
                v1(i, j) = s1(p1(i, j), p2(i, j));
                v2(i, j) = s2(p1(i, j), p2(i, j));
            }
    }
};

void rk4_integrate(const Velocity& vel, double t, int steps, Array2& p1, Array2& p2) {
    const double dt = t / steps;
    Array2 k11(p1), k12(p1), k21(p1), k22(p1), k31(p1), k32(p1), k41(p1), k42(p1);
    Array2 q1(p1), q2(p2);
    for (int s = 0; s < steps; ++s) {
        vel.eval(p1, p2, k11, k12);
        q1 = p1 + 0.5 * dt * k11;
        q2 = p2 + 0.5 * dt * k12;
        vel.eval(q1, q2, k21, k22);
        q1 = p1 + 0.5 * dt * k21;
        q2 = p2 + 0.5 * dt * k22;
        vel.eval(q1, q2, k31, k32);
        q1 = p1 + dt * k31;
        q2 = p2 + dt * k32;
        vel.eval(q1, q2, k41, k42);
        p1 += (dt / 6.0) * (k11 + 2.0 * k21 + 2.0 * k31 + k41);
        p2 += (dt / 6.0) * (k12 + 2.0 * k22 + 2.0 * k32 + k42);
    }
}

} // namespace

FlowMap flow_map(const Grid& g, const Vec2Field& eta, double t, int steps) {
    if (steps < 1)
        throw std::invalid_argument("flow step count must be positive");
    Velocity vel(g, eta);

    FlowMap f;
    f.grid = g;
    f.t = t;
    f.steps = steps;

    Array2 x1(g.n1, g.n2), x2(g.n1, g.n2);
    for (int j = 0; j < g.n2; ++j)
        for (int i = 0; i < g.n1; ++i) {
            x1(i, j) = g.x1(i);
            x2(i, j) = g.x2(j);
        }

    f.fwd1 = x1;
    f.fwd2 = x2;
    rk4_integrate(vel, t, steps, f.fwd1, f.fwd2);

    f.inv1 = x1;
    f.inv2 = x2;
    rk4_integrate(vel, -t, steps, f.inv1, f.inv2);

    Array2 r1 = f.fwd1, r2 = f.fwd2;
    rk4_integrate(vel, -t, steps, r1, r2);
    f.roundtrip_defect = std::max((r1 - x1).abs().maxCoeff(), (r2 - x2).abs().maxCoeff());
    return f;
}

Array2 deform(const Grid& g, const Array2& u, const FlowMap& flow) {
    if (u.rows() != g.n1 || u.cols() != g.n2)
        throw std::invalid_argument("deform: field shape does not match grid");
    CubicSpline2D s(g, u);
    return s.eval(flow.inv1, flow.inv2);
}

} // namespace sharplab
