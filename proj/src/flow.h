#pragma once

#include "fields.h"
#include "interp.h"

namespace sharplab {

// Integral curves of a (time-independent) velocity field, evaluated at every
// grid node.  Inverse images come from integrating the reversed field, and the
// round-trip defect max |Phi^{-1}(Phi(x)) - x| is recorded as an accuracy
// certificate.
struct FlowMap {
    Grid grid;
    double t = 0.0;
    int steps = 0;
    Array2 fwd1, fwd2;
    Array2 inv1, inv2;
    double roundtrip_defect = 0.0;
};

FlowMap flow_map(const Grid& g, const Vec2Field& eta, double t, int steps = 16);

// Pushforward reading of a scalar under the flow: (deform u)(x) = u(Phi^{-1}(x)).
Array2 deform(const Grid& g, const Array2& u, const FlowMap& flow);

} // namespace sharplab
