#include "grid.h"

#include <stdexcept>

namespace sharplab {

Grid make_grid(int n1, int n2, double L1, double L2) {
    if (n1 < 16 || n2 < 16)
        throw std::invalid_argument("grid resolution must be at least 16 nodes per direction");
    if (!(L1 > 0.0) || !(L2 > 0.0))
        throw std::invalid_argument("grid side lengths must be positive");
    return Grid{n1, n2, L1, L2};
}

Array2 quad_weights(const Grid& g) {
    Eigen::ArrayXd w1 = Eigen::ArrayXd::Constant(g.n1, g.h1());
    Eigen::ArrayXd w2 = Eigen::ArrayXd::Constant(g.n2, g.h2());
    w1(0) *= 0.5;
    w1(g.n1 - 1) *= 0.5;
    w2(0) *= 0.5;
    w2(g.n2 - 1) *= 0.5;
    Array2 w(g.n1, g.n2);
    for (int j = 0; j < g.n2; ++j)
        for (int i = 0; i < g.n1; ++i)
            w(i, j) = w1(i) * w2(j);
    return w;
}

double integrate(const Grid& g, const Array2& f) {
    return (quad_weights(g) * f).sum();
}

Array2 coord1(const Grid& g) {
    return sample(g, [](double x, double) { return x; });
}

Array2 coord2(const Grid& g) {
    return sample(g, [](double, double y) { return y; });
}

} // namespace sharplab
