#pragma once

#include <Eigen/Dense>

namespace sharplab {

using Array2 = Eigen::ArrayXXd; // (i,j) indexed, i along x1, j along x2

// Node-centered tensor grid on [0,L1]x[0,L2] including boundary nodes.
struct Grid {
    int n1 = 0, n2 = 0;
    double L1 = 1.0, L2 = 1.0;

    double h1() const { return L1 / (n1 - 1); }
    double h2() const { return L2 / (n2 - 1); }
    double x1(int i) const { return L1 * i / (n1 - 1); }
    double x2(int j) const { return L2 * j / (n2 - 1); }
    long count() const { return static_cast<long>(n1) * n2; }
    double area() const { return L1 * L2; }

    bool same(const Grid& o) const {
        return n1 == o.n1 && n2 == o.n2 && L1 == o.L1 && L2 == o.L2;
    }
};

Grid make_grid(int n1, int n2, double L1 = 1.0, double L2 = 1.0);

// Trapezoid quadrature weights (halved on boundary nodes, quartered at corners).
Array2 quad_weights(const Grid& g);

double integrate(const Grid& g, const Array2& f);

// Row/column node coordinates broadcast to full arrays.
Array2 coord1(const Grid& g);
Array2 coord2(const Grid& g);

// Sample a callable f(x1,x2) on the grid.
template <class F>
Array2 sample(const Grid& g, F&& f) {
    Array2 a(g.n1, g.n2);
    for (int j = 0; j < g.n2; ++j)
        for (int i = 0; i < g.n1; ++i)
            a(i, j) = f(g.x1(i), g.x2(j));
    return a;
}

} // namespace sharplab
