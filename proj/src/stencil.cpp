#include "stencil.h"

namespace sharplab {

Array2 d1(const Array2& f, double h) {
    const long n = f.rows(), m = f.cols();
    Array2 out(n, m);
    out.row(0) = (-3.0 * f.row(0) + 4.0 * f.row(1) - f.row(2)) / (2.0 * h);
    out.row(n - 1) = (3.0 * f.row(n - 1) - 4.0 * f.row(n - 2) + f.row(n - 3)) / (2.0 * h);
    for (long i = 1; i + 1 < n; ++i)
        out.row(i) = (f.row(i + 1) - f.row(i - 1)) / (2.0 * h);
    return out;
}

Array2 d2(const Array2& f, double h) {
    const long n = f.rows(), m = f.cols();
    Array2 out(n, m);
    out.col(0) = (-3.0 * f.col(0) + 4.0 * f.col(1) - f.col(2)) / (2.0 * h);
    out.col(m - 1) = (3.0 * f.col(m - 1) - 4.0 * f.col(m - 2) + f.col(m - 3)) / (2.0 * h);
    for (long j = 1; j + 1 < m; ++j)
        out.col(j) = (f.col(j + 1) - f.col(j - 1)) / (2.0 * h);
    return out;
}

Array2 d11(const Array2& f, double h) {
    const long n = f.rows(), m = f.cols();
    const double h2 = h * h;
    Array2 out(n, m);
    out.row(0) = (2.0 * f.row(0) - 5.0 * f.row(1) + 4.0 * f.row(2) - f.row(3)) / h2;
    out.row(n - 1) =
        (2.0 * f.row(n - 1) - 5.0 * f.row(n - 2) + 4.0 * f.row(n - 3) - f.row(n - 4)) / h2;
    for (long i = 1; i + 1 < n; ++i)
        out.row(i) = (f.row(i + 1) - 2.0 * f.row(i) + f.row(i - 1)) / h2;
    return out;
}

Array2 d22(const Array2& f, double h) {
    const long n = f.rows(), m = f.cols();
    const double h2 = h * h;
    Array2 out(n, m);
    out.col(0) = (2.0 * f.col(0) - 5.0 * f.col(1) + 4.0 * f.col(2) - f.col(3)) / h2;
    out.col(m - 1) =
        (2.0 * f.col(m - 1) - 5.0 * f.col(m - 2) + 4.0 * f.col(m - 3) - f.col(m - 4)) / h2;
    for (long j = 1; j + 1 < m; ++j)
        out.col(j) = (f.col(j + 1) - 2.0 * f.col(j) + f.col(j - 1)) / h2;
    return out;
}

Array2 d12(const Array2& f, double h1, double h2) {
    return d2(d1(f, h1), h2);
}

Array2 d11_mirror(const Array2& f, double h) {
    const long n = f.rows(), m = f.cols();
    const double h2 = h * h;
    Array2 out(n, m);
    out.row(0) = 2.0 * (f.row(1) - f.row(0)) / h2;
    out.row(n - 1) = 2.0 * (f.row(n - 2) - f.row(n - 1)) / h2;
    for (long i = 1; i + 1 < n; ++i)
        out.row(i) = (f.row(i + 1) - 2.0 * f.row(i) + f.row(i - 1)) / h2;
    return out;
}

Array2 d22_mirror(const Array2& f, double h) {
    const long n = f.rows(), m = f.cols();
    const double h2 = h * h;
    Array2 out(n, m);
    out.col(0) = 2.0 * (f.col(1) - f.col(0)) / h2;
    out.col(m - 1) = 2.0 * (f.col(m - 2) - f.col(m - 1)) / h2;
    for (long j = 1; j + 1 < m; ++j)
        out.col(j) = (f.col(j + 1) - 2.0 * f.col(j) + f.col(j - 1)) / h2;
    return out;
}

Array2 laplacian_mirror(const Grid& g, const Array2& f) {
    return d11_mirror(f, g.h1()) + d22_mirror(f, g.h2());
}

Gradient gradient(const Grid& g, const Array2& f) {
    return {d1(f, g.h1()), d2(f, g.h2())};
}

} // namespace sharplab
