#include "interp.h"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace sharplab {

namespace {

const double spline_pole = -0.26794919243112270647; // sqrt(3) - 2

long fold_mirror(long k, long n) {
    if (n == 1)
        return 0;
    long period = 2 * (n - 1);
    k = ((k % period) + period) % period;
    return (k < n) ? k : period - k;
}

void bspline_weights(double t, double w[4]) {
    double t2 = t * t, t3 = t2 * t;
    w[0] = (1.0 - 3.0 * t + 3.0 * t2 - t3) / 6.0;
    w[1] = (4.0 - 6.0 * t2 + 3.0 * t3) / 6.0;
    w[2] = (1.0 + 3.0 * t + 3.0 * t2 - 3.0 * t3) / 6.0;
    w[3] = t3 / 6.0;
}

} // namespace

void spline_filter_1d(double* c, long n, long stride) {
    if (n < 2)
        return;
    const double z = spline_pole;
    const double gain = 6.0;
    for (long i = 0; i < n; ++i)
        c[i * stride] *= gain;

    long horizon = std::min<long>(n + n, 42); // |z|^42 < 1e-24
    double sum = c[0];
    double zk = z;
    for (long k = 1; k < horizon; ++k) {
        sum += zk * c[fold_mirror(k, n) * stride];
        zk *= z;
    }
    c[0] = sum;
    for (long i = 1; i < n; ++i)
        c[i * stride] += z * c[(i - 1) * stride];

    c[(n - 1) * stride] =
        (z / (z * z - 1.0)) * (z * c[(n - 2) * stride] + c[(n - 1) * stride]);
    for (long i = n - 2; i >= 0; --i)
        c[i * stride] = z * (c[(i + 1) * stride] - c[i * stride]);
}

CubicSpline2D::CubicSpline2D(const Grid& g, const Array2& values) : grid_(g), coef_(values) {
    for (int j = 0; j < g.n2; ++j)
        spline_filter_1d(coef_.data() + static_cast<long>(j) * g.n1, g.n1, 1);
    for (int i = 0; i < g.n1; ++i)
        spline_filter_1d(coef_.data() + i, g.n2, g.n1);
}

double CubicSpline2D::operator()(double x1, double x2) const {
    double gx = x1 / grid_.h1();
    double gy = x2 / grid_.h2();
    double fx = std::floor(gx), fy = std::floor(gy);
    double tx = gx - fx, ty = gy - fy;
    double wx[4], wy[4];
    bspline_weights(tx, wx);
    bspline_weights(ty, wy);
    long ix = static_cast<long>(fx), iy = static_cast<long>(fy);
    double acc = 0.0;
    for (int b = 0; b < 4; ++b) {
        long j = fold_mirror(iy - 1 + b, grid_.n2);
        double row = 0.0;
        for (int a = 0; a < 4; ++a) {
            long i = fold_mirror(ix - 1 + a, grid_.n1);
            row += wx[a] * coef_(i, j);
        }
        acc += wy[b] * row;
    }
    return acc;
}

Array2 CubicSpline2D::eval(const Array2& x1, const Array2& x2) const {
    Array2 out(x1.rows(), x1.cols());
    for (long j = 0; j < x1.cols(); ++j)
        for (long i = 0; i < x1.rows(); ++i)
            out(i, j) = (*this)(x1(i, j), x2(i, j));
    return out;
}

PeriodicSpline1D::PeriodicSpline1D(double period, const Eigen::ArrayXd& values)
    : period_(period), coef_(values) {
    const long n = coef_.size();
    const double z = spline_pole;
    coef_ *= 6.0;
    long horizon = std::min<long>(4 * n, 42);
    double sum = coef_(0);
    double zk = z;
    for (long k = 1; k < horizon; ++k) {
        sum += zk * coef_(((-k) % n + n) % n);
        zk *= z;
    }
    Eigen::ArrayXd plus(n);
    plus(0) = sum;
    for (long i = 1; i < n; ++i)
        plus(i) = coef_(i) + z * plus(i - 1);
    double tail = 0.0;
    zk = z;
    for (long k = 0; k < horizon; ++k) {
        tail -= zk * plus((n - 1 + k) % n);
        zk *= z;
    }
    coef_(n - 1) = tail;
    for (long i = n - 2; i >= 0; --i)
        coef_(i) = z * (coef_(i + 1) - plus(i));
}

double PeriodicSpline1D::operator()(double s) const {
    const long n = coef_.size();
    double g = s / (period_ / n);
    double f = std::floor(g);
    double t = g - f;
    double w[4];
    bspline_weights(t, w);
    long i0 = static_cast<long>(f);
    double acc = 0.0;
    for (int a = 0; a < 4; ++a) {
        long i = ((i0 - 1 + a) % n + n) % n;
        acc += w[a] * coef_(i);
    }
    return acc;
}

MirrorSpline1D::MirrorSpline1D(double length, const Eigen::ArrayXd& values)
    : length_(length), coef_(values) {
    spline_filter_1d(coef_.data(), coef_.size(), 1);
}

double MirrorSpline1D::operator()(double s) const {
    const long n = coef_.size();
    double g = s / (length_ / (n - 1));
    double f = std::floor(g);
    double t = g - f;
    double w[4];
    bspline_weights(t, w);
    long i0 = static_cast<long>(f);
    double acc = 0.0;
    for (int a = 0; a < 4; ++a)
        acc += w[a] * coef_(fold_mirror(i0 - 1 + a, n));
    return acc;
}

} // namespace sharplab
