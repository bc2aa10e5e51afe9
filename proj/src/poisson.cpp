#include "poisson.h"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <vector>

#include "stencil.h"

namespace sharplab {

namespace {

const double pi = 3.14159265358979323846;

std::mutex plan_mutex;

fftw_plan dct2d_plan(int n1, int n2) {
    static std::map<std::pair<int, int>, fftw_plan> cache;
    std::lock_guard<std::mutex> lock(plan_mutex);
    auto key = std::make_pair(n1, n2);
    auto it = cache.find(key);
    if (it != cache.end())
        return it->second;
    // fftw is row-major; our arrays are column-major with n1 rows, so the
    // fftw "n0" dimension is the column count n2.
    std::vector<double> buf(static_cast<size_t>(n1) * n2);
    fftw_plan p = fftw_plan_r2r_2d(n2, n1, buf.data(), buf.data(), FFTW_REDFT00, FFTW_REDFT00,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    cache[key] = p;
    return p;
}

void dct2d(const Grid& g, Array2& a) {
    fftw_plan p = dct2d_plan(g.n1, g.n2);
    fftw_execute_r2r(p, a.data(), a.data());
}

} // namespace

PoissonResult poisson_neumann(const Grid& g, const Array2& u) {
    Array2 w = quad_weights(g);
    const double area = g.area();
    PoissonResult out;
    out.mean = (w * u).sum() / area;

    Array2 f = u - out.mean;
    dct2d(g, f);
    for (int j = 0; j < g.n2; ++j) {
        double mu2 = (2.0 - 2.0 * std::cos(pi * j / (g.n2 - 1))) / (g.h2() * g.h2());
        for (int i = 0; i < g.n1; ++i) {
            double mu1 = (2.0 - 2.0 * std::cos(pi * i / (g.n1 - 1))) / (g.h1() * g.h1());
            double mu = mu1 + mu2;
            f(i, j) = (mu > 0.0) ? f(i, j) / mu : 0.0;
        }
    }
    dct2d(g, f);
    f /= 4.0 * (g.n1 - 1) * (g.n2 - 1);
    f -= (w * f).sum() / area;
    out.v = std::move(f);

    Array2 res = -laplacian_mirror(g, out.v) - (u - out.mean);
    double unorm = u.abs().maxCoeff();
    out.residual = res.abs().maxCoeff() / std::max(unorm, 1e-300);
    return out;
}

Array2 poisson_solve(const Grid& g, const Array2& u) {
    return poisson_neumann(g, u).v;
}

Eigen::SparseMatrix<double> neumann_laplacian(const Grid& g) {
    const int n1 = g.n1, n2 = g.n2;
    const double c1 = 1.0 / (g.h1() * g.h1());
    const double c2 = 1.0 / (g.h2() * g.h2());
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<size_t>(5) * n1 * n2);
    auto id = [n1](int i, int j) { return j * n1 + i; };
    for (int j = 0; j < n2; ++j) {
        for (int i = 0; i < n1; ++i) {
            int k = id(i, j);
            trip.emplace_back(k, k, 2.0 * c1 + 2.0 * c2);
            double wl = (i == 0) ? 0.0 : c1;
            double wr = (i == n1 - 1) ? 0.0 : c1;
            if (i == 0)
                wr = 2.0 * c1;
            if (i == n1 - 1)
                wl = 2.0 * c1;
            if (i > 0)
                trip.emplace_back(k, id(i - 1, j), -wl);
            if (i < n1 - 1)
                trip.emplace_back(k, id(i + 1, j), -wr);
            double wd = (j == 0) ? 0.0 : c2;
            double wu = (j == n2 - 1) ? 0.0 : c2;
            if (j == 0)
                wu = 2.0 * c2;
            if (j == n2 - 1)
                wd = 2.0 * c2;
            if (j > 0)
                trip.emplace_back(k, id(i, j - 1), -wd);
            if (j < n2 - 1)
                trip.emplace_back(k, id(i, j + 1), -wu);
        }
    }
    Eigen::SparseMatrix<double> A(n1 * n2, n1 * n2);
    A.setFromTriplets(trip.begin(), trip.end());
    return A;
}

double face_dirichlet_form(const Grid& g, const Array2& v) {
    const double h1 = g.h1(), h2 = g.h2();
    double total = 0.0;
    for (int j = 0; j < g.n2; ++j) {
        double wj = (j == 0 || j == g.n2 - 1) ? 0.5 * h2 : h2;
        double s = 0.0;
        for (int i = 0; i + 1 < g.n1; ++i) {
            double d = v(i + 1, j) - v(i, j);
            s += d * d;
        }
        total += wj * s / h1;
    }
    for (int i = 0; i < g.n1; ++i) {
        double wi = (i == 0 || i == g.n1 - 1) ? 0.5 * h1 : h1;
        double s = 0.0;
        for (int j = 0; j + 1 < g.n2; ++j) {
            double d = v(i, j + 1) - v(i, j);
            s += d * d;
        }
        total += wi * s / h2;
    }
    return total;
}

} // namespace sharplab
