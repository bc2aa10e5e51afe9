#include "green.h"

#include <Eigen/SparseLU>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "errors.h"
#include "experiments.h"
#include "interp.h"
#include "poisson.h"

namespace sharplab {

namespace {

const double pi = std::acos(-1.0);

// Mean-zero Green's function of -d^2/ds^2 on [0,L] with Neumann ends.
double interval_green(double s, double t, double L) {
    return (s * s + t * t) / (2.0 * L) - std::max(s, t) + L / 3.0;
}

// Resummed transverse cosine modes at image distance d:
//   sum_k (1/k pi) e^{-k pi d / L1} cos(k pi a/L1) cos(k pi b/L1)
double image_term(double a, double b, double d, double L1) {
    double z = std::exp(-pi * d / L1);
    double cm = std::cos(pi * (a - b) / L1);
    double cp = std::cos(pi * (a + b) / L1);
    return -(std::log1p(z * (z - 2.0 * cm)) + std::log1p(z * (z - 2.0 * cp))) /
           (4.0 * pi);
}

double rectangle_green(double x1, double x2, double y1, double y2, double L1, double L2) {
    double g = interval_green(x2, y2, L2) / L1;
    g += image_term(x1, y1, std::abs(x2 - y2), L1);
    g += image_term(x1, y1, x2 + y2, L1);
    for (int m = 1; m <= 64; ++m) {
        double shift = 2.0 * m * L2;
        double inc = image_term(x1, y1, std::abs(x2 - y2 - shift), L1) +
                     image_term(x1, y1, std::abs(x2 - y2 + shift), L1) +
                     image_term(x1, y1, x2 + y2 + shift, L1) +
                     image_term(x1, y1, std::abs(x2 + y2 - shift), L1);
        g += inc;
        if (std::abs(inc) < 1e-15 * (1.0 + std::abs(g)))
            break;
    }
    return g;
}

// Analytic integral of the free-space kernel -(1/2pi) log |x(s_i) - x(t)|
// over the whole curve.
double free_space_panel(const InterfaceCurve& c, long i) {
    if (c.kind == InterfaceKind::circle)
        return -c.r * std::log(c.r);
    auto leg = [](double a) { return a > 0.0 ? a * (std::log(a) - 1.0) : 0.0; };
    double a = c.s(i);
    double b = c.length - c.s(i);
    return -(leg(a) + leg(b)) / (2.0 * pi);
}

} // namespace

GreenKernel GreenKernel::rectangle(double L1, double L2) {
    if (L1 <= 0.0 || L2 <= 0.0)
        throw ConfigError("rectangle side lengths must be positive");
    GreenKernel k;
    k.strategy_ = Strategy::series;
    k.L1_ = L1;
    k.L2_ = L2;
    k.diam_ = std::hypot(L1, L2);
    return k;
}

namespace {

// Optional on-disk reuse of the dense kernel columns, keyed by the grid and
// the curve nodes; any mismatch or IO hiccup silently falls back to rebuild.
std::string kernel_cache_path(const DiskGrid& dg, const InterfaceCurve& curve,
                              std::uint64_t& key) {
    const char* dir = std::getenv("SHARPLAB_CACHE");
    if (!dir || !*dir)
        return {};
    char buf[128];
    std::snprintf(buf, sizeof buf, "disk-kernel:%.17g,%d,%d,%ld", dg.R, dg.nr, dg.nt,
                  static_cast<long>(curve.x1.size()));
    std::string tag = buf;
    for (long j = 0; j < curve.x1.size(); ++j) {
        std::snprintf(buf, sizeof buf, ";%.17g,%.17g", curve.x1(j), curve.x2(j));
        tag += buf;
    }
    key = fnv1a64(tag);
    std::snprintf(buf, sizeof buf, "/green-%016llx.bin", static_cast<unsigned long long>(key));
    return std::string(dir) + buf;
}

bool load_kernel_cache(const std::string& path, std::uint64_t key, long m, GreenKernel::CacheBlob& blob) {
    std::ifstream is(path, std::ios::binary);
    if (!is)
        return false;
    char magic[4];
    std::uint32_t version = 0;
    std::uint64_t stored_key = 0, stored_m = 0;
    is.read(magic, 4);
    is.read(reinterpret_cast<char*>(&version), 4);
    is.read(reinterpret_cast<char*>(&stored_key), 8);
    is.read(reinterpret_cast<char*>(&stored_m), 8);
    if (!is || std::string(magic, 4) != "SLGC" || version != 1 || stored_key != key ||
        stored_m != static_cast<std::uint64_t>(m))
        return false;
    blob.matrix.resize(m, m);
    is.read(reinterpret_cast<char*>(blob.matrix.data()),
            static_cast<std::streamsize>(m) * m * 8);
    return bool(is);
}

void store_kernel_cache(const std::string& path, std::uint64_t key,
                        const GreenKernel::CacheBlob& blob) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os)
        return;
    std::uint32_t version = 1;
    std::uint64_t m = static_cast<std::uint64_t>(blob.matrix.rows());
    os.write("SLGC", 4);
    os.write(reinterpret_cast<const char*>(&version), 4);
    os.write(reinterpret_cast<const char*>(&key), 8);
    os.write(reinterpret_cast<const char*>(&m), 8);
    os.write(reinterpret_cast<const char*>(blob.matrix.data()),
             static_cast<std::streamsize>(blob.matrix.rows()) * blob.matrix.cols() * 8);
}

} // namespace

GreenKernel GreenKernel::disk_at_curve(const Domain& dom, const InterfaceCurve& curve) {
    if (dom.shape != Shape::disk)
        throw ConfigError("disk kernel cache requires a disk domain");
    const DiskGrid& dg = dom.disk;
    GreenKernel k;
    k.strategy_ = Strategy::cache;
    k.diam_ = 2.0 * dg.R;
    k.cx1_ = curve.x1;
    k.cx2_ = curve.x2;

    std::uint64_t key = 0;
    std::string cache = kernel_cache_path(dg, curve, key);
    if (!cache.empty()) {
        CacheBlob blob;
        if (load_kernel_cache(cache, key, curve.x1.size(), blob)) {
            k.cached_ = std::move(blob.matrix);
            return k;
        }
    }

    const long n = dg.size();
    const double area = pi * dg.R * dg.R;

    Eigen::SparseMatrix<double> B(n + 1, n + 1);
    {
        std::vector<Eigen::Triplet<double>> trip;
        trip.reserve(dg.stiffness.nonZeros() + 2 * n);
        for (int c = 0; c < dg.stiffness.outerSize(); ++c)
            for (Eigen::SparseMatrix<double>::InnerIterator it(dg.stiffness, c); it; ++it)
                trip.emplace_back(it.row(), it.col(), it.value());
        for (long i = 0; i < n; ++i) {
            trip.emplace_back(i, n, dg.weights(i));
            trip.emplace_back(n, i, dg.weights(i));
        }
        B.setFromTriplets(trip.begin(), trip.end());
    }
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(B);
    if (lu.info() != Eigen::Success)
        throw SolverError("disk kernel factorization failed");

    auto nearest_node = [&](double x, double y) -> long {
        double r = std::hypot(x, y);
        if (r < 0.5 * dg.dr())
            return 0;
        int ring = std::min(dg.nr, std::max(1, static_cast<int>(std::lround(r / dg.dr()))));
        double th = std::atan2(y, x);
        if (th < 0.0)
            th += 2.0 * pi;
        int j = static_cast<int>(std::lround(th / dg.dt())) % dg.nt;
        return dg.index(ring, j);
    };

    const long m = curve.x1.size();
    std::vector<long> node(m);
    for (long j = 0; j < m; ++j)
        node[j] = nearest_node(curve.x1(j), curve.x2(j));

    Eigen::MatrixXd cols(n, m);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
    for (long j = 0; j < m; ++j) {
        rhs.head(n) = -dg.weights.matrix() / area;
        rhs(node[j]) += 1.0;
        rhs(n) = 0.0;
        Eigen::VectorXd sol = lu.solve(rhs);
        double mean = (dg.weights * sol.head(n).array()).sum() / area;
        cols.col(j) = sol.head(n).array() - mean;
        rhs.setZero();
    }

    k.cached_.resize(m, m);
    for (long i = 0; i < m; ++i)
        for (long j = 0; j < m; ++j)
            k.cached_(i, j) = cols(node[i], j);
    k.cached_ = 0.5 * (k.cached_ + k.cached_.transpose()).eval();
    k.cached_.diagonal().setZero();
    if (!cache.empty())
        store_kernel_cache(cache, key, CacheBlob{k.cached_});
    return k;
}

double GreenKernel::operator()(double x1, double x2, double y1, double y2) const {
    if (strategy_ != Strategy::series)
        throw ConfigError("pointwise kernel evaluation is only available on the rectangle");
    if (std::hypot(x1 - y1, x2 - y2) < 1e-9 * diam_)
        throw std::logic_error("kernel evaluated on the diagonal; use the singularity split");
    return rectangle_green(x1, x2, y1, y2, L1_, L2_);
}

Eigen::MatrixXd GreenKernel::curve_matrix(const InterfaceCurve& curve) const {
    const long m = curve.x1.size();
    if (strategy_ == Strategy::cache) {
        if (cx1_.size() != m || (cx1_ - curve.x1).abs().maxCoeff() > 1e-12 ||
            (cx2_ - curve.x2).abs().maxCoeff() > 1e-12)
            throw ConfigError("disk kernel cache was built for a different curve");
        return cached_;
    }
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(m, m);
    for (long i = 0; i < m; ++i)
        for (long j = i + 1; j < m; ++j) {
            double v = rectangle_green(curve.x1(i), curve.x2(i), curve.x1(j),
                                       curve.x2(j), L1_, L2_);
            K(i, j) = v;
            K(j, i) = v;
        }
    return K;
}

double GreenKernel::domain_diameter() const { return diam_; }

namespace {

// Kernel split G = Phi + R into the free-space log part and a smooth
// remainder; R's diagonal is filled from neighbors, which is where the
// quadrature gains its accuracy on the diagonal band.
struct SplitKernel {
    Eigen::MatrixXd R, Phi;
};

SplitKernel split_kernel(const GreenKernel& G, const InterfaceCurve& curve) {
    const long m = curve.x1.size();
    SplitKernel sk;
    sk.R = G.curve_matrix(curve);
    sk.Phi = Eigen::MatrixXd::Zero(m, m);
    for (long i = 0; i < m; ++i)
        for (long j = 0; j < m; ++j) {
            if (i == j)
                continue;
            double d = std::hypot(curve.x1(i) - curve.x1(j), curve.x2(i) - curve.x2(j));
            sk.Phi(i, j) = -std::log(d) / (2.0 * pi);
            sk.R(i, j) -= sk.Phi(i, j);
        }
    for (long i = 0; i < m; ++i) {
        long lo = i - 1, hi = i + 1;
        if (curve.closed) {
            lo = (i - 1 + m) % m;
            hi = (i + 1) % m;
            sk.R(i, i) = 0.5 * (sk.R(i, lo) + sk.R(i, hi));
        } else if (i == 0) {
            sk.R(i, i) = 2.0 * sk.R(0, 1) - sk.R(0, 2);
        } else if (i == m - 1) {
            sk.R(i, i) = 2.0 * sk.R(i, i - 1) - sk.R(i, i - 2);
        } else {
            sk.R(i, i) = 0.5 * (sk.R(i, lo) + sk.R(i, hi));
        }
    }
    return sk;
}

} // namespace

double green_surface_form(const GreenKernel& G, const InterfaceCurve& curve,
                          const NormalSpeed& xi) {
    const long m = curve.x1.size();
    if (xi.xi.size() != m)
        throw ConfigError("normal speed values must match interface node count");

    SplitKernel sk = split_kernel(G, curve);
    const Eigen::MatrixXd& R = sk.R;
    const Eigen::MatrixXd& Phi = sk.Phi;

    const Eigen::ArrayXd& w = curve.w;
    const Eigen::ArrayXd& f = xi.xi;
    Eigen::VectorXd wf = (w * f).matrix();
    double smooth = wf.dot(R * wf);

    double singular = 0.0;
    for (long i = 0; i < m; ++i) {
        double row = 0.0;
        for (long j = 0; j < m; ++j)
            if (j != i)
                row += w(j) * Phi(i, j) * (f(j) - f(i));
        row += f(i) * free_space_panel(curve, i);
        singular += w(i) * f(i) * row;
    }
    return smooth + singular;
}

Eigen::MatrixXd green_surface_form_matrix(const GreenKernel& G, const InterfaceCurve& curve) {
    const long m = curve.x1.size();
    SplitKernel sk = split_kernel(G, curve);
    const Eigen::ArrayXd& w = curve.w;
    Eigen::MatrixXd Q = sk.R + sk.Phi;
    for (long i = 0; i < m; ++i)
        for (long j = 0; j < m; ++j)
            Q(i, j) *= w(i) * w(j);
    for (long i = 0; i < m; ++i) {
        double row = 0.0;
        for (long j = 0; j < m; ++j)
            if (j != i)
                row += w(j) * sk.Phi(i, j);
        Q(i, i) += w(i) * (free_space_panel(curve, i) - row);
    }
    return 0.5 * (Q + Q.transpose());
}

double green_surface_form_smeared(const Grid& g, const InterfaceCurve& curve,
                                  const NormalSpeed& xi, double sigma_in_h) {
    const double h = std::min(g.h1(), g.h2());
    const double sigma = sigma_in_h * h;
    Array2 qw = quad_weights(g);
    Array2 src = Array2::Zero(g.n1, g.n2);

    const long m = curve.x1.size();
    for (long k = 0; k < m; ++k) {
        double cx = curve.x1(k), cy = curve.x2(k);
        int i0 = std::max(0, static_cast<int>((cx - 6.0 * sigma) / g.h1()));
        int i1 = std::min(g.n1 - 1, static_cast<int>((cx + 6.0 * sigma) / g.h1()) + 1);
        int j0 = std::max(0, static_cast<int>((cy - 6.0 * sigma) / g.h2()));
        int j1 = std::min(g.n2 - 1, static_cast<int>((cy + 6.0 * sigma) / g.h2()) + 1);
        double mass = 0.0;
        for (int j = j0; j <= j1; ++j)
            for (int i = i0; i <= i1; ++i) {
                double dx = g.x1(i) - cx, dy = g.x2(j) - cy;
                double v = std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
                mass += v * qw(i, j);
            }
        double scale = curve.w(k) * xi.xi(k) / mass;
        for (int j = j0; j <= j1; ++j)
            for (int i = i0; i <= i1; ++i) {
                double dx = g.x1(i) - cx, dy = g.x2(j) - cy;
                src(i, j) += scale * std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
            }
    }

    PoissonResult pr = poisson_neumann(g, src);
    CubicSpline2D spline(g, pr.v);
    double form = 0.0;
    for (long k = 0; k < m; ++k)
        form += curve.w(k) * xi.xi(k) * spline(curve.x1(k), curve.x2(k));
    return form;
}

} // namespace sharplab
