#include "integrand.h"

#include <cmath>
#include <random>
#include <stdexcept>

namespace sharplab {

double Integrand::f(double z, double p1, double p2) const {
    Array2 az(1, 1), a1(1, 1), a2(1, 1);
    az(0, 0) = z;
    a1(0, 0) = p1;
    a2(0, 0) = p2;
    return F(az, a1, a2)(0, 0);
}

Integrand ac_integrand(double eps) {
    if (!(eps > 0.0))
        throw std::invalid_argument("ac_integrand: eps must be positive");
    Integrand f;
    f.F = [eps](const Array2& z, const Array2& p1, const Array2& p2) -> Array2 {
        return 0.5 * eps * (p1 * p1 + p2 * p2) + (1.0 - z * z).square() / (2.0 * eps);
    };
    f.Fz = [eps](const Array2& z, const Array2&, const Array2&) -> Array2 {
        return (2.0 / eps) * (z * z * z - z);
    };
    f.Fzz = [eps](const Array2& z, const Array2&, const Array2&) -> Array2 {
        return (2.0 / eps) * (3.0 * z * z - 1.0);
    };
    f.Fp1 = [eps](const Array2&, const Array2& p1, const Array2&) -> Array2 { return eps * p1; };
    f.Fp2 = [eps](const Array2&, const Array2&, const Array2& p2) -> Array2 { return eps * p2; };
    f.Fzp1 = [](const Array2& z, const Array2&, const Array2&) -> Array2 {
        return Array2::Zero(z.rows(), z.cols());
    };
    f.Fzp2 = f.Fzp1;
    f.Fp11 = [eps](const Array2& z, const Array2&, const Array2&) -> Array2 {
        return Array2::Constant(z.rows(), z.cols(), eps);
    };
    f.Fp22 = f.Fp11;
    f.Fp12 = [](const Array2& z, const Array2&, const Array2&) -> Array2 {
        return Array2::Zero(z.rows(), z.cols());
    };
    return f;
}

Integrand dirichlet_integrand() {
    Integrand f;
    f.F = [](const Array2&, const Array2& p1, const Array2& p2) -> Array2 {
        return 0.5 * (p1 * p1 + p2 * p2);
    };
    f.Fz = [](const Array2& z, const Array2&, const Array2&) -> Array2 {
        return Array2::Zero(z.rows(), z.cols());
    };
    f.Fzz = f.Fz;
    f.Fp1 = [](const Array2&, const Array2& p1, const Array2&) -> Array2 { return p1; };
    f.Fp2 = [](const Array2&, const Array2&, const Array2& p2) -> Array2 { return p2; };
    f.Fzp1 = f.Fz;
    f.Fzp2 = f.Fz;
    f.Fp11 = [](const Array2& z, const Array2&, const Array2&) -> Array2 {
        return Array2::Constant(z.rows(), z.cols(), 1.0);
    };
    f.Fp22 = f.Fp11;
    f.Fp12 = f.Fz;
    return f;
}

namespace {

double pointwise(const Integrand::Scalar& fn, double z, double p1, double p2) {
    Array2 az(1, 1), a1(1, 1), a2(1, 1);
    az(0, 0) = z;
    a1(0, 0) = p1;
    a2(0, 0) = p2;
    return fn(az, a1, a2)(0, 0);
}

void check(double supplied, double fd, double scale, const char* name) {
    double rel = std::abs(supplied - fd) / std::max(scale, 1.0);
    if (rel > 1e-6)
        throw std::runtime_error(std::string("integrand self-test failed for ") + name);
}

} // namespace

void integrand_self_test(const Integrand& f, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-1.5, 1.5);
    const double d = 1e-5;
    for (int trial = 0; trial < 12; ++trial) {
        double z = unif(rng), p1 = unif(rng), p2 = unif(rng);
        auto Fv = [&](double dz, double d1v, double d2v) {
            return pointwise(f.F, z + dz, p1 + d1v, p2 + d2v);
        };
        double scale = std::abs(Fv(0, 0, 0)) + 1.0;
        check(pointwise(f.Fz, z, p1, p2), (Fv(d, 0, 0) - Fv(-d, 0, 0)) / (2 * d), scale, "Fz");
        check(pointwise(f.Fp1, z, p1, p2), (Fv(0, d, 0) - Fv(0, -d, 0)) / (2 * d), scale, "Fp1");
        check(pointwise(f.Fp2, z, p1, p2), (Fv(0, 0, d) - Fv(0, 0, -d)) / (2 * d), scale, "Fp2");
        check(pointwise(f.Fzz, z, p1, p2), (Fv(d, 0, 0) - 2 * Fv(0, 0, 0) + Fv(-d, 0, 0)) / (d * d),
              scale, "Fzz");
        check(pointwise(f.Fp11, z, p1, p2),
              (Fv(0, d, 0) - 2 * Fv(0, 0, 0) + Fv(0, -d, 0)) / (d * d), scale, "Fp11");
        check(pointwise(f.Fp22, z, p1, p2),
              (Fv(0, 0, d) - 2 * Fv(0, 0, 0) + Fv(0, 0, -d)) / (d * d), scale, "Fp22");
        check(pointwise(f.Fzp1, z, p1, p2),
              (Fv(d, d, 0) - Fv(d, -d, 0) - Fv(-d, d, 0) + Fv(-d, -d, 0)) / (4 * d * d), scale,
              "Fzp1");
        check(pointwise(f.Fzp2, z, p1, p2),
              (Fv(d, 0, d) - Fv(d, 0, -d) - Fv(-d, 0, d) + Fv(-d, 0, -d)) / (4 * d * d), scale,
              "Fzp2");
        check(pointwise(f.Fp12, z, p1, p2),
              (Fv(0, d, d) - Fv(0, d, -d) - Fv(0, -d, d) + Fv(0, -d, -d)) / (4 * d * d), scale,
              "Fp12");
    }
}

} // namespace sharplab
