#include "energies.h"

#include <cmath>
#include <stdexcept>

#include "poisson.h"
#include "stencil.h"

namespace sharplab {

void ModelParams::validate() const {
    if (!(eps > 0.0))
        throw std::invalid_argument("epsilon must be positive");
    if (gamma < 0.0)
        throw std::invalid_argument("gamma must be nonnegative");
    if (has_mass && !(mass > -1.0 && mass < 1.0))
        throw std::invalid_argument("mass must lie in (-1,1)");
}

void to_json(nlohmann::json& j, const EnergyReport& r) {
    j = nlohmann::json{{"ac_energy", r.ac_energy},
                       {"nonlocal_energy", r.nonlocal_energy},
                       {"total", r.total},
                       {"discrepancy_L1", r.discrepancy_L1},
                       {"phi_total_variation", r.phi_total_variation},
                       {"phi_vs_gradient", r.phi_vs_gradient}};
}

double phi_primitive(double a) {
    if (a > 1.0)
        return a * a * a / 3.0 - a + 4.0 / 3.0;
    if (a < -1.0)
        return a * a * a / 3.0 - a - 4.0 / 3.0;
    return a - a * a * a / 3.0;
}

Array2 phi_primitive(const Array2& a) {
    Array2 out(a.rows(), a.cols());
    for (long j = 0; j < a.cols(); ++j)
        for (long i = 0; i < a.rows(); ++i)
            out(i, j) = phi_primitive(a(i, j));
    return out;
}

double allen_cahn_energy(const Grid& g, const Array2& u, const ModelParams& p) {
    p.validate();
    Gradient du = gradient(g, u);
    Array2 dens = 0.5 * p.eps * (du.g1 * du.g1 + du.g2 * du.g2) +
                  (1.0 - u * u).square() / (2.0 * p.eps);
    return integrate(g, dens);
}

double nonlocal_energy(const Grid& g, const Array2& u) {
    PoissonResult pr = poisson_neumann(g, u);
    return face_dirichlet_form(g, pr.v);
}

EnergyReport discrepancy_report(const Grid& g, const Array2& u, const ModelParams& p) {
    p.validate();
    EnergyReport r;
    Gradient du = gradient(g, u);
    Array2 grad2 = du.g1 * du.g1 + du.g2 * du.g2;
    r.ac_energy = integrate(g, (0.5 * p.eps * grad2 + (1.0 - u * u).square() / (2.0 * p.eps)));
    r.nonlocal_energy = (p.gamma > 0.0) ? nonlocal_energy(g, u) : 0.0;
    r.total = r.ac_energy + (4.0 / 3.0) * p.gamma * r.nonlocal_energy;
    r.discrepancy_L1 = integrate(g, (p.eps * grad2 - (1.0 - u * u).square() / p.eps).abs());
    Gradient dphi = gradient(g, phi_primitive(u));
    Array2 phigrad = (dphi.g1 * dphi.g1 + dphi.g2 * dphi.g2).sqrt();
    r.phi_total_variation = integrate(g, phigrad);
    r.phi_vs_gradient = integrate(g, (p.eps * grad2 - phigrad).abs());
    return r;
}

EnergyReport ohta_kawasaki_energy(const Grid& g, const Array2& u, const ModelParams& p) {
    p.validate();
    EnergyReport r;
    r.ac_energy = allen_cahn_energy(g, u, p);
    r.nonlocal_energy = nonlocal_energy(g, u);
    r.total = r.ac_energy + (4.0 / 3.0) * p.gamma * r.nonlocal_energy;
    return r;
}

} // namespace sharplab
