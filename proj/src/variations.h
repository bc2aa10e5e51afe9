#pragma once

#include <map>
#include <string>

#include <nlohmann/json.hpp>

#include "energies.h"
#include "fields.h"
#include "integrand.h"

namespace sharplab {

// Which functional a variation acts on: a local integrand, the nonlocal
// Coulomb-type energy, or their blend total = local + (4/3) gamma nonlocal.
struct Functional {
    enum class Kind { local, nonlocal_b, ohta_kawasaki };
    Kind kind = Kind::local;
    Integrand f;
    ModelParams params;
};

Functional local_functional(Integrand f);
Functional nonlocal_functional();
Functional ohta_kawasaki_functional(const ModelParams& p);

struct VarPair {
    double first = 0.0;
    double second = 0.0;
};

// First and second Gateaux variations in the direction phi.
VarPair gateaux(const Functional& fn, const Grid& g, const Array2& u, const Array2& phi);

// Inner variations from the exact formulas (velocity eta, acceleration zeta).
VarPair inner_direct(const Functional& fn, const Grid& g, const Array2& u,
                     const Vec2Field& eta, const Vec2Field& zeta);

// Inner variations along tangent velocity fields, acceleration fixed to
// Z = (eta.grad) eta; never touches second derivatives of u.
VarPair inner_tangent(const Functional& fn, const Grid& g, const Array2& u,
                      const Vec2Field& eta);

enum class OracleReading {
    fixed_domain, // pull u back through the inverse map, integrate on the grid
    transported   // exact change of variables (local integrands only)
};

// Finite-difference oracle: second-order differences of t -> A(u composed
// with the inverse of x + t eta + (t^2/2) zeta), Richardson-extrapolated over
// {t0, t0/2}.  t0 <= 0 picks 1e-2 * diameter / max speed.
VarPair inner_fd_oracle(const Functional& fn, const Grid& g, const Array2& u,
                        const Vec2Field& eta, const Vec2Field& zeta, double t0 = 0.0,
                        OracleReading reading = OracleReading::fixed_domain);

struct ResidualEntry {
    double value = 0.0;
    double tol = 0.0;
    bool pass = false;
};

struct VariationReport {
    double first_gateaux = 0.0, second_gateaux = 0.0;
    double first_inner = 0.0, second_inner = 0.0;
    double oracle_first = 0.0, oracle_second = 0.0;
    bool has_oracle = false;
    std::map<std::string, ResidualEntry> residuals;

    bool all_pass() const;
    nlohmann::ordered_json to_json() const;
};

// Closure of the inner-to-Gateaux identities for the local integrand and the
// nonlocal energy on the same probe: both sides are assembled from identical
// stencil values, so the residuals measure pure round-off.  When a Newton
// residual for u is supplied, the report also bounds the zeta-dependence of
// the second inner variation.
VariationReport identity_audit(const Grid& g, const Array2& u, const Vec2Field& eta,
                               const Vec2Field& zeta, const Integrand& f,
                               double newton_residual = -1.0, unsigned zeta_seed = 2024);

} // namespace sharplab
