#pragma once

#include <nlohmann/json.hpp>

#include "grid.h"

namespace sharplab {

struct ModelParams {
    double eps = 0.0;
    double gamma = 0.0;
    bool has_mass = false;
    double mass = 0.0; // mean value constraint in (-1,1)

    void validate() const;
};

struct EnergyReport {
    double ac_energy = 0.0;
    double nonlocal_energy = 0.0;
    double total = 0.0;
    double discrepancy_L1 = 0.0;
    double phi_total_variation = 0.0;
    double phi_vs_gradient = 0.0;
};

void to_json(nlohmann::json& j, const EnergyReport& r);

// Primitive of |s^2 - 1| from 0, evaluated piecewise in closed form.
double phi_primitive(double a);
Array2 phi_primitive(const Array2& a);

double allen_cahn_energy(const Grid& g, const Array2& u, const ModelParams& p);
double nonlocal_energy(const Grid& g, const Array2& u);
EnergyReport discrepancy_report(const Grid& g, const Array2& u, const ModelParams& p);
EnergyReport ohta_kawasaki_energy(const Grid& g, const Array2& u, const ModelParams& p);

} // namespace sharplab
