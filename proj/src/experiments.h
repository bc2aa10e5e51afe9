#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "geometry.h"
#include "newton.h"

namespace sharplab {

enum class ExperimentKind {
    equipartition,
    reshetnyak,
    variation_limit_ac,
    variation_limit_b,
    variation_limit_ok,
    eigen_bound_ac,
    eigen_bound_ok,
    stability_ac,
    stability_ok,
    criticality
};

const char* to_string(ExperimentKind k);
ExperimentKind experiment_from_string(const std::string& s);

struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::equipartition;

    Shape shape = Shape::rectangle;
    double L1 = 1.0, L2 = 1.0;
    int n1 = 0, n2 = 0; // 0 = pick per eps so that the layer stays resolved
    double R = 1.0;
    int nr = 0, nt = 0;

    InterfaceKind interface_kind = InterfaceKind::segment;
    double seg_x = 0.5;
    double cc1 = 0.5, cc2 = 0.5, cr = 0.25;

    std::vector<double> eps; // strictly decreasing, positive
    double gamma = 0.0;
    bool has_mass = false;
    double mass = 0.0;

    int k = 4;      // eigenvalue count
    int probes = 4; // probe count for form/limit experiments
    std::uint64_t seed = 2024;
    bool dirichlet = false;
    bool use_newton = true;
    int near_equality_k = 0; // emit the near-equality verdict for this index
    double tol_scale = 1.0;
    int jobs = 0; // 0 = hardware concurrency

    void validate() const;
};

ExperimentConfig parse_config(const nlohmann::json& j);
nlohmann::json config_json(const ExperimentConfig& cfg);

// FNV-1a over the canonical (sorted-key) dump.
std::uint64_t fnv1a64(const std::string& bytes);
std::uint64_t config_hash(const ExperimentConfig& cfg);

struct SweepRow {
    double eps = 0.0; // 0 for eps-free rows
    long index = 0;   // mode number or probe id
    std::string quantity;
    double value = 0.0;
    double reference = 0.0;
    bool has_reference = false;
    double gap = 0.0; // value - reference when a reference exists
    std::string note; // error annotation, empty when clean
};

struct Verdict {
    std::string name;
    bool pass = false;
    double measured = 0.0;
    double threshold = 0.0;
};

struct SweepReport {
    ExperimentConfig cfg;
    std::vector<SweepRow> rows;
    std::vector<Verdict> verdicts;
    double wall_seconds = 0.0;
    std::string version;
    std::uint64_t hash = 0;

    bool pass() const;
    nlohmann::json to_json() const;
    std::string to_csv() const; // 17 significant digits, stable column set
};

SweepReport run_experiment(const ExperimentConfig& cfg);

// Recompute the verdicts from persisted rows alone (the `report` command).
std::vector<Verdict> judge(const ExperimentConfig& cfg, const std::vector<SweepRow>& rows);

// Parse one CSV line set produced by SweepReport::to_csv back into rows.
std::vector<SweepRow> rows_from_csv(const std::string& csv);

// Point-level building blocks shared with the C API: the per-eps domain (an
// explicit grid wins over the resolution schedule), the interface curve, one
// critical-point solve with the configuration's symmetry choice, and the
// deterministic probe family on the curve.
Domain experiment_domain(const ExperimentConfig& cfg, double eps);
InterfaceCurve experiment_curve(const ExperimentConfig& cfg, const Domain& dom);
SolveResult solve_experiment_point(const ExperimentConfig& cfg, const Domain& dom,
                                   const InterfaceCurve& curve, double eps);
std::function<double(double)> interface_probe(const InterfaceCurve& curve, int p);

// Random-probe identity audit plus the optional deformation oracle, as one
// JSON-in/JSON-out call shared by the CLI and the C API.  Config keys:
// n1, n2, L1, L2, eps, probes, seed, and an optional "oracle" block
// {enabled, t0, tol_rel, tol_abs}.
nlohmann::json run_check_variations(const nlohmann::json& config);

const char* version_string();

} // namespace sharplab
