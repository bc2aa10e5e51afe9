#include "experiments.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <set>
#include <thread>

#include "energies.h"
#include "errors.h"
#include "fields.h"
#include "green.h"
#include "jsonutil.h"
#include "newton.h"
#include "poisson.h"
#include "sharp.h"
#include "spectra.h"
#include "stencil.h"
#include "variations.h"

namespace sharplab {

#ifndef SHARPLAB_VERSION
#define SHARPLAB_VERSION "unversioned"
#endif

const char* version_string() { return SHARPLAB_VERSION; }

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

namespace {

const std::pair<ExperimentKind, const char*> kind_names[] = {
    {ExperimentKind::equipartition, "equipartition"},
    {ExperimentKind::reshetnyak, "reshetnyak"},
    {ExperimentKind::variation_limit_ac, "variation_limit_ac"},
    {ExperimentKind::variation_limit_b, "variation_limit_b"},
    {ExperimentKind::variation_limit_ok, "variation_limit_ok"},
    {ExperimentKind::eigen_bound_ac, "eigen_bound_ac"},
    {ExperimentKind::eigen_bound_ok, "eigen_bound_ok"},
    {ExperimentKind::stability_ac, "stability_ac"},
    {ExperimentKind::stability_ok, "stability_ok"},
    {ExperimentKind::criticality, "criticality"},
};

std::string num17(double v) {
    char b[40];
    std::snprintf(b, sizeof b, "%.17g", v);
    return b;
}

int auto_nodes(double eps, double L) {
    double density = std::max(50.0 * std::pow(0.08 / eps, 1.5), 4.0 / eps);
    return 1 + static_cast<int>(std::ceil(density * L));
}

Domain domain_for(const ExperimentConfig& cfg, double eps) {
    if (cfg.shape == Shape::rectangle) {
        int n1 = cfg.n1 > 0 ? cfg.n1 : auto_nodes(eps, cfg.L1);
        int n2 = cfg.n2 > 0 ? cfg.n2 : auto_nodes(eps, cfg.L2);
        return build_domain_rectangle(cfg.L1, cfg.L2, n1, n2);
    }
    int nr = cfg.nr;
    int nt = cfg.nt;
    if (nr == 0) {
        double density = 4.0 / eps;
        nr = static_cast<int>(std::ceil(cfg.R * density));
        nt = 4 * static_cast<int>(std::ceil(2.0 * std::acos(-1.0) * cfg.R * density / 4.0));
    }
    return build_domain_disk(cfg.R, nr, nt);
}

InterfaceCurve curve_for(const ExperimentConfig& cfg, const Domain& dom) {
    switch (cfg.interface_kind) {
    case InterfaceKind::segment:
        return build_interface_segment(dom, cfg.seg_x);
    case InterfaceKind::circle:
        return build_interface_circle(dom, cfg.cc1, cfg.cc2, cfg.cr);
    case InterfaceKind::diameter:
        return build_interface_diameter(dom);
    }
    throw ConfigError("unknown interface kind");
}

void parallel_for(int jobs, int n, const std::function<void(int)>& fn) {
    if (jobs <= 0)
        jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    jobs = std::min(jobs, std::max(1, n));
    if (jobs == 1 || n <= 1) {
        for (int i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> errs(n);
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (int t = 0; t < jobs; ++t)
        pool.emplace_back([&] {
            for (int i; (i = next.fetch_add(1)) < n;) {
                try {
                    fn(i);
                } catch (...) {
                    errs[i] = std::current_exception();
                }
            }
        });
    for (auto& th : pool)
        th.join();
    for (auto& e : errs)
        if (e)
            std::rethrow_exception(e);
}

std::string sanitize_note(std::string s) {
    for (char& c : s)
        if (c == ',' || c == '\n' || c == '\r')
            c = ';';
    return s;
}

SweepRow row(double eps, long index, std::string q, double value) {
    SweepRow r;
    r.eps = eps;
    r.index = index;
    r.quantity = std::move(q);
    r.value = value;
    return r;
}

SweepRow row(double eps, long index, std::string q, double value, double reference) {
    SweepRow r = row(eps, index, std::move(q), value);
    r.reference = reference;
    r.has_reference = true;
    r.gap = value - reference;
    return r;
}

// Probe p >= 1 on the curve: mean-zero Fourier modes of the arclength.
std::function<double(double)> fourier_probe(const InterfaceCurve& curve, int p) {
    const double pi = std::acos(-1.0);
    double L = curve.length;
    if (curve.closed) {
        int k = (p + 1) / 2;
        double w = 2.0 * pi * k / L;
        if (p % 2 == 1)
            return [w](double s) { return std::cos(w * s); };
        return [w](double s) { return std::sin(w * s); };
    }
    double w = pi * p / L;
    return [w](double s) { return std::cos(w * s); };
}

Array2 tanh_ansatz(const Grid& g, const InterfaceCurve& curve, double eps) {
    return (-(signed_distance(curve, g) / eps)).tanh();
}

Symmetry symmetry_for(const ExperimentConfig& cfg) {
    if (cfg.interface_kind == InterfaceKind::diameter)
        return Symmetry::odd_across_interface;
    if (cfg.interface_kind == InterfaceKind::segment &&
        std::abs(cfg.seg_x - 0.5 * cfg.L1) < 1e-12 * std::max(1.0, cfg.L1) &&
        (!cfg.has_mass || cfg.mass == 0.0))
        return Symmetry::odd_across_interface;
    return Symmetry::none;
}

SolveResult solve_point(const ExperimentConfig& cfg, const Domain& dom,
                        const InterfaceCurve& curve, double eps) {
    ModelParams p{eps, cfg.gamma, cfg.has_mass, cfg.mass};
    SolveOptions o;
    o.symmetry = symmetry_for(cfg);
    // The strong residual divides by cell measures, which shrink like the
    // cube of the spacing near the disk center; 1e-10 in max norm is below
    // the reachable floor there.
    if (dom.shape == Shape::disk)
        o.tol = 1e-8;
    return solve_critical(dom, p, curve, o);
}

// Nonlocal sharp data on a reference grid: v0 and its normal slope on the curve.
struct SharpNonlocal {
    Grid g;
    Array2 v0;
    Eigen::ArrayXd slope;
    GreenKernel G;
};

SharpNonlocal sharp_nonlocal(const ExperimentConfig& cfg, const Domain& dref,
                             const InterfaceCurve& curve) {
    SharpNonlocal s{dref.rect, {}, {}, GreenKernel::rectangle(cfg.L1, cfg.L2)};
    s.v0 = poisson_solve(s.g, sharp_indicator(curve, s.g));
    Gradient gv = gradient(s.g, s.v0);
    s.slope = sample_on_curve(s.g, gv.g1, curve) * curve.n1 +
              sample_on_curve(s.g, gv.g2, curve) * curve.n2;
    return s;
}

JacobiOperator jacobi_for(const ExperimentConfig& cfg, const InterfaceCurve& curve,
                          const SharpNonlocal* nl) {
    JacobiBoundary b = curve.closed ? JacobiBoundary::closed
                                    : (cfg.dirichlet ? JacobiBoundary::dirichlet
                                                     : JacobiBoundary::robin);
    if (cfg.gamma > 0.0)
        return jacobi_operator(curve, b, cfg.gamma, nl->slope, nl->G);
    return jacobi_operator(curve, b);
}

// ---- runners -------------------------------------------------------------

std::vector<SweepRow> run_equipartition(const ExperimentConfig& cfg) {
    int n = static_cast<int>(cfg.eps.size());
    std::vector<std::vector<SweepRow>> bucket(n);
    parallel_for(cfg.jobs, n, [&](int i) {
        double eps = cfg.eps[i];
        Domain dom = domain_for(cfg, eps);
        InterfaceCurve curve = curve_for(cfg, dom);
        ModelParams p{eps, cfg.gamma, cfg.has_mass, cfg.mass};
        Array2 u;
        if (cfg.use_newton) {
            SolveResult sr = solve_point(cfg, dom, curve, eps);
            u = sr.u;
            bucket[i].push_back(row(eps, 0, "newton.residual", sr.residual_norm));
        } else {
            u = tanh_ansatz(dom.rect, curve, eps);
        }
        EnergyReport rep = discrepancy_report(dom.rect, u, p);
        double ref = (4.0 / 3.0) * curve.length;
        bucket[i].push_back(row(eps, 0, "energy.ac", rep.ac_energy, ref));
        bucket[i].push_back(row(eps, 0, "discrepancy.l1", rep.discrepancy_L1));
        bucket[i].push_back(row(eps, 0, "phi.tv", rep.phi_total_variation, ref));
        bucket[i].push_back(row(eps, 0, "phi.gradient.gap", rep.phi_vs_gradient));
    });
    std::vector<SweepRow> rows;
    for (auto& b : bucket)
        rows.insert(rows.end(), b.begin(), b.end());
    return rows;
}

std::vector<SweepRow> run_reshetnyak(const ExperimentConfig& cfg) {
    int n = static_cast<int>(cfg.eps.size());
    std::vector<std::vector<SweepRow>> bucket(n);
    parallel_for(cfg.jobs, n, [&](int i) {
        double eps = cfg.eps[i];
        Domain dom = domain_for(cfg, eps);
        const Grid& g = dom.rect;
        InterfaceCurve curve = curve_for(cfg, dom);
        Array2 u = tanh_ansatz(g, curve, eps);
        Gradient du = gradient(g, u);
        Array2 d = signed_distance(curve, g);

        double clear = 0.0;
        if (cfg.interface_kind == InterfaceKind::circle)
            clear = std::min(std::min(cfg.cc1 - cfg.cr, cfg.L1 - cfg.cc1 - cfg.cr),
                             std::min(cfg.cc2 - cfg.cr, cfg.L2 - cfg.cc2 - cfg.cr));
        else
            clear = std::min(cfg.seg_x, cfg.L1 - cfg.seg_x);
        double delta = 0.4 * clear;

        const double pi = std::acos(-1.0);
        for (int p = 0; p < cfg.probes; ++p) {
            Array2 phi;
            std::function<double(double, double)> phi_at;
            if (p == 0) {
                phi = Array2::Ones(g.n1, g.n2);
                phi_at = [](double, double) { return 1.0; };
            } else if (p == 1) {
                auto smooth = [delta](double dist) {
                    double t = std::abs(dist) / delta - 1.0;
                    if (t <= 0.0)
                        return 0.0;
                    if (t >= 1.0)
                        return 1.0;
                    return t * t * (3.0 - 2.0 * t);
                };
                phi = d.unaryExpr(smooth);
                // sharp side vanishes on the curve by construction
                phi_at = [](double, double) { return 0.0; };
            } else {
                double w1 = p * pi / cfg.L1, w2 = p * pi / cfg.L2;
                phi = sample(g, [w1, w2](double x, double y) {
                    return std::cos(w1 * x) * std::cos(w2 * y);
                });
                phi_at = [w1, w2](double x, double y) {
                    return std::cos(w1 * x) * std::cos(w2 * y);
                };
            }

            double m11 = integrate(g, eps * du.g1 * du.g1 * phi);
            double m12 = integrate(g, eps * du.g1 * du.g2 * phi);
            double m22 = integrate(g, eps * du.g2 * du.g2 * phi);

            double s11 = 0.0, s12 = 0.0, s22 = 0.0;
            for (int q = 0; q < curve.x1.size(); ++q) {
                double f = (4.0 / 3.0) * curve.w[q] * phi_at(curve.x1[q], curve.x2[q]);
                s11 += f * curve.n1[q] * curve.n1[q];
                s12 += f * curve.n1[q] * curve.n2[q];
                s22 += f * curve.n2[q] * curve.n2[q];
            }
            double gap = std::sqrt((m11 - s11) * (m11 - s11) + 2.0 * (m12 - s12) * (m12 - s12) +
                                   (m22 - s22) * (m22 - s22));
            double norm = std::sqrt(s11 * s11 + 2.0 * s12 * s12 + s22 * s22);
            bucket[i].push_back(row(eps, p, "matrix.gap", gap, norm));
        }
    });
    std::vector<SweepRow> rows;
    for (auto& b : bucket)
        rows.insert(rows.end(), b.begin(), b.end());
    return rows;
}

std::vector<SweepRow> run_variation_limit(const ExperimentConfig& cfg) {
    bool is_ac = cfg.experiment == ExperimentKind::variation_limit_ac;
    bool is_b = cfg.experiment == ExperimentKind::variation_limit_b;
    bool is_ok = cfg.experiment == ExperimentKind::variation_limit_ok;

    int n = static_cast<int>(cfg.eps.size());
    std::vector<std::vector<SweepRow>> bucket(n);
    parallel_for(cfg.jobs, n, [&](int i) {
        double eps = cfg.eps[i];
        Domain dom = domain_for(cfg, eps);
        const Grid& g = dom.rect;
        InterfaceCurve curve = curve_for(cfg, dom);
        ModelParams p{eps, cfg.gamma, cfg.has_mass, cfg.mass};
        Array2 u;
        if (cfg.use_newton) {
            SolveResult sr = solve_point(cfg, dom, curve, eps);
            u = sr.u;
            bucket[i].push_back(row(eps, 0, "newton.residual", sr.residual_norm));
        } else {
            u = tanh_ansatz(g, curve, eps);
        }

        Functional fn = is_ac   ? local_functional(ac_integrand(eps))
                        : is_b  ? nonlocal_functional()
                                : ohta_kawasaki_functional(p);

        for (int q = 1; q <= cfg.probes; ++q) {
            NormalSpeed xi = make_normal_speed(curve, fourier_probe(curve, q));
            // wide plateau: the transition layer has to sit inside the
            // constant stretch of the extension at the smallest eps
            Vec2Field eta = extend_normal_speed(curve, dom, xi, 0.6);
            VarPair d;
            Vec2Field zeta;
            if (is_ac) {
                zeta = advect_field(g, eta);
                d = inner_tangent(fn, g, u, eta);
            } else {
                zeta = curvature_correction(g, eta);
                d = inner_direct(fn, g, u, eta, zeta);
            }
            LimitPrediction pred = limit_prediction(curve, dom, eta, zeta, is_ac ? 0.0 : cfg.gamma);
            double r1 = is_ac ? pred.thm32_first : is_b ? pred.thm51_first : pred.thm61_first;
            double r2 = is_ac ? pred.thm32_second : is_b ? pred.thm51_second : pred.thm61_second;
            bucket[i].push_back(row(eps, q, "d1", d.first, r1));
            bucket[i].push_back(row(eps, q, "d2", d.second, r2));
        }
    });

    std::vector<SweepRow> rows;
    for (auto& b : bucket)
        rows.insert(rows.end(), b.begin(), b.end());

    if (is_ok) {
        Domain dref = domain_for(cfg, cfg.eps.back());
        InterfaceCurve curve = curve_for(cfg, dref);
        SharpNonlocal nl = sharp_nonlocal(cfg, dref, curve);
        for (int q = 1; q <= cfg.probes; ++q) {
            NormalSpeed xi = make_normal_speed(curve, fourier_probe(curve, q));
            double sharp =
                ok_sharp_second_variation(curve, xi, cfg.gamma, nl.g, nl.v0, nl.G);
            rows.push_back(row(0.0, q, "sharp.form", sharp));
            Vec2Field eta = extend_normal_speed(curve, dref, xi, 0.6);
            Vec2Field zeta = curvature_correction(dref.rect, eta);
            LimitPrediction pred = limit_prediction(curve, dref, eta, zeta, cfg.gamma);
            rows.push_back(row(0.0, q, "sharp.consistency", 0.75 * pred.thm61_second, sharp));
        }
    }
    return rows;
}

std::vector<SweepRow> run_eigen_bound(const ExperimentConfig& cfg) {
    Domain dref = domain_for(cfg, cfg.eps.back());
    InterfaceCurve cref = curve_for(cfg, dref);
    SharpNonlocal nl;
    if (cfg.gamma > 0.0)
        nl = sharp_nonlocal(cfg, dref, cref);
    JacobiOperator J = jacobi_for(cfg, cref, cfg.gamma > 0.0 ? &nl : nullptr);
    SpectrumResult sharp = eigenpairs(J, cfg.k);

    int n = static_cast<int>(cfg.eps.size());
    std::vector<std::vector<SweepRow>> bucket(n);
    parallel_for(cfg.jobs, n, [&](int i) {
        double eps = cfg.eps[i];
        Domain dom = domain_for(cfg, eps);
        InterfaceCurve curve = curve_for(cfg, dom);
        try {
            SolveResult sr = solve_point(cfg, dom, curve, eps);
            ModelParams p{eps, cfg.gamma, cfg.has_mass, cfg.mass};
            OperatorBoundary b =
                cfg.dirichlet ? OperatorBoundary::dirichlet : OperatorBoundary::neumann;
            LinearizedOperator op = cfg.shape == Shape::rectangle
                                        ? assemble_linearized(dom, sr.u, p, b)
                                        : assemble_linearized(dom, sr.u_polar, p, b);
            SpectrumResult sp = eigenpairs(op, cfg.k);
            bucket[i].push_back(row(eps, 0, "newton.residual", sr.residual_norm));
            if (sr.has_multiplier)
                bucket[i].push_back(row(eps, 0, "newton.multiplier", sr.multiplier));
            for (int k = 1; k <= cfg.k; ++k)
                bucket[i].push_back(row(eps, k, "lambda.scaled", sp.eigenvalues[k - 1] / eps,
                                        sharp.eigenvalues[k - 1]));
        } catch (const SolverError& e) {
            SweepRow r = row(eps, 0, "solver.error", 0.0);
            r.note = sanitize_note(e.what());
            bucket[i].push_back(r);
        }
    });

    std::vector<SweepRow> rows;
    for (auto& b : bucket)
        rows.insert(rows.end(), b.begin(), b.end());
    for (int k = 1; k <= cfg.k; ++k)
        rows.push_back(row(0.0, k, "lambda.sharp", sharp.eigenvalues[k - 1]));
    return rows;
}

std::vector<SweepRow> run_stability(const ExperimentConfig& cfg) {
    bool constrained = cfg.gamma > 0.0 || cfg.has_mass;
    int n = static_cast<int>(cfg.eps.size());
    std::vector<std::vector<SweepRow>> bucket(n);
    parallel_for(cfg.jobs, n, [&](int i) {
        double eps = cfg.eps[i];
        Domain dom = domain_for(cfg, eps);
        InterfaceCurve curve = curve_for(cfg, dom);
        SolveResult sr = solve_point(cfg, dom, curve, eps);
        ModelParams p{eps, cfg.gamma, cfg.has_mass, cfg.mass};
        LinearizedOperator op = cfg.shape == Shape::rectangle
                                    ? assemble_linearized(dom, sr.u, p, OperatorBoundary::neumann)
                                    : assemble_linearized(dom, sr.u_polar, p,
                                                          OperatorBoundary::neumann);
        SpectrumResult sp = constrained ? eigenpairs_mean_zero(op, 1) : eigenpairs(op, 1);
        double lam = sp.eigenvalues[0] / eps;
        bucket[i].push_back(row(eps, 0, "newton.residual", sr.residual_norm));
        SweepRow r = row(eps, 1, "lambda.bottom.scaled", lam);
        r.note = constrained ? "mean-zero" : "unconstrained";
        bucket[i].push_back(r);
        if (lam < -1e-3 * cfg.tol_scale)
            throw ConfigError("the configured family is not certified stable: bottom "
                              "eigenvalue over eps is " +
                              num17(lam) + " at eps = " + num17(eps) +
                              "; stability sweeps need a stable critical family");
    });

    std::vector<SweepRow> rows;
    for (auto& b : bucket)
        rows.insert(rows.end(), b.begin(), b.end());

    Domain dref = domain_for(cfg, cfg.eps.back());
    InterfaceCurve curve = curve_for(cfg, dref);
    SharpNonlocal nl;
    if (cfg.gamma > 0.0)
        nl = sharp_nonlocal(cfg, dref, curve);
    for (int q = 1; q <= cfg.probes; ++q) {
        NormalSpeed xi = make_normal_speed(curve, fourier_probe(curve, q));
        double val = cfg.gamma > 0.0
                         ? ok_sharp_second_variation(curve, xi, cfg.gamma, nl.g, nl.v0, nl.G)
                         : normal_speed_second_variation(curve, xi, dref);
        rows.push_back(row(0.0, q, "sharp.form", val));
    }
    return rows;
}

std::vector<SweepRow> run_criticality(const ExperimentConfig& cfg) {
    Domain dref = domain_for(cfg, cfg.eps.back());
    InterfaceCurve cref = curve_for(cfg, dref);
    Array2 v0;
    if (cfg.gamma > 0.0)
        v0 = poisson_solve(dref.rect, sharp_indicator(cref, dref.rect));
    CriticalityAudit audit =
        criticality_audit(cref, cfg.gamma, dref.rect, cfg.gamma > 0.0 ? &v0 : nullptr);

    int n = static_cast<int>(cfg.eps.size());
    std::vector<std::vector<SweepRow>> bucket(n);
    parallel_for(cfg.jobs, n, [&](int i) {
        double eps = cfg.eps[i];
        Domain dom = domain_for(cfg, eps);
        const Grid& g = dom.rect;
        InterfaceCurve curve = curve_for(cfg, dom);
        SolveResult sr = solve_point(cfg, dom, curve, eps);
        const Array2& u = sr.u;
        double lambda = sr.has_multiplier ? sr.multiplier : 0.0;

        // discrete Euler-Lagrange residual field of the converged iterate
        Array2 res = -eps * laplacian_mirror(g, u) + (2.0 / eps) * (u * u * u - u) - lambda;
        if (cfg.gamma > 0.0)
            res += (8.0 / 3.0) * cfg.gamma * poisson_solve(g, u);

        Array2 w = quad_weights(g);
        Gradient du = gradient(g, u);

        bucket[i].push_back(row(eps, 0, "newton.residual", sr.residual_norm));
        if (sr.has_multiplier)
            bucket[i].push_back(
                row(eps, 0, "multiplier", sr.multiplier, (2.0 / 3.0) * audit.lambda_estimate));

        NormalSpeed one = make_normal_speed(curve, [](double) { return 1.0; });
        Vec2Field beta = extend_normal_speed(curve, dom, one);
        for (int q = 1; q <= cfg.probes; ++q) {
            NormalSpeed xi = make_normal_speed(curve, fourier_probe(curve, q));
            Vec2Field eta = extend_normal_speed(curve, dom, xi);
            MassCorrection mc = mass_correction_field(g, u, eta, beta);
            Array2 phi = -(du.g1 * mc.field.c1 + du.g2 * mc.field.c2);
            double value = std::abs((w * phi * res).sum());
            double scale = (w * phi.abs()).sum();
            bucket[i].push_back(
                row(eps, q, "first.variation", value, 10.0 * sr.residual_norm * scale));
            double rate = integrate(g, u * vector_derivs(g, mc.field).div);
            bucket[i].push_back(row(eps, q, "mass.rate", std::abs(rate)));
        }
    });

    std::vector<SweepRow> rows;
    for (auto& b : bucket)
        rows.insert(rows.end(), b.begin(), b.end());
    rows.push_back(row(0.0, 0, "audit.H", audit.H_residual));
    rows.push_back(row(0.0, 0, "audit.lambda", audit.lambda_estimate));
    rows.push_back(row(0.0, 0, "audit.ortho", audit.orthogonality_defect));
    return rows;
}

// ---- verdict helpers ------------------------------------------------------

const SweepRow* find_row(const std::vector<SweepRow>& rows, double eps, long index,
                         const std::string& q) {
    for (const auto& r : rows)
        if (r.eps == eps && r.index == index && r.quantity == q)
            return &r;
    return nullptr;
}

std::vector<const SweepRow*> series(const std::vector<SweepRow>& rows,
                                    const std::vector<double>& eps, long index,
                                    const std::string& q) {
    std::vector<const SweepRow*> out;
    for (double e : eps)
        if (const SweepRow* r = find_row(rows, e, index, q))
            out.push_back(r);
    return out;
}

Verdict verdict(std::string name, bool pass, double measured, double threshold) {
    return {std::move(name), pass, measured, threshold};
}

double rel_gap(const SweepRow& r) {
    return std::abs(r.gap) / std::max(std::abs(r.reference), 1e-8);
}

} // namespace

// ---- config ----------------------------------------------------------------

const char* to_string(ExperimentKind k) {
    for (const auto& [kind, name] : kind_names)
        if (kind == k)
            return name;
    return "unknown";
}

ExperimentKind experiment_from_string(const std::string& s) {
    for (const auto& [kind, name] : kind_names)
        if (s == name)
            return kind;
    throw ConfigError("unknown experiment \"" + s + "\"");
}

void ExperimentConfig::validate() const {
    if (eps.empty())
        throw ConfigError("config field \"eps\" must be a non-empty list");
    for (size_t i = 0; i < eps.size(); ++i) {
        if (!(eps[i] > 0.0))
            throw ConfigError("config field \"eps\" must hold positive values");
        if (i > 0 && !(eps[i] < eps[i - 1]))
            throw ConfigError("config field \"eps\" must be strictly decreasing");
    }
    if (!(tol_scale > 0.0))
        throw ConfigError("config field \"tol_scale\" must be positive");
    if (k < 1)
        throw ConfigError("config field \"k\" must be at least 1");
    if (probes < 1)
        throw ConfigError("config field \"probes\" must be at least 1");
    if (near_equality_k < 0 || near_equality_k > k)
        throw ConfigError("config field \"near_equality\" must lie between 0 and k");
    if (jobs < 0)
        throw ConfigError("config field \"jobs\" must be non-negative");
    if (gamma < 0.0)
        throw ConfigError("config field \"gamma\" must be non-negative");
    if (has_mass && !(mass > -1.0 && mass < 1.0))
        throw ConfigError("config field \"mass.value\" must lie strictly between -1 and 1");

    if (shape == Shape::rectangle) {
        if (!(L1 > 0.0) || !(L2 > 0.0))
            throw ConfigError("config fields \"domain.L1\" and \"domain.L2\" must be positive");
        if ((n1 == 0) != (n2 == 0))
            throw ConfigError("config fields \"domain.n1\" and \"domain.n2\" must be given "
                              "together (or both omitted for the resolution schedule)");
        if (n1 != 0 && (n1 < 9 || n2 < 9))
            throw ConfigError("config fields \"domain.n1\" and \"domain.n2\" must be at least 9");
    } else {
        if (!(R > 0.0))
            throw ConfigError("config field \"domain.R\" must be positive");
        if ((nr == 0) != (nt == 0))
            throw ConfigError("config fields \"domain.nr\" and \"domain.nt\" must be given "
                              "together (or both omitted for the resolution schedule)");
        if (nr != 0 && (nr < 4 || nt < 16))
            throw ConfigError("config fields \"domain.nr\" and \"domain.nt\" are too small");
        if (nt % 4 != 0)
            throw ConfigError("config field \"domain.nt\" must be a multiple of 4");
    }

    switch (interface_kind) {
    case InterfaceKind::segment:
        if (shape != Shape::rectangle)
            throw ConfigError("a segment interface needs a rectangle domain");
        if (!(seg_x > 0.0 && seg_x < L1))
            throw ConfigError("config field \"interface.x\" must lie inside (0, L1)");
        break;
    case InterfaceKind::circle:
        if (shape != Shape::rectangle)
            throw ConfigError("a circle interface needs a rectangle domain");
        if (!(cr > 0.0) || cc1 - cr <= 0.0 || cc1 + cr >= L1 || cc2 - cr <= 0.0 ||
            cc2 + cr >= L2)
            throw ConfigError("the interface circle must sit strictly inside the domain");
        break;
    case InterfaceKind::diameter:
        if (shape != Shape::disk)
            throw ConfigError("a diameter interface needs a disk domain");
        break;
    }

    if (gamma > 0.0 && shape != Shape::rectangle)
        throw ConfigError("the nonlocal energy is wired to rectangle domains; set gamma = 0");

    auto need_gamma = [&](const char* name) {
        if (!(gamma > 0.0))
            throw ConfigError(std::string(name) + " needs gamma > 0");
    };
    auto need_no_gamma = [&](const char* name) {
        if (gamma != 0.0)
            throw ConfigError(std::string(name) + " is a gamma = 0 experiment; clear gamma");
    };
    switch (experiment) {
    case ExperimentKind::eigen_bound_ok:
    case ExperimentKind::stability_ok:
        need_gamma(to_string(experiment));
        break;
    case ExperimentKind::eigen_bound_ac:
    case ExperimentKind::stability_ac:
    case ExperimentKind::variation_limit_ac:
        need_no_gamma(to_string(experiment));
        break;
    default:
        break;
    }

    bool wants_newton = experiment == ExperimentKind::eigen_bound_ac ||
                        experiment == ExperimentKind::eigen_bound_ok ||
                        experiment == ExperimentKind::stability_ac ||
                        experiment == ExperimentKind::stability_ok ||
                        experiment == ExperimentKind::criticality ||
                        (use_newton && (experiment == ExperimentKind::equipartition ||
                                        experiment == ExperimentKind::variation_limit_ac ||
                                        experiment == ExperimentKind::variation_limit_b ||
                                        experiment == ExperimentKind::variation_limit_ok));
    if (wants_newton && gamma > 0.0 && !has_mass)
        throw ConfigError("critical points of the nonlocal energy balance only against a mass "
                          "constraint; enable mass");
    if (wants_newton && interface_kind == InterfaceKind::circle && !has_mass)
        throw ConfigError("a circle interface balances only against a mass constraint; "
                          "enable mass");

    bool rect_only = experiment == ExperimentKind::equipartition ||
                     experiment == ExperimentKind::reshetnyak ||
                     experiment == ExperimentKind::variation_limit_ac ||
                     experiment == ExperimentKind::variation_limit_b ||
                     experiment == ExperimentKind::variation_limit_ok ||
                     experiment == ExperimentKind::criticality;
    if (rect_only && shape != Shape::rectangle)
        throw ConfigError(std::string(to_string(experiment)) +
                          " runs on rectangle domains; the disk enters through eigen_bound");
}

ExperimentConfig parse_config(const nlohmann::json& j) {
    ExperimentConfig cfg;
    Fields top(j, "");
    cfg.experiment = experiment_from_string(top.str("experiment"));

    Fields dom(top.get("domain"), "domain.");
    std::string shape = dom.str("shape");
    if (shape == "rectangle") {
        cfg.shape = Shape::rectangle;
        cfg.L1 = dom.number("L1", 1.0);
        cfg.L2 = dom.number("L2", 1.0);
        cfg.n1 = static_cast<int>(dom.integer("n1", 0));
        cfg.n2 = static_cast<int>(dom.integer("n2", 0));
    } else if (shape == "disk") {
        cfg.shape = Shape::disk;
        cfg.R = dom.number("R", 1.0);
        cfg.nr = static_cast<int>(dom.integer("nr", 0));
        cfg.nt = static_cast<int>(dom.integer("nt", 0));
    } else {
        throw ConfigError("config field \"domain.shape\" must be \"rectangle\" or \"disk\"");
    }
    dom.done();

    Fields ifc(top.get("interface"), "interface.");
    std::string kind = ifc.str("kind");
    if (kind == "segment") {
        cfg.interface_kind = InterfaceKind::segment;
        cfg.seg_x = ifc.number("x", 0.5 * cfg.L1);
    } else if (kind == "circle") {
        cfg.interface_kind = InterfaceKind::circle;
        const auto& c = ifc.get("center");
        if (!c.is_array() || c.size() != 2 || !c[0].is_number() || !c[1].is_number())
            throw ConfigError("config field \"interface.center\" must be [x, y]");
        cfg.cc1 = c[0].get<double>();
        cfg.cc2 = c[1].get<double>();
        cfg.cr = ifc.number("r");
    } else if (kind == "diameter") {
        cfg.interface_kind = InterfaceKind::diameter;
    } else {
        throw ConfigError("config field \"interface.kind\" must be \"segment\", \"circle\" or "
                          "\"diameter\"");
    }
    ifc.done();

    const auto& eps = top.get("eps");
    if (!eps.is_array() || eps.empty())
        throw ConfigError("config field \"eps\" must be a non-empty array");
    for (const auto& e : eps) {
        if (!e.is_number())
            throw ConfigError("config field \"eps\" must hold numbers");
        cfg.eps.push_back(e.get<double>());
    }

    cfg.gamma = top.number("gamma", 0.0);
    if (top.has("mass")) {
        Fields m(top.get("mass"), "mass.");
        cfg.has_mass = m.boolean("enabled", true);
        cfg.mass = m.number("value", 0.0);
        m.done();
    }
    cfg.k = static_cast<int>(top.integer("k", 4));
    cfg.probes = static_cast<int>(top.integer("probes", 4));
    long seed = top.integer("seed", 2024);
    if (seed < 0)
        throw ConfigError("config field \"seed\" must be non-negative");
    cfg.seed = static_cast<std::uint64_t>(seed);
    cfg.dirichlet = top.boolean("dirichlet", false);
    cfg.use_newton = top.boolean("use_newton", true);
    cfg.near_equality_k = static_cast<int>(top.integer("near_equality", 0));
    cfg.tol_scale = top.number("tol_scale", 1.0);
    cfg.jobs = static_cast<int>(top.integer("jobs", 0));
    top.done();

    cfg.validate();
    return cfg;
}

nlohmann::json config_json(const ExperimentConfig& cfg) {
    nlohmann::json j;
    j["experiment"] = to_string(cfg.experiment);
    if (cfg.shape == Shape::rectangle)
        j["domain"] = {{"shape", "rectangle"}, {"L1", cfg.L1}, {"L2", cfg.L2},
                       {"n1", cfg.n1},         {"n2", cfg.n2}};
    else
        j["domain"] = {{"shape", "disk"}, {"R", cfg.R}, {"nr", cfg.nr}, {"nt", cfg.nt}};
    switch (cfg.interface_kind) {
    case InterfaceKind::segment:
        j["interface"] = {{"kind", "segment"}, {"x", cfg.seg_x}};
        break;
    case InterfaceKind::circle:
        j["interface"] = {{"kind", "circle"},
                          {"center", {cfg.cc1, cfg.cc2}},
                          {"r", cfg.cr}};
        break;
    case InterfaceKind::diameter:
        j["interface"] = {{"kind", "diameter"}};
        break;
    }
    j["eps"] = cfg.eps;
    j["gamma"] = cfg.gamma;
    j["mass"] = {{"enabled", cfg.has_mass}, {"value", cfg.mass}};
    j["k"] = cfg.k;
    j["probes"] = cfg.probes;
    j["seed"] = cfg.seed;
    j["dirichlet"] = cfg.dirichlet;
    j["use_newton"] = cfg.use_newton;
    j["near_equality"] = cfg.near_equality_k;
    j["tol_scale"] = cfg.tol_scale;
    return j;
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
    return fnv1a64(config_json(cfg).dump());
}

// ---- verdicts --------------------------------------------------------------

std::vector<Verdict> judge(const ExperimentConfig& cfg, const std::vector<SweepRow>& rows) {
    std::vector<Verdict> out;
    double last = cfg.eps.back();
    double ts = cfg.tol_scale;

    switch (cfg.experiment) {
    case ExperimentKind::equipartition: {
        auto d = series(rows, cfg.eps, 0, "discrepancy.l1");
        double worst = 0.0;
        bool decreasing = d.size() == cfg.eps.size();
        for (size_t i = 0; i + 1 < d.size(); ++i) {
            double ratio = d[i + 1]->value / std::max(d[i]->value, 1e-300);
            worst = std::max(worst, ratio);
            decreasing = decreasing && d[i + 1]->value < d[i]->value;
        }
        out.push_back(verdict("discrepancy_decreasing", decreasing, worst, 1.0));
        const SweepRow* tv = find_row(rows, last, 0, "phi.tv");
        out.push_back(verdict("tv_match", tv && rel_gap(*tv) <= 0.03 * ts,
                              tv ? rel_gap(*tv) : 0.0, 0.03 * ts));
        break;
    }
    case ExperimentKind::reshetnyak: {
        double final_rel = 0.0, far = 0.0, order = 0.0;
        bool have_rel = false, have_far = false;
        for (int p = 0; p < cfg.probes; ++p) {
            auto s = series(rows, cfg.eps, p, "matrix.gap");
            if (s.empty())
                continue;
            const SweepRow* r = s.back();
            if (r->reference > 1e-8) {
                have_rel = true;
                final_rel = std::max(final_rel, rel_gap(*r));
                if (p == 0 && s.size() >= 2) {
                    double g0 = std::max(std::abs(s.front()->gap), 1e-300);
                    double g1 = std::max(std::abs(s.back()->gap), 1e-300);
                    order = std::log2(g0 / g1) / static_cast<double>(s.size() - 1);
                }
            } else {
                have_far = true;
                far = std::max(far, std::abs(r->value));
            }
        }
        out.push_back(verdict("final_rel", have_rel && final_rel <= 0.05 * ts, final_rel,
                              0.05 * ts));
        if (cfg.eps.size() >= 2)
            out.push_back(verdict("order", order >= 0.9, order, 0.9));
        if (have_far)
            out.push_back(verdict("far_small", far <= 1e-6 * ts, far, 1e-6 * ts));
        break;
    }
    case ExperimentKind::variation_limit_ac:
    case ExperimentKind::variation_limit_b:
    case ExperimentKind::variation_limit_ok: {
        bool is_ac = cfg.experiment == ExperimentKind::variation_limit_ac;
        bool is_b = cfg.experiment == ExperimentKind::variation_limit_b;
        double relcap = is_ac ? 0.05 : is_b ? 0.15 : 0.10;
        double firstcap = is_b ? 0.15 : 0.05;

        double first_abs = 0.0, first_tol = 0.0, second_rel = 0.0;
        bool complete = true;
        for (int q = 1; q <= cfg.probes; ++q) {
            const SweepRow* d1 = find_row(rows, last, q, "d1");
            const SweepRow* d2 = find_row(rows, last, q, "d2");
            complete = complete && d1 && d2;
            if (d1) {
                first_abs = std::max(first_abs, std::abs(d1->gap));
                first_tol = std::max(first_tol,
                                     firstcap * (1.0 + std::abs(d1->reference)) * ts);
            }
            if (d2)
                second_rel = std::max(second_rel, rel_gap(*d2));
        }
        out.push_back(verdict("final_abs_first", complete && first_abs <= first_tol,
                              first_abs, first_tol));
        out.push_back(verdict("final_rel_second", complete && second_rel <= relcap * ts,
                              second_rel, relcap * ts));
        if (is_ac && cfg.eps.size() >= 2) {
            double worst = 0.0;
            bool monotone = true;
            for (int q = 1; q <= cfg.probes; ++q) {
                auto s = series(rows, cfg.eps, q, "d2");
                for (size_t i = 0; i + 1 < s.size(); ++i) {
                    double ratio =
                        std::abs(s[i + 1]->gap) / std::max(std::abs(s[i]->gap), 1e-300);
                    worst = std::max(worst, ratio);
                    monotone = monotone && ratio < 1.0;
                }
            }
            out.push_back(verdict("gap_monotone_second", monotone, worst, 1.0));
        }
        if (cfg.experiment == ExperimentKind::variation_limit_ok) {
            double cons = 0.0, sharp_min = 0.0;
            for (int q = 1; q <= cfg.probes; ++q) {
                if (const SweepRow* s = find_row(rows, 0.0, q, "sharp.form"))
                    sharp_min = std::min(sharp_min, s->value);
                if (const SweepRow* c = find_row(rows, 0.0, q, "sharp.consistency"))
                    cons = std::max(cons, rel_gap(*c));
            }
            out.push_back(verdict("sharp_nonneg", sharp_min >= -1e-6 * ts, sharp_min,
                                  -1e-6 * ts));
            out.push_back(verdict("consistency", cons <= 0.05 * ts, cons, 0.05 * ts));
        }
        break;
    }
    case ExperimentKind::eigen_bound_ac:
    case ExperimentKind::eigen_bound_ok: {
        double coef = cfg.experiment == ExperimentKind::eigen_bound_ok ? 0.1 : 0.05;
        long errors = 0;
        for (const auto& r : rows)
            if (r.quantity == "solver.error")
                ++errors;
        if (errors > 0)
            out.push_back(verdict("complete", false, static_cast<double>(errors), 0.0));
        for (int k = 1; k <= cfg.k; ++k) {
            auto s = series(rows, cfg.eps, k, "lambda.scaled");
            std::string suffix = "_k" + std::to_string(k);
            if (s.empty()) {
                out.push_back(verdict("margin" + suffix, false, 0.0, 0.0));
                continue;
            }
            double ref = s.back()->reference;
            double tol = coef * (1.0 + std::abs(ref)) * ts;
            out.push_back(
                verdict("margin" + suffix, s.back()->gap <= tol, s.back()->gap, tol));
            if (s.size() >= 2) {
                double excess = 0.0;
                for (size_t i = 0; i + 1 < s.size(); ++i)
                    excess = std::max(excess, std::max(0.0, s[i + 1]->gap) -
                                                  std::max(0.0, s[i]->gap));
                double slack = 1e-6 * (1.0 + std::abs(ref)) * ts;
                out.push_back(verdict("trend" + suffix, excess <= slack, excess, slack));
            }
            if (k == 1 && ref < -0.5)
                out.push_back(
                    verdict("negative_first", s.back()->value < 0.0, s.back()->value, 0.0));
            if (k == cfg.near_equality_k)
                out.push_back(verdict("near_equality" + suffix,
                                      std::abs(s.back()->gap) <= 0.5 * ts,
                                      std::abs(s.back()->gap), 0.5 * ts));
        }
        break;
    }
    case ExperimentKind::stability_ac:
    case ExperimentKind::stability_ok: {
        double lam_min = 0.0;
        bool seen = false;
        for (const auto& r : rows)
            if (r.quantity == "lambda.bottom.scaled") {
                lam_min = seen ? std::min(lam_min, r.value) : r.value;
                seen = true;
            }
        out.push_back(verdict("certified", seen && lam_min >= -1e-3 * ts, lam_min,
                              -1e-3 * ts));
        double sharp_min = 0.0;
        bool have = false;
        for (int q = 1; q <= cfg.probes; ++q)
            if (const SweepRow* s = find_row(rows, 0.0, q, "sharp.form")) {
                sharp_min = have ? std::min(sharp_min, s->value) : s->value;
                have = true;
            }
        out.push_back(
            verdict("sharp_nonneg", have && sharp_min >= -1e-6 * ts, sharp_min, -1e-6 * ts));
        break;
    }
    case ExperimentKind::criticality: {
        double worst = 0.0;
        bool bounded = false;
        for (const auto& r : rows)
            if (r.quantity == "first.variation") {
                bounded = true;
                worst = std::max(worst, r.value / std::max(r.reference, 1e-300));
            }
        out.push_back(verdict("first_variation", bounded && worst <= 1.0, worst, 1.0));
        if (const SweepRow* m = find_row(rows, last, 0, "multiplier")) {
            double tol = 0.1 * std::max(std::abs(m->reference), 1.0) * ts;
            out.push_back(verdict("multiplier", std::abs(m->gap) <= tol, std::abs(m->gap), tol));
        }
        const SweepRow* H = find_row(rows, 0.0, 0, "audit.H");
        const SweepRow* L = find_row(rows, 0.0, 0, "audit.lambda");
        double htol = 0.05 * (1.0 + (L ? std::abs(L->value) : 0.0)) * ts;
        out.push_back(verdict("sharp_critical", H && H->value <= htol, H ? H->value : 0.0,
                              htol));
        const SweepRow* O = find_row(rows, 0.0, 0, "audit.ortho");
        out.push_back(verdict("orthogonality", O && O->value <= 0.02 * ts,
                              O ? O->value : 0.0, 0.02 * ts));
        break;
    }
    }
    return out;
}

// ---- report ----------------------------------------------------------------

bool SweepReport::pass() const {
    for (const auto& v : verdicts)
        if (!v.pass)
            return false;
    return true;
}

nlohmann::json SweepReport::to_json() const {
    nlohmann::json j;
    j["experiment"] = to_string(cfg.experiment);
    j["config"] = config_json(cfg);
    char hx[20];
    std::snprintf(hx, sizeof hx, "%016llx", static_cast<unsigned long long>(hash));
    j["config_hash"] = hx;
    j["version"] = version;
    j["wall_seconds"] = wall_seconds;
    j["pass"] = pass();

    nlohmann::json jr = nlohmann::json::array();
    for (const auto& r : rows) {
        nlohmann::json e;
        e["eps"] = r.eps;
        e["index"] = r.index;
        e["quantity"] = r.quantity;
        e["value"] = r.value;
        if (r.has_reference) {
            e["reference"] = r.reference;
            e["gap"] = r.gap;
        }
        if (!r.note.empty())
            e["note"] = r.note;
        jr.push_back(std::move(e));
    }
    j["rows"] = std::move(jr);

    nlohmann::json jv = nlohmann::json::array();
    for (const auto& v : verdicts)
        jv.push_back({{"name", v.name},
                      {"pass", v.pass},
                      {"measured", v.measured},
                      {"threshold", v.threshold}});
    j["verdicts"] = std::move(jv);

    // observed orders: log2 ratios of successive absolute gaps per quantity
    nlohmann::json jo = nlohmann::json::array();
    std::set<std::pair<std::string, long>> seen;
    for (const auto& r : rows) {
        if (!r.has_reference || r.eps == 0.0)
            continue;
        auto key = std::make_pair(r.quantity, r.index);
        if (!seen.insert(key).second)
            continue;
        auto s = series(rows, cfg.eps, r.index, r.quantity);
        if (s.size() < 2)
            continue;
        nlohmann::json vals = nlohmann::json::array();
        for (size_t i = 0; i + 1 < s.size(); ++i)
            vals.push_back(std::log2(std::max(std::abs(s[i]->gap), 1e-300) /
                                     std::max(std::abs(s[i + 1]->gap), 1e-300)));
        jo.push_back({{"quantity", r.quantity}, {"index", r.index}, {"orders", vals}});
    }
    j["orders"] = std::move(jo);
    return j;
}

std::string SweepReport::to_csv() const {
    char head[128];
    std::snprintf(head, sizeof head, "# sharplab-sweep-v1 experiment=%s hash=%016llx seed=%llu\n",
                  to_string(cfg.experiment), static_cast<unsigned long long>(hash),
                  static_cast<unsigned long long>(cfg.seed));
    std::string s = head;
    s += "eps,index,quantity,value,reference,gap,note\n";
    for (const auto& r : rows) {
        s += num17(r.eps);
        s += ',';
        s += std::to_string(r.index);
        s += ',';
        s += r.quantity;
        s += ',';
        s += num17(r.value);
        s += ',';
        if (r.has_reference) {
            s += num17(r.reference);
            s += ',';
            s += num17(r.gap);
        } else {
            s += ',';
        }
        s += ',';
        s += sanitize_note(r.note);
        s += '\n';
    }
    return s;
}

Domain experiment_domain(const ExperimentConfig& cfg, double eps) {
    return domain_for(cfg, eps);
}

InterfaceCurve experiment_curve(const ExperimentConfig& cfg, const Domain& dom) {
    return curve_for(cfg, dom);
}

SolveResult solve_experiment_point(const ExperimentConfig& cfg, const Domain& dom,
                                   const InterfaceCurve& curve, double eps) {
    return solve_point(cfg, dom, curve, eps);
}

std::function<double(double)> interface_probe(const InterfaceCurve& curve, int p) {
    return fourier_probe(curve, p);
}

std::vector<SweepRow> rows_from_csv(const std::string& csv) {
    std::vector<SweepRow> rows;
    size_t pos = 0;
    bool header_seen = false;
    while (pos < csv.size()) {
        size_t end = csv.find('\n', pos);
        if (end == std::string::npos)
            end = csv.size();
        std::string line = csv.substr(pos, end - pos);
        pos = end + 1;
        if (line.empty() || line[0] == '#')
            continue;
        if (!header_seen) {
            if (line != "eps,index,quantity,value,reference,gap,note")
                throw IoError("unrecognized sweep CSV header: \"" + line + "\"");
            header_seen = true;
            continue;
        }
        std::vector<std::string> cells;
        size_t c = 0;
        while (cells.size() < 6) {
            size_t comma = line.find(',', c);
            if (comma == std::string::npos)
                throw IoError("sweep CSV row with too few columns: \"" + line + "\"");
            cells.push_back(line.substr(c, comma - c));
            c = comma + 1;
        }
        cells.push_back(line.substr(c));

        SweepRow r;
        r.eps = std::strtod(cells[0].c_str(), nullptr);
        r.index = std::strtol(cells[1].c_str(), nullptr, 10);
        r.quantity = cells[2];
        r.value = std::strtod(cells[3].c_str(), nullptr);
        if (!cells[4].empty()) {
            r.reference = std::strtod(cells[4].c_str(), nullptr);
            r.gap = std::strtod(cells[5].c_str(), nullptr);
            r.has_reference = true;
        }
        r.note = cells[6];
        rows.push_back(std::move(r));
    }
    if (!header_seen)
        throw IoError("sweep CSV carries no header row");
    return rows;
}

nlohmann::json run_check_variations(const nlohmann::json& config) {
    Fields top(config, "");
    int n1 = static_cast<int>(top.integer("n1", 64));
    int n2 = static_cast<int>(top.integer("n2", n1));
    double L1 = top.number("L1", 1.0);
    double L2 = top.number("L2", 1.0);
    double eps = top.number("eps", 0.3);
    int probes = static_cast<int>(top.integer("probes", 20));
    long seed = top.integer("seed", 2024);
    bool want_oracle = false;
    double t0 = 1e-2, tol_rel = 1e-3, tol_abs = 1e-8;
    if (top.has("oracle")) {
        Fields ob(top.get("oracle"), "oracle.");
        want_oracle = ob.boolean("enabled", true);
        t0 = ob.number("t0", 1e-2);
        tol_rel = ob.number("tol_rel", 1e-3);
        tol_abs = ob.number("tol_abs", 1e-8);
        ob.done();
    }
    top.done();

    if (n1 < 9 || n2 < 9)
        throw ConfigError("config fields \"n1\" and \"n2\" must be at least 9");
    if (!(L1 > 0.0) || !(L2 > 0.0))
        throw ConfigError("config fields \"L1\" and \"L2\" must be positive");
    if (!(eps > 0.0))
        throw ConfigError("config field \"eps\" must be positive");
    if (probes < 1)
        throw ConfigError("config field \"probes\" must be at least 1");
    if (seed < 0)
        throw ConfigError("config field \"seed\" must be non-negative");
    if (!(t0 > 0.0) || !(tol_rel > 0.0) || !(tol_abs > 0.0))
        throw ConfigError("config fields under \"oracle\" must be positive");

    Grid g = make_grid(n1, n2, L1, L2);
    std::mt19937_64 rng(static_cast<std::uint64_t>(seed));
    Integrand f = ac_integrand(eps);
    Functional local = local_functional(ac_integrand(eps));
    Functional nonlocal = nonlocal_functional();

    nlohmann::json out;
    out["config"] = {{"n1", n1},       {"n2", n2},     {"L1", L1},
                     {"L2", L2},       {"eps", eps},   {"probes", probes},
                     {"seed", seed},   {"oracle", {{"enabled", want_oracle},
                                                   {"t0", t0},
                                                   {"tol_rel", tol_rel},
                                                   {"tol_abs", tol_abs}}}};
    out["version"] = version_string();

    bool all = true;
    nlohmann::json jp = nlohmann::json::array();
    for (int p = 0; p < probes; ++p) {
        Array2 u = random_trig_scalar(g, rng);
        Vec2Field eta = random_trig_tangent(g, rng);
        Vec2Field zeta = random_trig_tangent(g, rng);
        VariationReport rep = identity_audit(g, u, eta, zeta, f);
        all = all && rep.all_pass();
        nlohmann::json e = nlohmann::json::parse(rep.to_json().dump());
        e["probe"] = p;
        if (want_oracle) {
            nlohmann::json jo;
            for (const auto& [name, fn] :
                 {std::pair<const char*, const Functional*>{"local", &local},
                  {"nonlocal", &nonlocal}}) {
                VarPair d = inner_direct(*fn, g, u, eta, zeta);
                VarPair o = inner_fd_oracle(*fn, g, u, eta, zeta, t0);
                auto entry = [&](double inner, double oracle) {
                    double tol = std::max(tol_rel * std::abs(oracle), tol_abs);
                    bool pass = std::abs(inner - oracle) <= tol;
                    all = all && pass;
                    return nlohmann::json{{"inner", inner},
                                          {"oracle", oracle},
                                          {"residual", std::abs(inner - oracle)},
                                          {"tol", tol},
                                          {"pass", pass}};
                };
                jo[name] = {{"first", entry(d.first, o.first)},
                            {"second", entry(d.second, o.second)}};
            }
            e["oracle"] = std::move(jo);
        }
        jp.push_back(std::move(e));
    }
    out["probes"] = std::move(jp);
    out["pass"] = all;
    return out;
}

SweepReport run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    auto t0 = std::chrono::steady_clock::now();
    SweepReport rep;
    rep.cfg = cfg;
    switch (cfg.experiment) {
    case ExperimentKind::equipartition:
        rep.rows = run_equipartition(cfg);
        break;
    case ExperimentKind::reshetnyak:
        rep.rows = run_reshetnyak(cfg);
        break;
    case ExperimentKind::variation_limit_ac:
    case ExperimentKind::variation_limit_b:
    case ExperimentKind::variation_limit_ok:
        rep.rows = run_variation_limit(cfg);
        break;
    case ExperimentKind::eigen_bound_ac:
    case ExperimentKind::eigen_bound_ok:
        rep.rows = run_eigen_bound(cfg);
        break;
    case ExperimentKind::stability_ac:
    case ExperimentKind::stability_ok:
        rep.rows = run_stability(cfg);
        break;
    case ExperimentKind::criticality:
        rep.rows = run_criticality(cfg);
        break;
    }
    rep.verdicts = judge(cfg, rep.rows);
    rep.version = version_string();
    rep.hash = config_hash(cfg);
    rep.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

} // namespace sharplab
