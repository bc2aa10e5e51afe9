#include "sharplab/sharplab.h"

#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <new>
#include <string>

#include <nlohmann/json.hpp>

#include "errors.h"
#include "experiments.h"
#include "green.h"
#include "io.h"
#include "spectra.h"

struct slb_session {
    std::string out;
    std::string err;
};

namespace {

using namespace sharplab;

nlohmann::json parse_json(const char* text, const char* what) {
    if (!text)
        throw ConfigError(std::string(what) + " must not be NULL");
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded())
        throw ConfigError(std::string(what) + " is not valid JSON");
    return j;
}

std::string hash_hex(std::uint64_t h) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

template <typename F>
slb_status guarded(slb_session* s, const char** out, F&& body) {
    if (!s)
        return SLB_INTERNAL_ERROR;
    if (out)
        *out = nullptr;
    s->err.clear();
    s->out.clear();
    try {
        slb_status st = body();
        if (out)
            *out = s->out.c_str();
        return st;
    } catch (const ConfigError& e) {
        s->err = e.what();
        return SLB_INVALID_CONFIG;
    } catch (const GeometryError& e) {
        s->err = e.what();
        return SLB_GEOMETRY_ERROR;
    } catch (const SolverError& e) {
        s->err = e.what();
        return SLB_SOLVER_ERROR;
    } catch (const IoError& e) {
        s->err = e.what();
        return SLB_IO_ERROR;
    } catch (const std::exception& e) {
        s->err = e.what();
        return SLB_INTERNAL_ERROR;
    } catch (...) {
        s->err = "unknown error";
        return SLB_INTERNAL_ERROR;
    }
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw IoError("cannot create output directory \"" + dir + "\": " + ec.message());
}

} // namespace

extern "C" {

slb_session* slb_session_new(void) { return new (std::nothrow) slb_session; }

void slb_session_free(slb_session* s) { delete s; }

const char* slb_last_error(const slb_session* s) { return s ? s->err.c_str() : ""; }

const char* slb_version(void) { return sharplab::version_string(); }

slb_status slb_run_experiment(slb_session* s, const char* config_text, const char** out) {
    return guarded(s, out, [&]() -> slb_status {
        ExperimentConfig cfg = parse_config(parse_json(config_text, "config"));
        SweepReport rep = run_experiment(cfg);
        nlohmann::json j;
        j["report"] = rep.to_json();
        j["csv"] = rep.to_csv();
        s->out = j.dump(2);
        return rep.pass() ? SLB_OK : SLB_VERDICT_FAIL;
    });
}

slb_status slb_check_variations(slb_session* s, const char* config_text, const char** out) {
    return guarded(s, out, [&]() -> slb_status {
        nlohmann::json rep = run_check_variations(parse_json(config_text, "config"));
        bool pass = rep.at("pass").get<bool>();
        s->out = rep.dump(2);
        return pass ? SLB_OK : SLB_VERDICT_FAIL;
    });
}

slb_status slb_judge_rows(slb_session* s, const char* config_text, const char* rows_csv,
                          const char** out) {
    return guarded(s, out, [&]() -> slb_status {
        ExperimentConfig cfg = parse_config(parse_json(config_text, "config"));
        if (!rows_csv)
            throw ConfigError("rows_csv must not be NULL");
        std::vector<SweepRow> rows = rows_from_csv(rows_csv);
        std::vector<Verdict> verdicts = judge(cfg, rows);
        bool pass = true;
        nlohmann::json jv = nlohmann::json::array();
        for (const auto& v : verdicts) {
            pass = pass && v.pass;
            jv.push_back({{"name", v.name},
                          {"pass", v.pass},
                          {"measured", v.measured},
                          {"threshold", v.threshold}});
        }
        nlohmann::json j;
        j["config"] = config_json(cfg);
        j["config_hash"] = hash_hex(config_hash(cfg));
        j["verdicts"] = std::move(jv);
        j["pass"] = pass;
        s->out = j.dump(2);
        return pass ? SLB_OK : SLB_VERDICT_FAIL;
    });
}

slb_status slb_solve(slb_session* s, const char* config_text, const char* out_dir,
                     const char** out) {
    return guarded(s, out, [&]() -> slb_status {
        ExperimentConfig cfg = parse_config(parse_json(config_text, "config"));
        double eps = cfg.eps.back();
        Domain dom = experiment_domain(cfg, eps);
        InterfaceCurve curve = experiment_curve(cfg, dom);
        SolveResult sr = solve_experiment_point(cfg, dom, curve, eps);

        nlohmann::json j;
        j["eps"] = eps;
        j["shape"] = cfg.shape == Shape::rectangle ? "rectangle" : "disk";
        j["residual_norm"] = sr.residual_norm;
        j["iterations"] = sr.iterations;
        j["has_multiplier"] = sr.has_multiplier;
        if (sr.has_multiplier)
            j["multiplier"] = sr.multiplier;
        j["symmetry"] =
            sr.symmetry == Symmetry::odd_across_interface ? "odd_across_interface" : "none";
        j["config"] = config_json(cfg);
        j["config_hash"] = hash_hex(config_hash(cfg));
        j["version"] = version_string();

        if (out_dir && *out_dir) {
            ensure_dir(out_dir);
            std::string base = std::string(out_dir) + "/field";
            if (cfg.shape == Shape::rectangle) {
                write_field(base + ".slbf", dom.rect, sr.u);
                write_field_csv(base + ".csv", dom.rect, sr.u);
            } else {
                write_field(base + ".slbf", dom.disk, sr.u_polar);
                write_field_csv(base + ".csv", dom.disk, sr.u_polar);
            }
            j["field"] = base + ".slbf";
            write_text(std::string(out_dir) + "/solve.json", j.dump(2) + "\n");
        }
        s->out = j.dump(2);
        return SLB_OK;
    });
}

slb_status slb_spectrum(slb_session* s, const char* config_text, const char* out_dir,
                        const char** out) {
    return guarded(s, out, [&]() -> slb_status {
        ExperimentConfig cfg = parse_config(parse_json(config_text, "config"));
        double eps = cfg.eps.back();
        Domain dom = experiment_domain(cfg, eps);
        InterfaceCurve curve = experiment_curve(cfg, dom);
        SolveResult sr = solve_experiment_point(cfg, dom, curve, eps);
        ModelParams p{eps, cfg.gamma, cfg.has_mass, cfg.mass};
        OperatorBoundary b =
            cfg.dirichlet ? OperatorBoundary::dirichlet : OperatorBoundary::neumann;
        LinearizedOperator op = cfg.shape == Shape::rectangle
                                    ? assemble_linearized(dom, sr.u, p, b)
                                    : assemble_linearized(dom, sr.u_polar, p, b);
        SpectrumResult sp = eigenpairs(op, cfg.k);

        std::string csv = "k,eigenvalue,residual\n";
        nlohmann::json rows = nlohmann::json::array();
        char line[96];
        for (int k = 1; k <= cfg.k; ++k) {
            std::snprintf(line, sizeof line, "%d,%.17g,%.17g\n", k, sp.eigenvalues[k - 1],
                          sp.residuals[k - 1]);
            csv += line;
            rows.push_back({{"k", k},
                            {"eigenvalue", sp.eigenvalues[k - 1]},
                            {"residual", sp.residuals[k - 1]}});
        }

        nlohmann::json j;
        j["eps"] = eps;
        j["rows"] = std::move(rows);
        j["csv"] = csv;
        j["config"] = config_json(cfg);
        j["config_hash"] = hash_hex(config_hash(cfg));
        j["version"] = version_string();

        if (out_dir && *out_dir) {
            ensure_dir(out_dir);
            write_text(std::string(out_dir) + "/spectrum.csv", csv);
            for (int k = 1; k <= cfg.k; ++k) {
                Eigen::VectorXd full = full_vector(op, sp.eigenfunctions.col(k - 1));
                std::string path =
                    std::string(out_dir) + "/eigenfunction-" + std::to_string(k) + ".slbf";
                if (cfg.shape == Shape::rectangle) {
                    Array2 f = Eigen::Map<const Array2>(full.data(), dom.rect.n1, dom.rect.n2);
                    write_field(path, dom.rect, f);
                } else {
                    write_field(path, dom.disk, full.array());
                }
            }
        }
        s->out = j.dump(2);
        return SLB_OK;
    });
}

slb_status slb_green_check(slb_session* s, const char* config_text, const char** out) {
    return guarded(s, out, [&]() -> slb_status {
        ExperimentConfig cfg = parse_config(parse_json(config_text, "config"));
        if (cfg.shape != Shape::rectangle)
            throw ConfigError("the Green check pairs the rectangle kernel with the smeared "
                              "oracle; use a rectangle domain");
        Domain dom = experiment_domain(cfg, cfg.eps.back());
        InterfaceCurve curve = experiment_curve(cfg, dom);
        GreenKernel G = GreenKernel::rectangle(cfg.L1, cfg.L2);

        std::string csv = "probe,form,smeared,gap\n";
        nlohmann::json rows = nlohmann::json::array();
        bool pass = true;
        char line[128];
        for (int q = 1; q <= cfg.probes; ++q) {
            NormalSpeed xi = make_normal_speed(curve, interface_probe(curve, q));
            double form = green_surface_form(G, curve, xi);
            double smeared = green_surface_form_smeared(dom.rect, curve, xi);
            double gap = std::abs(form - smeared);
            pass = pass && gap <= 1e-3 * cfg.tol_scale;
            std::snprintf(line, sizeof line, "%d,%.17g,%.17g,%.17g\n", q, form, smeared, gap);
            csv += line;
            rows.push_back(
                {{"probe", q}, {"form", form}, {"smeared", smeared}, {"gap", gap}});
        }

        nlohmann::json j;
        j["rows"] = std::move(rows);
        j["csv"] = csv;
        j["pass"] = pass;
        j["threshold"] = 1e-3 * cfg.tol_scale;
        j["config"] = config_json(cfg);
        j["config_hash"] = hash_hex(config_hash(cfg));
        j["version"] = version_string();
        s->out = j.dump(2);
        return pass ? SLB_OK : SLB_VERDICT_FAIL;
    });
}

} // extern "C"
