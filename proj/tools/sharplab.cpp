// Command-line front end; everything substantive happens behind the C API.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <sharplab/sharplab.h>

namespace {

using nlohmann::json;

struct Session {
    slb_session* s = slb_session_new();
    ~Session() { slb_session_free(s); }
};

struct Common {
    std::string config;
    std::string out;
    long jobs = -1;
    long long seed = -1;
    double tol_scale = 0.0;
    bool has_tol = false;
};

int status_exit(slb_status st) {
    switch (st) {
    case SLB_OK:
        return 0;
    case SLB_VERDICT_FAIL:
        return 2;
    case SLB_INVALID_CONFIG:
    case SLB_GEOMETRY_ERROR:
        return 64;
    default:
        return 1;
    }
}

std::string read_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw std::runtime_error("cannot open \"" + path + "\"");
    return std::string((std::istreambuf_iterator<char>(is)),
                       std::istreambuf_iterator<char>());
}

void write_file(const std::string& path, const std::string& body) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os)
        throw std::runtime_error("cannot open \"" + path + "\" for writing");
    os.write(body.data(), static_cast<std::streamsize>(body.size()));
}

std::string now_iso() {
    std::time_t t = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

json load_config(const Common& c, bool allow_empty) {
    json j = json::object();
    if (!c.config.empty()) {
        j = json::parse(read_file(c.config), nullptr, false);
        if (j.is_discarded())
            throw std::runtime_error("\"" + c.config + "\" is not valid JSON");
    } else if (!allow_empty) {
        throw std::runtime_error("--config is required for this command");
    }
    return j;
}

void apply_overrides(json& j, const Common& c, bool experiment_schema) {
    if (c.seed >= 0)
        j["seed"] = c.seed;
    if (experiment_schema) {
        if (c.jobs >= 0)
            j["jobs"] = c.jobs;
        if (c.has_tol)
            j["tol_scale"] = c.tol_scale;
    }
}

class Manifest {
public:
    Manifest(std::string dir, std::string command, const json& cfg)
        : dir_(std::move(dir)), t0_(std::chrono::steady_clock::now()) {
        body_["command"] = std::move(command);
        body_["config"] = cfg;
        body_["version"] = slb_version();
        body_["started"] = now_iso();
        body_["status"] = "running";
        flush();
    }
    void finish(const std::string& status, std::vector<std::string> outputs) {
        body_["status"] = status;
        body_["finished"] = now_iso();
        body_["wall_seconds"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
        body_["outputs"] = std::move(outputs);
        flush();
    }

private:
    void flush() { write_file(dir_ + "/manifest.json", body_.dump(2) + "\n"); }
    std::string dir_;
    json body_;
    std::chrono::steady_clock::time_point t0_;
};

int fail(Session& ses, slb_status st) {
    std::cerr << "error: " << slb_last_error(ses.s) << "\n";
    return status_exit(st);
}

void print_verdicts(const json& verdicts) {
    for (const auto& v : verdicts) {
        std::printf("%-6s %-24s measured=%-14.6g threshold=%.6g\n",
                    v.at("pass").get<bool>() ? "PASS" : "FAIL",
                    v.at("name").get<std::string>().c_str(),
                    v.at("measured").get<double>(), v.at("threshold").get<double>());
    }
}

int run_sweep(Session& ses, const Common& c) {
    json cfg = load_config(c, false);
    apply_overrides(cfg, c, true);
    std::filesystem::create_directories(c.out);
    Manifest manifest(c.out, "sweep", cfg);

    const char* out = nullptr;
    slb_status st = slb_run_experiment(ses.s, cfg.dump().c_str(), &out);
    if (st != SLB_OK && st != SLB_VERDICT_FAIL) {
        manifest.finish("error", {});
        return fail(ses, st);
    }
    json wrapper = json::parse(out);
    write_file(c.out + "/config.json", cfg.dump(2) + "\n");
    write_file(c.out + "/report.json", wrapper.at("report").dump(2) + "\n");
    write_file(c.out + "/rows.csv", wrapper.at("csv").get<std::string>());
    print_verdicts(wrapper.at("report").at("verdicts"));
    std::printf("%s: %s\n", wrapper.at("report").at("experiment").get<std::string>().c_str(),
                st == SLB_OK ? "PASS" : "FAIL");
    manifest.finish(st == SLB_OK ? "complete" : "verdict-failed",
                    {"config.json", "report.json", "rows.csv"});
    return status_exit(st);
}

int run_check_variations(Session& ses, const Common& c, long probes, bool oracle) {
    json cfg = load_config(c, true);
    apply_overrides(cfg, c, false);
    if (probes > 0)
        cfg["probes"] = probes;
    if (oracle && !cfg.contains("oracle"))
        cfg["oracle"] = {{"enabled", true}};

    const char* out = nullptr;
    slb_status st = slb_check_variations(ses.s, cfg.dump().c_str(), &out);
    if (st != SLB_OK && st != SLB_VERDICT_FAIL)
        return fail(ses, st);
    json rep = json::parse(out);

    std::string csv = "probe,name,value,tolerance,pass\n";
    char line[160];
    long failures = 0;
    for (const auto& p : rep.at("probes")) {
        long id = p.at("probe").get<long>();
        for (const auto& [name, r] : p.at("residuals").items()) {
            bool pass = r.at("pass").get<bool>();
            failures += !pass;
            std::snprintf(line, sizeof line, "%ld,%s,%.17g,%.17g,%d\n", id, name.c_str(),
                          r.at("value").get<double>(), r.at("tolerance").get<double>(),
                          pass ? 1 : 0);
            csv += line;
        }
        if (p.contains("oracle"))
            for (const auto& [fn, sides] : p.at("oracle").items())
                for (const auto& [side, r] : sides.items()) {
                    bool pass = r.at("pass").get<bool>();
                    failures += !pass;
                    std::snprintf(line, sizeof line, "%ld,oracle.%s.%s,%.17g,%.17g,%d\n", id,
                                  fn.c_str(), side.c_str(), r.at("residual").get<double>(),
                                  r.at("tol").get<double>(), pass ? 1 : 0);
                    csv += line;
                }
    }
    std::printf("probes=%zu failures=%ld overall=%s\n", rep.at("probes").size(), failures,
                st == SLB_OK ? "PASS" : "FAIL");
    if (!c.out.empty()) {
        std::filesystem::create_directories(c.out);
        Manifest manifest(c.out, "check-variations", cfg);
        write_file(c.out + "/check_variations.json", rep.dump(2) + "\n");
        write_file(c.out + "/residuals.csv", csv);
        manifest.finish(st == SLB_OK ? "complete" : "verdict-failed",
                        {"check_variations.json", "residuals.csv"});
    } else {
        std::fputs(csv.c_str(), stdout);
    }
    return status_exit(st);
}

int run_solve(Session& ses, const Common& c) {
    json cfg = load_config(c, false);
    apply_overrides(cfg, c, true);
    if (c.out.empty())
        throw std::runtime_error("--out is required for solve");
    std::filesystem::create_directories(c.out);
    Manifest manifest(c.out, "solve", cfg);
    const char* out = nullptr;
    slb_status st = slb_solve(ses.s, cfg.dump().c_str(), c.out.c_str(), &out);
    if (st != SLB_OK) {
        manifest.finish("error", {});
        return fail(ses, st);
    }
    json res = json::parse(out);
    std::printf("residual_norm=%.3e iterations=%d\n", res.at("residual_norm").get<double>(),
                res.at("iterations").get<int>());
    manifest.finish("complete", {"field.slbf", "field.csv", "solve.json"});
    return 0;
}

int run_spectrum(Session& ses, const Common& c) {
    json cfg = load_config(c, false);
    apply_overrides(cfg, c, true);
    const char* out = nullptr;
    slb_status st =
        slb_spectrum(ses.s, cfg.dump().c_str(), c.out.empty() ? nullptr : c.out.c_str(), &out);
    if (st != SLB_OK)
        return fail(ses, st);
    json res = json::parse(out);
    std::fputs(res.at("csv").get<std::string>().c_str(), stdout);
    if (!c.out.empty()) {
        Manifest manifest(c.out, "spectrum", cfg);
        manifest.finish("complete", {"spectrum.csv"});
    }
    return 0;
}

int run_green(Session& ses, const Common& c) {
    json cfg = load_config(c, false);
    apply_overrides(cfg, c, true);
    const char* out = nullptr;
    slb_status st = slb_green_check(ses.s, cfg.dump().c_str(), &out);
    if (st != SLB_OK && st != SLB_VERDICT_FAIL)
        return fail(ses, st);
    json res = json::parse(out);
    std::fputs(res.at("csv").get<std::string>().c_str(), stdout);
    std::printf("green: %s\n", st == SLB_OK ? "PASS" : "FAIL");
    if (!c.out.empty()) {
        std::filesystem::create_directories(c.out);
        Manifest manifest(c.out, "green", cfg);
        write_file(c.out + "/green.json", res.dump(2) + "\n");
        write_file(c.out + "/green.csv", res.at("csv").get<std::string>());
        manifest.finish(st == SLB_OK ? "complete" : "verdict-failed",
                        {"green.json", "green.csv"});
    }
    return status_exit(st);
}

int run_report(Session& ses, const std::string& dir) {
    std::string cfg_text = read_file(dir + "/config.json");
    std::string rows = read_file(dir + "/rows.csv");
    const char* out = nullptr;
    slb_status st = slb_judge_rows(ses.s, cfg_text.c_str(), rows.c_str(), &out);
    if (st != SLB_OK && st != SLB_VERDICT_FAIL)
        return fail(ses, st);
    json res = json::parse(out);
    print_verdicts(res.at("verdicts"));
    std::printf("overall: %s\n", st == SLB_OK ? "PASS" : "FAIL");
    return status_exit(st);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"diffuse-interface energies, inner variations, and sharp-interface limits"};
    app.require_subcommand(1);

    Common c;
    long probes = 0;
    bool oracle = false;
    std::string report_dir;

    auto add_common = [&](CLI::App* sub, bool with_out) {
        sub->add_option("--config", c.config, "JSON configuration file");
        if (with_out)
            sub->add_option("--out", c.out, "output directory");
        sub->add_option("--jobs", c.jobs, "worker cap for sweep points");
        sub->add_option("--seed", c.seed, "probe RNG seed override");
        sub->add_option("--tol-scale", c.tol_scale, "verdict tolerance multiplier")
            ->each([&](const std::string&) { c.has_tol = true; });
    };

    CLI::App* sweep = app.add_subcommand("sweep", "run one experiment sweep");
    add_common(sweep, true);
    CLI::App* check = app.add_subcommand("check-variations",
                                         "inner-variation identity audit on random probes");
    add_common(check, true);
    check->add_option("--probes", probes, "number of random probes");
    check->add_flag("--oracle", oracle, "compare against the deformation oracle");
    CLI::App* solve = app.add_subcommand("solve", "critical point at the finest eps");
    add_common(solve, true);
    CLI::App* spectrum =
        app.add_subcommand("spectrum", "linearized spectrum at the finest eps");
    add_common(spectrum, true);
    CLI::App* green = app.add_subcommand("green", "Green surface form vs smeared oracle");
    add_common(green, true);
    CLI::App* report = app.add_subcommand("report", "re-judge a persisted sweep directory");
    report->add_option("dir", report_dir, "sweep output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 64;
    }

    Session ses;
    if (!ses.s) {
        std::cerr << "error: out of memory\n";
        return 1;
    }
    try {
        if (sweep->parsed())
            return run_sweep(ses, c);
        if (check->parsed())
            return run_check_variations(ses, c, probes, oracle);
        if (solve->parsed())
            return run_solve(ses, c);
        if (spectrum->parsed())
            return run_spectrum(ses, c);
        if (green->parsed())
            return run_green(ses, c);
        if (report->parsed())
            return run_report(ses, report_dir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        std::string what = e.what();
        if (what.find("--config") != std::string::npos ||
            what.find("--out") != std::string::npos ||
            what.find("not valid JSON") != std::string::npos)
            return 64;
        return 1;
    }
    return 64;
}
