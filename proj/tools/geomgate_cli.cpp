#include "geomgate/geomgate.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <iostream>

using namespace geomgate;

namespace {

struct Flags {
    std::string config;
    std::optional<double> epsilon, delta, gamma_rate;
    std::optional<std::size_t> steps;
    int jobs = 1;
    std::string out;
    // build
    std::string scheme, gate;
    std::optional<double> chi0, xi0, gamma, theta;
    std::string axis;
    std::vector<std::string> params;
    std::string file;
    std::string experiment;
};

std::string out_dir(const Flags& f, const RunConfig& c) {
    if (const char* e = std::getenv("GEOMGATE_OUT"); e && *e) return e;
    return f.out.empty() ? c.out_dir : f.out;
}

RunConfig load_config(const Flags& f) {
    RunConfig c = f.config.empty() ? RunConfig{} : config_from_json(read_json(f.config));
    if (f.epsilon) c.noise.epsilon = *f.epsilon;
    if (f.delta) c.noise.delta = *f.delta;
    if (f.gamma_rate) {
        if (*f.gamma_rate < 0) throw ValidationError("--gamma-rate must be non-negative");
        c.gamma = *f.gamma_rate;
        c.noise.channels = channels_for(c);
    }
    if (f.steps) {
        if (*f.steps < 64) throw ValidationError("--steps must be at least 64");
        c.steps = *f.steps;
    }
    return c;
}

SchemeRequest request_from(const Flags& f, const RunConfig& c) {
    SchemeRequest r = c.request;
    bool explicit_loop = f.gamma || f.theta || !f.axis.empty();
    if (!f.gate.empty()) r.gate = f.gate;
    else if (explicit_loop) r.gate = "CUSTOM";
    else if ((f.scheme.empty() ? c.scheme : f.scheme) == "dog-reference") r.gate = "NOT";
    if (f.chi0) r.params["chi0"] = *f.chi0;
    if (f.xi0) r.params["xi0"] = *f.xi0;
    if (f.gamma) r.params["gamma"] = *f.gamma;
    if (f.theta) r.params["theta"] = *f.theta;
    if (!f.axis.empty()) {
        static const std::map<std::string, double> ax{{"x", 0}, {"y", 1}, {"-x", 2}, {"-y", 3}, {"z", 3}};
        auto it = ax.find(f.axis);
        if (it == ax.end()) throw ValidationError("axis must be x, y, -x, -y or z");
        r.params["axis"] = it->second;
    }
    for (const auto& kv : f.params) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) throw ValidationError("--param expects key=value, got '" + kv + "'");
        try {
            r.params[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
        } catch (const std::exception&) {
            throw ValidationError("--param value is not a number: '" + kv + "'");
        }
    }
    return r;
}

SchemeBundle load_bundle(const std::string& path) { return bundle_from_json(read_json(path)); }

void print_phases(const SchemeBundle& b) {
    if (b.schedule.dim != 2) {
        std::printf("phases: not defined for dim-%d schedules\n", b.schedule.dim);
        return;
    }
    auto path = path_from_drive(b.schedule, b.chi0, b.xi0);
    auto p = phase_breakdown(path, b.schedule);
    std::printf("gamma_total %.10f\ngamma_d %.10f\ngamma_g %.10f\n", p.total, p.dynamical, p.geometric);
    if (std::isnan(p.solid_angle)) std::printf("solid_angle ambiguous\n");
    else std::printf("solid_angle %.10f\n", p.solid_angle);
    std::printf("closed %s\n", p.closed ? "yes" : "no");
    for (std::size_t i = 0; i < p.segment_dynamical.size(); ++i)
        std::printf("segment %zu gamma_d %.10f\n", i, p.segment_dynamical[i]);
}

int cmd_list() {
    for (const auto& id : scheme_ids()) std::printf("%s\n", id.c_str());
    return 0;
}

int cmd_build(const Flags& f) {
    RunConfig c = load_config(f);
    std::string id = f.scheme.empty() ? c.scheme : f.scheme;
    SchemeBundle b = build_scheme(id, request_from(f, c));
    namespace fs = std::filesystem;
    fs::path p = fs::path(out_dir(f, c)) / (id + ".json");
    json j = bundle_json(b);
    if (c.peak_mhz) j["schedule"]["notes"]["peak_mhz"] = std::to_string(*c.peak_mhz);
    write_text(p, j.dump(2) + "\n");
    std::printf("scheme %s\nsegments %zu\narea %.10f\nduration %.10f\n", b.scheme.c_str(), b.schedule.segments.size(),
                schedule_area(b.schedule), b.schedule.total_time());
    if (b.claims.zero_dynamical) std::printf("claim zero-dynamical\n");
    if (b.claims.pointwise_parallel) std::printf("claim pointwise-parallel\n");
    if (b.claims.unconventional) std::printf("claim unconventional\n");
    if (b.claims.geometric) std::printf("claim geometric %.10f\n", *b.claims.geometric);
    std::printf("wrote %s\n", p.string().c_str());
    return 0;
}

int cmd_propagate(const Flags& f) {
    RunConfig c = load_config(f);
    SchemeBundle b = load_bundle(f.file);
    double fid = evaluate(b, c.noise, Metric::AvgGateFidelity, c.steps);
    std::printf("avg_gate_fidelity %.10f\n", fid);
    if (b.schedule.dim == 2) {
        NoiseSpec clean_only;
        clean_only.epsilon = c.noise.epsilon;
        clean_only.delta = c.noise.delta;
        clean_only.variant = c.noise.variant;
        SchemeBundle noisy = b;
        noisy.schedule = apply_noise(b.schedule, clean_only);
        print_phases(noisy);
        std::printf("closure_defect %.3e\n", error_curve(noisy.schedule).closure_defect());
    }
    return 0;
}

int cmd_phases(const Flags& f) {
    print_phases(load_bundle(f.file));
    return 0;
}

int cmd_curve(const Flags& f) {
    RunConfig c = load_config(f);
    SchemeBundle b = load_bundle(f.file);
    auto curve = error_curve(b.schedule);
    auto rep = first_order_robust(b.schedule);
    std::printf("closure_defect %.3e\nclosed %s\nexponent %.4f\n", rep.closure_defect, rep.closed ? "yes" : "no",
                rep.exponent);
    std::string csv = "t,rx,ry,rz,speed\n";
    char buf[160];
    for (const auto& s : curve.segments)
        for (std::size_t i = 0; i < s.t.size(); i += 16) {
            std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%.12g,%.12g\n", s.t[i], s.r[i].x(), s.r[i].y(), s.r[i].z(),
                          s.rdot[i].norm());
            csv += buf;
        }
    namespace fs = std::filesystem;
    fs::path p = fs::path(out_dir(f, c)) / (b.scheme + "_curve.csv");
    write_text(p, csv);
    std::printf("wrote %s\n", p.string().c_str());
    return 0;
}

void report_errors(const ResultTable& t) {
    std::size_t n = 0;
    for (const auto& r : t.rows)
        if (r.flags.find("error:") != std::string::npos) ++n;
    if (n) std::printf("%zu rows carry error flags\n", n);
}

int cmd_sweep(const Flags& f) {
    RunConfig c = load_config(f);
    if (!c.sweep) throw ValidationError("sweep needs a config with a 'sweep' section");
    SweepSpec s = *c.sweep;
    if (s.values.empty()) throw ValidationError("sweep grid is empty");
    SchemeRequest r = request_from(f, c);
    SchemeBundle b = build_scheme(c.scheme, r);
    s.gate = r.gate;
    s.base = c.noise;
    s.steps = c.steps;
    if (f.jobs > 1) s.jobs = f.jobs;
    if (s.label.empty()) s.label = c.scheme;
    ResultTable t = sweep(b, s);
    namespace fs = std::filesystem;
    fs::path dir = out_dir(f, c);
    write_text(dir / (s.label + "_sweep.csv"), to_csv(t));
    write_text(dir / (s.label + "_sweep.svg"), to_svg(t, s.label));
    std::printf("wrote %s\nwrote %s\n", (dir / (s.label + "_sweep.csv")).string().c_str(),
                (dir / (s.label + "_sweep.svg")).string().c_str());
    report_errors(t);
    return 0;
}

int cmd_experiment(const Flags& f) {
    RunConfig c = load_config(f);
    ExperimentConfig ec;
    ec.jobs = f.jobs;
    if (f.steps) ec.steps = *f.steps;
    if (f.gamma_rate) ec.gamma_over_peak = *f.gamma_rate;
    Experiment e = run_experiment(f.experiment, ec);
    namespace fs = std::filesystem;
    fs::path dir = out_dir(f, c);
    write_experiment(e, dir);
    for (const char* ext : {".csv", ".svg", "_checks.txt"})
        std::printf("wrote %s\n", (dir / (e.name + ext)).string().c_str());
    for (const auto& k : e.checks) std::printf("%s %s\n", k.pass ? "PASS" : "FAIL", k.description.c_str());
    report_errors(e.table);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"geomgate: nonadiabatic geometric gate synthesis and simulation"};
    app.require_subcommand(1);
    Flags f;
    auto common = [&](CLI::App* s) {
        s->add_option("--config", f.config, "JSON run configuration");
        s->add_option("--epsilon", f.epsilon, "amplitude error fraction");
        s->add_option("--delta", f.delta, "detuning error fraction");
        s->add_option("--gamma-rate", f.gamma_rate, "decoherence rate in units of the peak Rabi frequency");
        s->add_option("--steps", f.steps, "integrator steps per segment");
        s->add_option("--jobs", f.jobs, "parallel sweep workers");
        s->add_option("--out", f.out, "output directory (GEOMGATE_OUT overrides)");
    };
    auto* list = app.add_subcommand("list-schemes", "print registered scheme ids");
    auto* build = app.add_subcommand("build", "construct a scheme and write its bundle JSON");
    common(build);
    build->add_option("scheme", f.scheme, "scheme id");
    build->add_option("--gate", f.gate, "target gate (S, T, Z, H, NOT, Y, CUSTOM, ...)");
    build->add_option("--chi0", f.chi0);
    build->add_option("--xi0", f.xi0);
    build->add_option("--gamma", f.gamma);
    build->add_option("--theta", f.theta);
    build->add_option("--axis", f.axis);
    build->add_option("--param", f.params, "extra scheme parameter key=value");
    auto* prop = app.add_subcommand("propagate", "fidelity and phase report for a bundle file");
    common(prop);
    prop->add_option("file", f.file)->required();
    auto* phases = app.add_subcommand("phases", "geometric/dynamical phase decomposition");
    common(phases);
    phases->add_option("file", f.file)->required();
    auto* curve = app.add_subcommand("curve", "sigma_z error curve and robustness exponent");
    common(curve);
    curve->add_option("file", f.file)->required();
    auto* sw = app.add_subcommand("sweep", "run the sweep described by --config");
    common(sw);
    auto* ex = app.add_subcommand("experiment", "run a figure experiment");
    common(ex);
    ex->add_option("name", f.experiment)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    try {
        if (list->parsed()) return cmd_list();
        if (build->parsed()) return cmd_build(f);
        if (prop->parsed()) return cmd_propagate(f);
        if (phases->parsed()) return cmd_phases(f);
        if (curve->parsed()) return cmd_curve(f);
        if (sw->parsed()) return cmd_sweep(f);
        if (ex->parsed()) return cmd_experiment(f);
    } catch (const ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const NumericError& e) {
        std::fprintf(stderr, "numeric failure: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}
