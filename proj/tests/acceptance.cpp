// Acceptance runner: one PASS/FAIL line per criterion.
// Exit status is nonzero only when something throws unexpectedly.
#include "geomgate/geomgate.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>

using namespace geomgate;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream note;
    void require(bool ok, const std::string& what) {
        if (!ok) {
            if (!pass) note << "; ";
            else note.str("");
            pass = false;
            note << what;
        }
    }
};

Mat2 propagated(const SchemeBundle& b, std::size_t steps = 10000) {
    return propagate_unitary(b.schedule, steps, false).final_operator;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

// ---------------------------------------------------------------- 1
void closed_form(Outcome& o) {
    double worst = 0;
    for (double chi : {0.3, pi / 2, 2.6})
        for (double xi : {0.0, 1.2, -2.0})
            for (double g : {-2.5, 0.4, pi / 2}) {
                auto b = orange_slice(chi, xi, g);
                worst = std::max(worst, phase_distance(propagated(b), pauli_axis_unitary(bloch_axis(chi, xi), g)));
            }
    o.require(worst < 1e-6, "max distance " + num(worst));
    o.note << "max distance " << num(worst);
}

// ---------------------------------------------------------------- 2
void areas(Outcome& o) {
    double a = schedule_area(orange_slice(0.9, 0.1, 1.3).schedule);
    o.require(std::abs(a - 2 * pi) < 1e-9, "orange-slice area " + num(a));
    for (double th : {pi / 4, pi / 2, pi}) {
        double cot = 1 / std::tan(th / 2);
        double t = schedule_area(toc(th, "x").schedule);
        o.require(std::abs(t - pi / std::sqrt(1 + cot * cot)) < 1e-9, "toc area at theta " + num(th));
    }
    for (double chi0 : {pi / 4, pi / 2, 3 * pi / 4}) {
        double d = schedule_area(dyn_corrected(chi0, 0.0, pi / 2).schedule);
        o.require(d <= 4 * pi + 1e-9, "dyn-corrected area " + num(d));
    }
}

// ---------------------------------------------------------------- 3
void phase_decomposition(Outcome& o) {
    std::vector<SchemeBundle> zero{orange_slice(0.8, 0.2, 1.0),  half_orange(0.5, 0.2, 1.0),
                                   triangular(0.4, 0.2, 0.8, 2.0), circular({CircularGate::Hadamard, 0, {}}),
                                   noncyclic(NoncyclicKind::Rz, pi / 4), noncyclic(NoncyclicKind::Rx, pi / 3)};
    for (const auto& b : zero) {
        auto path = path_from_drive(b.schedule, b.chi0, b.xi0);
        double gd = dynamical_phase(path, b.schedule);
        o.require(std::abs(gd) < 1e-6, b.scheme + " gamma_d " + num(gd));
    }
    for (double th : {pi / 4, pi / 2, 3 * pi / 4}) {
        auto b = toc(th, "x");
        auto path = path_from_drive(b.schedule, b.chi0, b.xi0);
        double lhs = dynamical_phase(path, b.schedule);
        double rhs = (path.xi_start() - path.xi_end()) - geometric_phase(path);
        o.require(std::abs(wrap_angle(lhs - rhs)) < 1e-6, "toc relation at theta " + num(th));
    }
    double worst = 0;
    for (double lam : {-2.0, -0.9, 0.3, 1.1, 2.5})
        for (double L : {0.4, 1.0, 1.4, 2.1, 2.9}) {
            auto b = triangular(0.6, 0.1, lam, L);
            auto path = path_from_drive(b.schedule, b.chi0, b.xi0);
            worst = std::max(worst, std::abs(wrap_angle(geometric_phase(path) - lam * (1 - std::cos(L)) / 2)));
        }
    o.require(worst < 1e-6, "triangular grid error " + num(worst));
    if (o.pass) o.note << "triangular grid error " << num(worst);
}

// ---------------------------------------------------------------- 4
Segment latitude(double dxi) {
    // H = -(Delta/2) sigma_z moves xi at rate -Delta
    Segment s;
    s.duration = std::abs(dxi);
    s.delta = Constant{dxi > 0 ? -1.0 : 1.0};
    return s;
}

Segment meridian(double xi, double dchi) {
    // rotation about (-sin xi, cos xi, 0) moves chi along the meridian
    Segment s;
    s.duration = std::abs(dchi);
    s.omega = Constant{1.0};
    s.phase = Constant{xi + (dchi > 0 ? pi / 2 : -pi / 2)};
    return s;
}

double fan_excess(const BlochPath& p) {
    std::vector<Vec3> pts;
    for (std::size_t k = 0; k < p.segments.size(); ++k)
        for (std::size_t i = 0; i + 1 < p.segments[k].t.size(); ++i) pts.push_back(p.point(k, i));
    Vec3 apex = Vec3::UnitZ();
    double e = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) e += signed_excess(apex, pts[i], pts[(i + 1) % pts.size()]);
    return e;
}

void solid_angle(Outcome& o) {
    std::mt19937 rng(20240611);
    std::uniform_real_distribution<double> chi_d(0.3, 1.4), span(0.3, 1.2), xi_d(-pi, pi), dx(0.4, 2.5);
    double worst = 0, worst_fan = 0;
    for (int k = 0; k < 10; ++k) {
        double ca = chi_d(rng), cb = ca + span(rng), xi = xi_d(rng), w = dx(rng) * (k % 2 ? -1 : 1);
        PulseSchedule s;
        s.segments = {latitude(w), meridian(xi + w, cb - ca), latitude(-w), meridian(xi, ca - cb)};
        auto path = path_from_drive(s, ca, xi);
        double g = geometric_phase(path);
        double exact = -0.5 * w * (std::cos(cb) - std::cos(ca));
        double sa = solid_angle_phase(path);
        double fan = -0.5 * fan_excess(path);
        worst = std::max({worst, std::abs(wrap_angle(g - sa)), std::abs(wrap_angle(g - exact))});
        worst_fan = std::max(worst_fan, std::abs(wrap_angle(fan - exact)));
    }
    o.require(worst < 1e-6, "geometric vs solid angle " + num(worst));
    o.require(worst_fan < 1e-4, "spherical-excess oracle " + num(worst_fan));
    if (o.pass) o.note << "max error " << num(worst) << ", excess oracle " << num(worst_fan);
}

// ---------------------------------------------------------------- 5
double quadratic_coefficient(const SchemeBundle& b) {
    // even part y(e) = a e^2 + c e^4 from e = 0.02, 0.04
    auto y = [&](double e) {
        NoiseSpec n;
        n.epsilon = e;
        return 1 - evaluate(b, n);
    };
    double h = 0.02;
    double y1 = (y(h) + y(-h)) / 2, y2 = (y(2 * h) + y(-2 * h)) / 2;
    return (16 * y1 - y2) / (12 * h * h);
}

void oct_cancellation(Outcome& o) {
    double a0 = quadratic_coefficient(oct('z', -pi / 4, 0.0));
    double a1 = quadratic_coefficient(oct('z', -pi / 4, 1.0));
    double r = std::abs(a1) / std::abs(a0);
    o.require(r < 0.01, "ratio " + num(r));
    if (o.pass) o.note << "eta=0 " << num(a0) << ", eta=1 " << num(a1) << ", ratio " << num(r);
}

// ---------------------------------------------------------------- 6
void dcs_phases(Outcome& o) {
    for (double chi0 : {pi / 4, pi / 2, 3 * pi / 4}) {
        auto b = dyn_corrected(chi0, 0.1, pi / 3);
        auto path = path_from_drive(b.schedule, b.chi0, b.xi0);
        auto all = segment_dynamical_phases(path, b.schedule);
        std::vector<double> got;
        for (auto [idx, expect] : b.claims.segment_dynamical) got.push_back(all.at(idx));
        std::vector<double> want{-chi0 / 2, pi / 2, -(pi - chi0) / 2};
        if (got.size() != 3) {
            o.require(false, "expected three inserted segments");
            continue;
        }
        double sum = 0;
        for (int i = 0; i < 3; ++i) {
            o.require(std::abs(got[i] - want[i]) < 1e-6, "chi0 " + num(chi0) + " segment " + std::to_string(i));
            sum += got[i];
        }
        o.require(std::abs(sum) < 1e-6, "sum " + num(sum));
    }
}

// ---------------------------------------------------------------- 7
void error_curve_laws(Outcome& o) {
    double speed = 0;
    for (const auto& b : {orange_slice(0.7, 0.3, 1.1), toc(pi / 2, "x"), dog_reference(), oct('x', pi / 2, 0.5)})
        for (double v : error_curve(b.schedule).arc_speed()) speed = std::max(speed, std::abs(v - 1));
    o.require(speed < 1e-6, "arc speed " + num(speed));

    auto b = orange_slice(pi / 2, 0, pi / 2);
    auto c = error_curve(b.schedule);
    auto f = frenet_profile(c);
    double kap = 0;
    std::size_t k = 0;
    for (std::size_t si = 0; si < c.segments.size(); ++si) {
        const auto& seg = b.schedule.segments[si];
        for (std::size_t i = 0; i < c.segments[si].t.size(); ++i, ++k) {
            double om = seg.omega.value(c.segments[si].t[i] - c.segments[si].t0, seg.duration);
            if (om > 0.05) kap = std::max(kap, std::abs(f.kappa[k] - om) / om);
        }
    }
    o.require(kap < 1e-3, "curvature " + num(kap));

    auto dog = first_order_robust(dog_reference().schedule);
    auto conv = first_order_robust(orange_slice(pi / 2, 0, pi / 2).schedule);
    o.require(dog.closed && dog.exponent >= 3.5, "closed-curve slope " + num(dog.exponent));
    o.require(!conv.closed && std::abs(conv.exponent - 2) <= 0.3, "conventional slope " + num(conv.exponent));
    if (o.pass) o.note << "slopes " << num(dog.exponent) << " / " << num(conv.exponent);
}

// ---------------------------------------------------------------- 8, 9
void record_checks(Outcome& o, const Experiment& e) {
    for (const auto& c : e.checks) o.require(c.pass, e.name + ": " + c.description);
}

void composite_ordering(Outcome& o) { record_checks(o, run_experiment("fig12")); }

void figure_suites(Outcome& o) {
    for (const char* n : {"fig14", "fig16", "fig15"}) record_checks(o, run_experiment(n));
}

// ---------------------------------------------------------------- 10
void dd_gate(Outcome& o) {
    auto w = logical_isometry();
    double dist = 0, leak = 0;
    for (double th : {0.0, pi / 2})
        for (double ph : {pi / 2, pi}) {
            auto b = dd_logical(th, ph);
            ComplexMatrix u = propagate_unitary(b.schedule, 10000, false).final_operator;
            ComplexMatrix ul = w.adjoint() * u * w;
            Mat2 target = pauli_axis_unitary(Vec3(std::sin(th), 0, std::cos(th)), -ph / 2);
            dist = std::max(dist, phase_distance(ul, target));
            leak = std::max(leak, (u * w - w * ul).norm());
        }
    o.require(dist < 1e-6, "logical distance " + num(dist));
    o.require(leak < 1e-7, "leakage " + num(leak));
    if (o.pass) o.note << "distance " << num(dist) << ", leakage " << num(leak);
}

// ---------------------------------------------------------------- 11
void hygiene(Outcome& o) {
    double drift = 0;
    for (const auto& id : scheme_ids()) {
        std::string gate = id == "dog-reference" ? "NOT" : id == "toc" ? "S" : "T";
        auto b = build_scheme(id, {gate, {}});
        auto r = propagate_unitary(b.schedule, 10000, true);
        drift = std::max(drift, r.estimated_error);
        o.require(r.estimated_error < 1e-8, id + " drift " + num(r.estimated_error));
    }
    std::vector<LindbladChannel> ch = qubit_decoherence(1.0 / 5000);
    double trace = 0, choi = 0;
    for (const auto& b : {orange_slice(0.5, 0.2, pi / 4), toc(pi / 2, "y"), dog_reference()}) {
        ComplexMatrix s = process_map(b.schedule, ch, 4000);
        trace = std::max(trace, trace_preservation_defect(s));
        choi = std::min(choi, choi_min_eigenvalue(s));
    }
    auto dd = dd_logical(0, pi / 2);
    ComplexMatrix rho = ComplexMatrix::Zero(8, 8);
    rho(0, 0) = 1.0;
    std::vector<LindbladChannel> enc = encoded_dephasing(1.0 / 5000);
    auto lr = propagate_lindblad(dd.schedule, rho, enc, 4000);
    trace = std::max(trace, std::abs(lr.rho.trace().real() - 1));
    o.require(trace < 1e-8, "trace defect " + num(trace));
    o.require(choi >= -1e-8, "choi eigenvalue " + num(choi));
    if (o.pass) o.note << "drift " << num(drift) << ", trace " << num(trace) << ", choi " << num(choi);
}

}  // namespace

int main() {
    std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
        {"closed-form equivalence", closed_form},
        {"pulse-area identities", areas},
        {"phase decomposition", phase_decomposition},
        {"solid-angle identity", solid_angle},
        {"oct cancellation", oct_cancellation},
        {"dynamical-correction phases", dcs_phases},
        {"error-curve laws", error_curve_laws},
        {"composite robustness ordering", composite_ordering},
        {"figure-ordering suites", figure_suites},
        {"dd logical gate", dd_gate},
        {"numerical hygiene", hygiene},
    };
    int passed = 0, idx = 0;
    try {
        for (auto& [name, fn] : criteria) {
            ++idx;
            Outcome o;
            auto t0 = std::chrono::steady_clock::now();
            fn(o);
            double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            passed += o.pass;
            std::printf("%s %2d %-30s %7.2fs  %s\n", o.pass ? "PASS" : "FAIL", idx, name.c_str(), secs,
                        o.note.str().c_str());
            std::fflush(stdout);
        }
    } catch (const std::exception& e) {
        std::printf("CRASH %2d %s\n", idx, e.what());
        return 1;
    }
    std::printf("%d/%zu criteria passed\n", passed, criteria.size());
    return 0;
}
