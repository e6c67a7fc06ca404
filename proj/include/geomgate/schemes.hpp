#pragma once

#include "geomgate/gates.hpp"
#include "geomgate/optimize.hpp"
#include "geomgate/path.hpp"

#include <functional>
#include <map>
#include <optional>

namespace geomgate {

struct GateTarget {
    std::string name;
    Vec3 axis = Vec3::UnitZ();
    double angle = 0.0;  // rotation angle: target ~ exp(-i angle/2 n.sigma)
    ComplexMatrix expected_unitary;
};

inline GateTarget target_from_unitary(const std::string& name, const Mat2& u) {
    GateTarget g;
    g.name = name;
    g.expected_unitary = u;
    Mat2 su = u / std::sqrt(u.determinant());
    auto c = pauli_coefficients(su);
    // su = cos(a/2) I - i sin(a/2) n.sigma
    Vec3 s(-c[1].imag(), -c[2].imag(), -c[3].imag());
    double sn = s.norm(), cs = c[0].real();
    if (cs < 0) {
        s = -s;
        cs = -cs;
    }
    g.angle = 2 * std::atan2(sn, cs);
    g.axis = sn > 1e-12 ? Vec3(s / sn) : Vec3::UnitZ();
    return g;
}

struct PhaseClaims {
    bool zero_dynamical = false;
    bool pointwise_parallel = false;
    bool unconventional = false;
    std::optional<double> geometric;
    std::vector<std::pair<std::size_t, double>> segment_dynamical;
    bool any() const {
        return zero_dynamical || pointwise_parallel || unconventional || geometric || !segment_dynamical.empty();
    }
};

struct SchemeBundle {
    std::string scheme;
    PulseSchedule schedule;
    GateTarget target;
    ComplexMatrix expected_unitary;          // dim x dim, or logical 2 x 2 for encoded schedules
    std::optional<ComplexMatrix> isometry;  // encoded logical basis (dim x 2)
    double chi0 = 0.0, xi0 = 0.0;            // start of the traced path
    PhaseClaims claims;
    std::map<std::string, double> params;
    std::optional<PhaseBreakdown> verified;
};

enum class PulseShape { SinSquared, Constant };

struct BuildOptions {
    double peak = 1.0;
    PulseShape shape = PulseShape::SinSquared;
    bool validate = true;
};

namespace detail {

inline void check_peak(double peak) {
    if (!(peak > 0) || !std::isfinite(peak)) throw ValidationError("peak Rabi frequency must be positive");
}

// Resonant segment of given pulse area.
inline Segment area_segment(double area, double phase, double peak, PulseShape shape, std::string label = {}) {
    if (!(area > 0)) throw ValidationError("segment area must be positive");
    Segment s;
    s.label = std::move(label);
    s.phase = Constant{phase};
    if (shape == PulseShape::SinSquared) {
        s.duration = 2 * area / peak;
        s.omega = SinSquared{peak, 1.0};
    } else {
        s.duration = area / peak;
        s.omega = Constant{peak};
    }
    return s;
}

inline void push_area(std::vector<Segment>& v, double area, double phase, const BuildOptions& o,
                      std::string label = {}) {
    if (area > 1e-14) v.push_back(area_segment(area, phase, o.peak, o.shape, std::move(label)));
}

inline PulseSchedule make_schedule(std::vector<Segment> segs, std::string scheme) {
    PulseSchedule s;
    s.dim = 2;
    s.segments = std::move(segs);
    s.scheme = std::move(scheme);
    s.declared_area = schedule_area(s);
    return s;
}

inline double wrap_diff(double a, double b) { return std::abs(wrap_angle(a - b)); }

}  // namespace detail

// Propagate and trace the bundle; throws if the expected unitary or phase claims fail.
inline void validate_bundle(SchemeBundle& b) {
    const double tol = 1e-6;
    auto& s = b.schedule;
    s.validate();
    if (b.params.empty()) throw ValidationError("scheme parameters are empty");
    if (!is_unitary(b.expected_unitary, 1e-9)) throw ValidationError("expected unitary is not unitary");
    ComplexMatrix u = propagate_unitary(s, 10000, false).final_operator;
    if (b.isometry) {
        const auto& w = *b.isometry;
        ComplexMatrix ul = w.adjoint() * u * w;
        double leak = (u * w - w * ul).norm();
        if (phase_distance(ul, b.expected_unitary) > tol || leak > 1e-6)
            throw InconsistencyError(b.scheme + ": logical gate does not match its closed form");
    } else if (phase_distance(u, b.expected_unitary) > tol) {
        throw InconsistencyError(b.scheme + ": propagated gate differs from the expected unitary (distance " +
                                 std::to_string(phase_distance(u, b.expected_unitary)) + ")");
    }
    if (!b.claims.any()) return;
    BlochPath path = path_from_drive(s, b.chi0, b.xi0);
    PhaseBreakdown p = phase_breakdown(path, s);
    if (b.claims.zero_dynamical && std::abs(p.dynamical) > tol)
        throw InconsistencyError(b.scheme + ": dynamical phase " + std::to_string(p.dynamical) + " is not zero");
    if (b.claims.geometric && detail::wrap_diff(p.geometric, *b.claims.geometric) > tol)
        throw InconsistencyError(b.scheme + ": geometric phase " + std::to_string(p.geometric) + " differs from " +
                                 std::to_string(*b.claims.geometric));
    if (b.claims.unconventional) {
        double rhs = (path.xi_start() - path.xi_end()) - p.geometric;
        if (std::abs(p.dynamical - rhs) > tol) throw InconsistencyError(b.scheme + ": unconventional relation fails");
    }
    for (auto [idx, val] : b.claims.segment_dynamical)
        if (idx >= p.segment_dynamical.size() || std::abs(p.segment_dynamical[idx] - val) > tol)
            throw InconsistencyError(b.scheme + ": inserted segment dynamical phase is off");
    if (b.claims.pointwise_parallel) {
        for (std::size_t si = 0; si < path.segments.size(); ++si) {
            const auto& ps = path.segments[si];
            for (std::size_t i = 0; i < ps.t.size(); ++i) {
                double h0;
                Vec3 hv = detail::hamiltonian_vector(
                    segment_hamiltonian(s.segments[si], ps.t[i] - ps.t0, 2, s.static_term), h0);
                if (std::abs(h0 + hv.dot(bloch_axis(ps.chi[i], ps.xi[i]))) > 1e-7)
                    throw InconsistencyError(b.scheme + ": <H> does not vanish along the path");
            }
        }
    }
    b.verified = p;
}

inline SchemeBundle finish(SchemeBundle b, const BuildOptions& o) {
    if (b.target.expected_unitary.size() == 0) b.target = target_from_unitary(b.scheme, Mat2(b.expected_unitary));
    b.schedule.scheme = b.scheme;
    if (o.validate) validate_bundle(b);
    return b;
}

// Concatenation of bundles; expected unitary is the ordered product.
inline SchemeBundle sequence(const std::string& name, const std::vector<SchemeBundle>& parts, const BuildOptions& o) {
    if (parts.empty()) throw ValidationError("empty sequence");
    SchemeBundle b;
    b.scheme = name;
    std::vector<PulseSchedule> ss;
    ComplexMatrix u = ComplexMatrix::Identity(parts[0].expected_unitary.rows(), parts[0].expected_unitary.cols());
    for (const auto& p : parts) {
        ss.push_back(p.schedule);
        u = p.expected_unitary * u;
        for (const auto& [k, v] : p.params) b.params.try_emplace(k, v);
    }
    b.schedule = concatenate(ss);
    b.expected_unitary = u;
    b.chi0 = parts[0].chi0;
    b.xi0 = parts[0].xi0;
    b.params["parts"] = static_cast<double>(parts.size());
    BuildOptions q = o;
    return finish(std::move(b), q);
}

// ---------------------------------------------------------------- orange slice

inline SchemeBundle orange_slice(double chi0, double xi0, double gamma, const BuildOptions& o = {}) {
    detail::check_peak(o.peak);
    if (!(chi0 >= 0 && chi0 <= pi)) throw OutOfRangeError("chi0 must lie in [0, pi]");
    if (!(gamma > -pi - 1e-12 && gamma <= pi + 1e-12)) throw OutOfRangeError("gamma must lie in (-pi, pi]");
    std::vector<Segment> v;
    detail::push_area(v, chi0, xi0 - pi / 2, o, "up");
    detail::push_area(v, pi, xi0 + gamma + pi / 2, o, "across");
    detail::push_area(v, pi - chi0, xi0 - pi / 2, o, "back");
    SchemeBundle b;
    b.scheme = "orange-slice";
    b.schedule = detail::make_schedule(std::move(v), b.scheme);
    b.expected_unitary = pauli_axis_unitary(bloch_axis(chi0, xi0), gamma);
    b.chi0 = chi0;
    b.xi0 = xi0;
    b.claims.zero_dynamical = true;
    b.claims.geometric = gamma;
    b.params = {{"chi0", chi0}, {"xi0", xi0}, {"gamma", gamma}, {"peak", o.peak}};
    return finish(std::move(b), o);
}

inline SchemeBundle composite(double chi0, double xi0, double gamma, int n, const BuildOptions& o = {}) {
    if (n < 1) throw ValidationError("composite repetition count must be at least 1");
    SchemeBundle base = orange_slice(chi0, xi0, gamma / n, o);
    SchemeBundle b;
    b.scheme = "composite";
    std::vector<PulseSchedule> ss(static_cast<std::size_t>(n), base.schedule);
    b.schedule = concatenate(ss);
    b.expected_unitary = pauli_axis_unitary(bloch_axis(chi0, xi0), gamma);
    b.chi0 = chi0;
    b.xi0 = xi0;
    b.claims.zero_dynamical = true;
    b.claims.geometric = gamma;
    b.params = {{"chi0", chi0}, {"xi0", xi0}, {"gamma", gamma}, {"N", double(n)}, {"peak", o.peak}};
    b.schedule.notes["N"] = std::to_string(n);
    return finish(std::move(b), o);
}

// Composite variant for sigma_z noise: each block jumps by pi - gamma/N, so a
// block is -exp(-i (gamma/N) n.sigma) and N blocks give exp(-i gamma n.sigma).
inline SchemeBundle composite_z(double chi0, double xi0, double gamma, int n, BuildOptions o = {}) {
    if (n < 1) throw ValidationError("composite repetition count must be at least 1");
    double gc = gamma / n;
    SchemeBundle base = orange_slice(chi0, xi0, wrap_angle(pi - gc) == -pi ? pi : wrap_angle(pi - gc), o);
    SchemeBundle b;
    b.scheme = "composite-z";
    std::vector<PulseSchedule> ss(static_cast<std::size_t>(n), base.schedule);
    b.schedule = concatenate(ss);
    b.expected_unitary = pauli_axis_unitary(bloch_axis(chi0, xi0), -gamma);
    b.chi0 = chi0;
    b.xi0 = xi0;
    b.claims.zero_dynamical = true;
    b.claims.geometric = n * (pi - gc);
    b.params = {{"chi0", chi0}, {"xi0", xi0}, {"gamma", gamma}, {"N", double(n)}, {"peak", o.peak},
                {"second_phase_offset", -gc - pi / 2}};
    b.schedule.notes["N"] = std::to_string(n);
    return finish(std::move(b), o);
}

// ---------------------------------------------------------------- time-optimal

// axis: "x", "y", "-x", "-y". Realizes exp(-i theta/2 n.sigma) up to phase.
inline SchemeBundle toc(double theta, const std::string& axis, const BuildOptions& o = {}) {
    detail::check_peak(o.peak);
    // rounded inputs such as 3.1416 are accepted as pi
    if (!(theta > 1e-6 && theta <= pi + 1e-4)) throw ValidationError("TOC angle must lie in (0, pi]");
    theta = std::min(theta, pi);
    double phi0;
    Vec3 n;
    if (axis == "x") phi0 = -pi / 2, n = Vec3::UnitX();
    else if (axis == "y") phi0 = 0.0, n = Vec3::UnitY();
    else if (axis == "-x") phi0 = pi / 2, n = -Vec3::UnitX();
    else if (axis == "-y") phi0 = pi, n = -Vec3::UnitY();
    else throw ValidationError("TOC axis must be x, y, -x or -y");
    double c0 = 1.0 / std::tan(theta / 2);
    double area = pi / std::sqrt(1 + c0 * c0);
    Segment s;
    s.label = "toc";
    s.duration = 2 * area / o.peak;
    s.omega = SinSquared{o.peak, 1.0};
    // the rotating-frame angle fixes the area; phi2(tau) = -pi then fixes a constant detuning
    double delta = (c0 * area + pi) / s.duration;
    s.delta = Constant{delta};
    s.phase = Phase::integral_law({phi0, c0, -1.0, 0.0}, s.omega, s.delta, s.duration);
    SchemeBundle b;
    b.scheme = "toc";
    b.schedule = detail::make_schedule({s}, b.scheme);
    b.expected_unitary = rotation(n, theta);
    b.chi0 = theta / 2;
    b.xi0 = phi0 + pi;
    b.claims.unconventional = true;
    b.params = {{"theta", theta}, {"phi0", phi0}, {"C0", c0}, {"area", area}, {"delta", delta}, {"peak", o.peak}};
    return finish(std::move(b), o);
}

// Rz(theta) = Rx(pi/2) Ry(theta) R-x(pi/2); the T gate is Rz(pi/4).
inline SchemeBundle toc_z(double theta, const BuildOptions& o = {}) {
    auto b = sequence("toc", {toc(pi / 2, "-x", o), toc(theta, "y", o), toc(pi / 2, "x", o)}, o);
    b.params["theta_z"] = theta;
    return b;
}

// ---------------------------------------------------------------- half orange

inline SchemeBundle half_orange(double chi0, double xi0, double gamma, double delta_mag = 0.0,
                                const BuildOptions& o = {}) {
    detail::check_peak(o.peak);
    if (!(chi0 >= 0 && chi0 <= pi / 2)) throw OutOfRangeError("half-orange chi0 must lie in [0, pi/2]");
    double dm = delta_mag > 0 ? delta_mag : o.peak;
    std::vector<Segment> v;
    detail::push_area(v, pi / 2 - chi0, xi0 + pi / 2, o, "down");
    if (std::abs(gamma) > 1e-14) {
        Segment s;
        s.label = "latitude";
        s.duration = std::abs(gamma) / dm;
        s.omega = Constant{0.0};
        s.delta = Constant{gamma > 0 ? dm : -dm};
        s.phase = Constant{xi0 - gamma - pi / 2};
        v.push_back(s);
    }
    detail::push_area(v, pi / 2, xi0 - gamma - pi / 2, o, "up");
    detail::push_area(v, chi0, xi0 + pi / 2, o, "back");
    SchemeBundle b;
    b.scheme = "half-orange";
    b.schedule = detail::make_schedule(std::move(v), b.scheme);
    b.expected_unitary = pauli_axis_unitary(bloch_axis(chi0, xi0), gamma / 2);
    b.chi0 = chi0;
    b.xi0 = xi0;
    b.claims.zero_dynamical = true;
    b.claims.pointwise_parallel = true;
    b.claims.geometric = gamma / 2;
    b.params = {{"chi0", chi0}, {"xi0", xi0}, {"gamma", gamma}, {"delta", dm}, {"peak", o.peak}};
    return finish(std::move(b), o);
}

// ---------------------------------------------------------------- triangular

inline SchemeBundle triangular(double chi0, double xi0, double lambda, double Lambda, const BuildOptions& o = {}) {
    detail::check_peak(o.peak);
    if (!(Lambda > 0 && Lambda <= pi)) throw OutOfRangeError("Lambda must lie in (0, pi]");
    if (std::abs(Lambda - pi / 2) < 1e-12) throw ValidationError("Lambda = pi/2 is excluded");
    if (!(chi0 >= 0 && chi0 <= pi)) throw OutOfRangeError("chi0 must lie in [0, pi]");
    std::vector<Segment> v;
    detail::push_area(v, chi0, xi0 - pi / 2, o, "to-pole");
    detail::push_area(v, Lambda, xi0 + lambda + pi / 2, o, "from-pole");
    double sl = std::sin(Lambda), cl = std::cos(Lambda);
    double a3 = std::abs(lambda * sl * cl);
    if (a3 > 1e-14 && Lambda < pi) {
        // latitude leg: phi = xi + pi if -lambda sin cos > 0, else phi = xi
        double sg = (-lambda * sl * cl > 0) ? 1.0 : -1.0;
        Segment s;
        s.label = "latitude";
        s.duration = o.shape == PulseShape::SinSquared ? 2 * a3 / o.peak : a3 / o.peak;
        s.omega = o.shape == PulseShape::SinSquared ? Waveform(SinSquared{o.peak, 1.0}) : Waveform(Constant{o.peak});
        double delta = lambda * sl * sl / s.duration;
        s.delta = Constant{delta};
        s.phase = Phase::integral_law({xi0 + lambda + (sg > 0 ? pi : 0.0), sg * cl / sl, 0.0, -delta}, s.omega,
                                      s.delta, s.duration);
        v.push_back(s);
    }
    if (Lambda > chi0) detail::push_area(v, Lambda - chi0, xi0 - pi / 2, o, "return");
    else detail::push_area(v, chi0 - Lambda, xi0 + pi / 2, o, "return");
    double gg = lambda * (1 - cl) / 2;
    SchemeBundle b;
    b.scheme = "triangular";
    b.schedule = detail::make_schedule(std::move(v), b.scheme);
    b.expected_unitary = pauli_axis_unitary(bloch_axis(chi0, xi0), gg);
    b.chi0 = chi0;
    b.xi0 = xi0;
    b.claims.zero_dynamical = true;
    b.claims.geometric = gg;
    b.params = {{"chi0", chi0}, {"xi0", xi0}, {"lambda", lambda}, {"Lambda", Lambda}, {"peak", o.peak}};
    return finish(std::move(b), o);
}

// ---------------------------------------------------------------- circular

enum class CircularGate { Hadamard, Phase };

struct CircularSpec {
    CircularGate kind = CircularGate::Hadamard;
    double gamma_g = -pi / 4;  // phase-type only
    std::vector<double> coefficients;
};

namespace detail {

inline double circular_C(double g) {
    double r = -2 * pi * g - g * g;
    if (!(r >= 0) || std::abs(pi + g) < 1e-12) throw CurveDomainError("phase-type circle undefined for this gamma_g");
    return std::sqrt(r) / (pi + g);
}

// Sampled single-segment path on tau = 1.
inline BlochPath circular_path(const CircularSpec& c, std::size_t intervals) {
    PathSegment ps;
    ps.duration = 1.0;
    double cc = c.kind == CircularGate::Phase ? circular_C(c.gamma_g) : 0.0;
    double s12 = std::sin(pi / 12), c12 = std::cos(pi / 12);
    for (std::size_t i = 0; i <= intervals; ++i) {
        double t = static_cast<double>(i) / static_cast<double>(intervals), x = std::sin(pi * t / 2);
        double xi = c.kind == CircularGate::Hadamard ? 2 * pi * x * x : pi / 2 + pi * x * x;
        for (std::size_t k = 0; k < c.coefficients.size(); ++k)
            xi += c.coefficients[k] * std::sin(static_cast<double>(k + 1) * pi * t);
        double chi;
        if (c.kind == CircularGate::Hadamard) {
            auto f = [&](double q) { return 2 * s12 * std::sin(q) * std::cos(xi) - 2 * c12 * std::cos(q) + 1; };
            try {
                chi = bisect(f, 0.0, pi / 2);
            } catch (const ConvergenceError&) {
                throw CurveDomainError("Hadamard circle has no root at xi = " + std::to_string(xi));
            }
        } else {
            double rhs = cc * std::sin(xi - pi / 2);
            if (rhs < -1e-12) throw CurveDomainError("xi left [pi/2, 3pi/2] on the phase-type circle");
            rhs = std::max(rhs, 0.0);
            chi = bisect([&](double q) { return std::tan(q / 2) - rhs; }, 0.0, pi - 1e-9);
        }
        ps.t.push_back(t);
        ps.chi.push_back(chi);
        ps.xi.push_back(xi);
        ps.f1.push_back(0.0);
        ps.f2.push_back(0.0);
    }
    BlochPath p;
    p.segments.push_back(std::move(ps));
    return p;
}

// Normalized duration (peak |Omega| at tau = 1) for the ansatz.
inline double circular_duration(const CircularSpec& c, std::size_t intervals) {
    auto sched = drive_from_path(circular_path(c, intervals));
    return sched.peak_omega();
}

}  // namespace detail

inline SchemeBundle circular(const CircularSpec& c, const BuildOptions& o = {}) {
    detail::check_peak(o.peak);
    for (double a : c.coefficients)
        if (!std::isfinite(a)) throw ValidationError("circular coefficients must be finite");
    BlochPath p = detail::circular_path(c, 16384);
    PulseSchedule unit = drive_from_path(p);
    double tau = unit.peak_omega() / o.peak;
    SchemeBundle b;
    b.scheme = "circular";
    b.schedule = stretched(unit, tau);
    b.schedule.declared_area = schedule_area(b.schedule);
    b.chi0 = p.chi_start();
    b.xi0 = p.xi_start();
    double gg = c.kind == CircularGate::Hadamard ? -pi / 2 : c.gamma_g;
    b.expected_unitary = pauli_axis_unitary(bloch_axis(b.chi0, b.xi0), gg);
    b.claims.zero_dynamical = true;
    b.claims.geometric = gg;
    b.params = {{"gamma_g", gg}, {"tau", tau}, {"peak", o.peak}, {"harmonics", double(c.coefficients.size())}};
    for (std::size_t k = 0; k < c.coefficients.size(); ++k) b.params["a" + std::to_string(k + 1)] = c.coefficients[k];
    return finish(std::move(b), o);
}

// Search the Fourier coefficients for the shortest gate at fixed peak amplitude.
inline CircularSpec optimize_circular(CircularSpec c, int harmonics, int max_iter = 300) {
    if (harmonics < 0 || harmonics > 4) throw ValidationError("harmonic count must lie in [0, 4]");
    auto cost = [&](const std::vector<double>& a) {
        CircularSpec q = c;
        q.coefficients = a;
        try {
            return detail::circular_duration(q, 1024);
        } catch (const Error&) {
            return 1e6;
        }
    };
    std::vector<double> x0(static_cast<std::size_t>(harmonics), 0.0);
    auto r = nelder_mead(cost, x0, 0.1, max_iter, 1e-9);
    c.coefficients = r.x;
    return c;
}

// ---------------------------------------------------------------- non-cyclic

namespace detail {

// Latitude evolution at chi for xi_minus, starting at azimuth xi0.
inline SchemeBundle latitude_gate(double chi, double xi0, double xi_minus, const BuildOptions& o) {
    check_peak(o.peak);
    if (!(chi > 0 && chi < pi / 2)) throw OutOfRangeError("non-cyclic latitude must lie in (0, pi/2)");
    double area = xi_minus * std::sin(2 * chi);
    if (!(area > 0)) throw ValidationError("non-cyclic pulse area must be positive");
    Segment s;
    s.label = "latitude";
    s.duration = 2 * area / o.peak;
    s.omega = SinSquared{o.peak, 1.0};
    double delta = -std::tan(chi) * area / s.duration;
    s.delta = Constant{delta};
    s.phase = Phase::integral_law({xi0 + pi, 1.0 / std::tan(chi), 0.0, -delta}, s.omega, s.delta, s.duration);
    SchemeBundle b;
    b.scheme = "noncyclic";
    b.schedule = make_schedule({s}, b.scheme);
    // zero dynamical phase: Psi1 gains gamma = -xi_minus (1 - cos chi), Psi2 the opposite
    double g = -xi_minus * (1 - std::cos(chi)), xe = xi0 + 2 * xi_minus;
    b.expected_unitary = psi1_state(chi, xe, g) * psi1_state(chi, xi0).adjoint() +
                         psi2_state(chi, xe, -g) * psi2_state(chi, xi0).adjoint();
    b.chi0 = chi;
    b.xi0 = xi0;
    b.claims.zero_dynamical = true;
    b.claims.geometric = g;
    b.params = {{"chi", chi}, {"xi0", xi0}, {"xi_minus", xi_minus}, {"gamma_prime", xi_minus * std::cos(chi)},
                {"delta", delta}, {"peak", o.peak}};
    return b;
}

}  // namespace detail

enum class NoncyclicKind { Rx, Ry, Rz, HadamardLike };

inline SchemeBundle noncyclic(NoncyclicKind kind, double theta, const BuildOptions& o = {}) {
    SchemeBundle b;
    switch (kind) {
        case NoncyclicKind::Rx:
        case NoncyclicKind::Ry: {
            if (!(theta > 0 && theta < pi)) throw OutOfRangeError("non-cyclic rotation angle must lie in (0, pi)");
            double chi = theta / 2;
            b = detail::latitude_gate(chi, kind == NoncyclicKind::Rx ? pi / 2 : pi, (pi / 2) / std::cos(chi), o);
            break;
        }
        case NoncyclicKind::HadamardLike:
            b = detail::latitude_gate(pi / 4, 0.0, (pi / 2) / std::cos(pi / 4), o);
            break;
        case NoncyclicKind::Rz: {
            double r = std::fmod(theta / 2, pi);
            if (r < 0) r += pi;
            double xm = r < 1e-9 ? 2 * pi : pi + r;
            b = detail::latitude_gate(std::acos(pi / xm), 0.0, xm, o);
            break;
        }
    }
    b.params["theta"] = theta;
    b.params["kind"] = static_cast<double>(kind);
    return finish(std::move(b), o);
}

// H = Rz(-sqrt(2) pi) times the Hadamard-like gate, up to phase.
inline SchemeBundle noncyclic_hadamard(const BuildOptions& o = {}) {
    return sequence("noncyclic",
                    {noncyclic(NoncyclicKind::HadamardLike, 0.0, o), noncyclic(NoncyclicKind::Rz, -std::sqrt(2.0) * pi, o)},
                    o);
}

// ---------------------------------------------------------------- shortcut (OCT)

namespace detail {

// One OCT segment on [ta, tb] of tau = 1 with chi(t), chi'(t) and xi = K - (4 eta/3) sin^3 chi.
template <class Chi, class ChiDot>
Segment oct_segment(double ta, double tb, Chi chi, ChiDot chid, double k, double eta, double sgn, std::size_t n) {
    Segment s;
    s.duration = tb - ta;
    std::vector<double> om(n + 1), ph(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        double t = ta + s.duration * static_cast<double>(i) / static_cast<double>(n);
        double c = chi(t), cd_ = chid(t), sc = std::sin(c);
        double s3 = sc * sc * sc, xi = k - 4 * eta / 3 * s3;
        om[i] = std::abs(cd_) * std::sqrt(1 + 16 * eta * eta * s3 * s3);
        // zero-detuning inversion: Omega sin(phi - xi) = chi', Omega cos(phi - xi) = 4 eta sin^3 chi chi'
        ph[i] = xi + std::atan2(sgn, 4 * eta * s3 * sgn);
    }
    for (std::size_t i = 1; i <= n; ++i) ph[i] = unwrap_near(ph[i], ph[i - 1]);
    s.omega = Tabulated{om};
    s.delta = Constant{0.0};
    s.phase = Waveform(Tabulated{ph});
    return s;
}

}  // namespace detail

// Shortcut gate exp(i gamma n.sigma) with n = z or x; eta = 1 cancels the
// second-order amplitude-error term for the z gate.
inline SchemeBundle oct(char axis, double gamma, double eta, const BuildOptions& o = {}) {
    detail::check_peak(o.peak);
    if (!(eta >= 0)) throw ValidationError("eta must be non-negative");
    if (!(gamma > -pi - 1e-12 && gamma <= pi + 1e-12)) throw OutOfRangeError("gamma must lie in (-pi, pi]");
    const std::size_t n = 16384;
    std::vector<Segment> v;
    double e43 = 4 * eta / 3;
    SchemeBundle b;
    if (axis == 'z') {
        auto chi = [](double t) { return pi * std::pow(std::sin(pi * t), 2); };
        auto chid = [](double t) { return pi * pi * std::sin(2 * pi * t); };
        v.push_back(detail::oct_segment(0.0, 0.5, chi, chid, 0.0, eta, 1.0, n));
        v.push_back(detail::oct_segment(0.5, 1.0, chi, chid, -gamma, eta, -1.0, n));
        b.chi0 = 0.0;
        b.xi0 = 0.0;
        b.expected_unitary = pauli_axis_unitary(Vec3::UnitZ(), gamma);
    } else if (axis == 'x') {
        auto up = [](double t) { return pi / 2 * (1 + std::pow(std::sin(2 * pi * t), 2)); };
        auto dn = [](double t) { return pi / 2 * (1 - std::pow(std::sin(2 * pi * t), 2)); };
        auto upd = [](double t) { return pi * pi * std::sin(4 * pi * t); };
        auto dnd = [](double t) { return -pi * pi * std::sin(4 * pi * t); };
        v.push_back(detail::oct_segment(0.0, 0.25, up, upd, e43, eta, 1.0, n));
        v.push_back(detail::oct_segment(0.25, 0.5, up, upd, e43 - gamma, eta, -1.0, n));
        v.push_back(detail::oct_segment(0.5, 0.75, dn, dnd, e43 - gamma, eta, -1.0, n));
        v.push_back(detail::oct_segment(0.75, 1.0, dn, dnd, e43, eta, 1.0, n));
        b.chi0 = pi / 2;
        b.xi0 = 0.0;
        b.expected_unitary = pauli_axis_unitary(Vec3::UnitX(), gamma);
    } else {
        throw ValidationError("OCT axis must be 'z' or 'x'");
    }
    PulseSchedule unit = detail::make_schedule(std::move(v), "oct");
    double tau = unit.peak_omega() / o.peak;
    b.scheme = "oct";
    b.schedule = stretched(unit, tau);
    b.schedule.declared_area = schedule_area(b.schedule);
    b.claims.zero_dynamical = true;
    b.claims.geometric = gamma;
    b.params = {{"gamma", gamma}, {"eta", eta}, {"tau", tau}, {"peak", o.peak}, {"axis", axis == 'z' ? 3.0 : 1.0}};
    return finish(std::move(b), o);
}

// ---------------------------------------------------------------- dynamical correction

inline SchemeBundle dyn_corrected(double chi0, double xi0, double gamma, const BuildOptions& o = {}) {
    detail::check_peak(o.peak);
    if (!(chi0 >= 0 && chi0 <= pi)) throw OutOfRangeError("chi0 must lie in [0, pi]");
    if (!(gamma > -pi - 1e-12 && gamma <= pi + 1e-12)) throw OutOfRangeError("gamma must lie in (-pi, pi]");
    std::vector<Segment> v;
    PhaseClaims claims;
    auto corr = [&](double rot, double halfchi, double phase, double expect) {
        // rotation angle `rot` about the state's own axis at polar angle halfchi
        double sh = std::sin(halfchi), ch = std::cos(halfchi);
        double area = rot * sh;
        if (area <= 1e-14) return;
        Segment s = detail::area_segment(area, phase, o.peak, o.shape, "correction");
        double cot = ch / sh;
        s.delta = s.omega.scaled(-cot);
        v.push_back(s);
        claims.segment_dynamical.push_back({v.size() - 1, expect});
    };
    detail::push_area(v, chi0 / 2, xi0 - pi / 2, o, "up");
    corr(chi0, chi0 / 2, xi0 - 2 * pi, -chi0 / 2);
    detail::push_area(v, chi0 / 2, xi0 - pi / 2, o, "up");
    detail::push_area(v, pi / 2, xi0 + gamma + pi / 2, o, "across");
    corr(pi, pi / 2, xi0 + gamma + pi, pi / 2);
    detail::push_area(v, pi / 2, xi0 + gamma + pi / 2, o, "across");
    detail::push_area(v, (pi - chi0) / 2, xi0 - pi / 2, o, "back");
    corr(pi - chi0, (pi + chi0) / 2, xi0 - 2 * pi, -(pi - chi0) / 2);
    detail::push_area(v, (pi - chi0) / 2, xi0 - pi / 2, o, "back");
    SchemeBundle b;
    b.scheme = "dyn-corrected";
    b.schedule = detail::make_schedule(std::move(v), b.scheme);
    b.expected_unitary = pauli_axis_unitary(bloch_axis(chi0, xi0), gamma);
    b.chi0 = chi0;
    b.xi0 = xi0;
    claims.zero_dynamical = true;
    claims.geometric = gamma;
    b.claims = claims;
    b.params = {{"chi0", chi0}, {"xi0", xi0}, {"gamma", gamma}, {"peak", o.peak}};
    return finish(std::move(b), o);
}

// ---------------------------------------------------------------- DD logical qubit

inline ComplexMatrix logical_isometry() {
    ComplexVector plus(2), minus(2);
    plus << 1, 1;
    minus << 1, -1;
    plus /= std::sqrt(2.0);
    minus /= std::sqrt(2.0);
    auto k3 = [](const ComplexVector& a, const ComplexVector& b, const ComplexVector& c) {
        return ComplexVector(kron(kron(a, b), c));
    };
    ComplexMatrix w(8, 2);
    w.col(0) = k3(plus, plus, plus);
    w.col(1) = k3(minus, minus, plus);
    return w;
}

inline SchemeBundle dd_logical(double theta, double phi, int reps = 2, const BuildOptions& o = {}) {
    detail::check_peak(o.peak);
    if (reps < 1) throw ValidationError("decoupling repetitions must be at least 1");
    ComplexMatrix xx = embed(pauli_x(), 0, 3) * embed(pauli_x(), 2, 3);
    ComplexMatrix yy = embed(pauli_y(), 0, 3) * embed(pauli_y(), 1, 3);
    double tp = theta - phi / 2;
    ComplexMatrix g1 = std::sin(theta) * xx + std::cos(theta) * yy;
    ComplexMatrix g2 = -(std::sin(tp) * xx + std::cos(tp) * yy);
    std::vector<ComplexMatrix> dd{ComplexMatrix::Identity(8, 8), kron(kron(pauli_x(), pauli_x()), pauli_x()),
                                  kron(kron(pauli_y(), pauli_y()), pauli_y()), kron(kron(pauli_z(), pauli_z()), pauli_z())};
    PulseSchedule s;
    s.dim = 8;
    const double areas[3] = {pi / 4, pi / 2, pi / 4};
    for (int k = 0; k < 3; ++k) {
        Segment seg;
        seg.label = "coupling";
        seg.duration = 2 * areas[k] / o.peak;
        seg.omega = SinSquared{o.peak, 1.0};
        seg.generator = k == 1 ? g2 : g1;
        if (std::abs(seg.omega.integral(seg.duration) - areas[k]) > 1e-9)
            throw ValidationError("coupling area mismatch");
        s.segments.push_back(seg);
        for (int j = 0; j < 4 * reps; ++j)
            s.pulses.push_back({static_cast<std::size_t>(k), (j + 1) * seg.duration / (4.0 * reps), dd[j % 4]});
    }
    s.declared_area = pi;
    s.scheme = "dd-logical";
    SchemeBundle b;
    b.scheme = "dd-logical";
    b.schedule = s;
    Vec3 n(std::sin(theta), 0.0, std::cos(theta));
    b.expected_unitary = pauli_axis_unitary(n, -phi / 2);
    b.isometry = logical_isometry();
    b.params = {{"theta", theta}, {"phi", phi}, {"reps", double(reps)}, {"peak", o.peak}};
    return finish(std::move(b), o);
}

// ---------------------------------------------------------------- reference robust NOT

// Constant-drive NOT whose error curve closes: 7pi/3 (phase 0), 5pi/3 (phase pi), pi/3 (phase 0).
inline SchemeBundle dog_reference(const BuildOptions& o = {}) {
    detail::check_peak(o.peak);
    std::vector<Segment> v{detail::area_segment(7 * pi / 3, 0.0, o.peak, PulseShape::Constant, "circle"),
                           detail::area_segment(5 * pi / 3, pi, o.peak, PulseShape::Constant, "reverse"),
                           detail::area_segment(pi / 3, 0.0, o.peak, PulseShape::Constant, "finish")};
    SchemeBundle b;
    b.scheme = "dog-reference";
    b.schedule = detail::make_schedule(std::move(v), b.scheme);
    b.expected_unitary = gate_matrix("NOT");
    b.params = {{"peak", o.peak}};
    return finish(std::move(b), o);
}

}  // namespace geomgate
