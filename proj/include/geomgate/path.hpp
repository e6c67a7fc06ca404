#pragma once

#include "geomgate/propagator.hpp"

#include <limits>

namespace geomgate {

// Trajectory of Psi1 = e^{i f1}[cos(chi/2)|0> + sin(chi/2) e^{i xi}|1>] on a
// uniform grid per segment. xi is unwrapped; f2 is the phase of the orthogonal state.
struct PathSegment {
    double t0 = 0.0;
    double duration = 0.0;
    std::vector<double> t, chi, xi, f1, f2;
    std::size_t intervals() const { return t.size() - 1; }
};

struct BlochPath {
    std::vector<PathSegment> segments;

    const PathSegment& first() const { return segments.front(); }
    const PathSegment& last() const { return segments.back(); }
    double chi_start() const { return first().chi.front(); }
    double xi_start() const { return first().xi.front(); }
    double chi_end() const { return last().chi.back(); }
    double xi_end() const { return last().xi.back(); }
    double total_phase() const { return last().f1.back(); }
    Vec3 point(std::size_t seg, std::size_t i) const {
        return bloch_axis(segments[seg].chi[i], segments[seg].xi[i]);
    }
};

inline constexpr double kPoleTolerance = 1e-6;

namespace detail {

// 4th-order finite-difference derivative on a uniform grid.
inline std::vector<double> derivative(const std::vector<double>& y, double h) {
    std::size_t n = y.size();
    std::vector<double> d(n, 0.0);
    if (n < 5) {
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t a = i == 0 ? 0 : i - 1, b = i + 1 < n ? i + 1 : n - 1;
            d[i] = (y[b] - y[a]) / (h * static_cast<double>(b - a));
        }
        return d;
    }
    for (std::size_t i = 2; i + 2 < n; ++i) d[i] = (y[i - 2] - 8 * y[i - 1] + 8 * y[i + 1] - y[i + 2]) / (12 * h);
    auto fwd = [&](std::size_t i) {
        return (-25 * y[i] + 48 * y[i + 1] - 36 * y[i + 2] + 16 * y[i + 3] - 3 * y[i + 4]) / (12 * h);
    };
    auto bwd = [&](std::size_t i) {
        return (25 * y[i] - 48 * y[i - 1] + 36 * y[i - 2] - 16 * y[i - 3] + 3 * y[i - 4]) / (12 * h);
    };
    d[0] = fwd(0);
    d[1] = (-3 * y[0] - 10 * y[1] + 18 * y[2] - 6 * y[3] + y[4]) / (12 * h);
    d[n - 1] = bwd(n - 1);
    d[n - 2] = (3 * y[n - 1] + 10 * y[n - 2] - 18 * y[n - 3] + 6 * y[n - 4] - y[n - 5]) / (12 * h);
    return d;
}

inline double simpson_samples(const std::vector<double>& f, double h) {
    std::size_t n = f.size() - 1;
    if (n == 0) return 0.0;
    if (n % 2) {
        // odd interval count: Simpson on the first n-3, 3/8 rule on the last three
        if (n < 3) return 0.5 * h * (f[0] + f[1]);
        std::vector<double> head(f.begin(), f.end() - 3);
        double tail = 3 * h / 8 * (f[n - 3] + 3 * f[n - 2] + 3 * f[n - 1] + f[n]);
        return simpson_samples(head, h) + tail;
    }
    double acc = f[0] + f[n];
    for (std::size_t k = 1; k < n; ++k) acc += (k % 2 ? 4.0 : 2.0) * f[k];
    return acc * h / 3.0;
}

inline Vec3 bloch_vector(const ComplexVector& psi) {
    cd a = psi(0), b = psi(1);
    return {2 * (std::conj(a) * b).real(), 2 * (std::conj(a) * b).imag(), std::norm(a) - std::norm(b)};
}

inline Vec3 hamiltonian_vector(const ComplexMatrix& h, double& h0) {
    auto c = pauli_coefficients(Mat2(h));
    h0 = c[0].real();
    return {c[1].real(), c[2].real(), c[3].real()};
}

}  // namespace detail

inline ComplexVector psi1_state(double chi, double xi, double f1 = 0.0) {
    ComplexVector v(2);
    v << std::cos(chi / 2), std::sin(chi / 2) * std::exp(I1 * xi);
    return std::exp(I1 * f1) * v;
}

inline ComplexVector psi2_state(double chi, double xi, double f2 = 0.0) {
    ComplexVector v(2);
    v << std::sin(chi / 2) * std::exp(-I1 * xi), -std::cos(chi / 2);
    return std::exp(I1 * f2) * v;
}

// Path traced by the drive from (chi0, xi0), read off the propagated states.
inline BlochPath path_from_drive(const PulseSchedule& sched, double chi0, double xi0) {
    if (sched.dim != 2) throw ValidationError("paths are defined for dim-2 schedules");
    if (!(chi0 >= 0 && chi0 <= pi)) throw OutOfRangeError("chi0 must lie in [0, pi]");
    auto [g, sub] = grid_plan(sched);
    auto grid = unitary_grid(sched, g, sub);
    ComplexVector p1 = psi1_state(chi0, xi0), p2 = psi2_state(chi0, xi0);
    BlochPath path;
    auto starts = sched.segment_starts();
    double xi_prev = xi0, f1_prev = 0.0, f2_prev = 0.0;
    for (std::size_t si = 0; si < sched.segments.size(); ++si) {
        const auto& seg = sched.segments[si];
        PathSegment ps;
        ps.t0 = starts[si];
        ps.duration = seg.duration;
        double h = seg.duration / static_cast<double>(g);
        bool moving = !seg.omega.is_zero();
        for (std::size_t i = 0; i <= g; ++i) {
            double tl = h * static_cast<double>(i);
            ComplexVector a = grid[si][i] * p1, b = grid[si][i] * p2;
            Vec3 v = detail::bloch_vector(a);
            double rho = std::hypot(v.x(), v.y());
            double chi = std::atan2(rho, v.z());
            bool north = rho < kPoleTolerance && v.z() > 0, south = rho < kPoleTolerance && v.z() < 0;
            double xi;
            if (!north && !south) {
                xi = unwrap_near(std::atan2(v.y(), v.x()), xi_prev);
            } else if (moving && (i == 0 || i == g)) {
                double ph = seg.phase.value(tl, seg.duration);
                bool leaving = i == 0;
                xi = (north == leaving) ? ph - pi / 2 : ph + pi / 2;
            } else {
                xi = xi_prev;
            }
            // A xi jump at the south pole moves f1 by -dxi and f2 by +dxi.
            double dxi = xi - xi_prev;
            double ref1 = f1_prev, ref2 = f2_prev;
            if (south) {
                ref1 -= dxi;
                ref2 += dxi;
            }
            double c = std::cos(chi / 2), s = std::sin(chi / 2);
            double f1 = c >= s ? std::arg(a(0)) : std::arg(a(1)) - xi;
            double f2 = s >= c ? std::arg(b(0)) + xi : std::arg(-b(1));
            f1 = unwrap_near(f1, ref1);
            f2 = unwrap_near(f2, ref2);
            ps.t.push_back(ps.t0 + tl);
            ps.chi.push_back(chi);
            ps.xi.push_back(xi);
            ps.f1.push_back(f1);
            ps.f2.push_back(f2);
            xi_prev = xi;
            f1_prev = f1;
            f2_prev = f2;
        }
        path.segments.push_back(std::move(ps));
    }
    return path;
}

inline void check_path_matches(const BlochPath& path, const PulseSchedule& sched) {
    if (path.segments.size() != sched.segments.size())
        throw ValidationError("path and schedule have different segment counts");
    for (std::size_t i = 0; i < path.segments.size(); ++i)
        if (std::abs(path.segments[i].duration - sched.segments[i].duration) > 1e-9 * sched.segments[i].duration)
            throw ValidationError("path and schedule segment durations differ");
}

// -int <Psi1|H|Psi1> per segment. A second evaluation through
// (Delta + xi' sin^2 chi)/(2 cos chi) must agree to 1e-6, with the compensated
// form used near cos chi = 0.
inline std::vector<double> segment_dynamical_phases(const BlochPath& path, const PulseSchedule& sched) {
    check_path_matches(path, sched);
    std::vector<double> out;
    for (std::size_t si = 0; si < path.segments.size(); ++si) {
        const auto& ps = path.segments[si];
        const auto& seg = sched.segments[si];
        std::size_t n = ps.t.size();
        double h = ps.duration / static_cast<double>(n - 1);
        auto xid = detail::derivative(ps.xi, h);
        std::vector<double> ex(n), fm(n);
        for (std::size_t i = 0; i < n; ++i) {
            double h0;
            Vec3 hv = detail::hamiltonian_vector(segment_hamiltonian(seg, ps.t[i] - ps.t0, 2, sched.static_term), h0);
            Vec3 v = bloch_axis(ps.chi[i], ps.xi[i]);
            ex[i] = -(h0 + hv.dot(v));
            double c = std::cos(ps.chi[i]), s = std::sin(ps.chi[i]);
            double de = -2 * hv.z();
            fm[i] = std::abs(c) > 0.05 ? 0.5 * (de + xid[i] * s * s) / c - h0 : ex[i];
        }
        double a = detail::simpson_samples(ex, h), b = detail::simpson_samples(fm, h);
        if (std::abs(a - b) > 1e-6)
            throw InconsistencyError("dynamical phase forms disagree by " + std::to_string(std::abs(a - b)) +
                                     " on segment " + std::to_string(si));
        out.push_back(a);
    }
    return out;
}

inline double dynamical_phase(const BlochPath& path, const PulseSchedule& sched) {
    double acc = 0.0;
    for (double x : segment_dynamical_phases(path, sched)) acc += x;
    return acc;
}

// -1/2 int (1 - cos chi) d xi, Stieltjes sense: xi jumps at joins count with
// their (1 - cos chi) weight, so north-pole jumps vanish.
inline double geometric_phase(const BlochPath& path) {
    // Trapezoidal Stieltjes sums on h and 2h, Richardson-combined. Summing
    // g * dxi keeps angular noise near the poles from being amplified the way
    // a differentiated xi would be.
    auto stieltjes = [](const PathSegment& ps, std::size_t stride) {
        double acc = 0.0;
        for (std::size_t i = 0; i + stride < ps.t.size(); i += stride) {
            double g0 = 1 - std::cos(ps.chi[i]), g1 = 1 - std::cos(ps.chi[i + stride]);
            acc += 0.5 * (g0 + g1) * (ps.xi[i + stride] - ps.xi[i]);
        }
        return acc;
    };
    double acc = 0.0;
    for (std::size_t si = 0; si < path.segments.size(); ++si) {
        const auto& ps = path.segments[si];
        double fine = stieltjes(ps, 1);
        double val = ps.intervals() % 2 == 0 ? (4 * fine - stieltjes(ps, 2)) / 3 : fine;
        acc += -0.5 * val;
        if (si > 0) {
            const auto& prev = path.segments[si - 1];
            double dxi = ps.xi.front() - prev.xi.back();
            acc += -0.5 * (1 - std::cos(0.5 * (ps.chi.front() + prev.chi.back()))) * dxi;
        }
    }
    return acc;
}

// Signed excess of the spherical triangle (a, b, c).
inline double signed_excess(const Vec3& a, const Vec3& b, const Vec3& c) {
    return 2 * std::atan2(a.dot(b.cross(c)), 1 + a.dot(b) + b.dot(c) + c.dot(a));
}

inline bool path_closed(const BlochPath& path, double tol = kPoleTolerance) {
    Vec3 a = bloch_axis(path.chi_start(), path.xi_start()), b = bloch_axis(path.chi_end(), path.xi_end());
    return (a - b).norm() < tol;
}

// Apex for the triangle fan: the candidate direction whose antipode stays
// farthest from the path, so no fan triangle degenerates.
inline Vec3 fan_apex(const BlochPath& path) {
    std::vector<Vec3> pts;
    for (const auto& ps : path.segments)
        for (std::size_t i = 0; i < ps.t.size(); i += 8) pts.push_back(bloch_axis(ps.chi[i], ps.xi[i]));
    pts.push_back(bloch_axis(path.chi_end(), path.xi_end()));
    Vec3 best(0, 0, 1);
    double score = -1;
    for (int x = -1; x <= 1; ++x)
        for (int y = -1; y <= 1; ++y)
            for (int z = -1; z <= 1; ++z) {
                if (!x && !y && !z) continue;
                Vec3 a = Vec3(x, y, z).normalized();
                double m = 4;
                for (const auto& p : pts) m = std::min(m, (p + a).norm());
                if (m > score) score = m, best = a;
            }
    return best;
}

// -1/2 x (signed solid angle enclosed), from a fan of spherical triangles, with
// the endpoints joined by a geodesic when the path is open. Defined mod 2 pi.
inline double solid_angle_phase(const BlochPath& path) {
    Vec3 a = bloch_axis(path.chi_start(), path.xi_start()), b = bloch_axis(path.chi_end(), path.xi_end());
    if ((a + b).norm() < kPoleTolerance) throw AmbiguityError("path endpoints are antipodal");
    Vec3 apex = fan_apex(path);
    // chords cut the arcs at O(h^2): Richardson-combine the polygon with its every-other-node version
    auto polygon = [&](std::size_t stride) {
        double area = 0.0;
        Vec3 prev = a;
        for (const auto& ps : path.segments) {
            std::size_t n = ps.t.size() - 1, st = n % stride ? 1 : stride;
            for (std::size_t i = 0; i <= n; i += st) {
                Vec3 p = bloch_axis(ps.chi[i], ps.xi[i]);
                area += signed_excess(apex, prev, p);
                prev = p;
            }
        }
        return area + signed_excess(apex, b, a);
    };
    return -0.5 * (4 * polygon(1) - polygon(2)) / 3;
}

// -1/2 int (1 - cos chi) d xi along the geodesic from the path's end back to its start.
inline double geodesic_closure_phase(const BlochPath& path, std::size_t n = 4096) {
    Vec3 a = bloch_axis(path.chi_end(), path.xi_end()), b = bloch_axis(path.chi_start(), path.xi_start());
    if ((a + b).norm() < kPoleTolerance) throw AmbiguityError("path endpoints are antipodal");
    double ang = std::acos(std::clamp(a.dot(b), -1.0, 1.0));
    if (ang < 1e-12) return 0.0;
    std::vector<double> chi(n + 1), xi(n + 1);
    double xprev = path.xi_end();
    for (std::size_t i = 0; i <= n; ++i) {
        double u = static_cast<double>(i) / static_cast<double>(n);
        Vec3 p = (std::sin((1 - u) * ang) * a + std::sin(u * ang) * b) / std::sin(ang);
        double rho = std::hypot(p.x(), p.y());
        if (rho < kPoleTolerance && p.z() < 0) throw AmbiguityError("closing geodesic crosses the south pole");
        chi[i] = std::atan2(rho, p.z());
        xi[i] = rho < kPoleTolerance ? xprev : unwrap_near(std::atan2(p.y(), p.x()), xprev);
        xprev = xi[i];
    }
    auto xd = detail::derivative(xi, 1.0 / static_cast<double>(n));
    std::vector<double> f(n + 1);
    for (std::size_t i = 0; i <= n; ++i) f[i] = -0.5 * (1 - std::cos(chi[i])) * xd[i];
    return detail::simpson_samples(f, 1.0 / static_cast<double>(n));
}

struct PhaseBreakdown {
    double total = 0.0;
    double dynamical = 0.0;
    double geometric = 0.0;
    double solid_angle = 0.0;
    bool closed = false;
    std::vector<double> segment_dynamical;
};

inline PhaseBreakdown phase_breakdown(const BlochPath& path, const PulseSchedule& sched) {
    PhaseBreakdown p;
    p.total = path.total_phase();
    p.segment_dynamical = segment_dynamical_phases(path, sched);
    for (double x : p.segment_dynamical) p.dynamical += x;
    p.geometric = geometric_phase(path);
    p.closed = path_closed(path);
    try {
        p.solid_angle = solid_angle_phase(path);
    } catch (const AmbiguityError&) {
        p.solid_angle = std::numeric_limits<double>::quiet_NaN();
    }
    return p;
}

// Gate unitary rebuilt from the path endpoints: sum_k |Psi_k(tau)><Psi_k(0)|.
inline Mat2 unitary_from_path(const BlochPath& path) {
    const auto& a = path.first();
    const auto& b = path.last();
    ComplexVector p10 = psi1_state(a.chi.front(), a.xi.front(), a.f1.front());
    ComplexVector p20 = psi2_state(a.chi.front(), a.xi.front(), a.f2.front());
    ComplexVector p11 = psi1_state(b.chi.back(), b.xi.back(), b.f1.back());
    ComplexVector p21 = psi2_state(b.chi.back(), b.xi.back(), b.f2.back());
    return p11 * p10.adjoint() + p21 * p20.adjoint();
}

enum class InversionVariant { ZeroDynamical, ZeroDetuning };

// Drive that traces a sampled path. Omega is kept non-negative; phi absorbs the sign.
inline PulseSchedule drive_from_path(const BlochPath& path, InversionVariant variant = InversionVariant::ZeroDynamical) {
    PulseSchedule out;
    out.dim = 2;
    for (const auto& ps : path.segments) {
        std::size_t n = ps.t.size();
        if (n < 5) throw ValidationError("path segment needs at least five samples");
        double h = ps.duration / static_cast<double>(n - 1);
        auto cd_ = detail::derivative(ps.chi, h);
        auto xd = detail::derivative(ps.xi, h);
        std::vector<double> om(n), de(n), ph(n);
        std::vector<bool> valid(n, true);
        double omax = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double s = std::sin(ps.chi[i]), c = std::cos(ps.chi[i]);
            double q;  // Omega cos(phi - xi)
            if (variant == InversionVariant::ZeroDynamical) {
                de[i] = -xd[i] * s * s;
                q = -xd[i] * s * c;
            } else {
                if (std::abs(c) < 1e-9) throw SingularityError("zero-detuning inversion is singular at the equator");
                de[i] = 0.0;
                q = -xd[i] * s / c;
            }
            om[i] = std::hypot(cd_[i], q);
            omax = std::max(omax, om[i]);
            ph[i] = ps.xi[i] + std::atan2(cd_[i], q);
        }
        std::size_t run = 0;
        for (std::size_t i = 0; i < n; ++i) {
            valid[i] = om[i] > 1e-12 * std::max(omax, 1e-300);
            run = valid[i] ? 0 : run + 1;
            if (run >= 3) throw DegenerateError("path is stationary over an interval");
        }
        if (omax == 0.0) throw DegenerateError("path is stationary");
        // phi is arbitrary where Omega vanishes: take the nearest valid neighbour
        for (std::size_t i = 0; i < n; ++i)
            if (!valid[i]) {
                std::size_t j = i;
                while (j < n && !valid[j]) ++j;
                if (j == n) {
                    j = i;
                    while (!valid[j]) --j;
                }
                ph[i] = ph[j];
            }
        for (std::size_t i = 1; i < n; ++i) ph[i] = unwrap_near(ph[i], ph[i - 1]);
        Segment seg;
        seg.duration = ps.duration;
        seg.omega = Tabulated{om};
        seg.delta = Tabulated{de};
        seg.phase = Waveform(Tabulated{ph});
        out.segments.push_back(std::move(seg));
    }
    out.declared_area = schedule_area(out);
    return out;
}

}  // namespace geomgate
