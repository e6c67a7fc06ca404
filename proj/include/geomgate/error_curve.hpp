#pragma once

#include "geomgate/path.hpp"

namespace geomgate {

// r(t) = Pauli coefficients of A(t) = int_0^t U^dag sigma_z U; first-order response to sigma_z noise.
struct CurveSegment {
    double t0 = 0.0, duration = 0.0;
    std::vector<double> t;
    std::vector<Vec3> r, rdot;
};

struct ErrorCurve {
    std::vector<CurveSegment> segments;
    Vec3 end() const { return segments.back().r.back(); }
    double closure_defect() const { return end().norm(); }
    std::vector<double> arc_speed() const {
        std::vector<double> out;
        for (const auto& s : segments)
            for (const auto& v : s.rdot) out.push_back(v.norm());
        return out;
    }
};

inline ErrorCurve error_curve(const PulseSchedule& sched) {
    if (sched.dim != 2) throw ValidationError("error curves are defined for dim-2 schedules");
    auto [g, sub] = grid_plan(sched);
    auto grid = unitary_grid(sched, g, sub);
    ErrorCurve c;
    Vec3 r = Vec3::Zero();
    auto starts = sched.segment_starts();
    Mat2 z = pauli_z();
    for (std::size_t si = 0; si < grid.size(); ++si) {
        CurveSegment cs;
        cs.t0 = starts[si];
        cs.duration = sched.segments[si].duration;
        double h = cs.duration / static_cast<double>(g);
        for (std::size_t i = 0; i <= g; ++i) {
            Mat2 u = grid[si][i];
            auto k = pauli_coefficients(Mat2(u.adjoint() * z * u));
            cs.rdot.emplace_back(k[1].real(), k[2].real(), k[3].real());
            cs.t.push_back(cs.t0 + h * static_cast<double>(i));
        }
        // cumulative Simpson: pairs of intervals, with a 3-point partial rule at odd nodes
        cs.r.push_back(r);
        for (std::size_t i = 1; i <= g; ++i) {
            Vec3 inc;
            if (i % 2 == 0) {
                inc = (cs.rdot[i - 2] + 4 * cs.rdot[i - 1] + cs.rdot[i]) * (h / 3) -
                      (5 * cs.rdot[i - 2] + 8 * cs.rdot[i - 1] - cs.rdot[i]) * (h / 12);
            } else {
                std::size_t j = i + 1 <= g ? i + 1 : i - 2;
                inc = i + 1 <= g ? Vec3((5 * cs.rdot[i - 1] + 8 * cs.rdot[i] - cs.rdot[j]) * (h / 12))
                                 : Vec3((5 * cs.rdot[i] + 8 * cs.rdot[i - 1] - cs.rdot[j]) * (h / 12));
            }
            r += inc;
            cs.r.push_back(r);
        }
        c.segments.push_back(std::move(cs));
    }
    return c;
}

struct FrenetProfile {
    std::vector<double> t, kappa, torsion;  // torsion is NaN where kappa is too small
};

namespace detail {

inline std::vector<Vec3> derivative3(const std::vector<Vec3>& y, double h) {
    std::vector<double> a(y.size()), b(y.size()), c(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) a[i] = y[i].x(), b[i] = y[i].y(), c[i] = y[i].z();
    auto da = derivative(a, h), db = derivative(b, h), dc = derivative(c, h);
    std::vector<Vec3> out(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) out[i] = Vec3(da[i], db[i], dc[i]);
    return out;
}

inline std::vector<Vec3> second_derivative3(const std::vector<Vec3>& f, double h) {
    std::size_t n = f.size();
    if (n < 6) throw ValidationError("curve segment too short for second differences");
    std::vector<Vec3> d(n);
    double q = 12 * h * h;
    for (std::size_t i = 2; i + 2 < n; ++i) d[i] = (-f[i - 2] + 16 * f[i - 1] - 30 * f[i] + 16 * f[i + 1] - f[i + 2]) / q;
    d[0] = (45 * f[0] - 154 * f[1] + 214 * f[2] - 156 * f[3] + 61 * f[4] - 10 * f[5]) / q;
    d[1] = (10 * f[0] - 15 * f[1] - 4 * f[2] + 14 * f[3] - 6 * f[4] + f[5]) / q;
    d[n - 1] = (45 * f[n - 1] - 154 * f[n - 2] + 214 * f[n - 3] - 156 * f[n - 4] + 61 * f[n - 5] - 10 * f[n - 6]) / q;
    d[n - 2] = (10 * f[n - 1] - 15 * f[n - 2] - 4 * f[n - 3] + 14 * f[n - 4] - 6 * f[n - 5] + f[n - 6]) / q;
    return d;
}

}  // namespace detail

// Curvature |r''| and torsion ((r' x r'') . r''')/|r' x r''|^2, from the sampled r'.
inline FrenetProfile frenet_profile(const ErrorCurve& c, double kappa_floor = 1e-8) {
    FrenetProfile p;
    for (const auto& s : c.segments) {
        double h = s.duration / static_cast<double>(s.t.size() - 1);
        auto r2 = detail::derivative3(s.rdot, h);
        auto r3 = detail::second_derivative3(s.rdot, h);
        std::size_t run = 0, run_start = 0;
        for (std::size_t i = 0; i < s.t.size(); ++i) {
            double k = r2[i].norm();
            Vec3 b = s.rdot[i].cross(r2[i]);
            double tor = std::numeric_limits<double>::quiet_NaN();
            if (k < kappa_floor) {
                if (run++ == 0) run_start = i;
                if (run >= 4)
                    throw DegenerateError("curvature vanishes on [" + std::to_string(s.t[run_start]) + ", " +
                                          std::to_string(s.t[i]) + "]; torsion undefined");
            } else {
                run = 0;
                tor = b.dot(r3[i]) / b.squaredNorm();
            }
            p.t.push_back(s.t[i]);
            p.kappa.push_back(k);
            p.torsion.push_back(tor);
        }
    }
    return p;
}

inline ComplexMatrix with_sigma_z(const PulseSchedule& s, double dz) {
    ComplexMatrix st = s.static_term ? *s.static_term : ComplexMatrix::Zero(2, 2);
    return st + dz * ComplexMatrix(pauli_z());
}

struct RobustnessReport {
    bool closed = false;
    double closure_defect = 0.0;
    double exponent = 0.0;  // slope of log(1 - F) against log(delta)
    std::vector<double> deltas, infidelities;
};

// Closure test plus the infidelity scaling under delta * Omega_m * sigma_z.
inline RobustnessReport first_order_robust(const PulseSchedule& sched, double tol = 1e-6, std::size_t steps = 4000) {
    RobustnessReport rep;
    rep.closure_defect = error_curve(sched).closure_defect();
    rep.closed = rep.closure_defect < tol;
    ComplexMatrix u0 = propagate_unitary(sched, steps, false).final_operator;
    double om = sched.peak_omega();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int k = 0; k < 5; ++k) {
        double d = std::pow(10.0, -3.0 + 0.25 * k);
        PulseSchedule noisy = sched;
        noisy.static_term = with_sigma_z(sched, d * om);
        ComplexMatrix u = propagate_unitary(noisy, steps, false).final_operator;
        double inf = std::max(unitary_infidelity(u, u0), 1e-300);
        rep.deltas.push_back(d);
        rep.infidelities.push_back(inf);
        double x = std::log(d), y = std::log(inf);
        sx += x, sy += y, sxx += x * x, sxy += x * y;
    }
    rep.exponent = (5 * sxy - sx * sy) / (5 * sxx - sx * sx);
    return rep;
}

}  // namespace geomgate
