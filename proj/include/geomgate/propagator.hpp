#pragma once

#include "geomgate/schedule.hpp"

#include <Eigen/Eigenvalues>

#include <functional>

namespace geomgate {

namespace detail {

// exp(-i K) for Hermitian K.
inline ComplexMatrix expm_herm(const ComplexMatrix& k) {
    if (k.rows() == 2) {
        Mat2 m = k;
        auto c = pauli_coefficients(m);
        Vec3 v(c[1].real(), c[2].real(), c[3].real());
        double a = v.norm();
        Mat2 out = std::cos(a) * Mat2::Identity();
        if (a > 0) {
            Vec3 n = v / a;
            out -= I1 * std::sin(a) * (n.x() * pauli_x() + n.y() * pauli_y() + n.z() * pauli_z());
        }
        return std::exp(-I1 * c[0].real()) * out;
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (k + k.adjoint()));
    ComplexVector ph = (-I1 * es.eigenvalues().cast<cd>()).array().exp();
    return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

// Fourth-order Magnus step over [t0, t0 + h] of one segment.
inline ComplexMatrix magnus_step(const Segment& s, double t0, double h, int dim,
                                 const std::optional<ComplexMatrix>& extra) {
    constexpr double c = 0.28867513459481287;  // sqrt(3)/6
    ComplexMatrix h1 = segment_hamiltonian(s, t0 + (0.5 - c) * h, dim, extra);
    ComplexMatrix h2 = segment_hamiltonian(s, t0 + (0.5 + c) * h, dim, extra);
    ComplexMatrix comm = h2 * h1 - h1 * h2;
    ComplexMatrix k = 0.5 * h * (h1 + h2) - I1 * (std::sqrt(3.0) / 12.0) * h * h * comm;
    return expm_herm(k);
}

// Steps for a segment: at least `requested`, rounded up to a multiple of any table.
inline std::size_t segment_steps(const Segment& s, std::size_t requested) {
    std::size_t m = std::max(s.omega.table_intervals(), std::max(s.delta.table_intervals(), s.phase.table_intervals()));
    if (m == 0) return requested;
    return ((requested + m - 1) / m) * m;
}

// Walk the schedule: `advance(segment, t0, h)` per step, `kick(U)` at interleaved pulses.
template <class Advance, class Kick>
void march(const PulseSchedule& sched, std::size_t steps, Advance&& advance, Kick&& kick) {
    auto pulses = sched.sorted_pulses();
    std::size_t pi_ = 0;
    for (std::size_t si = 0; si < sched.segments.size(); ++si) {
        const auto& seg = sched.segments[si];
        std::size_t n = segment_steps(seg, steps);
        std::vector<double> cuts{0.0};
        std::vector<const InterleavedPulse*> here;
        while (pi_ < pulses.size() && pulses[pi_].segment == si) {
            cuts.push_back(pulses[pi_].time);
            here.push_back(&pulses[pi_]);
            ++pi_;
        }
        cuts.push_back(seg.duration);
        for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
            double a = cuts[c], b = cuts[c + 1], len = b - a;
            if (len > 0) {
                std::size_t m = here.empty() ? n
                                             : std::max<std::size_t>(1, static_cast<std::size_t>(
                                                                            std::ceil(n * len / seg.duration)));
                double h = len / static_cast<double>(m);
                for (std::size_t k = 0; k < m; ++k) advance(seg, a + h * static_cast<double>(k), h);
            }
            if (c < here.size()) kick(here[c]->unitary);
        }
    }
}

inline ComplexMatrix unitary_only(const PulseSchedule& sched, std::size_t steps) {
    ComplexMatrix u = ComplexMatrix::Identity(sched.dim, sched.dim);
    march(
        sched, steps,
        [&](const Segment& s, double t0, double h) { u = magnus_step(s, t0, h, sched.dim, sched.static_term) * u; },
        [&](const ComplexMatrix& p) { u = p * u; });
    return u;
}

}  // namespace detail

struct PropagationResult {
    ComplexMatrix final_operator;
    std::size_t step_count = 0;
    double estimated_error = 0.0;
    bool convergence_warning = false;
};

// Time-ordered exponential of the schedule. The error estimate is the max-norm
// difference against a run with twice as many steps.
inline PropagationResult propagate_unitary(const PulseSchedule& sched, std::size_t steps = 10000,
                                           bool estimate = true) {
    sched.validate();
    if (steps < 64) throw ValidationError("at least 64 steps per segment are required");
    PropagationResult r;
    r.final_operator = detail::unitary_only(sched, steps);
    for (const auto& s : sched.segments) r.step_count += detail::segment_steps(s, steps);
    if (!r.final_operator.allFinite()) throw IntegrationError("propagation produced non-finite entries");
    if (estimate) {
        ComplexMatrix fine = detail::unitary_only(sched, 2 * steps);
        r.estimated_error = (fine - r.final_operator).cwiseAbs().maxCoeff();
        r.convergence_warning = r.estimated_error > 1e-6;
        r.final_operator = fine;
    }
    if (!is_unitary(r.final_operator, 1e-9)) throw IntegrationError("propagated operator lost unitarity");
    return r;
}

// Unitaries on a uniform grid of `intervals` per segment (intervals + 1 nodes each,
// shared endpoints duplicated). Each interval uses `substeps` Magnus steps.
inline std::vector<std::vector<ComplexMatrix>> unitary_grid(const PulseSchedule& sched, std::size_t intervals,
                                                            std::size_t substeps) {
    sched.validate();
    if (!sched.pulses.empty()) throw ValidationError("grid propagation does not support interleaved pulses");
    std::vector<std::vector<ComplexMatrix>> out;
    ComplexMatrix u = ComplexMatrix::Identity(sched.dim, sched.dim);
    for (const auto& seg : sched.segments) {
        std::vector<ComplexMatrix> nodes{u};
        double h = seg.duration / static_cast<double>(intervals * substeps);
        for (std::size_t i = 0; i < intervals; ++i) {
            for (std::size_t k = 0; k < substeps; ++k)
                u = detail::magnus_step(seg, h * static_cast<double>(i * substeps + k), h, sched.dim,
                                        sched.static_term) *
                    u;
            nodes.push_back(u);
        }
        out.push_back(std::move(nodes));
    }
    return out;
}

// Grid sizing shared by the path and error-curve modules: `base` intervals per
// segment, or a multiple of the table size, with steps landing on table nodes.
inline std::pair<std::size_t, std::size_t> grid_plan(const PulseSchedule& sched, std::size_t base = 4096,
                                                     std::size_t min_steps = 16384) {
    std::size_t m = 0;
    for (const auto& s : sched.segments)
        m = std::max({m, s.omega.table_intervals(), s.delta.table_intervals(), s.phase.table_intervals()});
    std::size_t g = base;
    if (m > 0) g = m >= base ? m : m * ((base + m - 1) / m);
    for (const auto& s : sched.segments) {
        std::size_t ms = std::max({s.omega.table_intervals(), s.delta.table_intervals(), s.phase.table_intervals()});
        if (ms > 0 && g % ms != 0) throw ValidationError("segments use incompatible table sizes");
    }
    std::size_t sub = std::max<std::size_t>(1, (min_steps + g - 1) / g);
    return {g, sub};
}

enum class ChannelKind { Lowering, Dephasing, QubitDephasing, QubitLowering };

struct LindbladChannel {
    ChannelKind kind = ChannelKind::Dephasing;
    double rate = 0.0;
    int qubit = 0;

    ComplexMatrix op(int dim) const {
        Mat2 lower;
        lower << 0, 1, 0, 0;
        switch (kind) {
            case ChannelKind::Lowering:
                if (dim != 2) throw ValidationError("lowering channel is defined for dim 2 only");
                return lower;
            case ChannelKind::Dephasing:
                if (dim != 2) throw ValidationError("dephasing channel is defined for dim 2 only");
                return pauli_z() / std::sqrt(2.0);
            case ChannelKind::QubitDephasing:
            case ChannelKind::QubitLowering: {
                int n = dim == 8 ? 3 : dim == 2 ? 1 : 0;
                if (n == 0 || qubit < 0 || qubit >= n) throw ValidationError("qubit channel index out of range");
                Mat2 base = kind == ChannelKind::QubitDephasing ? Mat2(pauli_z() / std::sqrt(2.0)) : lower;
                return embed(base, qubit, n);
            }
        }
        throw ValidationError("unknown channel");
    }
};

inline std::string channel_name(const LindbladChannel& c) {
    switch (c.kind) {
        case ChannelKind::Lowering: return "lowering";
        case ChannelKind::Dephasing: return "dephasing";
        case ChannelKind::QubitDephasing: return "dephasing-" + std::to_string(c.qubit);
        case ChannelKind::QubitLowering: return "lowering-" + std::to_string(c.qubit);
    }
    return "?";
}

namespace detail {

struct Dissipator {
    std::vector<ComplexMatrix> l, ldag;
    ComplexMatrix anti;  // sum rate/2 L^dag L
    std::vector<double> rate;
};

inline Dissipator make_dissipator(const std::vector<LindbladChannel>& ch, int dim) {
    Dissipator d;
    d.anti = ComplexMatrix::Zero(dim, dim);
    for (const auto& c : ch) {
        if (!(c.rate >= 0) || !std::isfinite(c.rate)) throw ValidationError("channel rate must be non-negative");
        ComplexMatrix l = c.op(dim);
        d.l.push_back(l);
        d.ldag.push_back(l.adjoint());
        d.rate.push_back(c.rate);
        d.anti += 0.5 * c.rate * l.adjoint() * l;
    }
    return d;
}

inline ComplexMatrix lindblad_rhs(const ComplexMatrix& h, const Dissipator& d, const ComplexMatrix& rho) {
    ComplexMatrix out = -I1 * (h * rho - rho * h) - d.anti * rho - rho * d.anti;
    for (std::size_t k = 0; k < d.l.size(); ++k) out += d.rate[k] * d.l[k] * rho * d.ldag[k];
    return out;
}

// RK4 evolution of several operators at once (no physicality checks).
inline void evolve_operators(const PulseSchedule& sched, std::vector<ComplexMatrix>& rhos,
                             const std::vector<LindbladChannel>& channels, std::size_t steps) {
    Dissipator d = make_dissipator(channels, sched.dim);
    march(
        sched, steps,
        [&](const Segment& s, double t0, double h) {
            ComplexMatrix h0 = segment_hamiltonian(s, t0, sched.dim, sched.static_term);
            ComplexMatrix hm = segment_hamiltonian(s, t0 + 0.5 * h, sched.dim, sched.static_term);
            ComplexMatrix h1 = segment_hamiltonian(s, t0 + h, sched.dim, sched.static_term);
            for (auto& r : rhos) {
                ComplexMatrix k1 = lindblad_rhs(h0, d, r);
                ComplexMatrix k2 = lindblad_rhs(hm, d, r + 0.5 * h * k1);
                ComplexMatrix k3 = lindblad_rhs(hm, d, r + 0.5 * h * k2);
                ComplexMatrix k4 = lindblad_rhs(h1, d, r + h * k3);
                r += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            }
        },
        [&](const ComplexMatrix& p) {
            for (auto& r : rhos) r = p * r * p.adjoint();
        });
}

inline double min_eigenvalue(const ComplexMatrix& m) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

}  // namespace detail

struct LindbladResult {
    ComplexMatrix rho;
    double trace_drift = 0.0;
    double min_eigenvalue = 0.0;
};

inline LindbladResult propagate_lindblad(const PulseSchedule& sched, const ComplexMatrix& rho0,
                                         const std::vector<LindbladChannel>& channels, std::size_t steps = 10000) {
    sched.validate();
    if (steps < 64) throw ValidationError("at least 64 steps per segment are required");
    if (rho0.rows() != sched.dim || rho0.cols() != sched.dim) throw ValidationError("initial state has wrong size");
    if (!is_hermitian(rho0, 1e-10)) throw ValidationError("initial state is not Hermitian");
    if (std::abs(rho0.trace() - 1.0) > 1e-10) throw ValidationError("initial state does not have unit trace");
    if (detail::min_eigenvalue(rho0) < -1e-10) throw ValidationError("initial state is not positive");
    std::vector<ComplexMatrix> rhos{rho0};
    detail::evolve_operators(sched, rhos, channels, steps);
    LindbladResult r;
    r.rho = rhos[0];
    r.trace_drift = std::abs(r.rho.trace() - 1.0);
    r.min_eigenvalue = detail::min_eigenvalue(r.rho);
    if (!r.rho.allFinite() || r.trace_drift > 1e-6) throw IntegrationError("Lindblad integration lost trace");
    if (r.min_eigenvalue < -1e-6) throw PositivityError("Lindblad integration lost positivity");
    return r;
}

// Row-major vectorization: vec(rho)[i*d + j] = rho(i, j); column a*d+b is the image of |a><b|.
inline ComplexMatrix superoperator_from_unitary(const ComplexMatrix& u) { return kron(u, u.conjugate()); }

inline ComplexMatrix process_map(const PulseSchedule& sched, const std::vector<LindbladChannel>& channels,
                                 std::size_t steps = 10000) {
    sched.validate();
    int d = sched.dim;
    std::vector<ComplexMatrix> basis;
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
            ComplexMatrix e = ComplexMatrix::Zero(d, d);
            e(a, b) = 1.0;
            basis.push_back(e);
        }
    detail::evolve_operators(sched, basis, channels, steps);
    ComplexMatrix s(d * d, d * d);
    for (int c = 0; c < d * d; ++c)
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) s(i * d + j, c) = basis[c](i, j);
    if (!s.allFinite()) throw IntegrationError("process map has non-finite entries");
    return s;
}

// Map restricted to the span of the isometry's columns, projected back onto it.
inline ComplexMatrix subspace_process_map(const PulseSchedule& sched, const ComplexMatrix& iso,
                                          const std::vector<LindbladChannel>& channels, std::size_t steps = 10000) {
    sched.validate();
    if (iso.rows() != sched.dim) throw ValidationError("isometry does not match the schedule dimension");
    int k = static_cast<int>(iso.cols());
    std::vector<ComplexMatrix> ops;
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) ops.push_back(iso.col(a) * iso.col(b).adjoint());
    if (channels.empty()) {
        ComplexMatrix u = detail::unitary_only(sched, steps);
        for (auto& o : ops) o = u * o * u.adjoint();
    } else {
        detail::evolve_operators(sched, ops, channels, steps);
    }
    ComplexMatrix s(k * k, k * k);
    for (int c = 0; c < k * k; ++c) {
        ComplexMatrix p = iso.adjoint() * ops[c] * iso;
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) s(i * k + j, c) = p(i, j);
    }
    return s;
}

inline double choi_min_eigenvalue(const ComplexMatrix& s) {
    int d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(s.rows()))));
    ComplexMatrix c(d * d, d * d);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) c(a * d + i, b * d + j) = s(i * d + j, a * d + b);
    return detail::min_eigenvalue(c);
}

inline double trace_preservation_defect(const ComplexMatrix& s) {
    int d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(s.rows()))));
    double worst = 0.0;
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
            cd tr = 0.0;
            for (int i = 0; i < d; ++i) tr += s(i * d + i, a * d + b);
            worst = std::max(worst, std::abs(tr - (a == b ? 1.0 : 0.0)));
        }
    return worst;
}

inline double process_fidelity(const ComplexMatrix& s, const ComplexMatrix& target) {
    double d = static_cast<double>(target.rows());
    return (superoperator_from_unitary(target).adjoint() * s).trace().real() / (d * d);
}

// Average gate fidelity of a trace-preserving map against a target unitary.
inline double avg_gate_fidelity(const ComplexMatrix& s, const ComplexMatrix& target) {
    double d = static_cast<double>(target.rows());
    if (s.rows() != target.rows() * target.rows()) throw ValidationError("map and target sizes differ");
    if (trace_preservation_defect(s) > 1e-8) throw ValidationError("map is not trace preserving");
    return (d * process_fidelity(s, target) + 1.0) / (d + 1.0);
}

// Same for a map that may leak out of the subspace.
inline double avg_gate_fidelity_leaky(const ComplexMatrix& s, const ComplexMatrix& target) {
    int k = static_cast<int>(target.rows());
    double d = static_cast<double>(k);
    cd tr_id = 0.0;
    for (int a = 0; a < k; ++a)
        for (int i = 0; i < k; ++i) tr_id += s(i * k + i, a * k + a);
    return (d * process_fidelity(s, target) + tr_id.real() / d) / (d + 1.0);
}

// Unitary-only shortcut, accurate where 1 - F is tiny.
inline double unitary_infidelity(const ComplexMatrix& u, const ComplexMatrix& v) {
    // same as (d^2 - |tr W|^2) / (d (d + 1)) for unitary W, but free of the cancellation
    ComplexMatrix w = v.adjoint() * u;
    double d = static_cast<double>(u.rows());
    cd c = w.trace() / d;
    return (w - c * ComplexMatrix::Identity(u.rows(), u.cols())).squaredNorm() / (d + 1.0);
}

inline double state_fidelity(const ComplexMatrix& rho, const ComplexVector& psi) {
    return (psi.adjoint() * rho * psi)(0, 0).real();
}

}  // namespace geomgate
