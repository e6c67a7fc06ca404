#include "geomgate/propagator.hpp"
#include "geomgate/gates.hpp"

#include <gtest/gtest.h>

using namespace geomgate;

namespace {

PulseSchedule constant_drive(double om, double de, double phase, double T) {
    Segment s;
    s.duration = T;
    s.omega = Constant{om};
    s.delta = Constant{de};
    s.phase = Constant{phase};
    PulseSchedule p;
    p.segments.push_back(s);
    return p;
}

PulseSchedule bump(double phase, double T) {
    Segment s;
    s.duration = T;
    s.omega = SinSquared{1.0, 1.0};
    s.phase = Constant{phase};
    s.delta = SinSquared{0.3, 0.5};
    PulseSchedule p;
    p.segments.push_back(s);
    return p;
}

PulseSchedule idle(double T) { return constant_drive(0.0, 0.0, 0.0, T); }

}  // namespace

TEST(Unitary, ConstantHamiltonianClosedForm) {
    double om = 1.3, de = -0.4, ph = 0.7, T = 2.9;
    auto p = constant_drive(om, de, ph, T);
    // H = (1/2)(om cos ph X + om sin ph Y - de Z) => U = exp(-i T |h| n.sigma)
    Vec3 h(0.5 * om * std::cos(ph), 0.5 * om * std::sin(ph), -0.5 * de);
    Mat2 exact = pauli_axis_unitary(h.normalized(), -T * h.norm());
    auto r = propagate_unitary(p, 200);
    EXPECT_LT((r.final_operator - exact).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Unitary, RichardsonEstimateBelowTolerance) {
    auto r = propagate_unitary(bump(0.2, 2 * pi), 10000, true);
    EXPECT_LT(r.estimated_error, 1e-8);
    EXPECT_FALSE(r.convergence_warning);
    EXPECT_TRUE(is_unitary(r.final_operator, 1e-12));
}

TEST(Unitary, MultiplicativeOverConcatenation) {
    auto a = bump(0.3, 3.0), b = bump(-1.1, 2.0);
    PulseSchedule ab = concatenate({a, b});
    ComplexMatrix ua = propagate_unitary(a, 4000, false).final_operator;
    ComplexMatrix ub = propagate_unitary(b, 4000, false).final_operator;
    ComplexMatrix uab = propagate_unitary(ab, 4000, false).final_operator;
    EXPECT_LT((uab - ub * ua).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Unitary, InterleavedPulseActsAtItsTime) {
    auto p = constant_drive(0.0, 1.0, 0.0, 2.0);
    p.pulses.push_back({0, 1.0, ComplexMatrix(pauli_x())});
    // free z rotation, X, free z rotation: the two halves cancel
    ComplexMatrix u = propagate_unitary(p, 256, false).final_operator;
    EXPECT_NEAR(phase_distance(u, pauli_x()), 0.0, 1e-12);
}

TEST(Unitary, Preconditions) {
    EXPECT_THROW(propagate_unitary(bump(0, 1), 10), ValidationError);
    PulseSchedule empty;
    EXPECT_THROW(propagate_unitary(empty), ValidationError);
}

TEST(Lindblad, AmplitudeDampingDecay) {
    double g = 0.05, T = 7.0;
    ComplexMatrix rho = ComplexMatrix::Zero(2, 2);
    rho(1, 1) = 1.0;
    auto r = propagate_lindblad(idle(T), rho, {{ChannelKind::Lowering, g, 0}}, 2000);
    EXPECT_NEAR(r.rho(1, 1).real(), std::exp(-g * T), 1e-10);
    EXPECT_NEAR(r.rho.trace().real(), 1.0, 1e-12);
}

TEST(Lindblad, DephasingCoherenceDecay) {
    double g = 0.08, T = 5.0;
    ComplexMatrix rho = ComplexMatrix::Constant(2, 2, 0.5);
    auto r = propagate_lindblad(idle(T), rho, {{ChannelKind::Dephasing, g, 0}}, 2000);
    EXPECT_NEAR(std::abs(r.rho(0, 1)), 0.5 * std::exp(-g * T), 1e-10);
    auto l = propagate_lindblad(idle(T), rho, {{ChannelKind::Lowering, g, 0}}, 2000);
    EXPECT_NEAR(std::abs(l.rho(0, 1)), 0.5 * std::exp(-g * T / 2), 1e-10);
}

TEST(Lindblad, DrivenTraceAndPositivity) {
    ComplexMatrix rho = ComplexMatrix::Zero(2, 2);
    rho(0, 0) = 1.0;
    std::vector<LindbladChannel> ch{{ChannelKind::Lowering, 0.01, 0}, {ChannelKind::Dephasing, 0.02, 0}};
    auto r = propagate_lindblad(bump(0.4, 2 * pi), rho, ch, 4000);
    EXPECT_NEAR(r.rho.trace().real(), 1.0, 1e-8);
    ComplexMatrix s = process_map(bump(0.4, 2 * pi), ch, 4000);
    EXPECT_LT(trace_preservation_defect(s), 1e-8);
    EXPECT_GE(choi_min_eigenvalue(s), -1e-8);
}

TEST(Lindblad, RejectsBadInputs) {
    ComplexMatrix rho = ComplexMatrix::Identity(2, 2) / 2.0;
    EXPECT_THROW(propagate_lindblad(idle(1), rho, {{ChannelKind::Dephasing, -1.0, 0}}, 100), ValidationError);
    ComplexMatrix bad = ComplexMatrix::Identity(2, 2);
    EXPECT_THROW(propagate_lindblad(idle(1), bad, {}, 100), ValidationError);
}

TEST(Fidelity, UnitaryMapIsPerfect) {
    auto p = bump(0.9, 3.0);
    ComplexMatrix u = propagate_unitary(p, 4000, false).final_operator;
    ComplexMatrix s = process_map(p, {}, 4000);
    EXPECT_NEAR(avg_gate_fidelity(s, u), 1.0, 1e-9);
    EXPECT_NEAR(unitary_infidelity(u, std::exp(I1 * 0.3) * u), 0.0, 1e-14);
}

TEST(Fidelity, DephasedIdentityAnalytic) {
    double g = 0.1, T = 3.0;
    ComplexMatrix s = process_map(idle(T), {{ChannelKind::Dephasing, g, 0}}, 2000);
    double fpro = (1 + std::exp(-g * T)) / 2;
    EXPECT_NEAR(avg_gate_fidelity(s, Mat2::Identity()), (2 * fpro + 1) / 3, 1e-10);
}

TEST(Fidelity, RejectsNonTracePreservingMap) {
    ComplexMatrix s = 0.5 * ComplexMatrix::Identity(4, 4);
    EXPECT_THROW(avg_gate_fidelity(s, Mat2::Identity()), ValidationError);
}

TEST(Superoperator, RowMajorConvention) {
    Mat2 u = gate_matrix("H") * gate_matrix("T");
    ComplexMatrix s = superoperator_from_unitary(u);
    ComplexMatrix rho(2, 2);
    rho << 0.7, cd(0.1, 0.2), cd(0.1, -0.2), 0.3;
    Eigen::VectorXcd v(4);
    v << rho(0, 0), rho(0, 1), rho(1, 0), rho(1, 1);
    Eigen::VectorXcd w = s * v;
    ComplexMatrix out = u * rho * u.adjoint();
    EXPECT_NEAR(std::abs(w(1) - out(0, 1)), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(w(2) - out(1, 0)), 0.0, 1e-14);
}
