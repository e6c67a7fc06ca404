#include "geomgate/gates.hpp"
#include "geomgate/optimize.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace geomgate;

TEST(Pauli, AlgebraAndCommutators) {
    Mat2 x = pauli_x(), y = pauli_y(), z = pauli_z();
    EXPECT_LT((x * y - I1 * z).norm(), 1e-15);
    EXPECT_LT((y * z - I1 * x).norm(), 1e-15);
    EXPECT_LT((x * x - Mat2::Identity()).norm(), 1e-15);
}

TEST(Embed, MostSignificantQubitFirst) {
    ComplexMatrix z0 = embed(pauli_z(), 0, 3);
    // |100> is basis index 4
    EXPECT_NEAR(z0(4, 4).real(), -1.0, 1e-15);
    EXPECT_NEAR(z0(3, 3).real(), 1.0, 1e-15);
    ComplexMatrix z2 = embed(pauli_z(), 2, 3);
    EXPECT_NEAR(z2(1, 1).real(), -1.0, 1e-15);
}

TEST(PhaseDistance, IgnoresGlobalPhase) {
    Mat2 h = gate_matrix("H");
    EXPECT_NEAR(phase_distance(h, std::exp(I1 * 0.37) * h), 0.0, 1e-14);
    EXPECT_GT(phase_distance(h, gate_matrix("X")), 0.1);
    EXPECT_THROW(phase_distance(h, ComplexMatrix::Identity(4, 4)), ValidationError);
}

TEST(AxisUnitary, MatchesMatrixExponential) {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int k = 0; k < 20; ++k) {
        Vec3 n(u(rng), u(rng), u(rng));
        n.normalize();
        double a = 3 * u(rng);
        Mat2 ns = n.x() * pauli_x() + n.y() * pauli_y() + n.z() * pauli_z();
        // series oracle
        Mat2 e = Mat2::Identity(), term = Mat2::Identity();
        for (int j = 1; j < 40; ++j) {
            term = term * (I1 * a * ns) / double(j);
            e += term;
        }
        EXPECT_LT((pauli_axis_unitary(n, a) - e).norm(), 1e-12);
    }
    EXPECT_THROW(pauli_axis_unitary(Vec3(0, 0, 2), 1), ValidationError);
}

TEST(PauliCoefficients, Reconstructs) {
    Mat2 m;
    m << cd(1, 2), cd(0.5, -1), cd(3, 0.25), cd(-2, 1);
    auto c = pauli_coefficients(m);
    Mat2 back = c[0] * pauli_i() + c[1] * pauli_x() + c[2] * pauli_y() + c[3] * pauli_z();
    EXPECT_LT((back - m).norm(), 1e-14);
}

TEST(Angles, WrapAndUnwrap) {
    EXPECT_NEAR(wrap_angle(3 * pi / 2), -pi / 2, 1e-15);
    EXPECT_NEAR(wrap_angle(-pi), -pi, 1e-15);
    EXPECT_NEAR(unwrap_near(0.1, 2 * pi), 2 * pi + 0.1, 1e-14);
}

TEST(Gates, NamedMatrices) {
    EXPECT_NEAR(phase_distance(gate_matrix("S") * gate_matrix("S"), gate_matrix("Z")), 0, 1e-14);
    EXPECT_NEAR(phase_distance(gate_matrix("T") * gate_matrix("T"), gate_matrix("S")), 0, 1e-14);
    EXPECT_NEAR(phase_distance(rx(pi), gate_matrix("NOT")), 0, 1e-14);
    EXPECT_NEAR(phase_distance(rz(pi / 4), gate_matrix("T")), 0, 1e-14);
    EXPECT_THROW(gate_matrix("CNOT"), ValidationError);
}

TEST(Gates, LoopTargetsReproduceGates) {
    // orange-slice closed form: U = e^{i gamma n.sigma} with n the loop axis at (chi0, xi0)
    for (std::string g : {"S", "T", "Z", "H", "NOT", "Y"}) {
        auto t = loop_target(g);
        Mat2 u = pauli_axis_unitary(bloch_axis(t.chi0, t.xi0), t.gamma);
        EXPECT_NEAR(phase_distance(u, gate_matrix(g)), 0, 1e-12) << g;
    }
}

TEST(Optimize, NelderMeadRosenbrock) {
    auto f = [](const std::vector<double>& x) {
        return 100 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1 - x[0], 2);
    };
    auto r = nelder_mead(f, {-1.2, 1.0}, 0.5, 5000, 1e-14);
    EXPECT_NEAR(r.x[0], 1.0, 1e-4);
    EXPECT_NEAR(r.x[1], 1.0, 1e-4);
}

TEST(Optimize, Bisect) {
    EXPECT_NEAR(bisect([](double x) { return x * x - 2; }, 0, 2, 1e-14), std::sqrt(2.0), 1e-12);
}
