#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace geomgate {

using cd = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using Mat2 = Eigen::Matrix2cd;
using Vec3 = Eigen::Vector3d;

inline constexpr double pi = std::numbers::pi;
inline constexpr cd I1{0.0, 1.0};

// Input problems map to exit code 2, numerical failures to exit code 3.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ValidationError : Error {
    using Error::Error;
};
struct OutOfRangeError : ValidationError {
    using ValidationError::ValidationError;
};
struct ConfigurationError : ValidationError {
    using ValidationError::ValidationError;
};
struct AmbiguityError : ValidationError {
    using ValidationError::ValidationError;
};
struct CurveDomainError : ValidationError {
    using ValidationError::ValidationError;
};
struct NumericError : Error {
    using Error::Error;
};
struct IntegrationError : NumericError {
    using NumericError::NumericError;
};
struct PositivityError : NumericError {
    using NumericError::NumericError;
};
struct SingularityError : NumericError {
    using NumericError::NumericError;
};
struct ConvergenceError : NumericError {
    using NumericError::NumericError;
};
struct InconsistencyError : NumericError {
    using NumericError::NumericError;
};
struct DegenerateError : NumericError {
    using NumericError::NumericError;
};

inline Mat2 pauli_i() { return Mat2::Identity(); }
inline Mat2 pauli_x() {
    Mat2 m;
    m << 0, 1, 1, 0;
    return m;
}
inline Mat2 pauli_y() {
    Mat2 m;
    m << 0, -I1, I1, 0;
    return m;
}
inline Mat2 pauli_z() {
    Mat2 m;
    m << 1, 0, 0, -1;
    return m;
}

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

// Operator acting as `op` on qubit k of n (qubit 0 is the most significant).
inline ComplexMatrix embed(const Mat2& op, int k, int n) {
    ComplexMatrix out = ComplexMatrix::Identity(1, 1);
    for (int q = 0; q < n; ++q) {
        ComplexMatrix f = (q == k) ? ComplexMatrix(op) : ComplexMatrix(Mat2::Identity());
        out = kron(out, f);
    }
    return out;
}

inline bool is_hermitian(const ComplexMatrix& m, double tol = 1e-12) {
    return m.rows() == m.cols() && (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

inline bool is_unitary(const ComplexMatrix& m, double tol = 1e-10) {
    if (m.rows() != m.cols()) return false;
    auto id = ComplexMatrix::Identity(m.rows(), m.cols());
    return (m.adjoint() * m - id).cwiseAbs().maxCoeff() <= tol;
}

// 1 - |Tr(U^dag V)|/d: zero iff U and V agree up to a global phase.
inline double phase_distance(const ComplexMatrix& u, const ComplexMatrix& v) {
    if (u.rows() != v.rows() || u.cols() != v.cols())
        throw ValidationError("phase_distance: dimension mismatch");
    return 1.0 - std::abs((u.adjoint() * v).trace()) / static_cast<double>(u.rows());
}

// exp(i a n.sigma) for a unit vector n.
inline Mat2 pauli_axis_unitary(const Vec3& n, double a) {
    double norm = n.norm();
    if (!(norm > 0.0) || std::abs(norm - 1.0) > 1e-9)
        throw ValidationError("pauli_axis_unitary: axis must be a unit vector");
    Mat2 ns = n.x() * pauli_x() + n.y() * pauli_y() + n.z() * pauli_z();
    return std::cos(a) * Mat2::Identity() + I1 * std::sin(a) * ns;
}

// Unit vector at polar angle chi, azimuth xi.
inline Vec3 bloch_axis(double chi, double xi) {
    return {std::sin(chi) * std::cos(xi), std::sin(chi) * std::sin(xi), std::cos(chi)};
}

// Pauli coefficients (c0, cx, cy, cz) of a 2x2 matrix.
inline Eigen::Vector4cd pauli_coefficients(const Mat2& m) {
    return {(m(0, 0) + m(1, 1)) / 2.0, (m(0, 1) + m(1, 0)) / 2.0,
            (m(1, 0) - m(0, 1)) / (2.0 * I1), (m(0, 0) - m(1, 1)) / 2.0};
}

inline double wrap_angle(double a) {
    a = std::fmod(a + pi, 2 * pi);
    if (a < 0) a += 2 * pi;
    return a - pi;
}

// Nearest representative of `a` (mod 2 pi) to `ref`.
inline double unwrap_near(double a, double ref) {
    return ref + wrap_angle(a - ref);
}

}  // namespace geomgate
