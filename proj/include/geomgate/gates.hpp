#pragma once

#include "geomgate/types.hpp"

#include <algorithm>
#include <cctype>
#include <string>

namespace geomgate {

inline Mat2 gate_matrix(const std::string& name) {
    std::string n = name;
    std::transform(n.begin(), n.end(), n.begin(), [](unsigned char c) { return std::toupper(c); });
    Mat2 m;
    if (n == "S") {
        m << 1, 0, 0, I1;
    } else if (n == "T") {
        m << 1, 0, 0, std::exp(I1 * (pi / 4));
    } else if (n == "H" || n == "HADAMARD") {
        m << 1, 1, 1, -1;
        m /= std::sqrt(2.0);
    } else if (n == "NOT" || n == "X") {
        m = pauli_x();
    } else if (n == "Y") {
        m = pauli_y();
    } else if (n == "Z") {
        m = pauli_z();
    } else if (n == "I") {
        m = Mat2::Identity();
    } else {
        throw ValidationError("unknown gate '" + name + "'");
    }
    return m;
}

inline Mat2 rotation(const Vec3& axis, double theta) { return pauli_axis_unitary(axis.normalized(), -theta / 2); }
inline Mat2 rx(double theta) { return rotation(Vec3::UnitX(), theta); }
inline Mat2 ry(double theta) { return rotation(Vec3::UnitY(), theta); }
inline Mat2 rz(double theta) { return rotation(Vec3::UnitZ(), theta); }

// Cyclic-loop parameters: the gate equals exp(i gamma n.sigma), n = n(chi0, xi0), up to a phase.
struct LoopTarget {
    double chi0 = 0.0;
    double xi0 = 0.0;
    double gamma = 0.0;
};

inline LoopTarget loop_target(const std::string& gate) {
    std::string n = gate;
    std::transform(n.begin(), n.end(), n.begin(), [](unsigned char c) { return std::toupper(c); });
    if (n == "S") return {0.0, 0.0, -pi / 4};
    if (n == "T") return {0.0, 0.0, -pi / 8};
    if (n == "Z") return {0.0, 0.0, pi / 2};
    if (n == "H" || n == "HADAMARD") return {pi / 4, 0.0, pi / 2};
    if (n == "NOT" || n == "X") return {pi / 2, 0.0, pi / 2};
    if (n == "Y") return {pi / 2, pi / 2, pi / 2};
    throw ValidationError("no loop form for gate '" + gate + "'");
}

}  // namespace geomgate
