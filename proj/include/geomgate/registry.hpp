#pragma once

#include "geomgate/schemes.hpp"

namespace geomgate {

struct SchemeRequest {
    std::string gate = "T";
    std::map<std::string, double> params;  // overrides; "peak", "shape" (0 sin^2, 1 constant), "validate"
};

namespace detail {

inline double param(const SchemeRequest& r, const std::string& k, double dflt) {
    auto it = r.params.find(k);
    return it == r.params.end() ? dflt : it->second;
}

inline bool has(const SchemeRequest& r, const std::string& k) { return r.params.count(k) > 0; }

inline BuildOptions options(const SchemeRequest& r, PulseShape dflt = PulseShape::SinSquared) {
    BuildOptions o;
    o.peak = param(r, "peak", 1.0);
    o.shape = has(r, "shape") ? (param(r, "shape", 0) != 0 ? PulseShape::Constant : PulseShape::SinSquared) : dflt;
    o.validate = param(r, "validate", 1.0) != 0;
    return o;
}

inline std::string upper(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::toupper(c); });
    return s;
}

// Loop parameters: explicit (chi0, xi0, gamma) or from the named gate.
inline LoopTarget loop(const SchemeRequest& r) {
    LoopTarget t{};
    if (has(r, "gamma") || upper(r.gate) == "CUSTOM") {
        t.chi0 = param(r, "chi0", 0.0);
        t.xi0 = param(r, "xi0", 0.0);
        t.gamma = param(r, "gamma", 0.0);
        return t;
    }
    return loop_target(r.gate);
}

inline SchemeBundle build_toc(const SchemeRequest& r) {
    auto o = options(r);
    std::string g = upper(r.gate);
    if (g == "T") return toc_z(pi / 4, o);
    if (g == "S") return toc_z(pi / 2, o);
    if (g == "Z") return toc_z(pi, o);
    if (g == "NOT" || g == "X") return toc(pi, "x", o);
    if (g == "Y") return toc(pi, "y", o);
    static const char* axes[] = {"x", "y", "-x", "-y"};
    int a = static_cast<int>(param(r, "axis", 0));
    if (a < 0 || a > 3) throw ValidationError("TOC axis index must be 0..3");
    if (g == "RZ") return toc_z(param(r, "theta", pi / 4), o);
    return toc(param(r, "theta", pi / 2), axes[a], o);
}

inline SchemeBundle build_noncyclic(const SchemeRequest& r) {
    auto o = options(r);
    std::string g = upper(r.gate);
    if (g == "T") return noncyclic(NoncyclicKind::Rz, pi / 4, o);
    if (g == "S") return noncyclic(NoncyclicKind::Rz, pi / 2, o);
    if (g == "H" || g == "HADAMARD") return noncyclic_hadamard(o);
    if (g == "HLIKE") return noncyclic(NoncyclicKind::HadamardLike, 0.0, o);
    if (g == "RX") return noncyclic(NoncyclicKind::Rx, param(r, "theta", pi / 2), o);
    if (g == "RY") return noncyclic(NoncyclicKind::Ry, param(r, "theta", pi / 2), o);
    if (g == "RZ") return noncyclic(NoncyclicKind::Rz, param(r, "theta", pi / 4), o);
    throw ValidationError("non-cyclic scheme supports T, S, H, HLIKE, Rx, Ry, Rz");
}

inline SchemeBundle build_circular(const SchemeRequest& r) {
    auto o = options(r);
    std::string g = upper(r.gate);
    CircularSpec c;
    if (g == "H" || g == "HADAMARD") c.kind = CircularGate::Hadamard;
    else if (g == "S") c.kind = CircularGate::Phase, c.gamma_g = -pi / 4;
    else if (g == "T") c.kind = CircularGate::Phase, c.gamma_g = -pi / 8;
    else if (g == "CUSTOM") c.kind = CircularGate::Phase, c.gamma_g = param(r, "gamma_g", -pi / 8);
    else throw ValidationError("circular scheme supports H, S, T");
    for (int k = 1; k <= 4; ++k)
        if (has(r, "a" + std::to_string(k))) {
            c.coefficients.resize(static_cast<std::size_t>(k), 0.0);
            c.coefficients[static_cast<std::size_t>(k - 1)] = param(r, "a" + std::to_string(k), 0.0);
        }
    int hk = static_cast<int>(param(r, "optimize", 0));
    if (hk > 0) c = optimize_circular(c, hk);
    return circular(c, o);
}

inline SchemeBundle build_oct(const SchemeRequest& r) {
    auto o = options(r);
    std::string g = upper(r.gate);
    if (g == "NOT" || g == "X") return oct('x', pi / 2, param(r, "eta", 0.2), o);
    if (g == "CUSTOM") {
        char ax = param(r, "axis", 3) == 1 ? 'x' : 'z';
        return oct(ax, param(r, "gamma", pi / 4), param(r, "eta", 1.0), o);
    }
    auto t = loop_target(r.gate);
    if (t.chi0 != 0) throw ValidationError("OCT supports z gates (S, T, Z) and NOT");
    return oct('z', t.gamma, param(r, "eta", 1.0), o);
}

inline SchemeBundle build_dd(const SchemeRequest& r) {
    auto o = options(r);
    std::string g = upper(r.gate);
    double th = param(r, "theta", 0.0), ph = param(r, "phi", pi / 4);
    if (g == "T") th = 0, ph = pi / 4;
    else if (g == "S") th = 0, ph = pi / 2;
    else if (g == "NOT" || g == "X") th = pi / 2, ph = pi;
    else if (g != "CUSTOM") throw ValidationError("dd-logical supports T, S, NOT or custom theta/phi");
    return dd_logical(th, ph, static_cast<int>(param(r, "reps", 2)), o);
}

}  // namespace detail

inline const std::vector<std::string>& scheme_ids() {
    static const std::vector<std::string> ids{"orange-slice", "toc",        "half-orange", "triangular",
                                              "circular",     "noncyclic",  "composite",   "composite-z",
                                              "oct",          "dyn-corrected", "dd-logical", "dog-reference"};
    return ids;
}

inline SchemeBundle build_scheme(const std::string& id, const SchemeRequest& r) {
    using namespace detail;
    if (id == "orange-slice") {
        auto t = loop(r);
        return orange_slice(t.chi0, t.xi0, t.gamma, options(r));
    }
    if (id == "composite") {
        auto t = loop(r);
        return composite(t.chi0, t.xi0, t.gamma, static_cast<int>(param(r, "N", 2)), options(r));
    }
    if (id == "composite-z") {
        auto t = loop(r);
        // target exp(-i g n.sigma) with g in [0, pi) equals the loop gate up to phase
        double g = std::fmod(-t.gamma, pi);
        if (g < 0) g += pi;
        return composite_z(t.chi0, t.xi0, g, static_cast<int>(param(r, "N", 2)), options(r, PulseShape::Constant));
    }
    if (id == "toc") return build_toc(r);
    if (id == "half-orange") {
        auto t = loop(r);
        return half_orange(t.chi0, t.xi0, 2 * t.gamma, param(r, "delta", 0.0), options(r));
    }
    if (id == "triangular") {
        auto t = loop(r);
        double L = param(r, "Lambda", pi / 3);
        double lam = has(r, "lambda") ? param(r, "lambda", 0.0) : 2 * t.gamma / (1 - std::cos(L));
        return triangular(t.chi0, t.xi0, lam, L, options(r));
    }
    if (id == "circular") return build_circular(r);
    if (id == "noncyclic") return build_noncyclic(r);
    if (id == "oct") return build_oct(r);
    if (id == "dyn-corrected") {
        auto t = loop(r);
        return dyn_corrected(t.chi0, t.xi0, t.gamma, options(r));
    }
    if (id == "dd-logical") return build_dd(r);
    if (id == "dog-reference") {
        std::string g = upper(r.gate);
        if (g != "NOT" && g != "X") throw ValidationError("dog-reference realizes NOT only");
        return dog_reference(options(r, PulseShape::Constant));
    }
    throw ValidationError("unknown scheme '" + id + "'");
}

}  // namespace geomgate
