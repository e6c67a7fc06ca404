#pragma once

#include "geomgate/waveform.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace geomgate {

// One piece of a drive. For dim 2 the Hamiltonian is
//   H = 1/2 [[-Delta, Omega e^{-i phi}], [Omega e^{i phi}, Delta]].
// When `generator` is set (multi-qubit schedules) it is H = omega(t) * generator
// and delta/phase are ignored.
struct Segment {
    double duration = 0.0;
    Waveform omega;
    Waveform delta;
    Phase phase;
    std::optional<ComplexMatrix> generator;
    std::string label;
};

// Instantaneous unitary applied at `time` (local to `segment`).
struct InterleavedPulse {
    std::size_t segment = 0;
    double time = 0.0;
    ComplexMatrix unitary;
};

struct PulseSchedule {
    int dim = 2;
    std::vector<Segment> segments;
    std::vector<InterleavedPulse> pulses;
    std::optional<ComplexMatrix> static_term;  // time-independent addition to H
    double declared_area = 0.0;
    std::string scheme;
    std::map<std::string, std::string> notes;

    double total_time() const {
        double t = 0.0;
        for (const auto& s : segments) t += s.duration;
        return t;
    }

    std::vector<double> segment_starts() const {
        std::vector<double> out;
        double t = 0.0;
        for (const auto& s : segments) {
            out.push_back(t);
            t += s.duration;
        }
        return out;
    }

    // Largest drive amplitude, the Omega_m used to scale detuning noise.
    double peak_omega() const {
        double m = 0.0;
        for (const auto& s : segments) m = std::max(m, s.omega.peak(s.duration));
        return m;
    }

    // Interleaved pulses sorted by (segment, time).
    std::vector<InterleavedPulse> sorted_pulses() const {
        auto p = pulses;
        std::stable_sort(p.begin(), p.end(), [](const auto& a, const auto& b) {
            return a.segment != b.segment ? a.segment < b.segment : a.time < b.time;
        });
        return p;
    }

    void validate() const {
        if (dim != 2 && dim != 8) throw ValidationError("schedule dimension must be 2 or 8");
        if (segments.empty()) throw ValidationError("schedule has no segments");
        for (std::size_t i = 0; i < segments.size(); ++i) {
            const auto& s = segments[i];
            if (!(s.duration > 0) || !std::isfinite(s.duration))
                throw ValidationError("segment " + std::to_string(i) + " has a non-positive duration");
            if (dim == 2 && s.generator)
                throw ValidationError("dim-2 segments take omega/delta/phase, not a generator");
            if (dim != 2) {
                if (!s.generator || s.generator->rows() != dim || s.generator->cols() != dim)
                    throw ValidationError("segment " + std::to_string(i) + " needs a dim x dim generator");
                if (!is_hermitian(*s.generator, 1e-10))
                    throw ValidationError("segment " + std::to_string(i) + " generator is not Hermitian");
            }
        }
        for (const auto& p : pulses) {
            if (p.segment >= segments.size()) throw ValidationError("interleaved pulse refers to a missing segment");
            if (p.time < 0 || p.time > segments[p.segment].duration)
                throw ValidationError("interleaved pulse time lies outside its segment");
            if (p.unitary.rows() != dim || !is_unitary(p.unitary, 1e-9))
                throw ValidationError("interleaved pulse is not a dim x dim unitary");
        }
        if (static_term && (static_term->rows() != dim || !is_hermitian(*static_term, 1e-10)))
            throw ValidationError("static term must be a Hermitian dim x dim matrix");
    }
};

// Hamiltonian of one segment at local time t.
inline ComplexMatrix segment_hamiltonian(const Segment& s, double t, int dim,
                                         const std::optional<ComplexMatrix>& extra = std::nullopt) {
    ComplexMatrix h;
    if (s.generator) {
        h = s.omega.value(t, s.duration) * (*s.generator);
    } else {
        double om = s.omega.value(t, s.duration), de = s.delta.value(t, s.duration);
        double ph = s.phase.value(t, s.duration);
        h.resize(2, 2);
        h(0, 0) = -0.5 * de;
        h(1, 1) = 0.5 * de;
        h(0, 1) = 0.5 * om * std::exp(-I1 * ph);
        h(1, 0) = 0.5 * om * std::exp(I1 * ph);
    }
    if (extra) h += *extra;
    if (h.rows() != dim) throw ValidationError("segment Hamiltonian has the wrong dimension");
    return h;
}

// Locate global time t: returns (segment index, local time). t == total maps to the last segment.
inline std::pair<std::size_t, double> locate(const PulseSchedule& s, double t) {
    double total = s.total_time();
    if (t < -1e-12 * total || t > total * (1 + 1e-12))
        throw OutOfRangeError("time " + std::to_string(t) + " lies outside [0, " + std::to_string(total) + "]");
    double start = 0.0;
    for (std::size_t i = 0; i < s.segments.size(); ++i) {
        double end = start + s.segments[i].duration;
        if (t < end || i + 1 == s.segments.size()) return {i, std::clamp(t - start, 0.0, s.segments[i].duration)};
        start = end;
    }
    return {s.segments.size() - 1, s.segments.back().duration};
}

inline ComplexMatrix hamiltonian_at(const PulseSchedule& s, double t) {
    auto [i, local] = locate(s, t);
    ComplexMatrix h = segment_hamiltonian(s.segments[i], local, s.dim, s.static_term);
    if (!is_hermitian(h, 1e-10)) throw NumericError("Hamiltonian is not Hermitian");
    return h;
}

// Composite Simpson on n (even) intervals.
template <class F>
double simpson(F&& f, double a, double b, std::size_t n) {
    if (n % 2) ++n;
    double h = (b - a) / static_cast<double>(n), acc = f(a) + f(b);
    for (std::size_t k = 1; k < n; ++k) acc += (k % 2 ? 4.0 : 2.0) * f(a + h * static_cast<double>(k));
    return acc * h / 3.0;
}

// Simpson interval count at least `minimum`, aligned to a table so kinks fall on nodes.
inline std::size_t aligned_intervals(std::size_t minimum, std::size_t table) {
    if (table == 0) return minimum + (minimum % 2);
    std::size_t per = 2;
    while (per * table < minimum) per += 2;
    return per * table;
}

// Integral of |Omega| over the schedule, by Simpson with at least 1e4 nodes per segment.
inline double schedule_area(const PulseSchedule& s) {
    double total = 0.0;
    for (const auto& seg : s.segments) {
        std::size_t n = aligned_intervals(10000, seg.omega.table_intervals());
        total += simpson([&](double t) { return std::abs(seg.omega.value(t, seg.duration)); }, 0.0, seg.duration, n);
    }
    return total;
}

// Same schedule played `factor` times slower at fixed pulse area.
inline PulseSchedule stretched(const PulseSchedule& s, double factor) {
    if (!(factor > 0)) throw ValidationError("stretch factor must be positive");
    PulseSchedule out = s;
    for (auto& seg : out.segments) {
        seg.duration *= factor;
        seg.omega = seg.omega.scaled(1.0 / factor);
        seg.delta = seg.delta.scaled(1.0 / factor);
        // phases are functions of t/T, integral-law tables included, so they carry over
    }
    for (auto& p : out.pulses) p.time *= factor;
    return out;
}

inline PulseSchedule concatenate(const std::vector<PulseSchedule>& parts) {
    if (parts.empty()) throw ValidationError("nothing to concatenate");
    PulseSchedule out;
    out.dim = parts.front().dim;
    for (const auto& p : parts) {
        if (p.dim != out.dim) throw ValidationError("cannot concatenate schedules of different dimension");
        std::size_t base = out.segments.size();
        out.segments.insert(out.segments.end(), p.segments.begin(), p.segments.end());
        for (auto q : p.pulses) {
            q.segment += base;
            out.pulses.push_back(q);
        }
        out.declared_area += p.declared_area;
        if (p.static_term) out.static_term = p.static_term;
    }
    return out;
}

}  // namespace geomgate
