#pragma once

#include "geomgate/schemes.hpp"

#include <atomic>
#include <thread>

namespace geomgate {

enum class ZVariant { Projector, Symmetric };

// epsilon scales Omega -> (1 + epsilon) Omega. delta adds delta Omega_m |1><1|
// (projector) or delta Omega_m sigma_z (symmetric).
struct NoiseSpec {
    double epsilon = 0.0;
    double delta = 0.0;
    ZVariant variant = ZVariant::Projector;
    std::vector<LindbladChannel> channels;
    // Quasi-static z field on every qubit, Gaussian with variance rate / (2 reference_time):
    // a free qubit then loses the same coherence over reference_time as under Markovian dephasing.
    double quasi_static_rate = 0.0;
    double quasi_static_reference_time = 1.0;
    bool quasi_static_collective = false;  // one shared field b * sum_k sigma_z^k instead of independent ones
};

inline PulseSchedule apply_noise(const PulseSchedule& s, const NoiseSpec& n) {
    if (!(n.epsilon > -1)) throw ValidationError("epsilon must exceed -1");
    for (const auto& c : n.channels)
        if (!(c.rate >= 0)) throw ValidationError("channel rates must be non-negative");
    if (s.dim != 2) {
        if (n.epsilon != 0 || n.delta != 0) throw ValidationError("dim-8 schedules accept decoherence channels only");
        return s;
    }
    PulseSchedule out = s;
    if (n.epsilon != 0)
        for (auto& seg : out.segments) seg.omega = seg.omega.scaled(1 + n.epsilon);
    if (n.delta != 0) {
        double om = s.peak_omega();
        ComplexMatrix add = ComplexMatrix::Zero(2, 2);
        if (n.variant == ZVariant::Projector) add(1, 1) = n.delta * om;
        else add = n.delta * om * ComplexMatrix(pauli_z());
        out.static_term = (s.static_term ? *s.static_term : ComplexMatrix::Zero(2, 2)) + add;
    }
    return out;
}

enum class Metric { AvgGateFidelity, StateFidelity };

inline std::string metric_name(Metric m) { return m == Metric::AvgGateFidelity ? "avg-gate-fidelity" : "state-fidelity"; }

namespace detail {

inline double evaluate_one(const SchemeBundle& b, const NoiseSpec& n, Metric metric = Metric::AvgGateFidelity,
                       std::size_t steps = 2000, const ComplexVector* psi0 = nullptr) {
    PulseSchedule s = apply_noise(b.schedule, n);
    const ComplexMatrix& v = b.expected_unitary;
    ComplexVector p0;
    if (metric == Metric::StateFidelity) {
        if (!psi0 || psi0->size() != v.rows()) throw ValidationError("state fidelity needs a matching initial state");
        p0 = psi0->normalized();
    }
    if (b.isometry) {
        ComplexMatrix m = subspace_process_map(s, *b.isometry, n.channels, steps);
        if (metric == Metric::AvgGateFidelity) return avg_gate_fidelity_leaky(m, v);
        ComplexVector out = v * p0;
        ComplexMatrix rho = p0 * p0.adjoint(), res = ComplexMatrix::Zero(2, 2);
        for (int a = 0; a < 2; ++a)
            for (int bb = 0; bb < 2; ++bb)
                for (int i = 0; i < 2; ++i)
                    for (int j = 0; j < 2; ++j) res(i, j) += m(i * 2 + j, a * 2 + bb) * rho(a, bb);
        return state_fidelity(res, out);
    }
    if (n.channels.empty()) {
        ComplexMatrix u = propagate_unitary(s, steps, false).final_operator;
        if (metric == Metric::AvgGateFidelity) return 1.0 - unitary_infidelity(u, v);
        return std::norm((v * p0).dot(u * p0));
    }
    if (metric == Metric::AvgGateFidelity) return avg_gate_fidelity(process_map(s, n.channels, steps), v);
    auto r = propagate_lindblad(s, p0 * p0.adjoint(), n.channels, steps);
    return state_fidelity(r.rho, v * p0);
}

}  // namespace detail

// Fidelity of the noisy bundle against its expected unitary. Both metrics are linear in the
// channel, so the quasi-static average is a weighted sum (3-point Gauss-Hermite per qubit).
inline double evaluate(const SchemeBundle& b, const NoiseSpec& n, Metric metric = Metric::AvgGateFidelity,
                       std::size_t steps = 2000, const ComplexVector* psi0 = nullptr) {
    if (!(n.quasi_static_rate >= 0) || !(n.quasi_static_reference_time > 0))
        throw ValidationError("quasi-static rate must be >= 0 and reference time > 0");
    if (n.quasi_static_rate == 0) return detail::evaluate_one(b, n, metric, steps, psi0);
    int q = 0;
    while ((1 << q) < b.schedule.dim) ++q;
    if ((1 << q) != b.schedule.dim) throw ValidationError("quasi-static noise needs a qubit register");
    double sigma = std::sqrt(n.quasi_static_rate / (2 * n.quasi_static_reference_time));
    const double node[3] = {-std::sqrt(3.0), 0.0, std::sqrt(3.0)}, weight[3] = {1.0 / 6, 2.0 / 3, 1.0 / 6};
    int fields = n.quasi_static_collective ? 1 : q, total = 1;
    for (int k = 0; k < fields; ++k) total *= 3;
    double acc = 0;
    for (int idx = 0; idx < total; ++idx) {
        SchemeBundle bb = b;
        ComplexMatrix field = b.schedule.static_term ? *b.schedule.static_term
                                                     : ComplexMatrix::Zero(b.schedule.dim, b.schedule.dim);
        double w = 1;
        for (int k = 0, r = idx; k < fields; ++k, r /= 3) {
            if (n.quasi_static_collective)
                for (int j = 0; j < q; ++j) field += sigma * node[r % 3] * embed(pauli_z(), j, q);
            else
                field += sigma * node[r % 3] * embed(pauli_z(), k, q);
            w *= weight[r % 3];
        }
        bb.schedule.static_term = field;
        acc += w * detail::evaluate_one(bb, n, metric, steps, psi0);
    }
    return acc;
}

enum class NoiseAxis { Epsilon, Delta, GammaRate, Time };

inline std::string axis_name(NoiseAxis a) {
    switch (a) {
        case NoiseAxis::Epsilon: return "epsilon";
        case NoiseAxis::Delta: return "delta";
        case NoiseAxis::GammaRate: return "gamma-rate";
        case NoiseAxis::Time: return "time";
    }
    return "?";
}

inline NoiseAxis parse_axis(const std::string& s) {
    if (s == "epsilon") return NoiseAxis::Epsilon;
    if (s == "delta") return NoiseAxis::Delta;
    if (s == "gamma-rate") return NoiseAxis::GammaRate;
    if (s == "time") return NoiseAxis::Time;
    throw ValidationError("unknown noise axis '" + s + "'");
}

struct ResultRow {
    std::string scheme, gate, axis;
    double noise_value = 0.0;
    std::string metric;
    double value = 0.0;
    double gate_time = 0.0, pulse_area = 0.0;
    std::string flags;
};

struct ResultTable {
    std::vector<ResultRow> rows;

    void append(const ResultTable& o) { rows.insert(rows.end(), o.rows.begin(), o.rows.end()); }

    // Value of the row matching (scheme, noise_value), NaN if absent.
    double lookup(const std::string& scheme, double x, const std::string& axis = {}) const {
        for (const auto& r : rows)
            if (r.scheme == scheme && std::abs(r.noise_value - x) < 1e-9 && (axis.empty() || r.axis == axis))
                return r.value;
        return std::numeric_limits<double>::quiet_NaN();
    }
};

inline std::vector<double> linear_grid(double a, double b, double step) {
    std::vector<double> g;
    int n = static_cast<int>(std::lround((b - a) / step));
    for (int i = 0; i <= n; ++i) {
        double x = a + step * i;
        g.push_back(std::abs(x) < 1e-14 ? 0.0 : x);
    }
    return g;
}

struct SweepSpec {
    std::string label;  // scheme column
    std::string gate;
    NoiseAxis axis = NoiseAxis::Epsilon;
    std::vector<double> values;
    Metric metric = Metric::AvgGateFidelity;
    NoiseSpec base;
    std::size_t steps = 2000;
    int jobs = 1;
    std::string flags;
    std::optional<ComplexVector> psi0;
};

// One row per grid value. Failures become rows with a NaN value and an error flag.
inline ResultTable sweep(const SchemeBundle& b, const SweepSpec& spec) {
    if (spec.values.empty()) throw ValidationError("sweep grid is empty");
    for (std::size_t i = 1; i < spec.values.size(); ++i)
        if (!(spec.values[i] > spec.values[i - 1])) throw ValidationError("sweep grid must be strictly increasing");
    ResultTable t;
    t.rows.resize(spec.values.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < spec.values.size(); i = next++) {
            double x = spec.values[i];
            ResultRow row;
            row.scheme = spec.label.empty() ? b.scheme : spec.label;
            row.gate = spec.gate;
            row.axis = axis_name(spec.axis);
            row.noise_value = x;
            row.metric = metric_name(spec.metric);
            row.flags = spec.flags;
            SchemeBundle bb = b;
            NoiseSpec n = spec.base;
            switch (spec.axis) {
                case NoiseAxis::Epsilon: n.epsilon = x; break;
                case NoiseAxis::Delta: n.delta = x; break;
                case NoiseAxis::GammaRate:
                    for (auto& c : n.channels) c.rate = x;
                    if (n.quasi_static_rate > 0) n.quasi_static_rate = x;
                    break;
                case NoiseAxis::Time: bb.schedule = stretched(b.schedule, x); break;
            }
            row.gate_time = bb.schedule.total_time();
            row.pulse_area = bb.schedule.declared_area;
            try {
                const ComplexVector* p = spec.psi0 ? &*spec.psi0 : nullptr;
                row.value = evaluate(bb, n, spec.metric, spec.steps, p);
                if (row.value > 1 + 1e-9 || row.value < -1e-9) throw NumericError("fidelity outside [0, 1]");
            } catch (const Error& e) {
                row.value = std::numeric_limits<double>::quiet_NaN();
                row.flags += (row.flags.empty() ? "" : ";") + std::string("error:") + e.what();
            }
            t.rows[i] = row;
        }
    };
    int jobs = std::max(1, spec.jobs);
    std::vector<std::thread> pool;
    for (int j = 1; j < jobs; ++j) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();
    return t;
}

inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string o = "\"";
    for (char c : s) o += c == '"' ? std::string("\"\"") : std::string(1, c);
    return o + "\"";
}

inline std::string to_csv(const ResultTable& t) {
    std::string out = "scheme,gate,noise_axis,noise_value,metric,value,gate_time,pulse_area,flags\n";
    char buf[64];
    auto num = [&](double v) {
        if (std::isnan(v)) return std::string("nan");
        std::snprintf(buf, sizeof buf, "%.12g", v);
        return std::string(buf);
    };
    for (const auto& r : t.rows)
        out += csv_escape(r.scheme) + "," + csv_escape(r.gate) + "," + r.axis + "," + num(r.noise_value) + "," +
               r.metric + "," + num(r.value) + "," + num(r.gate_time) + "," + num(r.pulse_area) + "," +
               csv_escape(r.flags) + "\n";
    return out;
}

// Minimal line plot: one polyline per (scheme, gate) series.
inline std::string to_svg(const ResultTable& t, const std::string& title) {
    std::map<std::string, std::vector<std::pair<double, double>>> series;
    double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
    for (const auto& r : t.rows) {
        if (std::isnan(r.value)) continue;
        series[r.scheme + " / " + r.gate + " / " + r.axis].push_back({r.noise_value, r.value});
        x0 = std::min(x0, r.noise_value), x1 = std::max(x1, r.noise_value);
        y0 = std::min(y0, r.value), y1 = std::max(y1, r.value);
    }
    if (series.empty()) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    if (x1 == x0) x1 = x0 + 1;
    if (y1 == y0) y0 = y1 - 1e-6;
    const double w = 640, h = 400, ml = 70, mr = 220, mt = 30, mb = 40;
    auto px = [&](double x) { return ml + (x - x0) / (x1 - x0) * (w - ml - mr); };
    auto py = [&](double y) { return mt + (y1 - y) / (y1 - y0) * (h - mt - mb); };
    const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"};
    char buf[256];
    std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\" font-family=\"sans-serif\" "
                    "font-size=\"11\">\n<rect width=\"640\" height=\"400\" fill=\"white\"/>\n";
    std::snprintf(buf, sizeof buf, "<rect x=\"%g\" y=\"%g\" width=\"%g\" height=\"%g\" fill=\"none\" stroke=\"black\"/>\n",
                  ml, mt, w - ml - mr, h - mt - mb);
    s += buf;
    s += "<text x=\"" + std::to_string(int(ml)) + "\" y=\"18\">" + title + "</text>\n";
    std::snprintf(buf, sizeof buf, "<text x=\"%g\" y=\"%g\">%.4g</text><text x=\"%g\" y=\"%g\" text-anchor=\"end\">%.4g</text>\n",
                  ml, h - mb + 15, x0, w - mr, h - mb + 15, x1);
    s += buf;
    std::snprintf(buf, sizeof buf, "<text x=\"%g\" y=\"%g\" text-anchor=\"end\">%.6g</text><text x=\"%g\" y=\"%g\" text-anchor=\"end\">%.6g</text>\n",
                  ml - 4, mt + 4, y1, ml - 4, h - mb, y0);
    s += buf;
    int k = 0;
    for (auto& [name, pts] : series) {
        std::sort(pts.begin(), pts.end());
        const char* col = colors[k % 8];
        s += "<polyline fill=\"none\" stroke-width=\"1.5\" stroke=\"" + std::string(col) + "\" points=\"";
        for (auto [x, y] : pts) {
            std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(x), py(y));
            s += buf;
        }
        s += "\"/>\n";
        std::snprintf(buf, sizeof buf, "<text x=\"%g\" y=\"%g\" fill=\"%s\">%s</text>\n", w - mr + 8, mt + 14.0 * k + 10, col,
                      name.c_str());
        s += buf;
        ++k;
    }
    return s + "</svg>\n";
}

}  // namespace geomgate
