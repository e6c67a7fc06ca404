#pragma once

#include "geomgate/experiments.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace geomgate {

using json = nlohmann::json;

namespace detail {

inline json matrix_json(const ComplexMatrix& m) {
    json re = json::array(), im = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json r = json::array(), c = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) r.push_back(m(i, j).real()), c.push_back(m(i, j).imag());
        re.push_back(r);
        im.push_back(c);
    }
    return {{"re", re}, {"im", im}};
}

inline ComplexMatrix matrix_from(const json& j) {
    const auto& re = j.at("re");
    const auto& im = j.at("im");
    if (!re.is_array() || re.size() != im.size() || re.empty()) throw ConfigurationError("malformed matrix");
    auto rows = static_cast<Eigen::Index>(re.size()), cols = static_cast<Eigen::Index>(re[0].size());
    ComplexMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        if (re[i].size() != static_cast<std::size_t>(cols) || im[i].size() != static_cast<std::size_t>(cols))
            throw ConfigurationError("ragged matrix");
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = cd(re[i][j].get<double>(), im[i][j].get<double>());
    }
    return m;
}

inline json waveform_json(const Waveform& w) {
    return std::visit(
        [](const auto& v) -> json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Constant>) return {{"kind", "constant"}, {"value", v.value}};
            else if constexpr (std::is_same_v<T, SinSquared>)
                return {{"kind", "sin2"}, {"peak", v.peak}, {"cycles", v.cycles}};
            else if constexpr (std::is_same_v<T, Tabulated>) return {{"kind", "table"}, {"samples", v.samples}};
            else
                return {{"kind", "fourier"}, {"base", waveform_json(*v.base)}, {"offset", v.offset},
                        {"coefficients", v.coefficients}};
        },
        w.variant());
}

inline Waveform waveform_from(const json& j) {
    std::string k = j.at("kind").get<std::string>();
    if (k == "constant") return Constant{j.at("value").get<double>()};
    if (k == "sin2") return SinSquared{j.at("peak").get<double>(), j.value("cycles", 1.0)};
    if (k == "table") return Tabulated{j.at("samples").get<std::vector<double>>()};
    if (k == "fourier")
        return FourierAugmented{std::make_shared<Waveform>(waveform_from(j.at("base"))), j.value("offset", 0.0),
                                j.at("coefficients").get<std::vector<double>>()};
    throw ConfigurationError("unknown waveform kind '" + k + "'");
}

}  // namespace detail

// Law phases are written as their parameters and re-tabulated from the segment drive on load.
inline json schedule_json(const PulseSchedule& s) {
    json segs = json::array();
    for (const auto& seg : s.segments) {
        json j{{"duration", seg.duration},
               {"label", seg.label},
               {"omega", detail::waveform_json(seg.omega)},
               {"delta", detail::waveform_json(seg.delta)}};
        if (seg.phase.is_law()) {
            const auto& l = seg.phase.law();
            j["phase"] = {{"kind", "law"},         {"offset", l.offset}, {"omega_coeff", l.omega_coeff},
                          {"delta_coeff", l.delta_coeff}, {"rate", l.rate},     {"intervals", seg.phase.law_intervals()}};
        } else {
            j["phase"] = detail::waveform_json(seg.phase.waveform());
        }
        if (seg.generator) j["generator"] = detail::matrix_json(*seg.generator);
        segs.push_back(j);
    }
    json pulses = json::array();
    for (const auto& p : s.pulses)
        pulses.push_back({{"segment", p.segment}, {"time", p.time}, {"unitary", detail::matrix_json(p.unitary)}});
    json out{{"format", "geomgate-schedule"},
             {"dim", s.dim},
             {"scheme", s.scheme},
             {"declared_area", s.declared_area},
             {"notes", s.notes},
             {"segments", segs},
             {"pulses", pulses}};
    if (s.static_term) out["static_term"] = detail::matrix_json(*s.static_term);
    return out;
}

inline PulseSchedule schedule_from_json(const json& j) {
    try {
        if (j.value("format", std::string()) != "geomgate-schedule") throw ConfigurationError("not a schedule document");
        PulseSchedule s;
        s.dim = j.at("dim").get<int>();
        s.scheme = j.value("scheme", std::string());
        s.declared_area = j.value("declared_area", 0.0);
        if (j.contains("notes")) s.notes = j.at("notes").get<std::map<std::string, std::string>>();
        for (const auto& js : j.at("segments")) {
            Segment seg;
            seg.duration = js.at("duration").get<double>();
            seg.label = js.value("label", std::string());
            seg.omega = detail::waveform_from(js.at("omega"));
            seg.delta = js.contains("delta") ? detail::waveform_from(js.at("delta")) : Waveform(Constant{0.0});
            const json& ph = js.contains("phase") ? js.at("phase") : json{{"kind", "constant"}, {"value", 0.0}};
            if (ph.at("kind") == "law") {
                IntegralLaw l{ph.at("offset").get<double>(), ph.at("omega_coeff").get<double>(),
                              ph.at("delta_coeff").get<double>(), ph.at("rate").get<double>()};
                seg.phase = Phase::integral_law(l, seg.omega, seg.delta, seg.duration,
                                                ph.value("intervals", std::size_t{4096}));
            } else {
                seg.phase = Phase(detail::waveform_from(ph));
            }
            if (js.contains("generator")) seg.generator = detail::matrix_from(js.at("generator"));
            s.segments.push_back(std::move(seg));
        }
        if (j.contains("pulses"))
            for (const auto& jp : j.at("pulses"))
                s.pulses.push_back({jp.at("segment").get<std::size_t>(), jp.at("time").get<double>(),
                                    detail::matrix_from(jp.at("unitary"))});
        if (j.contains("static_term")) s.static_term = detail::matrix_from(j.at("static_term"));
        s.validate();
        return s;
    } catch (const json::exception& e) {
        throw ConfigurationError(std::string("malformed schedule: ") + e.what());
    }
}

inline json bundle_json(const SchemeBundle& b) {
    json j{{"format", "geomgate-bundle"},
           {"scheme", b.scheme},
           {"target", b.target.name},
           {"chi0", b.chi0},
           {"xi0", b.xi0},
           {"params", b.params},
           {"expected_unitary", detail::matrix_json(b.expected_unitary)},
           {"schedule", schedule_json(b.schedule)}};
    if (b.isometry) j["isometry"] = detail::matrix_json(*b.isometry);
    return j;
}

inline SchemeBundle bundle_from_json(const json& j) {
    try {
        if (j.value("format", std::string()) != "geomgate-bundle") throw ConfigurationError("not a bundle document");
        SchemeBundle b;
        b.scheme = j.value("scheme", std::string());
        b.target.name = j.value("target", std::string());
        b.chi0 = j.value("chi0", 0.0);
        b.xi0 = j.value("xi0", 0.0);
        if (j.contains("params")) b.params = j.at("params").get<std::map<std::string, double>>();
        b.expected_unitary = detail::matrix_from(j.at("expected_unitary"));
        b.schedule = schedule_from_json(j.at("schedule"));
        if (j.contains("isometry")) b.isometry = detail::matrix_from(j.at("isometry"));
        Eigen::Index d = b.isometry ? b.isometry->cols() : b.schedule.dim;
        if (b.expected_unitary.rows() != d || !is_unitary(b.expected_unitary, 1e-8))
            throw ConfigurationError("bundle target is not a unitary of the right size");
        return b;
    } catch (const json::exception& e) {
        throw ConfigurationError(std::string("malformed bundle: ") + e.what());
    }
}

inline json read_json(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigurationError("cannot open " + path);
    try {
        return json::parse(f);
    } catch (const json::exception& e) {
        throw ConfigurationError(path + ": " + e.what());
    }
}

// ---------------------------------------------------------------- run configuration

struct RunConfig {
    std::string scheme = "orange-slice";
    SchemeRequest request;
    NoiseSpec noise;
    bool decoherence_lowering = true, decoherence_dephasing = true;
    double gamma = 0.0;
    std::size_t steps = 10000;
    double tolerance = 1e-6;
    std::optional<double> peak_mhz;  // physical peak for unit conversion; stored values stay dimensionless
    std::optional<SweepSpec> sweep;
    std::string out_dir = "out";
};

inline std::vector<LindbladChannel> channels_for(const RunConfig& c) {
    std::vector<LindbladChannel> ch;
    if (c.gamma <= 0) return ch;
    if (c.decoherence_lowering) ch.push_back({ChannelKind::Lowering, c.gamma, 0});
    if (c.decoherence_dephasing) ch.push_back({ChannelKind::Dephasing, c.gamma, 0});
    return ch;
}

namespace detail {

inline void strict_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) throw ConfigurationError(where + " must be an object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key())) throw ConfigurationError("unknown key '" + it.key() + "' in " + where);
}

}  // namespace detail

inline RunConfig config_from_json(const json& j) {
    using detail::strict_keys;
    try {
        strict_keys(j, {"scheme", "gate", "scheme_params", "waveform", "noise", "integrator", "sweep", "output"}, "config");
        RunConfig c;
        c.scheme = j.value("scheme", c.scheme);
        c.request.gate = j.value("gate", c.request.gate);
        if (j.contains("scheme_params")) c.request.params = j.at("scheme_params").get<std::map<std::string, double>>();
        if (j.contains("waveform")) {
            const auto& w = j.at("waveform");
            strict_keys(w, {"kind", "peak", "peak_mhz"}, "waveform");
            std::string k = w.value("kind", std::string("sin2"));
            if (k != "sin2" && k != "constant") throw ConfigurationError("waveform kind must be sin2 or constant");
            c.request.params["shape"] = k == "constant" ? 1.0 : 0.0;
            if (w.contains("peak") && w.contains("peak_mhz"))
                throw ConfigurationError("give either peak or peak_mhz");
            if (w.contains("peak")) c.request.params["peak"] = w.at("peak").get<double>();
            if (w.contains("peak_mhz")) {
                c.peak_mhz = w.at("peak_mhz").get<double>();
                if (!(*c.peak_mhz > 0)) throw ConfigurationError("peak_mhz must be positive");
                c.request.params["peak"] = 1.0;
            }
        }
        if (j.contains("noise")) {
            const auto& n = j.at("noise");
            strict_keys(n, {"epsilon", "delta", "variant", "gamma", "gamma_khz", "channels", "quasi_static_rate",
                            "quasi_static_reference_time", "quasi_static_collective"},
                        "noise");
            c.noise.epsilon = n.value("epsilon", 0.0);
            c.noise.delta = n.value("delta", 0.0);
            std::string v = n.value("variant", std::string("projector"));
            if (v != "projector" && v != "symmetric") throw ConfigurationError("noise variant must be projector or symmetric");
            c.noise.variant = v == "projector" ? ZVariant::Projector : ZVariant::Symmetric;
            if (n.contains("gamma") && n.contains("gamma_khz")) throw ConfigurationError("give either gamma or gamma_khz");
            c.gamma = n.value("gamma", 0.0);
            if (n.contains("gamma_khz")) {
                if (!c.peak_mhz) throw ConfigurationError("gamma_khz needs waveform.peak_mhz");
                c.gamma = n.at("gamma_khz").get<double>() * 1e3 / (*c.peak_mhz * 1e6);
            }
            std::string ch = n.value("channels", std::string("both"));
            if (ch != "both" && ch != "lowering" && ch != "dephasing")
                throw ConfigurationError("channels must be both, lowering or dephasing");
            c.decoherence_lowering = ch != "dephasing";
            c.decoherence_dephasing = ch != "lowering";
            c.noise.quasi_static_rate = n.value("quasi_static_rate", 0.0);
            c.noise.quasi_static_reference_time = n.value("quasi_static_reference_time", 1.0);
            c.noise.quasi_static_collective = n.value("quasi_static_collective", false);
            if (c.gamma < 0) throw ConfigurationError("gamma must be non-negative");
        }
        c.noise.channels = channels_for(c);
        if (j.contains("integrator")) {
            const auto& in = j.at("integrator");
            strict_keys(in, {"steps_per_segment", "tolerance"}, "integrator");
            long st = in.value("steps_per_segment", 10000L);
            if (st < 64) throw ConfigurationError("steps_per_segment must be at least 64");
            c.steps = static_cast<std::size_t>(st);
            c.tolerance = in.value("tolerance", 1e-6);
        }
        if (j.contains("sweep")) {
            const auto& s = j.at("sweep");
            strict_keys(s, {"axis", "values", "from", "to", "step", "metric", "label", "jobs"}, "sweep");
            SweepSpec sp;
            sp.axis = parse_axis(s.value("axis", std::string("epsilon")));
            if (s.contains("values")) sp.values = s.at("values").get<std::vector<double>>();
            else if (s.contains("from"))
                sp.values = linear_grid(s.at("from").get<double>(), s.at("to").get<double>(), s.at("step").get<double>());
            std::string m = s.value("metric", std::string("avg-gate-fidelity"));
            if (m != "avg-gate-fidelity") throw ConfigurationError("config sweeps support avg-gate-fidelity only");
            sp.label = s.value("label", std::string());
            sp.jobs = s.value("jobs", 1);
            c.sweep = sp;
        }
        if (j.contains("output")) {
            strict_keys(j.at("output"), {"dir"}, "output");
            c.out_dir = j.at("output").value("dir", c.out_dir);
        }
        return c;
    } catch (const json::exception& e) {
        throw ConfigurationError(std::string("malformed config: ") + e.what());
    }
}

}  // namespace geomgate
