#pragma once

#include "geomgate/types.hpp"

#include <algorithm>
#include <memory>
#include <variant>
#include <vector>

namespace geomgate {

class Waveform;

struct Constant {
    double value = 0.0;
};

// peak * sin^2(pi * cycles * t / T). cycles = 1 is a full bump, 0.5 a ramp.
struct SinSquared {
    double peak = 0.0;
    double cycles = 1.0;
};

// Uniform samples over [0, T], endpoints included, linearly interpolated.
struct Tabulated {
    std::vector<double> samples;
};

// base(t) + offset + sum_k a_k sin(k pi t / T).
struct FourierAugmented {
    std::shared_ptr<const Waveform> base;
    double offset = 0.0;
    std::vector<double> coefficients;
};

class Waveform {
public:
    using Variant = std::variant<Constant, SinSquared, Tabulated, FourierAugmented>;

    Waveform() : v_(Constant{0.0}) {}
    Waveform(Constant c) : v_(c) {}
    Waveform(SinSquared s) : v_(s) {}
    Waveform(Tabulated t) : v_(std::move(t)) { check_table(); }
    Waveform(FourierAugmented f) : v_(std::move(f)) {
        if (!std::get<FourierAugmented>(v_).base)
            throw ValidationError("Fourier waveform needs a base");
    }

    const Variant& variant() const { return v_; }

    double value(double t, double T) const {
        return std::visit([&](const auto& w) { return eval(w, t, T); }, v_);
    }

    double integral(double T) const {
        return std::visit([&](const auto& w) { return area(w, T); }, v_);
    }

    // Largest |value| over [0, T].
    double peak(double T) const {
        return std::visit([&](const auto& w) { return max_abs(w, T); }, v_);
    }

    Waveform scaled(double s) const {
        return std::visit([&](const auto& w) { return scale(w, s); }, v_);
    }

    bool is_zero() const {
        if (auto c = std::get_if<Constant>(&v_)) return c->value == 0.0;
        if (auto s = std::get_if<SinSquared>(&v_)) return s->peak == 0.0;
        if (auto t = std::get_if<Tabulated>(&v_))
            return std::all_of(t->samples.begin(), t->samples.end(), [](double x) { return x == 0.0; });
        return false;
    }

    // Number of linear-interpolation intervals, or 0 for analytic shapes.
    std::size_t table_intervals() const {
        if (auto t = std::get_if<Tabulated>(&v_)) return t->samples.size() - 1;
        if (auto f = std::get_if<FourierAugmented>(&v_)) return f->base->table_intervals();
        return 0;
    }

private:
    Variant v_;

    void check_table() const {
        const auto& s = std::get<Tabulated>(v_).samples;
        if (s.size() < 2) throw ValidationError("tabulated waveform needs at least two samples");
        for (double x : s)
            if (!std::isfinite(x)) throw ValidationError("tabulated waveform has a non-finite sample");
    }

    static double eval(const Constant& c, double, double) { return c.value; }
    static double eval(const SinSquared& s, double t, double T) {
        double x = std::sin(pi * s.cycles * t / T);
        return s.peak * x * x;
    }
    static double eval(const Tabulated& tab, double t, double T) {
        const auto& s = tab.samples;
        std::size_t n = s.size() - 1;
        double u = std::clamp(t / T, 0.0, 1.0) * static_cast<double>(n);
        std::size_t i = std::min(static_cast<std::size_t>(u), n - 1);
        double f = u - static_cast<double>(i);
        return s[i] + f * (s[i + 1] - s[i]);
    }
    static double eval(const FourierAugmented& f, double t, double T) {
        double v = f.base->value(t, T) + f.offset;
        for (std::size_t k = 0; k < f.coefficients.size(); ++k)
            v += f.coefficients[k] * std::sin(static_cast<double>(k + 1) * pi * t / T);
        return v;
    }

    static double area(const Constant& c, double T) { return c.value * T; }
    static double area(const SinSquared& s, double T) {
        double w = 2 * pi * s.cycles;
        return s.peak * (T / 2.0 - T * std::sin(w) / (2.0 * w));
    }
    static double area(const Tabulated& tab, double T) {
        const auto& s = tab.samples;
        double h = T / static_cast<double>(s.size() - 1), acc = 0.0;
        for (std::size_t i = 0; i + 1 < s.size(); ++i) acc += 0.5 * (s[i] + s[i + 1]);
        return acc * h;
    }
    static double area(const FourierAugmented& f, double T) {
        double v = f.base->integral(T) + f.offset * T;
        for (std::size_t k = 0; k < f.coefficients.size(); ++k) {
            double kk = static_cast<double>(k + 1);
            v += f.coefficients[k] * T * (1.0 - std::cos(kk * pi)) / (kk * pi);
        }
        return v;
    }

    static double max_abs(const Constant& c, double) { return std::abs(c.value); }
    static double max_abs(const SinSquared& s, double) {
        return s.cycles >= 0.5 ? std::abs(s.peak) : std::abs(s.peak) * std::pow(std::sin(pi * s.cycles), 2);
    }
    static double max_abs(const Tabulated& tab, double) {
        double m = 0.0;
        for (double x : tab.samples) m = std::max(m, std::abs(x));
        return m;
    }
    static double max_abs(const FourierAugmented& f, double T) {
        double m = 0.0;
        for (int i = 0; i <= 4096; ++i) m = std::max(m, std::abs(eval(f, T * i / 4096.0, T)));
        return m;
    }

    static Waveform scale(const Constant& c, double s) { return Constant{c.value * s}; }
    static Waveform scale(const SinSquared& w, double s) { return SinSquared{w.peak * s, w.cycles}; }
    static Waveform scale(const Tabulated& tab, double s) {
        Tabulated out = tab;
        for (double& x : out.samples) x *= s;
        return out;
    }
    static Waveform scale(const FourierAugmented& f, double s) {
        FourierAugmented out{std::make_shared<Waveform>(f.base->scaled(s)), f.offset * s, f.coefficients};
        for (double& a : out.coefficients) a *= s;
        return out;
    }
};

// Phase given by phi(t) = offset + omega_coeff * int_0^t Omega + delta_coeff * int_0^t Delta + rate * t.
// The cumulative integral is tabulated once from the nominal drive, so scaling the
// amplitude afterwards (an amplitude error) leaves the phase program untouched.
struct IntegralLaw {
    double offset = 0.0;
    double omega_coeff = 0.0;
    double delta_coeff = 0.0;
    double rate = 0.0;
};

class Phase {
public:
    Phase() : wave_(Constant{0.0}) {}
    Phase(Waveform w) : wave_(std::move(w)) {}
    Phase(Constant c) : wave_(Waveform(c)) {}

    static Phase integral_law(const IntegralLaw& law, const Waveform& omega, const Waveform& delta,
                              double duration, std::size_t intervals = 4096) {
        if (!(duration > 0)) throw ValidationError("integral-law phase needs a positive duration");
        Phase p;
        p.law_ = law;
        auto tab = std::make_shared<LawTable>();
        tab->values.resize(intervals + 1);
        tab->slopes.resize(intervals + 1);
        double h = duration / static_cast<double>(intervals);
        auto g = [&](double t) {
            return law.omega_coeff * omega.value(t, duration) + law.delta_coeff * delta.value(t, duration) +
                   law.rate;
        };
        double acc = 0.0;
        tab->values[0] = 0.0;
        tab->slopes[0] = g(0.0) * duration;
        constexpr int sub = 8;
        for (std::size_t i = 0; i < intervals; ++i) {
            double a = h * static_cast<double>(i), hs = h / sub, part = g(a) + g(a + h);
            for (int k = 1; k < sub; ++k) part += (k % 2 ? 4.0 : 2.0) * g(a + k * hs);
            acc += part * hs / 3.0;
            tab->values[i + 1] = acc;
            tab->slopes[i + 1] = g(a + h) * duration;
        }
        p.table_ = tab;
        return p;
    }

    bool is_law() const { return static_cast<bool>(table_); }
    const IntegralLaw& law() const { return law_; }
    std::size_t law_intervals() const { return table_ ? table_->values.size() - 1 : 0; }
    const Waveform& waveform() const { return wave_; }

    double value(double t, double T) const {
        if (!table_) return wave_.value(t, T);
        // Cubic Hermite on the fractional time u = t/T, slopes in d/du units.
        std::size_t n = table_->values.size() - 1;
        double u = std::clamp(t / T, 0.0, 1.0) * static_cast<double>(n);
        std::size_t i = std::min(static_cast<std::size_t>(u), n - 1);
        double s = u - static_cast<double>(i), du = 1.0 / static_cast<double>(n);
        double y0 = table_->values[i], y1 = table_->values[i + 1];
        double m0 = table_->slopes[i] * du, m1 = table_->slopes[i + 1] * du;
        double s2 = s * s, s3 = s2 * s;
        return law_.offset + (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * m0 + (-2 * s3 + 3 * s2) * y1 +
               (s3 - s2) * m1;
    }

    std::size_t table_intervals() const { return table_ ? 0 : wave_.table_intervals(); }

private:
    struct LawTable {
        std::vector<double> values;
        std::vector<double> slopes;
    };
    Waveform wave_;
    IntegralLaw law_{};
    std::shared_ptr<const LawTable> table_;
};

}  // namespace geomgate
