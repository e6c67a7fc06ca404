#include "geomgate/schedule.hpp"

#include <gtest/gtest.h>

using namespace geomgate;

namespace {

Segment drive(double T, Waveform om, double phase = 0.0, Waveform de = Constant{0.0}) {
    Segment s;
    s.duration = T;
    s.omega = std::move(om);
    s.delta = std::move(de);
    s.phase = Constant{phase};
    return s;
}

PulseSchedule one(Segment s) {
    PulseSchedule p;
    p.segments.push_back(std::move(s));
    return p;
}

}  // namespace

TEST(Waveform, AnalyticIntegralsMatchQuadrature) {
    std::vector<Waveform> ws{Constant{0.7}, SinSquared{1.3, 1.0}, SinSquared{1.0, 0.5},
                             Tabulated{{0.0, 1.0, 0.5, 2.0}},
                             FourierAugmented{std::make_shared<Waveform>(SinSquared{1.0, 1.0}), 0.2, {0.3, -0.1}}};
    for (const auto& w : ws) {
        double T = 2.7;
        double q = simpson([&](double t) { return w.value(t, T); }, 0, T, 6000);
        EXPECT_NEAR(w.integral(T), q, 1e-9);
    }
}

TEST(Waveform, SinSquaredShape) {
    Waveform w = SinSquared{2.0, 1.0};
    EXPECT_NEAR(w.value(0.5, 1.0), 2.0, 1e-15);
    EXPECT_NEAR(w.value(0.0, 1.0), 0.0, 1e-15);
    EXPECT_NEAR(w.integral(3.0), 3.0, 1e-14);  // peak T / 2
    EXPECT_NEAR(w.peak(1.0), 2.0, 1e-12);
}

TEST(Waveform, ScalingIsLinear) {
    Waveform w = FourierAugmented{std::make_shared<Waveform>(SinSquared{1.0, 1.0}), 0.0, {0.4}};
    Waveform s = w.scaled(1.1);
    for (double t : {0.1, 0.4, 0.77}) EXPECT_NEAR(s.value(t, 1.0), 1.1 * w.value(t, 1.0), 1e-14);
    EXPECT_NEAR(s.integral(1.0), 1.1 * w.integral(1.0), 1e-14);
}

TEST(Waveform, TableValidation) {
    EXPECT_THROW(Waveform(Tabulated{{1.0}}), ValidationError);
    EXPECT_THROW(Waveform(FourierAugmented{nullptr, 0.0, {}}), ValidationError);
    Waveform t = Tabulated{{0.0, 2.0, 0.0}};
    EXPECT_NEAR(t.value(0.25, 1.0), 1.0, 1e-15);
    EXPECT_EQ(t.table_intervals(), 2u);
}

TEST(Phase, IntegralLawMatchesDirectIntegral) {
    Waveform om = SinSquared{1.0, 1.0}, de = Constant{0.3};
    IntegralLaw law{0.5, 2.0, -1.0, 0.1};
    double T = 4.0;
    Phase p = Phase::integral_law(law, om, de, T);
    for (double t : {0.0, 0.3, 1.7, 3.99, 4.0}) {
        double direct = 0.5 + 2.0 * simpson([&](double s) { return om.value(s, T); }, 0, t, 2000) - 0.3 * t + 0.1 * t;
        EXPECT_NEAR(p.value(t, T), direct, 1e-10) << t;
    }
    EXPECT_THROW(Phase::integral_law(law, om, de, 0.0), ValidationError);
}

TEST(Phase, LawIsFrozenUnderAmplitudeScaling) {
    Waveform om = SinSquared{1.0, 1.0};
    Phase p = Phase::integral_law({0.0, 1.0, 0.0, 0.0}, om, Constant{0.0}, 2.0);
    Segment s = drive(2.0, om);
    s.phase = p;
    s.omega = s.omega.scaled(1.2);
    EXPECT_NEAR(s.phase.value(2.0, 2.0), 1.0, 1e-10);  // still the nominal area
}

TEST(Schedule, HamiltonianForm) {
    auto s = one(drive(1.0, Constant{2.0}, 0.3, Constant{0.4}));
    ComplexMatrix h = hamiltonian_at(s, 0.5);
    EXPECT_NEAR(h(0, 0).real(), -0.2, 1e-15);
    EXPECT_NEAR(h(1, 1).real(), 0.2, 1e-15);
    EXPECT_NEAR(std::abs(h(0, 1) - std::exp(-I1 * 0.3)), 0.0, 1e-15);
    EXPECT_THROW(hamiltonian_at(s, 1.5), OutOfRangeError);
    EXPECT_THROW(hamiltonian_at(s, -0.1), OutOfRangeError);
}

TEST(Schedule, LocateAcrossSegments) {
    PulseSchedule p;
    p.segments = {drive(1.0, Constant{1.0}), drive(2.0, Constant{1.0})};
    auto [i, t] = locate(p, 1.5);
    EXPECT_EQ(i, 1u);
    EXPECT_NEAR(t, 0.5, 1e-15);
    EXPECT_EQ(locate(p, 3.0).first, 1u);
}

TEST(Schedule, ValidationErrors) {
    PulseSchedule p;
    EXPECT_THROW(p.validate(), ValidationError);
    p = one(drive(-1.0, Constant{1.0}));
    EXPECT_THROW(p.validate(), ValidationError);
    p = one(drive(1.0, Constant{1.0}));
    p.pulses.push_back({3, 0.0, ComplexMatrix::Identity(2, 2)});
    EXPECT_THROW(p.validate(), ValidationError);
    p.pulses = {{0, 0.5, 2.0 * ComplexMatrix::Identity(2, 2)}};
    EXPECT_THROW(p.validate(), ValidationError);
    p.pulses.clear();
    p.static_term = ComplexMatrix(pauli_y() * I1);
    EXPECT_THROW(p.validate(), ValidationError);
}

TEST(Schedule, AreaAndStretch) {
    PulseSchedule p;
    p.segments = {drive(pi, SinSquared{1.0, 1.0}), drive(2.0, Constant{0.5})};
    EXPECT_NEAR(schedule_area(p), pi / 2 + 1.0, 1e-9);
    PulseSchedule q = stretched(p, 3.0);
    EXPECT_NEAR(q.total_time(), 3 * p.total_time(), 1e-12);
    EXPECT_NEAR(schedule_area(q), schedule_area(p), 1e-9);
    EXPECT_THROW(stretched(p, 0.0), ValidationError);
}

TEST(Schedule, ConcatenateKeepsOrder) {
    auto a = one(drive(1.0, Constant{1.0}, 0.0));
    auto b = one(drive(2.0, Constant{1.0}, 1.0));
    auto c = concatenate({a, b});
    ASSERT_EQ(c.segments.size(), 2u);
    EXPECT_NEAR(c.total_time(), 3.0, 1e-15);
    EXPECT_NEAR(c.segments[1].phase.value(0, 2.0), 1.0, 1e-15);
}

TEST(Schedule, AlignedIntervals) {
    EXPECT_EQ(aligned_intervals(10000, 0), 10000u);
    EXPECT_EQ(aligned_intervals(10000, 4096) % 4096, 0u);
    EXPECT_GE(aligned_intervals(10000, 4096), 10000u);
}
