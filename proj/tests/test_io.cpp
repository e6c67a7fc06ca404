#include "geomgate/io.hpp"
#include "geomgate/registry.hpp"

#include <gtest/gtest.h>

using namespace geomgate;

namespace {

ComplexMatrix run(const PulseSchedule& s) { return propagate_unitary(s, 4000, false).final_operator; }

}  // namespace

TEST(ScheduleJson, RoundTripKeepsTheGate) {
    std::vector<SchemeBundle> all{orange_slice(0.7, 0.3, 1.1), toc(pi / 2, "x"), oct('z', -pi / 4, 1.0),
                                  dyn_corrected(pi / 4, 0, pi / 2), dog_reference()};
    for (const auto& b : all) {
        json j = json::parse(schedule_json(b.schedule).dump());
        PulseSchedule back = schedule_from_json(j);
        EXPECT_EQ(back.segments.size(), b.schedule.segments.size());
        EXPECT_LT((run(back) - run(b.schedule)).cwiseAbs().maxCoeff(), 1e-10) << b.scheme;
    }
}

TEST(ScheduleJson, IntegralLawIsStoredAsLaw) {
    Segment s;
    s.duration = 2.0;
    s.omega = SinSquared{1.0, 1.0};
    s.delta = Constant{0.2};
    s.phase = Phase::integral_law({0.1, 0.5, -1.0, 0.3}, s.omega, s.delta, s.duration, 1024);
    PulseSchedule p;
    p.segments.push_back(s);
    json j = schedule_json(p);
    EXPECT_EQ(j["segments"][0]["phase"]["kind"], "law");
    EXPECT_LT((run(schedule_from_json(j)) - run(p)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(BundleJson, EncodedBundleRoundTrip) {
    auto b = dd_logical(pi / 2, pi / 2);
    SchemeBundle back = bundle_from_json(json::parse(bundle_json(b).dump()));
    ASSERT_TRUE(back.isometry);
    EXPECT_EQ(back.schedule.dim, 8);
    EXPECT_EQ(back.schedule.pulses.size(), b.schedule.pulses.size());
    EXPECT_LT((run(back.schedule) - run(b.schedule)).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LT((back.expected_unitary - b.expected_unitary).norm(), 1e-15);
}

TEST(BundleJson, RejectsBadDocuments) {
    auto j = bundle_json(orange_slice(0, 0, 1.0));
    j["expected_unitary"]["re"][0][0] = 3.0;
    EXPECT_THROW(bundle_from_json(j), ConfigurationError);
    EXPECT_THROW(bundle_from_json(json{{"format", "something"}}), ConfigurationError);
    auto s = schedule_json(orange_slice(0, 0, 1.0).schedule);
    s["segments"][0].erase("duration");
    EXPECT_THROW(schedule_from_json(s), ConfigurationError);
    s = schedule_json(orange_slice(0, 0, 1.0).schedule);
    s["segments"][0]["duration"] = -1.0;
    EXPECT_THROW(schedule_from_json(s), ValidationError);
    EXPECT_THROW(read_json("/nonexistent/x.json"), ConfigurationError);
}

TEST(Config, StrictKeys) {
    EXPECT_THROW(config_from_json(json{{"shceme", "toc"}}), ConfigurationError);
    EXPECT_THROW(config_from_json(json{{"noise", {{"eps", 0.1}}}}), ConfigurationError);
    EXPECT_THROW(config_from_json(json{{"integrator", {{"steps_per_segment", 10}}}}), ConfigurationError);
    EXPECT_THROW(config_from_json(json{{"sweep", {{"metric", "leakage"}}}}), ConfigurationError);
    EXPECT_THROW(config_from_json(json{{"noise", {{"epsilon", "big"}}}}), ConfigurationError);
}

TEST(Config, PhysicalUnitsAndChannels) {
    auto c = config_from_json(json::parse(R"({
        "scheme": "orange-slice", "gate": "S",
        "waveform": {"kind": "sin2", "peak_mhz": 15.0},
        "noise": {"gamma_khz": 3.0, "channels": "dephasing"},
        "sweep": {"axis": "epsilon", "from": -0.1, "to": 0.1, "step": 0.05, "label": "conv"}
    })"));
    EXPECT_NEAR(c.gamma, 3e3 / 15e6, 1e-18);
    ASSERT_EQ(c.noise.channels.size(), 1u);
    EXPECT_EQ(c.noise.channels[0].kind, ChannelKind::Dephasing);
    ASSERT_TRUE(c.sweep);
    EXPECT_EQ(c.sweep->values.size(), 5u);
    EXPECT_THROW(config_from_json(json{{"noise", {{"gamma_khz", 3.0}}}}), ConfigurationError);
    auto d = config_from_json(json{{"noise", {{"gamma", 2e-4}}}});
    EXPECT_EQ(d.noise.channels.size(), 2u);
}
