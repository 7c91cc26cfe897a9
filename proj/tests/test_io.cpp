// JSON serialization: shape documents round-trip losslessly, report views
// carry the documented fields, and malformed documents are rejected with
// std::invalid_argument before any computation could run.

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "newtres/billiard.hpp"
#include "newtres/body.hpp"
#include "newtres/cavity.hpp"
#include "newtres/optimize.hpp"
#include "newtres/resistance.hpp"
#include "newtres/serialize.hpp"

namespace {

using namespace newtres;

constexpr double kRoot2 = std::numbers::sqrt2;

TEST(ShapeJson, DoubleParabolaRoundTripsBitwise) {
    CavityShape original = make_double_parabola(kRoot2, -0.125);
    CavityShape copy = shape_from_json(shape_to_json(original));

    EXPECT_EQ(copy.name, original.name);
    ASSERT_EQ(copy.parameters.size(), original.parameters.size());
    for (std::size_t i = 0; i < original.parameters.size(); ++i) {
        EXPECT_EQ(copy.parameters[i].first, original.parameters[i].first);
        EXPECT_EQ(copy.parameters[i].second, original.parameters[i].second);
    }
    ASSERT_EQ(copy.arcs.size(), original.arcs.size());
    for (std::size_t i = 0; i < original.arcs.size(); ++i) {
        const auto& a = std::get<ParabolaArc>(original.arcs[i]);
        const auto& b = std::get<ParabolaArc>(copy.arcs[i]);
        EXPECT_EQ(b.a, a.a);
        EXPECT_EQ(b.b, a.b);
        EXPECT_EQ(b.c, a.c);
        EXPECT_EQ(b.y_start, a.y_start);
        EXPECT_EQ(b.y_end, a.y_end);
    }
}

TEST(ShapeJson, TextRoundTripPreservesResistanceBitwise) {
    CavityShape original = make_double_parabola(kRoot2, 0.0);
    std::string text = shape_to_json(original).dump();
    CavityShape copy = shape_from_json_text(text);

    QuadratureSpec spec;
    spec.n_x = spec.n_phi = 100;
    EXPECT_EQ(cavity_resistance(copy, spec).value, cavity_resistance(original, spec).value);
}

TEST(ShapeJson, MixedChainRoundTrips) {
    CavityShape original = make_rectangle(2.5);
    CavityShape copy = shape_from_json(shape_to_json(original));
    ASSERT_EQ(copy.arcs.size(), 3u);
    for (std::size_t i = 0; i < 3; ++i) {
        const auto& a = std::get<SegmentArc>(original.arcs[i]);
        const auto& b = std::get<SegmentArc>(copy.arcs[i]);
        EXPECT_EQ(b.p0.x, a.p0.x);
        EXPECT_EQ(b.p0.y, a.p0.y);
        EXPECT_EQ(b.p1.x, a.p1.x);
        EXPECT_EQ(b.p1.y, a.p1.y);
    }
}

TEST(ShapeJson, GoldenFlatDocument) {
    std::string dumped = shape_to_json(make_flat()).dump();
    EXPECT_EQ(dumped,
              "{\"name\":\"flat\",\"parameters\":{},"
              "\"arcs\":[{\"kind\":\"line-segment\",\"p0\":[-0.5,0.0],\"p1\":[0.5,0.0]}]}");
}

TEST(ShapeJson, ParabolaArcCarriesOrientationAndTraversalOrder) {
    json j = shape_to_json(make_double_parabola(kRoot2, 0.0));
    const json& right = j["arcs"][1];
    EXPECT_EQ(right["kind"], "parabola-piece");
    EXPECT_EQ(right["orientation"], "x-of-y");
    // Right wall is walked apex -> opening, so the range runs downward.
    EXPECT_DOUBLE_EQ(right["range"][0].get<double>(), kRoot2);
    EXPECT_DOUBLE_EQ(right["range"][1].get<double>(), 0.0);
}

TEST(ShapeJson, RejectsMalformedDocuments) {
    EXPECT_THROW(shape_from_json(json::array()), std::invalid_argument);
    EXPECT_THROW(shape_from_json(json::object()), std::invalid_argument);  // no arcs
    EXPECT_THROW(shape_from_json_text("not json at all"), std::invalid_argument);

    json good = shape_to_json(make_flat());

    json j = good;
    j["arcs"][0].erase("kind");
    EXPECT_THROW(shape_from_json(j), std::invalid_argument);

    j = good;
    j["arcs"][0]["kind"] = "circle-arc";
    EXPECT_THROW(shape_from_json(j), std::invalid_argument);

    j = good;
    j["arcs"][0].erase("p1");
    EXPECT_THROW(shape_from_json(j), std::invalid_argument);

    j = good;
    j["arcs"][0]["p0"] = json::array({-0.5});
    EXPECT_THROW(shape_from_json(j), std::invalid_argument);

    j = good;
    j["arcs"][0]["p0"][0] = "west";
    EXPECT_THROW(shape_from_json(j), std::invalid_argument);

    j = good;
    j["parameters"] = json::array();
    EXPECT_THROW(shape_from_json(j), std::invalid_argument);

    json par = shape_to_json(make_double_parabola(1.0, 0.0));
    j = par;
    j["arcs"][0]["orientation"] = "y-of-x";
    EXPECT_THROW(shape_from_json(j), std::invalid_argument);

    j = par;
    j["arcs"][0].erase("range");
    EXPECT_THROW(shape_from_json(j), std::invalid_argument);

    j = par;
    j["arcs"][0]["range"] = json::array({0.0, 0.5, 1.0});
    EXPECT_THROW(shape_from_json(j), std::invalid_argument);
}

TEST(ShapeJson, RejectsStructurallySoundButInvalidShapes) {
    // Well-formed document whose chain has a gap: caught by shape validation.
    json j = json::object();
    j["arcs"] = json::array();
    j["arcs"].push_back(
        json{{"kind", "line-segment"}, {"p0", {-0.5, 0.0}}, {"p1", {0.0, 0.5}}});
    j["arcs"].push_back(
        json{{"kind", "line-segment"}, {"p0", {0.1, 0.5}}, {"p1", {0.5, 0.0}}});
    try {
        shape_from_json(j);
        FAIL() << "expected invalid_argument";
    } catch (const std::invalid_argument& e) {
        EXPECT_NE(std::string(e.what()).find("chain-discontinuity"), std::string::npos);
    }
}

TEST(ReportJson, ResistanceFieldsAndOptionalGap) {
    ResistanceResult r;
    r.value = 1.25;
    r.n_x = 400;
    r.n_phi = 400;
    r.trapped = 0;
    json j = resistance_to_json(r);
    EXPECT_EQ(j.dump(), "{\"value\":1.25,\"n_x\":400,\"n_phi\":400,\"trapped\":0}");

    r.convergence_gap = 3.5e-5;
    j = resistance_to_json(r);
    ASSERT_TRUE(j.contains("convergence_gap"));
    EXPECT_DOUBLE_EQ(j["convergence_gap"].get<double>(), 3.5e-5);
}

TEST(ReportJson, TrajectoryCarriesRadiansDegreesAndStatus) {
    CavityShape flat = make_flat();
    double phi = 30.0 * std::numbers::pi / 180.0;
    Trajectory t = trace(flat, {0.25, phi});
    json j = trajectory_to_json(t);

    EXPECT_DOUBLE_EQ(j["entry"]["x"].get<double>(), 0.25);
    EXPECT_DOUBLE_EQ(j["entry"]["phi"].get<double>(), phi);
    EXPECT_NEAR(j["entry"]["phi_deg"].get<double>(), 30.0, 1e-12);
    EXPECT_EQ(j["reflections"].get<int>(), 1);
    EXPECT_DOUBLE_EQ(j["exit_phi"].get<double>(), t.exit_phi);
    EXPECT_NEAR(j["exit_phi_deg"].get<double>(), -30.0, 1e-9);
    EXPECT_EQ(j["status"], "exited");
    EXPECT_EQ(j["perturbed"].get<bool>(), t.perturbed);
    ASSERT_EQ(j["points"].size(), t.points.size());
    EXPECT_DOUBLE_EQ(j["points"][0][0].get<double>(), t.points[0].x);
    EXPECT_DOUBLE_EQ(j["points"][0][1].get<double>(), t.points[0].y);
}

TEST(ReportJson, TrappedTrajectorySerializesNullExitAngle) {
    Trajectory t;
    t.entry = {0.0, 0.0};
    t.status = TrajectoryStatus::trapped;
    t.reflections = 1000;
    json j = trajectory_to_json(t);
    EXPECT_TRUE(j["exit_phi"].is_null());
    EXPECT_TRUE(j["exit_phi_deg"].is_null());
    EXPECT_EQ(j["status"], "trapped");
}

TEST(ReportJson, StatsHistogramKeysAreReflectionCounts) {
    StatsTable st = reflection_stats(make_double_parabola(kRoot2, 0.0), 40, 40);
    json j = stats_to_json(st);
    EXPECT_EQ(j["grid_nx"].get<int>(), 40);
    EXPECT_EQ(j["grid_nphi"].get<int>(), 40);
    EXPECT_EQ(j["min_reflections"].get<int>(), st.min_reflections);
    long long total = 0;
    for (const auto& [key, cells] : j["histogram"].items()) {
        EXPECT_GE(std::stoi(key), st.min_reflections);
        total += cells.get<long long>();
    }
    EXPECT_EQ(total + st.trapped + st.errors, 40LL * 40LL);
}

TEST(ReportJson, BodyReportIncludesCompositionInputs) {
    BodySpec spec;
    spec.n_cavities = 42;
    BodyResistance r = body_resistance(spec, 1.4965);
    json j = body_to_json(spec, r);
    EXPECT_EQ(j["n"].get<int>(), 42);
    EXPECT_DOUBLE_EQ(j["eps_over_r"].get<double>(), 2.0 * std::numbers::pi / 42.0);
    EXPECT_DOUBLE_EQ(j["perimeter_ratio"].get<double>(), r.perimeter_ratio);
    EXPECT_DOUBLE_EQ(j["value"].get<double>(), r.value);
    EXPECT_DOUBLE_EQ(j["approx_value"].get<double>(), r.approx_value);
}

TEST(ReportJson, OptimizationSummaryAndFullHistory) {
    ParamDomain domain{{"h"}, {0.0}, {4.0}};
    auto objective = [](const std::vector<double>& p) {
        return -(p[0] - 2.0) * (p[0] - 2.0);
    };
    OptimizationResult r = nelder_mead(objective, domain, {1.0}, {});

    json summary = optimization_to_json(r);
    EXPECT_EQ(summary["method"], "nelder-mead");
    EXPECT_EQ(summary["evaluations"].get<long long>(), r.evaluations);
    EXPECT_EQ(summary["converged"].get<bool>(), r.converged);
    EXPECT_EQ(summary["history_length"].get<std::size_t>(), r.history.size());
    EXPECT_FALSE(summary.contains("history"));

    json full = optimization_to_json(r, true);
    ASSERT_EQ(full["history"].size(), r.history.size());
    EXPECT_DOUBLE_EQ(full["history"][0]["value"].get<double>(), r.history[0].second);
    EXPECT_FALSE(full.contains("history_length"));
}

}  // namespace
