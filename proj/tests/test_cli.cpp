// End-to-end tests of the command-line binary: spec'd values come out of the
// advertised invocations, validation failures exit 2, outputs are reproducible
// byte for byte, and --threads never changes the numbers.
//
// The binary path arrives through the NEWTRES_CLI_PATH compile definition.

#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "newtres/cavity.hpp"
#include "newtres/serialize.hpp"

namespace {

using newtres::json;

constexpr double kRoot2 = std::numbers::sqrt2;

struct CliResult {
    int exit_code = -1;
    std::string out;
};

CliResult run_cli(const std::string& args) {
    std::string cmd = std::string(NEWTRES_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return {};
    CliResult r;
    char buf[4096];
    size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
    int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

json parse(const CliResult& r) {
    json j = json::parse(r.out, nullptr, false);
    EXPECT_FALSE(j.is_discarded()) << "stdout was not JSON: " << r.out;
    return j;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

TEST(CliResistance, FlatCavityGivesExactlyOne) {
    CliResult r = run_cli("resistance --shape flat --n 1000");
    ASSERT_EQ(r.exit_code, 0);
    json j = parse(r);
    EXPECT_NEAR(j["value"].get<double>(), 1.0, 1e-6);
    EXPECT_EQ(j["n_x"].get<int>(), 1000);
    EXPECT_EQ(j["trapped"].get<long long>(), 0);
}

TEST(CliResistance, ToleranceModeHitsTheDoubleParabolaValue) {
    CliResult r =
        run_cli("resistance --shape double-parabola --h 1.41421356 --beta 0 --tol 1e-4");
    ASSERT_EQ(r.exit_code, 0);
    json j = parse(r);
    EXPECT_NEAR(j["value"].get<double>(), 1.4965, 2e-4);
    EXPECT_TRUE(j.contains("convergence_gap"));
    EXPECT_LT(j["convergence_gap"].get<double>(), 1e-4);
}

TEST(CliResistance, NegativeDepthIsAUsageError) {
    EXPECT_EQ(run_cli("resistance --shape rectangle --depth -1").exit_code, 2);
}

TEST(CliResistance, UnknownShapeAndSubcommandAreUsageErrors) {
    EXPECT_EQ(run_cli("resistance --shape dodecagon").exit_code, 2);
    EXPECT_EQ(run_cli("frobnicate").exit_code, 2);
}

TEST(CliTrace, CornerRayReflectsThreeTimesAndRetroreflects) {
    std::string svg_path = testing::TempDir() + "cli_traj.svg";
    CliResult r = run_cli(
        "trace --shape double-parabola --h 1.41421356 --beta 0 --x 0.45 --phi-deg 75 --svg " +
        svg_path);
    ASSERT_EQ(r.exit_code, 0);
    json j = parse(r);
    EXPECT_EQ(j["reflections"].get<int>(), 3);
    EXPECT_EQ(j["status"], "exited");
    EXPECT_NEAR(j["exit_phi_deg"].get<double>(), 75.0, 0.5);
    std::string svg = slurp(svg_path);
    EXPECT_NE(svg.find("<svg"), std::string::npos);
    EXPECT_NE(svg.find("polyline"), std::string::npos);
    std::remove(svg_path.c_str());
}

TEST(CliTrace, OutOfRangeEntriesAreUsageErrors) {
    EXPECT_EQ(run_cli("trace --shape flat --x 0.6 --phi-deg 0").exit_code, 2);
    EXPECT_EQ(run_cli("trace --shape flat --x 0.2 --phi-deg 95").exit_code, 2);
}

TEST(CliDeterminism, RepeatInvocationsAreByteIdentical) {
    std::string args = "resistance --shape triangle --n 400";
    CliResult a = run_cli(args);
    CliResult b = run_cli(args);
    ASSERT_EQ(a.exit_code, 0);
    EXPECT_EQ(a.out, b.out);
}

TEST(CliDeterminism, ThreadCountDoesNotChangeTheNumbers) {
    CliResult one = run_cli("resistance --shape triangle --n 400 --threads 1");
    CliResult four = run_cli("resistance --shape triangle --n 400 --threads 4");
    ASSERT_EQ(one.exit_code, 0);
    ASSERT_EQ(four.exit_code, 0);
    EXPECT_EQ(one.out, four.out);
}

TEST(CliBody, FortyTwoCavitiesGiveTheTabulatedValue) {
    CliResult r = run_cli("body --n 42");
    ASSERT_EQ(r.exit_code, 0);
    json j = parse(r);
    EXPECT_NEAR(j["value"].get<double>(), 1.4951, 5e-4);
    // Composition identity: value = ratio * cavity_value exactly.
    EXPECT_DOUBLE_EQ(j["value"].get<double>(),
                     j["perimeter_ratio"].get<double>() * j["cavity_value"].get<double>());
}

TEST(CliStats, NoTrajectoryExitsInFewerThanThreeReflections) {
    CliResult r = run_cli("stats --shape double-parabola --h 1.41421356 --beta 0 --grid 200");
    ASSERT_EQ(r.exit_code, 0);
    json j = parse(r);
    EXPECT_EQ(j["min_reflections"].get<int>(), 3);
    EXPECT_EQ(j["trapped"].get<long long>(), 0);
    EXPECT_EQ(j["errors"].get<long long>(), 0);
}

TEST(CliSweep, WritesCsvAndReportsTheArgmaxNearestRootTwo) {
    std::string csv_path = testing::TempDir() + "cli_sweep.csv";
    CliResult r =
        run_cli("sweep --h-range 1.2 1.6 --h-steps 9 --n 100 --out " + csv_path);
    ASSERT_EQ(r.exit_code, 0);
    json j = parse(r);
    EXPECT_EQ(j["rows"].get<int>(), 9);
    // Grid 1.2, 1.25, ..., 1.6: the point nearest sqrt(2) is 1.4.
    EXPECT_NEAR(j["argmax"]["h"].get<double>(), 1.4, 1e-9);
    std::string csv = slurp(csv_path);
    EXPECT_EQ(csv.substr(0, 4), "h,R\n");
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 10);
    std::remove(csv_path.c_str());
}

TEST(CliSweep, MissingRangesAreAUsageError) {
    EXPECT_EQ(run_cli("sweep --out /tmp/unused.csv").exit_code, 2);
}

TEST(CliOptimize, FindsTheKnownOptimumAndWritesHistory) {
    std::string hist_path = testing::TempDir() + "cli_hist.json";
    CliResult r = run_cli("optimize --method nelder-mead --h-range 0.5 3 --beta-range -1 1 "
                          "--n 200 --out " +
                          hist_path);
    ASSERT_EQ(r.exit_code, 0);
    json j = parse(r);
    EXPECT_NEAR(j["best"]["h"].get<double>(), kRoot2, 0.01);
    EXPECT_NEAR(j["best"]["beta"].get<double>(), 0.0, 0.01);
    EXPECT_GT(j["best_value"].get<double>(), 1.49);
    EXPECT_TRUE(j["converged"].get<bool>());
    json hist = json::parse(slurp(hist_path), nullptr, false);
    ASSERT_FALSE(hist.is_discarded());
    EXPECT_EQ(hist["history"].size(), j["evaluations"].get<std::size_t>());
    std::remove(hist_path.c_str());
    EXPECT_EQ(run_cli("optimize --method bogus").exit_code, 2);
}

TEST(CliShapeFile, RoundTripsThroughADocumentBitwise) {
    std::string path = testing::TempDir() + "cli_dp.json";
    std::ofstream(path) << newtres::shape_to_json(
                               newtres::make_double_parabola(kRoot2, 0.0))
                               .dump();
    CliResult from_file = run_cli("resistance --shape file:" + path + " --n 200");
    CliResult direct = run_cli("resistance --shape double-parabola --h 1.4142135623730951 "
                               "--beta 0 --n 200");
    ASSERT_EQ(from_file.exit_code, 0);
    ASSERT_EQ(direct.exit_code, 0);
    EXPECT_EQ(parse(from_file)["value"].get<double>(), parse(direct)["value"].get<double>());
    std::remove(path.c_str());
}

TEST(CliShapeFile, BadDocumentsAreUsageErrors) {
    std::string path = testing::TempDir() + "cli_bad.json";
    std::ofstream(path) << "{]";
    EXPECT_EQ(run_cli("resistance --shape file:" + path).exit_code, 2);
    std::remove(path.c_str());
    EXPECT_EQ(run_cli("resistance --shape file:/nonexistent/shape.json").exit_code, 2);
}

TEST(CliRender, EmitsSvgForChainAndRosette) {
    CliResult chain = run_cli("render --shape triangle");
    ASSERT_EQ(chain.exit_code, 0);
    EXPECT_EQ(chain.out.substr(0, 4), "<svg");
    std::string path = testing::TempDir() + "cli_rosette.svg";
    CliResult rosette = run_cli("render --shape double-parabola --n 42 --out " + path);
    ASSERT_EQ(rosette.exit_code, 0);
    std::string svg = slurp(path);
    EXPECT_NE(svg.find("circle"), std::string::npos);
    std::remove(path.c_str());
}

}  // namespace
