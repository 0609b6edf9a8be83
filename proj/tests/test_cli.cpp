// SPDX-License-Identifier: Apache-2.0
#include <scevm/cli.hpp>

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

using namespace scevm;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::initializer_list<std::string> args) {
    std::vector<std::string> storage = {"scevm"};
    storage.insert(storage.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& s : storage) argv.push_back(s.c_str());
    std::ostringstream out, err;
    const int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("scevm_test_cli_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

} // namespace

TEST(CliEval, PrintsAnalyticValue) {
    const auto r = run({"eval", "--L", "2", "--M", "1", "--rule", "max-sir"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(contains(r.out, "0.785398163397")) << r.out;
    EXPECT_TRUE(contains(r.out, "formula:")) << r.out;

    const auto s = run({"eval", "--L", "1", "--M", "1", "--rule", "max-signal"});
    EXPECT_EQ(s.code, 0);
    EXPECT_TRUE(contains(s.out, "1.570796326")) << s.out;
}

TEST(CliEval, AcceptsUnderscoreRuleSpelling) {
    const auto r = run({"eval", "--L", "2", "--rule", "max_signal"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(contains(r.out, "0.920151184511")) << r.out;
}

TEST(CliEval, SimulateAddsMonteCarloLine) {
    const auto r = run({"eval", "--L", "2", "--M", "1", "--simulate", "--samples", "1e5", "--seed", "9"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(contains(r.out, "monte carlo EVM:")) << r.out;
    EXPECT_TRUE(contains(r.out, "z-score:")) << r.out;
}

TEST(CliEval, NakagamiAndCorrelated) {
    const auto n = run({"eval", "--L", "2", "--M", "2", "--fading", "nakagami", "--md", "2"});
    EXPECT_EQ(n.code, 0) << n.err;
    EXPECT_TRUE(contains(n.out, "1.14543075749")) << n.out;
    const auto c = run({"eval", "--L", "2", "--M", "1", "--rho", "0.9"});
    EXPECT_EQ(c.code, 0) << c.err;
    EXPECT_TRUE(contains(c.out, "1.07376216")) << c.out;
}

TEST(CliEval, ValidationErrorsExitOne) {
    const auto r = run({"eval", "--L", "3", "--M", "1", "--rho", "0.5", "--rule", "max-sir"});
    EXPECT_EQ(r.code, 1);
    EXPECT_TRUE(contains(r.err, "L = 2")) << r.err;
    EXPECT_EQ(run({"eval", "--L", "0"}).code, 1);
    EXPECT_EQ(run({"eval", "--rule", "best"}).code, 1);
    EXPECT_EQ(run({"eval", "--no-such-flag"}).code, 1);
    EXPECT_EQ(run({"eval", "--fading", "rayleigh", "--md", "2"}).code, 1);
    EXPECT_EQ(run({"eval", "--L", "3", "--M", "1", "--fading", "nakagami", "--rule", "max-signal"}).code, 1);
    EXPECT_EQ(run({"eval", "--simulate", "--samples", "10"}).code, 1);
    EXPECT_EQ(run({}).code, 1);
}

TEST(CliEval, DivergentMomentExitsTwo) {
    const auto r = run({"eval", "--L", "2", "--rule", "max-signal", "--md", "0.4"});
    EXPECT_EQ(r.code, 2);
    EXPECT_TRUE(contains(r.err, "numerical")) << r.err;
}

TEST(CliHelp, ListsEveryDocumentedFlag) {
    const auto r = run({"--help"});
    EXPECT_EQ(r.code, 0);
    for (const auto& flag : cli::documented_flags()) EXPECT_TRUE(contains(r.out, flag)) << flag;
    for (const char* sub : {"eval", "verify", "sweep"}) EXPECT_TRUE(contains(r.out, sub)) << sub;
    EXPECT_FALSE(contains(r.out, "canary"));
}

TEST(CliHelp, FlagsCoverConfigurationFields) {
    // SystemConfig and SweepSpec fields, each reachable from the command line
    const std::vector<std::pair<std::string, std::string>> fields = {
        {"antennas", "--L"},          {"interferers", "--M"}, {"rule", "--rule"},   {"desired", "--fading"},
        {"desired.shape", "--md"},    {"rho", "--rho"},       {"axis", "--axis"},   {"values", "--values"},
        {"mc_samples", "--samples"},  {"seed", "--seed"},     {"sim.threads", "--threads"}};
    const auto& flags = cli::documented_flags();
    for (const auto& [field, flag] : fields) {
        EXPECT_NE(std::find(flags.begin(), flags.end(), flag), flags.end()) << field << " -> " << flag;
    }
}

TEST(CliConfig, FileValuesWithFlagOverride) {
    const auto dir = scratch("config");
    const auto ini = dir / "run.ini";
    std::ofstream(ini) << "L = 2\nM = 1\nrule = max-sir\n";
    const auto from_file = run({"eval", "--config", ini.string()});
    EXPECT_EQ(from_file.code, 0) << from_file.err;
    EXPECT_TRUE(contains(from_file.out, "0.785398163397")) << from_file.out;
    const auto overridden = run({"eval", "--config", ini.string(), "--L", "1"});
    EXPECT_EQ(overridden.code, 0);
    EXPECT_TRUE(contains(overridden.out, "1.570796326")) << overridden.out;
}

TEST(CliConfig, UnknownKeyRejected) {
    const auto dir = scratch("badconfig");
    const auto ini = dir / "bad.ini";
    std::ofstream(ini) << "L = 2\nantennas = 4\n";
    EXPECT_EQ(run({"eval", "--config", ini.string()}).code, 1);
    EXPECT_EQ(run({"eval", "--config", (dir / "missing.ini").string()}).code, 1);
}

TEST(CliVerify, WritesCsvAndNotesReducedSamples) {
    const auto dir = scratch("verify");
    const auto r = run({"verify", "--samples", "1e4", "--out", dir.string()});
    EXPECT_TRUE(r.code == 0 || r.code == 3) << r.err;
    EXPECT_TRUE(contains(r.out, "note: 10000 samples")) << r.out;
    EXPECT_TRUE(contains(r.out, "[PASS] anchor")) << r.out;
    EXPECT_TRUE(std::filesystem::exists(dir / "verify.csv"));
}

TEST(CliVerify, DetectsPerturbedFormula) {
    const auto dir = scratch("canary");
    const auto r = run({"verify", "--samples", "1e5", "--canary-scale", "1.01", "--out", dir.string()});
    EXPECT_EQ(r.code, 3);
    EXPECT_TRUE(contains(r.out, "[FAIL] anchor max_sir")) << r.out;
    EXPECT_TRUE(contains(r.out, "[FAIL] mc vs analytic, L=4 M=4 max_sir")) << r.out;
}

TEST(CliSweep, PresetsWriteCsvAndPlot) {
    const auto dir = scratch("sweep");
    for (const char* name : {"fig1", "fig2", "fig3"}) {
        const auto r = run({"sweep", "--preset", name, "--samples", "1000", "--out", dir.string()});
        EXPECT_EQ(r.code, 0) << r.err;
        const auto csv = dir / (std::string(name) + ".csv");
        const auto plot = dir / (std::string(name) + ".plot");
        ASSERT_TRUE(std::filesystem::exists(csv)) << name;
        ASSERT_TRUE(std::filesystem::exists(plot)) << name;
        std::ifstream in(csv);
        const auto rows = sweep::parse_csv(in);
        EXPECT_FALSE(rows.empty());
    }
}

TEST(CliSweep, CustomAxis) {
    const auto dir = scratch("custom");
    const auto r = run({"sweep", "--axis", "L", "--values", "1,2,3", "--M", "2", "--samples", "2000", "--out",
                        dir.string()});
    EXPECT_EQ(r.code, 0) << r.err;
    std::ifstream in(dir / "sweep.csv");
    EXPECT_EQ(sweep::parse_csv(in).size(), 3u);
    EXPECT_EQ(run({"sweep", "--out", dir.string()}).code, 1);
    EXPECT_EQ(run({"sweep", "--axis", "L", "--values", "3,2", "--out", dir.string()}).code, 1);
}
