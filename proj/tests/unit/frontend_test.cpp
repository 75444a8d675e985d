#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "cosim/config.hpp"
#include "cosim/csv_observer.hpp"
#include "cosim/master.hpp"
#include "cosim/model_library.hpp"

using namespace cosim;
namespace fs = std::filesystem;

namespace {

const char* minimal = R"(# two sources and a sum
[simulation]
t_end = 1
step = fixed
dt = 0.1

[slave s]
model = sine_source
amplitude = 2

[slave total]
model = sum
arity = 1

[signal]
source = s.y
target = total.u1
)";

std::vector<std::string> lines_of(const fs::path& p) {
    std::ifstream in(p);
    std::vector<std::string> out;
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

std::vector<std::string> split(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    for (std::string f; std::getline(ss, f, ',');) out.push_back(f);
    return out;
}

fs::path scratch(const std::string& name) {
    auto p = fs::temp_directory_path() / ("cosim_frontend_" + name + "_" + std::to_string(::getpid()));
    fs::remove_all(p);
    return p;
}

}  // namespace

TEST(Config, ParsesMinimalFile) {
    const auto r = parse_config(minimal);
    ASSERT_TRUE(r.system) << (r.diagnostics.empty() ? "" : r.diagnostics[0].to_string());
    const auto& s = *r.system;
    EXPECT_EQ(s.t_end, 1.0);
    EXPECT_EQ(std::get<FixedStep>(s.step_policy).dt, 0.1);
    ASSERT_EQ(s.slaves.size(), 2u);
    EXPECT_EQ(s.slaves[0].parameters.at("amplitude"), 2.0);
    ASSERT_EQ(s.signals.size(), 1u);
    EXPECT_EQ(s.signals[0].target.variable, "u1");
}

TEST(Config, ReportsDuplicatesWithBothLines) {
    const auto r = parse_config("[simulation]\nt_end = 1\ndt = 0.1\n[slave a]\nmodel = sum\n[slave a]\nmodel = sum\n");
    ASSERT_FALSE(r.system);
    ASSERT_EQ(r.diagnostics.size(), 1u);
    EXPECT_EQ(r.diagnostics[0].line, 6u);
    EXPECT_NE(r.diagnostics[0].message.find("lines 4 and 6"), std::string::npos);
}

TEST(Config, AdaptiveNeedsTolerance) {
    const auto r = parse_config("[simulation]\nt_end = 1\nstep = adaptive\ndt = 0.1\ndt_min = 0.01\ndt_max = 1\n");
    ASSERT_FALSE(r.system);
    ASSERT_EQ(r.diagnostics.size(), 1u);
    EXPECT_NE(r.diagnostics[0].message.find("missing tolerance"), std::string::npos);
}

TEST(Config, CollectsEveryProblem) {
    const auto r = parse_config("[simulation]\nt_end = soon\ndt = 0.1\ncolour = red\n[gizmo]\n[slave a]\nprovider = nowhere\n");
    ASSERT_FALSE(r.system);
    std::vector<std::size_t> lines;
    for (const auto& d : r.diagnostics) lines.push_back(d.line);
    for (std::size_t l : {2u, 4u, 5u, 7u}) EXPECT_NE(std::find(lines.begin(), lines.end(), l), lines.end()) << l;
    EXPECT_TRUE(std::is_sorted(lines.begin(), lines.end()));
}

TEST(Config, UnreadableFileIsADiagnostic) {
    const auto r = load_config("/nonexistent/system.cfg");
    ASSERT_FALSE(r.system);
    EXPECT_EQ(r.diagnostics.at(0).line, 0u);
}

TEST(Config, ShippedConfigsRoundTrip) {
    std::size_t seen = 0;
    for (const auto& entry : fs::directory_iterator(COSIM_CONFIG_DIR)) {
        if (entry.path().extension() != ".cfg") continue;
        ++seen;
        const auto r = load_config(entry.path().string());
        ASSERT_TRUE(r.system) << entry.path();
        const auto again = parse_config(emit_config(*r.system));
        ASSERT_TRUE(again.system) << entry.path();
        EXPECT_EQ(*again.system, *r.system) << entry.path();
    }
    EXPECT_GE(seen, 5u);
}

TEST(Config, RealsRoundTrip) {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 10000; ++i) {
        const double v = std::bit_cast<double>(rng());
        if (!std::isfinite(v)) continue;
        EXPECT_EQ(parse_real(format_real(v)), v);
    }
    EXPECT_FALSE(parse_real("1.5x"));
    EXPECT_FALSE(parse_real(""));
}

TEST(Csv, ZeroLengthRunWritesHeadersOnly) {
    const auto dir = scratch("zero");
    auto s = *parse_config(minimal).system;
    s.t_end = 0.0;
    auto registry = builtin_registry();
    auto csv = std::make_shared<CsvObserver>(dir);
    initialize_run(s, registry, {csv})->run_to_end();
    const auto signals = lines_of(csv->signals_path());
    ASSERT_EQ(signals.size(), 1u);
    EXPECT_EQ(signals[0].rfind("time,", 0), 0u);
    EXPECT_EQ(lines_of(csv->energy_path()).size(), 1u);
    fs::remove_all(dir);
}

TEST(Csv, RowsMatchTheRunExactly) {
    const auto dir = scratch("rows");
    auto s = *load_config(std::string(COSIM_CONFIG_DIR) + "/msd_pair.cfg").system;
    s.t_end = 0.5;
    auto registry = builtin_registry();
    auto csv = std::make_shared<CsvObserver>(dir);
    const auto result = initialize_run(s, registry, {csv})->run_to_end();

    const auto energy = lines_of(csv->energy_path());
    EXPECT_EQ(energy[0], "time,bond,P1,P2,dP,dE,cumulative_dE,epsilon");
    ASSERT_EQ(energy.size(), result.records.size() + 1);
    double sum = 0.0;
    for (std::size_t i = 0; i < result.records.size(); ++i) {
        const auto f = split(energy[i + 1]);
        ASSERT_EQ(f.size(), 8u);
        const auto& b = result.records[i].energy.bonds[0];
        EXPECT_EQ(*parse_real(f[0]), result.records[i].end_time());
        EXPECT_EQ(*parse_real(f[5]), b.de);
        sum += *parse_real(f[5]);
        EXPECT_NEAR(*parse_real(f[6]), sum, 1e-12 * std::max(1.0, std::abs(sum)));
    }
    const auto signals = lines_of(csv->signals_path());
    ASSERT_EQ(signals.size(), result.records.size() + 1);
    fs::remove_all(dir);
}

TEST(Csv, WriteFailureDropsTheObserverNotTheRun) {
    // A regular file where the output directory should go.
    const auto blocker = scratch("blocked");
    std::ofstream(blocker) << "x";
    auto s = *parse_config(minimal).system;
    auto registry = builtin_registry();
    auto csv = std::make_shared<CsvObserver>(blocker / "out");
    const auto r = initialize_run(s, registry, {csv})->run_to_end();
    EXPECT_EQ(r.steps, 10u);
    EXPECT_FALSE(r.warnings.empty());
    fs::remove(blocker);
}
