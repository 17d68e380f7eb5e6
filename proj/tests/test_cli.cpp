// End-to-end runs of the pdi binary.

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

namespace {

using json = nlohmann::json;

struct Run {
    int code;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(PDI_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return {-1, ""};
    std::string out;
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
    const int status = pclose(p);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> v;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);) v.push_back(l);
    return v;
}

std::size_t data_rows(const std::string& csv) {
    std::size_t n = 0;
    for (const auto& l : lines(csv))
        if (!l.empty() && l[0] != '#') ++n;
    return n - 1;  // column header
}

json summary_of(const std::string& jsonl) { return json::parse(lines(jsonl).back()); }

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("pdi_test_" + name);
}

const std::string pinned = "search --c 1.005 --X 2000 --vartheta 0.05 --z 5 --threads 1";

}  // namespace

TEST(CliParams, ReproducesBetaAndH) {
    const auto r = run("params --c 1.005 --s 2.95");
    ASSERT_EQ(r.code, 0);
    const auto j = json::parse(r.out);
    EXPECT_NEAR(j["params"]["beta"].get<double>(), 0.030477, 1e-5);
    EXPECT_EQ(j["params"]["h"].get<int>(), 32);
    EXPECT_EQ(j["tool"], "pdi");
    EXPECT_EQ(j["config"]["params"]["s"].get<double>(), 2.95);
}

TEST(CliParams, OutsideRangeExitsTwo) {
    const auto r = run("params --c 1.0");
    EXPECT_EQ(r.code, 2);
    EXPECT_EQ(json::parse(r.out)["range_class"], "outside");
}

TEST(CliParams, ScanThreeQuartersAllNegative) {
    const auto r = run("params --c 1.005 --scan --coef 0.75");
    ASSERT_EQ(r.code, 0);
    const auto scan = json::parse(r.out)["scan"];
    EXPECT_TRUE(scan["all_negative"].get<bool>());
    for (const auto& p : scan["points"]) EXPECT_LT(p["objective"].get<double>(), 0.0);
}

TEST(CliParams, CsvScan) {
    const auto r = run("params --c 1.005 --format csv --grid-step 0.1");
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(data_rows(r.out), 11u);
}

TEST(CliSearch, PinnedRunHasRoughWitnesses) {
    const auto r = run(pinned);
    ASSERT_EQ(r.code, 0);
    const auto ls = lines(r.out);
    ASSERT_GE(ls.size(), 3u);
    EXPECT_EQ(json::parse(ls.front())["type"], "header");
    for (std::size_t i = 1; i + 1 < ls.size(); ++i) {
        const auto w = json::parse(ls[i]);
        EXPECT_LT(w["distance"].get<double>(), 0.05);
        for (const auto& s : w["shifted"]) EXPECT_GT(s["least_odd_prime_factor"].get<long>(), 5);
    }
    EXPECT_GE(summary_of(r.out)["solutions"].get<long>(), 1);
}

TEST(CliSearch, InfeasibleTargetIsEmptyAndSucceeds) {
    const auto r = run("search --c 1.005 --X 2000 --N 10 --vartheta 0.05 --z 5");
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(lines(r.out).size(), 2u);
    const auto s = summary_of(r.out);
    EXPECT_FALSE(s["feasible"].get<bool>());
    EXPECT_EQ(s["solutions"].get<long>(), 0);
    EXPECT_GT(s["searched"]["primes"].get<long>(), 0);
}

TEST(CliSearch, LargerZFiltersMore) {
    const auto z3 = summary_of(run("search --c 1.005 --X 2000 --vartheta 0.05 --z 3 --witness-limit 0").out);
    const auto z5 = summary_of(run("search --c 1.005 --X 2000 --vartheta 0.05 --z 5 --witness-limit 0").out);
    EXPECT_LT(z5["searched"]["admissible"].get<long>(), z3["searched"]["admissible"].get<long>());
    EXPECT_LT(z5["solutions"].get<long>(), z3["solutions"].get<long>());
}

TEST(CliSearch, EmbeddedConfigReproducesOutput) {
    const auto first = run(pinned);
    ASSERT_EQ(first.code, 0);
    const auto path = temp_file("search.jsonl");
    std::ofstream(path) << first.out;
    const auto again = run("search --threads 1 --config " + path.string());
    EXPECT_EQ(again.code, 0);
    EXPECT_EQ(again.out, first.out);
    std::filesystem::remove(path);
}

TEST(CliSearch, ExplicitFlagBeatsConfig) {
    const auto path = temp_file("cfg.json");
    std::ofstream(path) << R"({"search": {"c": 1.005, "X": 2000, "vartheta": 0.05, "z": 5, "witness-limit": 7}})";
    const auto r = run("search --config " + path.string() + " --witness-limit 2");
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(lines(r.out).size(), 4u);
    EXPECT_EQ(json::parse(lines(r.out).front())["config"]["search"]["witness-limit"].get<int>(), 2);
    std::filesystem::remove(path);
}

TEST(CliSearch, ThreadCountDoesNotChangeOutput) {
    EXPECT_EQ(run(pinned).out, run("search --c 1.005 --X 2000 --vartheta 0.05 --z 5 --threads 4").out);
}

TEST(CliSearch, PrimeCapExitsThree) { EXPECT_EQ(run(pinned + " --prime-cap 10").code, 3); }

TEST(CliSearch, PipelineNeedsUsableLevel) {
    EXPECT_EQ(run(pinned + " --pipeline").code, 2);
    const auto r = run(pinned + " --pipeline --D 100 --witness-limit 0");
    ASSERT_EQ(r.code, 0);
    const auto p = summary_of(r.out)["pipeline"];
    EXPECT_GT(p["B"].get<double>(), 0.0);
    EXPECT_GE(p["gamma_smoothed"].get<double>(), p["gamma0"].get<double>());
    EXPECT_NEAR(p["gamma0"].get<double>(), 4 * p["gamma1"].get<double>() - 3 * p["gamma5"].get<double>(),
                1e-9 * p["gamma5"].get<double>());
}

TEST(CliVerify, SieveAndKernelSuitesPass) {
    for (const char* s : {"sieve", "kernel"}) {
        const auto r = run(std::string("verify --suite ") + s);
        EXPECT_EQ(r.code, 0) << s;
        EXPECT_TRUE(json::parse(r.out)["passed"].get<bool>()) << s;
    }
}

TEST(CliVerify, AllPasses) { EXPECT_EQ(run("verify --suite all").code, 0); }

TEST(CliTrace, StandardTraceRowCounts) {
    const auto L = run("trace --quantity L --c 1.1 --X 1000 --t0 0 --t1 0.01 --points 201");
    const auto theta = run("trace --quantity Theta --vartheta 0.05 --k 8 --t0 0 --t1 100 --points 101");
    const auto ms = run("trace --quantity minsum --c 1.1 --X-list 256 512 1024 2048");
    ASSERT_EQ(L.code, 0);
    ASSERT_EQ(theta.code, 0);
    ASSERT_EQ(ms.code, 0);
    EXPECT_EQ(data_rows(L.out), 201u);
    EXPECT_EQ(data_rows(theta.out), 101u);
    EXPECT_EQ(data_rows(ms.out), 4u);
    EXPECT_EQ(lines(L.out).front(), "# tool: pdi");
}

TEST(CliTrace, IntegralTraceRespectsBound) {
    const auto r = run("trace --quantity I --c 1.3 --X 1000 --t0 0.001 --t1 0.05 --points 25");
    ASSERT_EQ(r.code, 0);
    for (const auto& l : lines(r.out)) {
        if (l.empty() || l[0] == '#' || l[0] == 'a') continue;
        double a, re, im, mod, bound;
        ASSERT_EQ(std::sscanf(l.c_str(), "%lf,%lf,%lf,%lf,%lf", &a, &re, &im, &mod, &bound), 5);
        EXPECT_LE(mod, bound * (1 + 1e-9));
    }
}

TEST(CliErrors, BadInputsExitTwo) {
    EXPECT_EQ(run("verify --suite nope").code, 2);
    EXPECT_EQ(run("trace --quantity L --points 1").code, 2);
    EXPECT_EQ(run("search --c 0.9").code, 2);
    EXPECT_EQ(run("").code, 2);
}
