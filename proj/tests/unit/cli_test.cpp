#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "lhv/cli.hpp"

namespace {

const std::string samples = LHV_SAMPLES_DIR;

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "lhv-threshold");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = lhv::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

TEST(Cli, ThresholdBothJson) {
    const auto r = invoke({"threshold", "--builtin", "paper-qutrit", "--method", "both", "--json"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = lhv::Json::parse(r.out);
    ASSERT_TRUE(j.is_array());
    ASSERT_EQ(j.size(), 2u);
    EXPECT_EQ(j[0].at("method"), "correlation");
    EXPECT_EQ(j[1].at("method"), "probability");
    for (const auto& item : j) EXPECT_NEAR(item.at("V_thr").get<double>(), 0.6961524227, 1e-6);
}

TEST(Cli, ThresholdFromConfigText) {
    const auto r = invoke({"threshold", "--config", samples + "/chsh_qubit.json"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("V_thr"), std::string::npos);
    EXPECT_NE(r.out.find("0.7071067811"), std::string::npos) << r.out;
    EXPECT_TRUE(r.err.empty());
}

TEST(Cli, VerifyProofChecklist) {
    const auto r = invoke({"verify-proof"});
    EXPECT_EQ(r.code, 0);
    std::istringstream lines(r.out);
    std::string line;
    int pass = 0;
    while (std::getline(lines, line)) pass += line.rfind("[PASS] ", 0) == 0;
    EXPECT_EQ(pass, 9);
}

TEST(Cli, VerifyProofJson) {
    const auto r = invoke({"verify-proof", "--json"});
    ASSERT_EQ(r.code, 0);
    EXPECT_TRUE(lhv::Json::parse(r.out).at("passed").get<bool>());
}

TEST(Cli, BadPhaseExitsTwoAndNamesOffset) {
    const auto r = invoke({"threshold", "--config", samples + "/bad_phase.json"});
    EXPECT_EQ(r.code, 2);
    EXPECT_TRUE(r.out.empty());
    EXPECT_NE(r.err.find("offset 3"), std::string::npos) << r.err;
}

TEST(Cli, ArgumentErrorsExitTwo) {
    EXPECT_EQ(invoke({}).code, 2);
    EXPECT_EQ(invoke({"threshold"}).code, 2);
    EXPECT_EQ(invoke({"threshold", "--builtin", "nope"}).code, 2);
    EXPECT_EQ(invoke({"threshold", "--builtin", "chsh-qubit", "--method", "lp"}).code, 2);
    EXPECT_EQ(invoke({"scan", "--dimension", "9", "--restarts", "1", "--seed", "1"}).code, 2);
    EXPECT_EQ(invoke({"probabilities", "--config", samples + "/chsh_qubit.json", "--alice", "5", "--bob", "0"}).code, 2);
    EXPECT_EQ(invoke({"probabilities", "--config", samples + "/chsh_qubit.json", "--alice", "0", "--bob", "0",
                      "--noise", "2"})
                  .code,
              2);
}

TEST(Cli, ProbabilitiesTable) {
    const auto r = invoke({"probabilities", "--config", samples + "/paper_qutrit.json", "--alice", "0", "--bob", "0"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("E = "), std::string::npos);
}

TEST(Cli, ScanWritesCsv) {
    const std::string path = ::testing::TempDir() + "lhv_scan_test.csv";
    const auto r = invoke({"scan", "--dimension", "2", "--restarts", "2", "--seed", "3", "--csv", path});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("best F_thr"), std::string::npos);
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    EXPECT_EQ(header, "restart,seed,F_thr,best_so_far");
    std::remove(path.c_str());
}

TEST(Cli, HelpExitsZero) {
    EXPECT_EQ(invoke({"--help"}).code, 0);
}

}  // namespace
