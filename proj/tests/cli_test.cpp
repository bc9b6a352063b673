#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "pqcalc/cli.hpp"

using namespace pqcalc;
using nlohmann::json;

namespace {

const std::vector<std::string> kBase = {"--p", "1.2", "--q", "0.8"};

CommandOutput run(std::vector<std::string> args, bool with_base = true) {
    if (with_base) args.insert(args.end(), kBase.begin(), kBase.end());
    return run_command(args);
}

json run_json(std::vector<std::string> args) {
    args.push_back("--json");
    const CommandOutput r = run(std::move(args));
    EXPECT_EQ(r.exit_code, 0) << r.err;
    return json::parse(r.out);
}

std::string shell_quote(const std::string& s) {
    std::string out = "'";
    for (char c : s) {
        if (c == '\'') out += "'\\''";
        else out += c;
    }
    return out + "'";
}

/// Runs the installed binary; returns {exit code, stdout}.
std::pair<int, std::string> run_binary(const std::vector<std::string>& args) {
    std::string cmd = shell_quote(PQCALC_CLI_PATH);
    for (const auto& a : args) cmd += " " + shell_quote(a);
    cmd += " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (pipe == nullptr) return {-1, ""};
    std::string out;
    char buf[4096];
    size_t n = 0;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

}  // namespace

TEST(Cli, TransformBothMode) {
    const json j = run_json({"transform", "--fn", "t^3", "--s", "1", "--kind", "first", "--mode", "both"});
    const double table = j["value"]["table"].get<double>();
    const double numeric = j["value"]["numeric"].get<double>();
    EXPECT_NEAR(table, 6.08 / 2.985984, 1e-14);
    EXPECT_LT(j["value"]["gap"].get<double>(), 1e-7);
    EXPECT_EQ(j["value"]["gap"].get<double>(), std::abs(numeric - table) / std::abs(table));
    EXPECT_EQ(j["command"], "transform");
    EXPECT_EQ(j["diagnostics"]["path"], "grid");
}

TEST(Cli, IdentityCheckExpReciprocal) {
    const CommandOutput r = run({"identity-check", "--suite", "exp-reciprocal", "--json"});
    EXPECT_EQ(r.exit_code, 0);
    const json j = json::parse(r.out);
    EXPECT_TRUE(j["value"]["passed"].get<bool>());
    EXPECT_LT(j["value"]["max_deviation"].get<double>(), 1e-10);
}

TEST(Cli, IdentityCheckAllSuitesPass) {
    const CommandOutput r = run({"identity-check", "--suite", "all", "--json"});
    EXPECT_EQ(r.exit_code, 0) << r.out;
}

TEST(Cli, GammaText) {
    const CommandOutput r = run({"gamma", "--kind", "first", "--z", "4", "--text"});
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_NE(r.out.find("6.08"), std::string::npos) << r.out;
    EXPECT_NEAR(run_json({"gamma", "--kind", "first", "--z", "4"})["value"].get<double>(), 6.08, 1e-13);
    EXPECT_NEAR(run_json({"gamma", "--kind", "second", "--z", "4"})["value"].get<double>(), 6.08, 1e-7);
}

TEST(Cli, EvalDerivativeIntegrate) {
    EXPECT_NEAR(run_json({"eval", "e", "--z", "0.5"})["value"].get<double>() *
                    run_json({"eval", "E", "--z", "-0.5"})["value"].get<double>(),
                1.0, 1e-14);
    EXPECT_NEAR(run_json({"derivative", "--fn", "t^2", "--n", "1", "--x", "3"})["value"].get<double>(), 6.0, 1e-13);
    EXPECT_NEAR(run_json({"integrate", "--fn", "t", "--upper", "1"})["value"].get<double>(), 0.5, 1e-14);
}

TEST(Cli, SolveResonant) {
    const json j = run_json({"solve", "--problem", "resonant", "--params", "lambda=0.5"});
    EXPECT_EQ(j["value"]["solution"], "t*e(0.5t)");
    EXPECT_TRUE(j["value"]["residual"]["passed"].get<bool>());
    EXPECT_LT(j["value"]["residual"]["max_abs_residual"].get<double>(), 1e-8);
}

TEST(Cli, SolveOscillatorAndFirstOrder) {
    for (const std::string problem : {"first-order", "oscillator"}) {
        const json j = run_json({"solve", "--problem", problem, "--params", "c=0.7", "omega=1", "A=1", "B=2"});
        EXPECT_TRUE(j["value"]["residual"]["passed"].get<bool>()) << problem;
    }
}

TEST(Cli, SweepCsv) {
    const CommandOutput r =
        run({"sweep", "--fn", "e(0.5t)", "--s-from", "1", "--s-to", "2", "--steps", "4", "--csv"});
    ASSERT_EQ(r.exit_code, 0) << r.err;
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "s,value,terms_used,tail_estimate");
    int rows = 0;
    while (std::getline(in, line)) {
        const double s = std::stod(line.substr(0, line.find(',')));
        const double v = std::stod(line.substr(line.find(',') + 1));
        EXPECT_NEAR(v, 1.2 / (1.2 * s - 0.5), 1e-12) << line;
        ++rows;
    }
    EXPECT_EQ(rows, 5);
}

TEST(Cli, TableListsValidity) {
    const CommandOutput r = run({"table", "--kind", "second"});
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_NE(r.out.find("s > |a|/q"), std::string::npos);
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run({"transform", "--fn", "t", "--s", "1"}, false).exit_code, 1);         // missing --p/--q
    EXPECT_EQ(run({"transform", "--fn", "exp(t*t)", "--s", "1"}).exit_code, 1);         // parse error
    EXPECT_EQ(run({"eval", "e", "--z", "3"}).exit_code, 1);                              // pole
    EXPECT_EQ(run({"frobnicate"}).exit_code, 1);                                         // unknown command
    EXPECT_EQ(run({"transform", "--fn", "t", "--s", "1", "--p", "0.8", "--q", "1.2"}, false).exit_code, 1);
    EXPECT_EQ(run({"transform", "--fn", "e(0.5t)", "--s", "1", "--kind", "second", "--mode", "table"}).exit_code, 1);
    const CommandOutput div = run({"integrate", "--fn", "t^3", "--improper"});
    EXPECT_EQ(div.exit_code, 2);
    EXPECT_NE(div.err.find("left tail"), std::string::npos) << div.err;
}

TEST(Cli, JsonReplayIsBitExact) {
    const std::vector<std::vector<std::string>> invocations = {
        {"transform", "--fn", "t^2*e(0.3t)", "--s", "1.7", "--mode", "numeric"},
        {"transform", "--fn", "Cos(0.5t)", "--s", "2", "--kind", "second", "--mode", "both"},
        {"eval", "Sinh", "--z", "1.25"},
        {"gamma", "--kind", "second", "--z", "2.5"},
        {"integrate", "--fn", "E(-0.4t)", "--upper", "1.3"},
        {"solve", "--problem", "first-order", "--params", "c=0.35"},
    };
    for (const auto& args : invocations) {
        std::vector<std::string> full = args;
        full.insert(full.end(), kBase.begin(), kBase.end());
        full.push_back("--json");
        const CommandOutput first = run_command(full);
        ASSERT_EQ(first.exit_code, 0) << first.err;
        const CommandOutput again = run_command(replay_args(first.out));
        ASSERT_EQ(again.exit_code, 0) << again.err;
        EXPECT_EQ(json::parse(first.out), json::parse(again.out)) << first.out;
    }
}

TEST(Cli, BinaryMatchesInProcess) {
    const std::vector<std::string> args = {"transform", "--fn", "t^3",  "--p",    "1.2",  "--q",
                                           "0.8",       "--s",  "1",    "--mode", "both", "--json"};
    const auto [code, out] = run_binary(args);
    EXPECT_EQ(code, 0);
    EXPECT_EQ(json::parse(out), json::parse(run_command(args).out));
    EXPECT_EQ(run_binary({"integrate", "--fn", "t^3", "--improper", "--p", "1.2", "--q", "0.8"}).first, 2);
    EXPECT_EQ(run_binary({"gamma", "--z", "4"}).first, 1);
}
