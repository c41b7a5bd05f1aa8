// End-to-end checks of the mosqdyn binary: flag parsing, exit codes,
// output formats and determinism.  The binary path comes from the build.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include <json.hpp>

using nlohmann::json;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output;
};

RunResult run(const std::string& args, bool merge_stderr = true) {
    std::string cmd = std::string(MOSQDYN_CLI_PATH) + " " + args;
    if (merge_stderr) cmd += " 2>&1";
    RunResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0)
        r.output.append(buf.data(), n);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == '\n') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

const std::string kFig1 = "--alpha 0.8 --beta 0.9 --mu 0.8 --d0 0.2";

} // namespace

TEST_CASE("simulate converges on the running example and emits CSV") {
    const RunResult r =
        run("simulate " + kFig1 + " --x0 0.002 --y0 0.2 --format csv", false);
    CHECK(r.exit_code == 0);
    const auto lines = lines_of(r.output);
    REQUIRE(lines.size() > 10);
    CHECK(lines[0] == "n,x,y");
    CHECK(lines[1] == "0,0.002,0.2");
    // final stored point is already at extinction scale
    const std::string& last = lines.back();
    const auto c1 = last.find(','), c2 = last.rfind(',');
    const double x = std::strtod(last.substr(c1 + 1, c2 - c1 - 1).c_str(), nullptr);
    const double y = std::strtod(last.substr(c2 + 1).c_str(), nullptr);
    CHECK(std::abs(x) < 1e-8);
    CHECK(std::abs(y) < 1e-8);
}

TEST_CASE("simulate from the origin emits a single data row") {
    const RunResult r =
        run("simulate " + kFig1 + " --x0 0 --y0 0 --format csv", false);
    CHECK(r.exit_code == 0);
    const auto lines = lines_of(r.output);
    REQUIRE(lines.size() == 2);
    CHECK(lines[1] == "0,0,0");
}

TEST_CASE("simulate rejects parameters outside the invariant family") {
    const RunResult r =
        run("simulate --alpha 0.9 --beta 0.5 --mu 0.5 --d0 0.2 --x0 1 --y0 1");
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("alpha + d0") != std::string::npos);
}

TEST_CASE("simulate signals an exhausted budget as undetermined") {
    const RunResult r = run("simulate " + kFig1 +
                            " --x0 0.002 --y0 0.2 --steps 5 --format csv");
    CHECK(r.exit_code == 3);
}

TEST_CASE("the iteration budget can come from the environment") {
    const std::string cmd = std::string("MOSQ_DYN_MAX_ITER=5 ") +
                            MOSQDYN_CLI_PATH + " simulate " + kFig1 +
                            " --x0 0.002 --y0 0.2 --format csv >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    CHECK(WEXITSTATUS(status) == 3);
}

TEST_CASE("raw-operator simulation charts the quadrant exit") {
    const RunResult r = run(
        "simulate --alpha 0.5 --beta 0.1 --mu 3 --d0 0.1 --operator w "
        "--x0 0 --y0 1 --steps 50 --format json",
        false);
    CHECK(r.exit_code == 3);
    const json env = json::parse(r.output);
    CHECK(env.at("payload").at("operator") == "w");
    CHECK(env.at("payload").at("left_quadrant_at").is_number());
}

TEST_CASE("simulate JSON envelope round-trips and echoes the parameters") {
    const RunResult r = run(
        "simulate " + kFig1 + " --x0 0.002 --y0 0.2 --format json", false);
    CHECK(r.exit_code == 0);
    const json env = json::parse(r.output);
    CHECK(env.at("schema_version") == 1);
    CHECK(env.at("command") == "simulate");
    CHECK(env.at("params_echo").at("alpha") == 0.8);
    CHECK(env.at("params_echo").at("lemma1_valid") == true);
    CHECK(env.at("payload").at("converged") == true);
    CHECK(json::parse(env.dump()) == env);
}

TEST_CASE("fixed-points reports the attracting origin below threshold") {
    const RunResult r = run("fixed-points " + kFig1 + " --format json", false);
    CHECK(r.exit_code == 0);
    const json env = json::parse(r.output);
    const auto& pts = env.at("payload").at("fixed_points");
    REQUIRE(pts.size() == 1);
    CHECK(pts[0].at("stability") == "Attracting");
    CHECK(env.at("payload").at("thresholds").at("t1").get<double>() ==
          doctest::Approx(1.0));
    CHECK(env.at("payload").at("thresholds").at("t2").get<double>() ==
          doctest::Approx(1.5));
}

TEST_CASE("fixed-points lists the attracting coexistence point") {
    const RunResult r = run(
        "fixed-points --alpha 0.5 --beta 0.8 --mu 0.5 --d0 0.1 --format json",
        false);
    CHECK(r.exit_code == 0);
    const json env = json::parse(r.output);
    const auto& pts = env.at("payload").at("fixed_points");
    REQUIRE(pts.size() == 2);
    CHECK(pts[1].at("location").at("x").get<double>() == doctest::Approx(2.0));
    CHECK(pts[1].at("location").at("y").get<double>() ==
          doctest::Approx(2.0 / 3.0));
    CHECK(pts[1].at("stability") == "Attracting");
}

TEST_CASE("fixed-points flags the non-hyperbolic boundary") {
    const RunResult r = run(
        "fixed-points --alpha 0.8 --beta 1.5 --mu 0.8 --d0 0.2 --format json",
        false);
    CHECK(r.exit_code == 0);
    const json env = json::parse(r.output);
    CHECK(env.at("payload").at("origin_regime") == "NonHyperbolic");
    CHECK(env.at("payload").at("fixed_points")[0].at("stability") ==
          "NonHyperbolic");
}

TEST_CASE("normalized fixed-point mode reports root and multiplier") {
    const RunResult r = run(
        "normalized --mode fixed-point --alpha 0.3 --beta 0.2 --mu 0.5 "
        "--d0 0.3 --format json",
        false);
    CHECK(r.exit_code == 0);
    const json env = json::parse(r.output);
    CHECK(env.at("payload").at("x_star").get<double>() == doctest::Approx(0.5));
    CHECK(env.at("payload").at("multiplier").get<double>() ==
          doctest::Approx(0.52380952380952381));
}

TEST_CASE("radical cross-check is surfaced, discrepancies included") {
    // Parameters where the literal principal branch picks a root outside
    // the interval; the payload must expose both values rather than hide
    // the disagreement.
    const RunResult r =
        run("normalized --mode fixed-point " + kFig1 + " --format json", false);
    CHECK(r.exit_code == 0);
    const json env = json::parse(r.output);
    const json& cardano = env.at("payload").at("cardano");
    CHECK(cardano.at("found") == true);
    CHECK(cardano.at("branch").get<int>() != 0);
    CHECK(cardano.at("principal_value").get<double>() < 0.0);
    CHECK(cardano.at("value").get<double>() ==
          doctest::Approx(0.58963415062190478).epsilon(1e-9));
    CHECK(env.at("payload").at("cardano_discrepancy").get<double>() < 1e-6);
}

TEST_CASE("normalized period2 mode prints the certificate") {
    const RunResult r =
        run("normalized --mode period2 " + kFig1 + " --format json", false);
    CHECK(r.exit_code == 0);
    const json env = json::parse(r.output);
    CHECK(env.at("payload").at("A").get<double>() == doctest::Approx(0.4));
    CHECK(env.at("payload").at("B").get<double>() == doctest::Approx(-1.04));
    CHECK(env.at("payload").at("C").get<double>() == doctest::Approx(-1.12));
    CHECK(env.at("payload").at("conclusion") == true);
}

TEST_CASE("normalized orbit mode converges to the fixed point") {
    const RunResult r = run(
        "normalized --mode orbit --x0 0 --alpha 0.3 --beta 0.2 --mu 0.5 "
        "--d0 0.3 --format json",
        false);
    CHECK(r.exit_code == 0);
    const json env = json::parse(r.output);
    CHECK(env.at("payload").at("converged") == true);
    CHECK(env.at("payload").at("limit").get<double>() ==
          doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("normalized profile mode emits the monotonicity record") {
    const RunResult r = run(
        "normalized --mode profile --alpha 0.6 --beta 0.3 --mu 0.9 --d0 0.2 "
        "--format json",
        false);
    CHECK(r.exit_code == 0);
    const json env = json::parse(r.output);
    CHECK(env.at("payload").at("shape") == "DecreasingThenIncreasing");
    CHECK(env.at("payload").at("case_tag") == "E_Equals_F");
    CHECK(env.at("payload").at("x_min").get<double>() == doctest::Approx(0.5));
}

TEST_CASE("normalized graph mode samples the map for plotting") {
    const RunResult r = run(
        "normalized --mode graph --samples 11 " + kFig1 + " --format csv",
        false);
    CHECK(r.exit_code == 0);
    const auto lines = lines_of(r.output);
    REQUIRE(lines.size() == 12);
    CHECK(lines[0] == "x,t");
    CHECK(lines[1].rfind("0,", 0) == 0);
    CHECK(lines[11].rfind("1,", 0) == 0);
}

TEST_CASE("beta sweep walks through the regime sequence") {
    const RunResult r = run(
        "sweep --alpha 0.8 --beta 0.8:1.6:0.1 --mu 0.8 --d0 0.2 "
        "--x0 0.002 --y0 0.2 --steps 20000 --format csv",
        false);
    CHECK(r.exit_code == 0);
    const auto lines = lines_of(r.output);
    REQUIRE(lines.size() == 10);
    const std::vector<std::string> want = {
        "Attracting", "Attracting",    "NonHyperbolic",
        "Saddle",     "Saddle",        "Saddle",
        "Saddle",     "NonHyperbolic", "Repelling"};
    for (std::size_t i = 0; i < want.size(); ++i) {
        INFO("row ", i, ": ", lines[i + 1]);
        CHECK(lines[i + 1].find("," + want[i] + ",") != std::string::npos);
    }
    // the subcritical cells converge, the rest are exploratory
    CHECK(lines[1].find("ConvergedToOrigin") != std::string::npos);
    CHECK(lines[4].find("Exploratory") != std::string::npos);
}

TEST_CASE("single-cell sweep emits one row") {
    const RunResult r = run(
        "sweep --alpha 0.8 --beta 0.9 --mu 0.8 --d0 0.2 --format csv", false);
    CHECK(r.exit_code == 0);
    CHECK(lines_of(r.output).size() == 2);
}

TEST_CASE("sweep isolates invalid cells") {
    const RunResult r = run(
        "sweep --alpha 0.8:0.95:0.15 --beta 0.9 --mu 0.8 --d0 0.2 "
        "--format csv",
        false);
    CHECK(r.exit_code == 0);
    const auto lines = lines_of(r.output);
    REQUIRE(lines.size() == 3);
    CHECK(lines[1].find("ConvergedToOrigin") != std::string::npos);
    CHECK(lines[2].find("Invalid,Error") != std::string::npos);
}

TEST_CASE("sweep with no valid cells exits with invalid input") {
    const RunResult r =
        run("sweep --alpha 0.95 --beta 0.9 --mu 0.8 --d0 0.2 --format csv");
    CHECK(r.exit_code == 2);
}

TEST_CASE("identical flags produce byte-identical output") {
    const std::string cmd =
        "sweep --alpha 0.8 --beta 0.8:1.6:0.1 --mu 0.8 --d0 0.2 --steps 5000 "
        "--format csv";
    const RunResult a = run(cmd, false);
    const RunResult b = run(cmd, false);
    CHECK(a.output == b.output);
    const RunResult c = run(cmd + " --threads 3", false);
    CHECK(c.output == a.output);
}

TEST_CASE("unknown flags exit with the invalid-input code") {
    const RunResult r = run("simulate --bogus 1");
    CHECK(r.exit_code == 2);
}
