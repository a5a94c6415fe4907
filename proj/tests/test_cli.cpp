#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "dl/cli.hpp"
#include "dl/classify.hpp"
#include "test_util.hpp"

using namespace dl;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "dl_cli_tests";
    std::filesystem::create_directories(dir);
    return (dir / name).string();
}

}  // namespace

TEST_CASE("generate, analyze and re-validate") {
    const std::string table = scratch("hg6.json");
    REQUIRE(run({"generate", "--kind", "half_graph", "--n", "6", "--out", table}).code == kExitOk);
    const Run a = run({"analyze", "--input", table, "--r", "1", "--s", "0", "--eps", "1"});
    REQUIRE(a.code == kExitOk);
    const auto report = nlohmann::json::parse(a.out);
    CHECK(report["ladder"]["length"] == 6);
    CHECK(report["shattering"]["primal"]["dim"] == 1);
    CHECK(report["strict_chain"]["m"] == 6);
    CHECK(report["provenance"]["version"] == DL_VERSION);
    CHECK(report["provenance"]["parameters"]["classify"]["node_budget"] == 1000000);

    const Run again = run({"analyze", "--input", table, "--r", "1", "--s", "0", "--eps", "1"});
    CHECK(again.out == a.out);

    const std::string saved = scratch("hg6.report.json");
    REQUIRE(run({"analyze", "--input", table, "--out", saved}).code == kExitOk);
    const Run check = run({"analyze", "--input", table, "--validate-report", saved});
    CHECK(check.code == kExitOk);
    CHECK(nlohmann::json::parse(check.out)["ok"] == true);

    auto tampered = nlohmann::json::parse(testutil::read_file(saved));
    tampered["strict_chain"]["witness"]["cols"] = {5, 4};
    tampered["strict_chain"]["witness"]["step_rows"] = {0};
    const std::string bad = scratch("bad.report.json");
    std::ofstream(bad) << tampered.dump();
    CHECK(run({"analyze", "--input", table, "--validate-report", bad}).code == kExitInvalidInput);

    const Run text = run({"analyze", "--input", table, "--output", "text"});
    CHECK(text.code == kExitOk);
    CHECK(text.out.find("ladder: 6") != std::string::npos);
}

TEST_CASE("exit codes") {
    const std::string ragged = scratch("ragged.csv");
    std::ofstream(ragged) << "0,1\n1\n";
    const Run v = run({"validate", "--input", ragged});
    CHECK(v.code == kExitInvalidInput);
    CHECK(v.err.find("ShapeMismatch") != std::string::npos);

    const std::string ok = scratch("ok.csv");
    std::ofstream(ok) << "0,1\n1,0\n";
    CHECK(run({"validate", "--input", ok}).code == kExitOk);
    CHECK(run({"analyze", "--input", ok, "--s", "1", "--r", "0"}).code == kExitUsage);
    CHECK(run({"analyze", "--input", ok, "--s", "1", "--r", "1"}).code == kExitUsage);
    CHECK(run({"analyze", "--input", ok, "--eps", "0"}).code == kExitUsage);
    CHECK(run({"analyze", "--input", ok, "--bogus"}).code == kExitUsage);
    CHECK(run({}).code == kExitUsage);
    CHECK(run({"analyze"}).code == kExitUsage);
    CHECK(run({"validate", "--input", scratch("missing.csv")}).code == kExitInvalidInput);
    CHECK(run({"--help"}).code == kExitOk);

    const Run budget =
        run({"talagrand", "--input", ok, "--mode", "exact", "--kmax", "2", "--exact-budget", "1", "--distinct-coords", "false"});
    CHECK(budget.code == kExitBudget);
    CHECK(budget.err.find("BudgetExceeded") != std::string::npos);
}

TEST_CASE("talagrand, scan and mazur subcommands") {
    const std::string fp = scratch("fp2.json");
    REQUIRE(run({"generate", "--kind", "full_pattern", "--k", "2", "--out", fp}).code == kExitOk);
    const Run t = run({"talagrand", "--input", fp, "--kmax", "2"});
    REQUIRE(t.code == kExitOk);
    const auto tj = nlohmann::json::parse(t.out);
    CHECK(tj["k_min"] == 1);
    CHECK(tj["reports"].size() == 2);

    const Run s1 = run({"dichotomy-scan", "--kind", "random_table", "--rows", "5", "--cols", "5", "--trials", "20",
                        "--seed", "3"});
    const Run s2 = run({"dichotomy-scan", "--kind", "random_table", "--rows", "5", "--cols", "5", "--trials", "20",
                        "--seed", "3"});
    REQUIRE(s1.code == kExitOk);
    CHECK(s1.out == s2.out);
    CHECK(nlohmann::json::parse(s1.out)["schema"] == "dl-scan/1");

    const std::string cantor = scratch("cantor.json");
    const std::string target = scratch("cantor_target.json");
    REQUIRE(run({"generate", "--kind", "cantor_example", "--m", "5", "--levels", "8", "--out", cantor, "--target-out",
                 target})
                .code == kExitOk);
    const Run m = run({"mazur", "--table", cantor, "--cols", "0,1,2", "--target", target, "--tol", "1e-6"});
    REQUIRE(m.code == kExitOk);
    const auto mj = nlohmann::json::parse(m.out);
    CHECK(mj["weights"].size() == 3);
    CHECK(mj["certified_gap"].get<double>() <= 1e-6);
}

TEST_CASE("generated tables are reproducible") {
    const Run a = run({"generate", "--kind", "random_table", "--rows", "4", "--cols", "3", "--seed", "5"});
    const Run b = run({"generate", "--kind", "random_table", "--rows", "4", "--cols", "3", "--seed", "5"});
    const Run c = run({"generate", "--kind", "random_table", "--rows", "4", "--cols", "3", "--seed", "6"});
    CHECK(a.out == b.out);
    CHECK(a.out != c.out);
    const auto j = nlohmann::json::parse(a.out);
    CHECK(j["provenance"]["parameters"]["generator"]["seed"] == 5);
    CHECK(table_from_json(j).rows() == 4);
}
