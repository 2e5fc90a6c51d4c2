#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "support.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("cgrl-cli-" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

int runCli(const std::string& args, const std::string& env = "") {
    std::string cmd = "env -u CGRL_OUTPUT_DIR " + env + " '" CGRL_BIN "' " + args + " >/dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

json readJson(const fs::path& p) { return json::parse(cgrl::test::readFile(p.string())); }

std::string corpus(const std::string& rel) { return "'" + cgrl::test::corpusDir() + "/" + rel + "'"; }

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

}  // namespace

TEST_CASE("a run writes every artifact and exits 0") {
    TempDir t;
    REQUIRE(runCli("run " + corpus("phone.mjs") + " --out " + q(t.path) + " --fine-grained --emit-copies") == 0);
    for (const char* f : {"trace.jsonl", "dcg.json", "flowgraph.json", "callgraph.json", "flows.json", "copies.json",
                          "report.json", "report.csv", "report.txt"})
        CHECK_MESSAGE(fs::exists(t.path / f), f);
    json report = readJson(t.path / "report.json");
    CHECK(report.at("missedEdges") == 1);
    CHECK(report.at("fineGrained") == true);
}

TEST_CASE("artifacts fed back in give the same report") {
    TempDir t;
    fs::path first = t.path / "a", second = t.path / "b";
    REQUIRE(runCli("run " + corpus("depcall.mjs") + " --out " + q(first)) == 0);
    std::string artifacts = q(first / "trace.jsonl") + "," + q(first / "dcg.json") + "," + q(first / "flowgraph.json") +
                            "," + q(first / "callgraph.json");
    REQUIRE(runCli("run " + corpus("depcall.mjs") + " --out " + q(second) + " --from-artifacts " + artifacts) == 0);
    CHECK(readJson(first / "report.json") == readJson(second / "report.json"));
}

TEST_CASE("CGRL_OUTPUT_DIR overrides --out") {
    TempDir t;
    fs::path env = t.path / "env", flag = t.path / "flag";
    REQUIRE(runCli("run " + corpus("phone.mjs") + " --out " + q(flag), "CGRL_OUTPUT_DIR=" + q(env)) == 0);
    CHECK(fs::exists(env / "report.json"));
    CHECK_FALSE(fs::exists(flag));
}

TEST_CASE("corpus mode writes one directory per program and a corpus report") {
    TempDir t;
    REQUIRE(runCli("run --corpus " + corpus("labels") + " --out " + q(t.path)) == 0);
    CHECK(fs::exists(t.path / "corpus-report.json"));
    CHECK(fs::exists(t.path / "eval" / "report.json"));
    CHECK(readJson(t.path / "corpus-report.json").at("kind") == "corpusReport");
}

TEST_CASE("usage errors exit 2") {
    TempDir t;
    CHECK(runCli("") == 2);
    CHECK(runCli("run --bogus-flag") == 2);
    CHECK(runCli("run " + q(t.path / "missing.mjs") + " --out " + q(t.path)) == 2);
    CHECK(runCli("run " + corpus("phone.mjs") + " --corpus " + corpus("labels") + " --out " + q(t.path)) == 2);
    CHECK(runCli("run " + corpus("phone.mjs") + " --variant sideways --out " + q(t.path)) == 2);
}

TEST_CASE("syntax and schema errors exit 1") {
    TempDir t;
    fs::path bad = t.path / "bad.mjs";
    std::ofstream(bad) << "var = ;\n";
    CHECK(runCli("run " + q(bad) + " --out " + q(t.path / "o1")) == 1);

    fs::path broken = t.path / "dcg.json";
    std::ofstream(broken) << R"({"schemaVersion": 1, "kind": "dynamicCallGraph", "edges": [{"caller": "x"}]})";
    CHECK(runCli("run " + corpus("phone.mjs") + " --out " + q(t.path / "o2") + " --from-artifacts " + q(broken)) == 1);
}
