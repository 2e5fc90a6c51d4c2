#include <doctest.h>

#include <random>

#include "cgrl/serialize.hpp"
#include "support.hpp"

using namespace cgrl;
using nlohmann::json;

namespace {

std::vector<std::string> allSources() {
    std::vector<std::string> out;
    for (const auto& f : test::corpusFiles()) out.push_back(test::readFile(f));
    std::mt19937_64 rng(41);
    for (int i = 0; i < 30; ++i) out.push_back(test::generateProgram(rng, 30));
    return out;
}

std::set<FlowNode> nodeSet(const FlowGraph& fg) { return {fg.nodes().begin(), fg.nodes().end()}; }

template <class F>
std::string fieldOf(F&& f) {
    try {
        f();
    } catch (const SchemaError& e) {
        return e.field();
    }
    return "<no error>";
}

}  // namespace

TEST_CASE("trace, dynamic call graph, flow graph and call graph round-trip") {
    for (const auto& src : allSources()) {
        for (Variant v : {Variant::Optimistic, Variant::Pessimistic}) {
            test::Analysis a = test::analyzeSource(src, "t", v);
            CHECK(traceFromJsonl(traceToJsonl(a.exec.trace)) == a.exec.trace);
            CHECK(dcgFromJson(dcgToJson(a.exec.dcg)) == a.exec.dcg);

            FlowGraph fg = flowGraphFromJson(json::parse(flowGraphToJson(a.graphs.flowGraph).dump()));
            CHECK(fg.variant() == v);
            CHECK(nodeSet(fg) == nodeSet(a.graphs.flowGraph));
            CHECK(fg.edges() == a.graphs.flowGraph.edges());

            CallGraph cg = callGraphFromJson(json::parse(callGraphToJson(a.graphs.callGraph).dump()));
            CHECK(cg.edges == a.graphs.callGraph.edges);
            CHECK(cg.entrypoints == a.graphs.callGraph.entrypoints);
            attachSiteOwners(cg, a.program);
            CHECK(cg.siteOwner == a.graphs.callGraph.siteOwner);
        }
    }
}

TEST_CASE("artifacts carry a schema version and kind") {
    test::Analysis a = test::analyzeFile(test::corpusDir() + "/phone.mjs", Variant::Optimistic);
    json dcg = dcgToJson(a.exec.dcg);
    CHECK(dcg.at("schemaVersion") == kSchemaVersion);
    CHECK(artifactKind(dcg) == "dynamicCallGraph");
    CHECK(artifactKind(flowGraphToJson(a.graphs.flowGraph)) == "flowGraph");
    CHECK(artifactKind(callGraphToJson(a.graphs.callGraph)) == "callGraph");
    std::string trace = traceToJsonl(a.exec.trace);
    json header = json::parse(trace.substr(0, trace.find('\n')));
    CHECK(artifactKind(header) == "trace");
    CHECK(header.at("entries") == a.exec.trace.entries.size());
}

TEST_CASE("schema errors name the file and the field") {
    test::Analysis a = test::analyzeFile(test::corpusDir() + "/phone.mjs", Variant::Optimistic);

    json dcg = dcgToJson(a.exec.dcg);
    dcg["edges"][0].erase("callee");
    try {
        dcgFromJson(dcg, "dcg.json");
        FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
        CHECK(e.file() == "dcg.json");
        CHECK(e.field().find("callee") != std::string::npos);
        CHECK(std::string(e.what()).find("dcg.json") != std::string::npos);
    }

    json version = dcgToJson(a.exec.dcg);
    version["schemaVersion"] = 99;
    CHECK(fieldOf([&] { dcgFromJson(version); }) == "schemaVersion");

    json kind = callGraphToJson(a.graphs.callGraph);
    kind["kind"] = "flowGraph";
    CHECK(fieldOf([&] { callGraphFromJson(kind); }) == "kind");

    json fg = flowGraphToJson(a.graphs.flowGraph);
    fg["variant"] = "sideways";
    CHECK(fieldOf([&] { flowGraphFromJson(fg); }) == "variant");

    std::string trace = traceToJsonl(a.exec.trace);
    std::string broken = trace.substr(0, trace.find('\n') + 1) + "{\"kind\":\"Bogus\"}\n";
    CHECK(fieldOf([&] { traceFromJsonl(broken, "trace.jsonl"); }) != "<no error>");
    CHECK_THROWS_AS(traceFromJsonl("not json\n"), SchemaError);
    CHECK_THROWS_AS(traceFromJsonl(""), SchemaError);
}

TEST_CASE("flows serialize with their type") {
    test::Analysis a = test::analyzeFile(test::corpusDir() + "/phone.mjs", Variant::Optimistic);
    json flows = flowSetToJson(a.findings[0].flows);
    REQUIRE(flows.size() == 1);
    CHECK(flows[0].at("type") == "MissingFGPath");
    CHECK(flows[0].at("src") == "Prop(MyPhone)");
    json chain = chainToJson(a.findings[0].chain);
    CHECK(chain.at("complete") == true);
    CHECK(chain.at("copies").size() == 3);
}
