#include <doctest.h>

#include <random>

#include "support.hpp"

using namespace cgrl;

namespace {

SolvedGraphs build(const std::string& src, Variant v) {
    NativeConfig natives = NativeConfig::defaults();
    return buildCallGraph(loadProgram(src, "t", natives), v, natives);
}

bool hasCall(const CallGraph& cg, int line, const std::string& callee) {
    for (const auto& [site, c] : cg.edges)
        if (site.line == line && c == callee) return true;
    return false;
}

std::vector<std::string> allSources() {
    std::vector<std::string> out;
    for (const auto& f : test::corpusFiles()) out.push_back(test::readFile(f));
    std::mt19937_64 rng(5);
    for (int i = 0; i < 60; ++i) out.push_back(test::generateProgram(rng, 30));
    return out;
}

void checkIffPath(const SolvedGraphs& g) {
    std::vector<FlowNode> funcs, callees;
    for (const auto& n : g.flowGraph.nodes()) {
        if (n.kind == NodeKind::Func) funcs.push_back(n);
        if (n.kind == NodeKind::Callee) callees.push_back(n);
    }
    for (const auto& f : funcs) {
        auto reach = g.flowGraph.reachable(f);
        for (const auto& s : callees) {
            bool path = reach.count(s) > 0;
            CHECK_MESSAGE(g.callGraph.has(s.loc, f.name) == path, f.id(), " -> ", s.id());
        }
    }
    for (const auto& [site, callee] : g.callGraph.edges) CHECK(g.flowGraph.contains(FlowNode::callee(site)));
}

}  // namespace

TEST_CASE("Phone example optimistic flow graph and call graph") {
    SolvedGraphs g = build(test::readFile(test::corpusDir() + "/phone.mjs"), Variant::Optimistic);
    const FlowGraph& fg = g.flowGraph;
    CHECK(fg.hasEdge(FlowNode::func("f2#2"), FlowNode::var("main#0", "v2")));
    CHECK(fg.hasEdge(FlowNode::var("main#0", "v2"), FlowNode::prop("MyPhone")));
    CHECK(fg.hasPath(FlowNode::func("f1#1"), FlowNode::callee({"t", 5, 12, 0})));
    CHECK(fg.contains(FlowNode::callee({"t", 6, 21, 0})));
    CHECK_FALSE(fg.hasPath(FlowNode::prop("MyPhone"), FlowNode::callee({"t", 6, 21, 0})));
    CHECK(hasCall(g.callGraph, 8, "main#0"));
    CHECK(hasCall(g.callGraph, 5, "f1#1"));
    CHECK_FALSE(hasCall(g.callGraph, 6, "f2#2"));
    CHECK(g.callGraph.siteOwner.at({"t", 6, 21, 0}) == "main#0");
}

TEST_CASE("pessimistic wires only one-shot calls") {
    const char* cb = "function apply1(fn) { fn(); }\nfunction a() {}\napply1(a);\n";
    CHECK(hasCall(build(cb, Variant::Optimistic).callGraph, 1, "a#1"));
    CHECK_FALSE(hasCall(build(cb, Variant::Pessimistic).callGraph, 1, "a#1"));
    CHECK(hasCall(build(cb, Variant::Pessimistic).callGraph, 3, "apply1#0"));

    const char* iife = "function a() {}\n(function(p) { p(); })(a);\n";
    CHECK(hasCall(build(iife, Variant::Pessimistic).callGraph, 2, "anon#1"));
    CHECK(hasCall(build(iife, Variant::Pessimistic).callGraph, 2, "a#0"));

    const char* ret = "function mk() { return function() {}; }\nvar g = mk();\ng();\n";
    CHECK(hasCall(build(ret, Variant::Optimistic).callGraph, 3, "anon#1"));
    CHECK_FALSE(hasCall(build(ret, Variant::Pessimistic).callGraph, 3, "anon#1"));
}

TEST_CASE("modeled natives have function nodes, unmodeled ones do not") {
    SolvedGraphs g = build("var x = 1;", Variant::Optimistic);
    CHECK(g.flowGraph.contains(FlowNode::func("native:call")));
    CHECK(g.flowGraph.contains(FlowNode::func("native:evalCode")));
    CHECK_FALSE(g.flowGraph.contains(FlowNode::func("native:forEachItem")));
    CHECK_FALSE(g.flowGraph.contains(FlowNode::func("native:identityFn")));
}

TEST_CASE("reflective call summaries resolve the receiver in the optimistic variant") {
    const char* src = "function foo() {}\nfoo.call(null);\n";
    CHECK(hasCall(build(src, Variant::Optimistic).callGraph, 2, "native:call"));
    CHECK(hasCall(build(src, Variant::Optimistic).callGraph, 2, "foo#0"));
}

TEST_CASE("array elements share one property node") {
    SolvedGraphs g = build("var a = [];\nfunction f() {}\na.push(f);\nvar g = a.pop();\ng();\n", Variant::Optimistic);
    CHECK(g.flowGraph.contains(FlowNode::prop(kArrayElementProp)));
    CHECK(hasCall(g.callGraph, 5, "f#0"));
}

TEST_CASE("renaming a base object keeps property nodes") {
    auto props = [](const SolvedGraphs& g) {
        std::set<FlowNode> out;
        for (const auto& n : g.flowGraph.nodes())
            if (n.kind == NodeKind::Prop) out.insert(n);
        return out;
    };
    auto a = build("var o = {};\nfunction f() {}\no.p = f;\no.p();\n", Variant::Optimistic);
    auto b = build("var zz = {};\nfunction f() {}\nzz.p = f;\nzz.p();\n", Variant::Optimistic);
    CHECK(props(a) == props(b));
}

TEST_CASE("unknown nodes are rejected by reachable and absent from hasPath") {
    FlowGraph fg;
    fg.addEdge(FlowNode::prop("a"), FlowNode::prop("b"));
    CHECK_THROWS_AS(fg.reachable(FlowNode::prop("zz")), UnknownNode);
    CHECK_FALSE(fg.hasPath(FlowNode::prop("zz"), FlowNode::prop("a")));
    CHECK(fg.hasPath(FlowNode::prop("a"), FlowNode::prop("b")));
    CHECK_FALSE(fg.addEdge(FlowNode::prop("a"), FlowNode::prop("b")));
    CHECK(fg.edgeCount() == 1);
}

TEST_CASE("node keys round-trip") {
    std::vector<FlowNode> nodes = {
        FlowNode::func("f#1"),          FlowNode::var("main#0", "v"),     FlowNode::prop("MyPhone"),
        FlowNode::param("f#1", 2),      FlowNode::ret("f#1"),             FlowNode::callee({"u", 3, 4, 0}),
        FlowNode::res({"u", 3, 4, 1}),  FlowNode::arg({"u", 3, 4, 0}, -1), FlowNode::prop("[]"),
    };
    for (const auto& n : nodes) {
        CAPTURE(n.id());
        CHECK(FlowNode::fromKindAndKey(n.kind, n.key()) == n);
    }
}

TEST_CASE("iff-path invariant on the corpus and generated programs") {
    for (const auto& src : allSources())
        for (Variant v : {Variant::Optimistic, Variant::Pessimistic}) checkIffPath(build(src, v));
}

TEST_CASE("optimistic call graph contains the pessimistic one, final flow graph contains the initial one") {
    NativeConfig natives = NativeConfig::defaults();
    for (const auto& src : allSources()) {
        BoundProgram bp = loadProgram(src, "t", natives);
        SolvedGraphs opt = buildCallGraph(bp, Variant::Optimistic, natives);
        SolvedGraphs pes = buildCallGraph(bp, Variant::Pessimistic, natives);
        for (const auto& e : pes.callGraph.edges) CHECK(opt.callGraph.edges.count(e));
        FlowGraph initial = buildInitialFlowGraph(bp, Variant::Optimistic, natives);
        for (const auto& [a, b] : initial.edges()) CHECK(opt.flowGraph.hasEdge(a, b));
    }
}

TEST_CASE("call graph derived from a flow graph equals the solver's") {
    for (const auto& src : allSources()) {
        SolvedGraphs g = build(src, Variant::Optimistic);
        CHECK(callGraphFromFlowGraph(g.flowGraph).edges == g.callGraph.edges);
    }
}
