#include <doctest.h>

#include <cmath>
#include <random>

#include "support.hpp"

using namespace cgrl;

namespace {

using L = RootCauseLabel;
using C = PropertyNameCategory;

CallGraph fromDynamic(const DynamicCallGraph& dcg) {
    CallGraph cg;
    cg.entrypoints = dcg.entrypoints;
    for (const auto& e : dcg.edges) {
        if (isNativeId(e.caller) && isNativeId(e.callee)) continue;
        cg.edges.insert({e.site, e.callee});
        if (!isNativeId(e.caller)) cg.siteOwner[e.site] = e.caller;
    }
    return cg;
}

LabeledEdge labeled(int line, std::set<L> labels, std::set<C> categories = {}) {
    LabeledEdge e;
    e.edge = {{"u", line, 0, 0}, "f#0", kTopLevel, 0};
    e.labels = std::move(labels);
    e.categories = std::move(categories);
    return e;
}

void checkRatios(const MetricResult& m) {
    CHECK(m.recall >= 0.0);
    CHECK(m.recall <= 1.0);
    CHECK(m.precision >= 0.0);
    CHECK(m.precision <= 1.0);
    CHECK(m.recallNum <= m.recallDen + 1e-9);
    CHECK(m.precisionNum <= m.precisionDen + 1e-9);
}

}  // namespace

TEST_CASE("metric names round-trip") {
    for (Metric m : kAllMetrics) CHECK(parseMetric(metricName(m)) == m);
    CHECK_FALSE(parseMetric("nope"));
}

TEST_CASE("Phone example recall and precision") {
    test::Analysis a = test::analyzeFile(test::corpusDir() + "/phone.mjs", Variant::Optimistic);
    MetricResult sites = recallPrecision(a.graphs.callGraph, a.exec.dcg, Metric::CallSiteTargets);
    CHECK(sites.recall == doctest::Approx(2.0 / 3));
    CHECK(sites.precision == doctest::Approx(1.0));
    MetricResult nodes = recallPrecision(a.graphs.callGraph, a.exec.dcg, Metric::ReachableNodes);
    CHECK(nodes.recall == doctest::Approx(3.0 / 4));
    MetricResult edges = recallPrecision(a.graphs.callGraph, a.exec.dcg, Metric::ReachableEdges);
    CHECK(edges.recallNum == 2);
    CHECK(edges.recallDen == 3);
    CHECK(edges.recall == doctest::Approx(2.0 / 3));
    CHECK(edges.precision == doctest::Approx(1.0));
}

TEST_CASE("a static graph equal to the dynamic one scores 1.0") {
    for (const auto& file : test::corpusFiles()) {
        CAPTURE(file);
        test::Analysis a = test::analyzeFile(file, Variant::Optimistic);
        CallGraph cg = fromDynamic(a.exec.dcg);
        for (Metric m : kAllMetrics) {
            CAPTURE(metricName(m));
            MetricResult r = recallPrecision(cg, a.exec.dcg, m);
            CHECK(r.recall == doctest::Approx(1.0));
            CHECK(r.precision == doctest::Approx(1.0));
        }
    }
}

TEST_CASE("an empty dynamic graph gives undefined recall pinned to 1.0") {
    DynamicCallGraph dcg;
    dcg.entrypoints = {kTopLevel};
    CallGraph cg;
    MetricResult nodes = recallPrecision(cg, dcg, Metric::ReachableNodes);
    CHECK(nodes.recallDen == 1);  // the entrypoint itself
    CHECK(nodes.recall == 1.0);
    for (Metric m : {Metric::CallSiteTargets, Metric::ReachableEdges}) {
        MetricResult r = recallPrecision(cg, dcg, m);
        CHECK(r.recallUndefined);
        CHECK(r.recall == 1.0);
        CHECK(r.precisionUndefined);
        CHECK(r.precision == 1.0);
    }
}

TEST_CASE("edges between natives do not count") {
    DynamicCallGraph dcg;
    dcg.entrypoints = {kTopLevel};
    dcg.edges.insert({kTopLevel, {"u", 1, 0, 0}, "native:call"});
    dcg.edges.insert({"native:call", {"u", 1, 0, 0}, "native:forEachItem"});
    CallGraph cg;
    cg.edges.insert({{"u", 1, 0, 0}, "native:call"});
    cg.siteOwner[{"u", 1, 0, 0}] = kTopLevel;
    MetricResult r = recallPrecision(cg, dcg, Metric::ReachableEdges);
    CHECK(r.recallDen == 1);
    CHECK(r.recall == 1.0);
}

TEST_CASE("adding a correct edge never lowers recall") {
    for (const auto& file : test::corpusFiles()) {
        CAPTURE(file);
        test::Analysis a = test::analyzeFile(file, Variant::Pessimistic);
        CallGraph cg = a.graphs.callGraph;
        for (const auto& missed : a.findings) {
            std::vector<MetricResult> before;
            for (Metric m : kAllMetrics) before.push_back(recallPrecision(cg, a.exec.dcg, m));
            cg.edges.insert({missed.edge.site, missed.edge.callee});
            if (!cg.siteOwner.count(missed.edge.site)) cg.siteOwner[missed.edge.site] = missed.edge.caller;
            for (std::size_t i = 0; i < std::size(kAllMetrics); ++i)
                CHECK(recallPrecision(cg, a.exec.dcg, kAllMetrics[i]).recall >= before[i].recall - 1e-12);
        }
    }
}

TEST_CASE("ratios stay in range and the optimistic variant recalls at least as much") {
    std::vector<std::string> sources;
    for (const auto& f : test::corpusFiles()) sources.push_back(test::readFile(f));
    std::mt19937_64 rng(23);
    for (int i = 0; i < 40; ++i) sources.push_back(test::generateProgram(rng, 30));
    for (const auto& src : sources) {
        test::Analysis opt = test::analyzeSource(src, "t", Variant::Optimistic);
        test::Analysis pes = test::analyzeSource(src, "t", Variant::Pessimistic);
        for (Metric m : kAllMetrics) {
            CAPTURE(metricName(m));
            MetricResult o = recallPrecision(opt.graphs.callGraph, opt.exec.dcg, m);
            MetricResult p = recallPrecision(pes.graphs.callGraph, pes.exec.dcg, m);
            checkRatios(o);
            checkRatios(p);
            CHECK(o.recall >= p.recall - 1e-12);
        }
    }
}

TEST_CASE("an edge with two labels counts half for each") {
    RootCauseDistribution d = aggregate({labeled(1, {L::ParameterPass, L::FunctionReturn})});
    CHECK(d.edges == 1);
    CHECK(d.coarse.at("ParameterPass").count == doctest::Approx(0.5));
    CHECK(d.coarse.at("FunctionReturn").count == doctest::Approx(0.5));
    CHECK(d.coarse.at("ParameterPass").pct == doctest::Approx(50.0));
}

TEST_CASE("unlabeled edges count as Others and fine categories only cover property accesses") {
    std::vector<LabeledEdge> edges = {
        labeled(1, {}),
        labeled(2, {L::DynamicPropertyAccess}, {C::StringConcatConst}),
        labeled(3, {L::DynamicPropertyAccess, L::ParameterPass}, {C::ForInLoop, C::ParameterPassed}),
    };
    edges[0].unresolved = true;
    RootCauseDistribution d = aggregate(edges);
    CHECK(d.coarse.at("Others").count == doctest::Approx(1.0));
    CHECK(d.coarse.at("DynamicPropertyAccess").count == doctest::Approx(1.5));
    CHECK(d.fineEdges == 2);
    CHECK(d.fine.at("StringConcatConstPrefixSuffix").count == doctest::Approx(1.0));
    CHECK(d.fine.at("ForInLoop").count == doctest::Approx(0.5));
    CHECK(d.unresolvedPct == doctest::Approx(33.3));
}

TEST_CASE("distribution units add up to the number of edges") {
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<int> labelPick(0, 12), size(0, 3), catPick(0, 7);
    for (int round = 0; round < 50; ++round) {
        std::vector<LabeledEdge> edges;
        int n = 1 + static_cast<int>(rng() % 20);
        for (int i = 0; i < n; ++i) {
            std::set<L> ls;
            std::set<C> cs;
            for (int k = size(rng); k > 0; --k) ls.insert(static_cast<L>(labelPick(rng)));
            if (ls.count(L::DynamicPropertyAccess))
                for (int k = size(rng); k > 0; --k) cs.insert(static_cast<C>(catPick(rng)));
            edges.push_back(labeled(i + 1, ls, cs));
        }
        RootCauseDistribution d = aggregate(edges);
        double units = 0, pct = 0;
        for (const auto& [name, s] : d.coarse) {
            units += s.count;
            pct += s.pct;
        }
        CHECK(d.edges == n);
        CHECK(units == doctest::Approx(n));
        CHECK(std::abs(pct - 100.0) <= 0.05 * static_cast<double>(d.coarse.size()));
        double fineUnits = 0;
        for (const auto& [name, s] : d.fine) fineUnits += s.count;
        CHECK(fineUnits == doctest::Approx(d.fineEdges));
    }
}

TEST_CASE("percentages round to one decimal") {
    CHECK(roundPct(33.333) == doctest::Approx(33.3));
    CHECK(roundPct(66.666) == doctest::Approx(66.7));
    CHECK(roundPct(0.0) == 0.0);
}
