#include "cgrl/metrics.hpp"

#include <array>
#include <cmath>
#include <deque>

namespace cgrl {

namespace {

constexpr std::array<std::pair<Metric, const char*>, 3> kMetrics{{
    {Metric::CallSiteTargets, "callSiteTargets"},
    {Metric::ReachableNodes, "reachableNodes"},
    {Metric::ReachableEdges, "reachableEdges"},
}};

using Edge = std::pair<SourceLoc, std::string>;
using Adjacency = std::map<std::string, std::set<std::string>>;

bool counted(const DynamicEdge& e) { return !(isNativeId(e.caller) && isNativeId(e.callee)); }

void ratio(double num, double den, double& value, bool& undefined) {
    if (den == 0) {
        value = 1.0;
        undefined = true;
    } else {
        value = num / den;
    }
}

std::set<std::string> reach(const Adjacency& adj, const std::set<std::string>& roots) {
    std::set<std::string> seen(roots.begin(), roots.end());
    std::deque<std::string> work(roots.begin(), roots.end());
    while (!work.empty()) {
        std::string n = work.front();
        work.pop_front();
        auto it = adj.find(n);
        if (it == adj.end()) continue;
        for (const auto& m : it->second)
            if (seen.insert(m).second) work.push_back(m);
    }
    return seen;
}

std::string ownerOf(const CallGraph& cg, const SourceLoc& site) {
    auto it = cg.siteOwner.find(site);
    return it == cg.siteOwner.end() ? std::string(kTopLevel) : it->second;
}

template <class Set>
double overlap(const Set& a, const Set& b) {
    double n = 0;
    for (const auto& x : a) n += b.count(x);
    return n;
}

}  // namespace

const char* metricName(Metric m) {
    for (const auto& [k, n] : kMetrics)
        if (k == m) return n;
    return "?";
}

std::optional<Metric> parseMetric(const std::string& s) {
    for (const auto& [k, n] : kMetrics)
        if (s == n) return k;
    return std::nullopt;
}

MetricResult recallPrecision(const CallGraph& cg, const DynamicCallGraph& dcg, Metric metric) {
    MetricResult r;
    r.metric = metric;
    std::set<Edge> dyn;
    std::set<std::string> dynNodes(dcg.entrypoints.begin(), dcg.entrypoints.end());
    for (const auto& e : dcg.edges) {
        if (!counted(e)) continue;
        dyn.insert({e.site, e.callee});
        dynNodes.insert(e.caller);
        dynNodes.insert(e.callee);
    }

    switch (metric) {
        case Metric::ReachableEdges: {
            std::set<Edge> stat;
            for (const auto& e : cg.edges)
                if (dynNodes.count(ownerOf(cg, e.first))) stat.insert(e);
            r.recallNum = overlap(dyn, cg.edges);
            r.recallDen = static_cast<double>(dyn.size());
            r.precisionNum = overlap(stat, dyn);
            r.precisionDen = static_cast<double>(stat.size());
            break;
        }
        case Metric::CallSiteTargets: {
            std::map<SourceLoc, std::set<std::string>> sites;
            for (const auto& [site, callee] : dyn) sites[site].insert(callee);
            for (const auto& [site, targets] : sites) {
                std::set<std::string> stat = cg.targets(site);
                double hit = overlap(targets, stat);
                r.recallNum += hit / static_cast<double>(targets.size());
                r.recallDen += 1;
                if (!stat.empty()) {
                    r.precisionNum += hit / static_cast<double>(stat.size());
                    r.precisionDen += 1;
                }
            }
            break;
        }
        case Metric::ReachableNodes: {
            Adjacency dynAdj, statAdj;
            for (const auto& e : dcg.edges) dynAdj[e.caller].insert(e.callee);
            for (const auto& [site, callee] : cg.edges) statAdj[ownerOf(cg, site)].insert(callee);
            // natives are walked through but not counted
            std::set<std::string> d, s;
            for (const auto& n : reach(dynAdj, dcg.entrypoints))
                if (!isNativeId(n)) d.insert(n);
            for (const auto& n : reach(statAdj, dcg.entrypoints))
                if (!isNativeId(n)) s.insert(n);
            r.recallNum = overlap(d, s);
            r.recallDen = static_cast<double>(d.size());
            r.precisionNum = overlap(s, d);
            r.precisionDen = static_cast<double>(s.size());
            break;
        }
    }
    ratio(r.recallNum, r.recallDen, r.recall, r.recallUndefined);
    ratio(r.precisionNum, r.precisionDen, r.precision, r.precisionUndefined);
    return r;
}

double roundPct(double v) { return std::round(v * 10.0) / 10.0; }

RootCauseDistribution aggregate(const std::vector<LabeledEdge>& edges) {
    RootCauseDistribution d;
    double unresolved = 0;
    for (const auto& e : edges) {
        d.edges += 1;
        if (e.unresolved) unresolved += 1;
        if (e.labels.empty()) {
            d.coarse[labelName(RootCauseLabel::Others)].count += 1;
        } else {
            double unit = 1.0 / static_cast<double>(e.labels.size());
            for (auto l : e.labels) d.coarse[labelName(l)].count += unit;
        }
        if (!e.labels.count(RootCauseLabel::DynamicPropertyAccess) || e.categories.empty()) continue;
        d.fineEdges += 1;
        double unit = 1.0 / static_cast<double>(e.categories.size());
        for (auto c : e.categories) d.fine[categoryName(c)].count += unit;
    }
    for (auto& [k, s] : d.coarse) s.pct = roundPct(100.0 * s.count / d.edges);
    for (auto& [k, s] : d.fine) s.pct = roundPct(100.0 * s.count / d.fineEdges);
    d.unresolvedPct = d.edges == 0 ? 0.0 : roundPct(100.0 * unresolved / d.edges);
    return d;
}

}  // namespace cgrl
