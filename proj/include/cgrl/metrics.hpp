// Recall/precision of a static call graph against a dynamic one, and the
// root-cause distribution over missed edges.
#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cgrl/acg.hpp"
#include "cgrl/labeler.hpp"
#include "cgrl/trace.hpp"

namespace cgrl {

enum class Metric { CallSiteTargets, ReachableNodes, ReachableEdges };

const char* metricName(Metric m);
std::optional<Metric> parseMetric(const std::string& s);
inline constexpr Metric kAllMetrics[] = {Metric::CallSiteTargets, Metric::ReachableNodes, Metric::ReachableEdges};

struct MetricResult {
    Metric metric = Metric::ReachableEdges;
    double recall = 1.0;
    double precision = 1.0;
    double recallNum = 0, recallDen = 0;
    double precisionNum = 0, precisionDen = 0;
    bool recallUndefined = false;  // empty denominator, value pinned to 1.0
    bool precisionUndefined = false;

    bool operator==(const MetricResult&) const = default;
};

/// Edges between two natives are ignored on the dynamic side, and native
/// functions are not counted as reachable nodes. Static edges
/// are attributed to sources through `cg.siteOwner`.
MetricResult recallPrecision(const CallGraph& cg, const DynamicCallGraph& dcg, Metric metric);

/// Labels of one missed edge after resolution.
struct LabeledEdge {
    MissedEdge edge;
    std::set<RootCauseLabel> labels;           // empty counts as Others
    std::set<PropertyNameCategory> categories;  // for DynamicPropertyAccess flows
    bool unresolved = false;
};

struct Share {
    double count = 0;
    double pct = 0;  // rounded to one decimal
    bool operator==(const Share&) const = default;
};

struct RootCauseDistribution {
    std::map<std::string, Share> coarse;
    std::map<std::string, Share> fine;
    double edges = 0;       // units in `coarse`
    double fineEdges = 0;   // units in `fine`
    double unresolvedPct = 0;

    bool operator==(const RootCauseDistribution&) const = default;
};

double roundPct(double v);

/// Each edge is one unit, split equally among its distinct labels. Fine
/// categories split each DynamicPropertyAccess edge the same way.
RootCauseDistribution aggregate(const std::vector<LabeledEdge>& edges);

}  // namespace cgrl
