// Comparison of dynamic evidence against the static graphs: missed call edges
// and the missing flows that explain them.
#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "cgrl/acg.hpp"
#include "cgrl/copies.hpp"
#include "cgrl/natives.hpp"
#include "cgrl/trace.hpp"

namespace cgrl {

struct MissedEdge {
    SourceLoc site;
    std::string callee;
    std::string caller;
    std::size_t invokeIndex = 0;  // first Invoke entry witnessing the edge

    std::pair<SourceLoc, std::string> key() const { return {site, callee}; }
    bool operator==(const MissedEdge&) const = default;
};

struct MissingFGNode {
    std::size_t entry = 0;
    auto operator<=>(const MissingFGNode&) const = default;
    bool operator==(const MissingFGNode&) const = default;
};

struct MissingFGPath {
    FlowNode src;
    FlowNode dst;
    DynamicCopy copy;
    auto operator<=>(const MissingFGPath&) const = default;
    bool operator==(const MissingFGPath&) const = default;
};

/// The copy's write is a call (argument pass or return) whose target is
/// itself missing from the static call graph.
struct DependentCall {
    std::size_t write = 0;
    SourceLoc site;
    std::string callee;
    auto operator<=>(const DependentCall&) const = default;
    bool operator==(const DependentCall&) const = default;
};

struct Unresolved {
    GapReason reason = GapReason::UnmatchedRead;
    auto operator<=>(const Unresolved&) const = default;
    bool operator==(const Unresolved&) const = default;
};

using MissingFlow = std::variant<MissingFGNode, MissingFGPath, DependentCall, Unresolved>;
using FlowSet = std::set<MissingFlow>;

/// Everything the matcher needs to relate trace entries to graph nodes.
struct MatchContext {
    const FlowTrace& trace;
    const FlowGraph& fg;
    const CallGraph& cg;
    const BoundProgram& program;
    const NativeConfig& natives;
};

/// DCG edges whose (site, callee) is absent from the call graph, ordered by
/// witnessing Invoke index. Edges between two natives are skipped.
std::vector<MissedEdge> missedEdges(const DynamicCallGraph& dcg, const CallGraph& cg, const FlowTrace& trace);

std::optional<FlowNode> mapTraceEntryToNode(const MatchContext& ctx, const TraceEntry& entry);

FlowSet findMissingFlows(const MatchContext& ctx, const CopyChainResult& chain);

struct EdgeFindings {
    MissedEdge edge;
    CopyChainResult chain;
    FlowSet flows;       // as found
    FlowSet attributed;  // after dependent-call resolution
};

/// Replaces each DependentCall by the attribution of the edge it names, to a
/// least fixpoint. A path copy whose write is the dependent call is dropped in
/// favor of that edge's causes. An edge left with nothing is attributed
/// Unresolved(CyclicDependence).
void resolveDependentCalls(std::vector<EdgeFindings>& findings);

/// Runs copies + flow matching for every missed edge, then resolution.
std::vector<EdgeFindings> detect(const MatchContext& ctx, const DynamicCallGraph& dcg);

}  // namespace cgrl
