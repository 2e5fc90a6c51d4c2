// Field-based flow graphs and call graphs in the style of ACG, in an
// optimistic (interprocedural) and a pessimistic (one-shot calls only)
// variant.
#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cgrl/frontend.hpp"
#include "cgrl/natives.hpp"

namespace cgrl {

enum class Variant { Optimistic, Pessimistic };

const char* variantName(Variant v);
std::optional<Variant> parseVariant(const std::string& s);

enum class NodeKind { Func, Var, Prop, Param, Ret, Callee, Res, Arg, Unknown };

const char* nodeKindName(NodeKind k);
std::optional<NodeKind> parseNodeKind(const std::string& s);

/// Property node shared by all array elements.
inline constexpr const char* kArrayElementProp = "[]";

/// A flow graph node. Which fields matter depends on the kind:
/// Func/Ret use `name` (FunctionId); Var uses `name` ("scope::var");
/// Prop uses `name`; Param uses `name` and `index`; Callee/Res use `loc`;
/// Arg uses `loc` and `index` (-1 for the receiver).
struct FlowNode {
    NodeKind kind = NodeKind::Unknown;
    std::string name;
    SourceLoc loc;
    int index = 0;

    static FlowNode func(std::string id) { return {NodeKind::Func, std::move(id), {}, 0}; }
    static FlowNode var(const std::string& scope, const std::string& n) { return {NodeKind::Var, scope + "::" + n, {}, 0}; }
    static FlowNode prop(std::string n) { return {NodeKind::Prop, std::move(n), {}, 0}; }
    static FlowNode param(std::string fn, int i) { return {NodeKind::Param, std::move(fn), {}, i}; }
    static FlowNode ret(std::string fn) { return {NodeKind::Ret, std::move(fn), {}, 0}; }
    static FlowNode callee(SourceLoc site) { return {NodeKind::Callee, {}, std::move(site), 0}; }
    static FlowNode res(SourceLoc site) { return {NodeKind::Res, {}, std::move(site), 0}; }
    static FlowNode arg(SourceLoc site, int i) { return {NodeKind::Arg, {}, std::move(site), i}; }

    /// Canonical key within the kind, e.g. "f1#1", "main#0::v1", "main:6:21".
    std::string key() const;
    /// Stable id: "<Kind>(<key>)".
    std::string id() const;
    static FlowNode fromKindAndKey(NodeKind kind, const std::string& key);

    auto operator<=>(const FlowNode&) const = default;
    bool operator==(const FlowNode&) const = default;
};

class UnknownNode : public std::invalid_argument {
public:
    explicit UnknownNode(const FlowNode& n) : std::invalid_argument("unknown flow graph node " + n.id()) {}
};

class FlowGraph {
public:
    FlowGraph() = default;
    explicit FlowGraph(Variant v) : variant_(v) {}

    Variant variant() const { return variant_; }

    int addNode(const FlowNode& n);
    std::optional<int> find(const FlowNode& n) const;
    bool contains(const FlowNode& n) const { return find(n).has_value(); }
    /// Adds both endpoints if needed. Returns false if the edge existed.
    bool addEdge(const FlowNode& from, const FlowNode& to);
    bool addEdge(int from, int to);
    bool hasEdge(const FlowNode& from, const FlowNode& to) const;

    const std::vector<FlowNode>& nodes() const { return nodes_; }
    const FlowNode& node(int id) const { return nodes_[id]; }
    const std::set<int>& successors(int id) const { return succ_[id]; }
    std::size_t edgeCount() const { return edgeCount_; }
    /// All edges as node pairs, sorted.
    std::vector<std::pair<FlowNode, FlowNode>> edges() const;

    /// Nodes reachable from `src`, including `src`. Throws UnknownNode.
    std::set<FlowNode> reachable(const FlowNode& src) const;
    /// Path query; false if either node is absent.
    bool hasPath(const FlowNode& from, const FlowNode& to) const;

private:
    Variant variant_ = Variant::Optimistic;
    std::vector<FlowNode> nodes_;
    std::map<FlowNode, int> index_;
    std::vector<std::set<int>> succ_;
    std::size_t edgeCount_ = 0;
};

struct CallGraph {
    std::set<std::pair<SourceLoc, std::string>> edges;  // (site, callee)
    std::set<std::string> functions;
    std::set<std::string> entrypoints;
    /// Enclosing function of each call site, when the program is known.
    std::map<SourceLoc, std::string> siteOwner;

    bool has(const SourceLoc& site, const std::string& callee) const { return edges.count({site, callee}) > 0; }
    std::set<std::string> targets(const SourceLoc& site) const;
};

/// Flow graph node for a variable reference. Formals, including formals of
/// enclosing functions seen from closures, map to Param nodes.
FlowNode variableNode(const std::string& name, const Binding& binding, const BoundProgram& program);

FlowGraph buildInitialFlowGraph(const BoundProgram& program, Variant variant, const NativeConfig& natives);

struct SolvedGraphs {
    FlowGraph flowGraph;
    CallGraph callGraph;
};

/// Runs propagation (and, for the optimistic variant, call-edge discovery) to
/// a fixpoint. The call graph has (s, f) iff Func(f) reaches Callee(s).
SolvedGraphs solveCallGraph(FlowGraph fg, const NativeConfig& natives);

/// build + solve, with site owners filled from the program.
SolvedGraphs buildCallGraph(const BoundProgram& program, Variant variant, const NativeConfig& natives);

/// (s, f) for every path Func(f) ->* Callee(s). Used for imported graphs.
CallGraph callGraphFromFlowGraph(const FlowGraph& fg);

}  // namespace cgrl
