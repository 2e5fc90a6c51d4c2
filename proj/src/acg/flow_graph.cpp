#include <algorithm>
#include <array>
#include <stdexcept>

#include "cgrl/acg.hpp"

namespace cgrl {

namespace {

constexpr std::array<std::pair<NodeKind, const char*>, 9> kKinds{{
    {NodeKind::Func, "Func"},
    {NodeKind::Var, "Var"},
    {NodeKind::Prop, "Prop"},
    {NodeKind::Param, "Param"},
    {NodeKind::Ret, "Ret"},
    {NodeKind::Callee, "Callee"},
    {NodeKind::Res, "Res"},
    {NodeKind::Arg, "Arg"},
    {NodeKind::Unknown, "Unknown"},
}};

SourceLoc parseLocKey(const std::string& s) {
    SourceLoc loc;
    std::string rest = s;
    if (auto at = rest.rfind("@eval"); at != std::string::npos) {
        loc.evalDepth = std::stoi(rest.substr(at + 5));
        rest = rest.substr(0, at);
    }
    auto c2 = rest.rfind(':');
    if (c2 == std::string::npos || c2 == 0) throw std::invalid_argument("bad location key '" + s + "'");
    auto c1 = rest.rfind(':', c2 - 1);
    if (c1 == std::string::npos) throw std::invalid_argument("bad location key '" + s + "'");
    loc.unit = rest.substr(0, c1);
    loc.line = std::stoi(rest.substr(c1 + 1, c2 - c1 - 1));
    loc.col = std::stoi(rest.substr(c2 + 1));
    return loc;
}

std::pair<std::string, int> splitIndex(const std::string& s) {
    auto bar = s.rfind('|');
    if (bar == std::string::npos) throw std::invalid_argument("bad indexed key '" + s + "'");
    return {s.substr(0, bar), std::stoi(s.substr(bar + 1))};
}

}  // namespace

const char* variantName(Variant v) { return v == Variant::Optimistic ? "optimistic" : "pessimistic"; }

std::optional<Variant> parseVariant(const std::string& s) {
    if (s == "optimistic") return Variant::Optimistic;
    if (s == "pessimistic") return Variant::Pessimistic;
    return std::nullopt;
}

const char* nodeKindName(NodeKind k) {
    for (const auto& [kind, name] : kKinds)
        if (kind == k) return name;
    return "?";
}

std::optional<NodeKind> parseNodeKind(const std::string& s) {
    for (const auto& [kind, name] : kKinds)
        if (s == name) return kind;
    return std::nullopt;
}

std::string FlowNode::key() const {
    switch (kind) {
        case NodeKind::Func:
        case NodeKind::Var:
        case NodeKind::Prop:
        case NodeKind::Ret: return name;
        case NodeKind::Param: return name + "|" + std::to_string(index);
        case NodeKind::Callee:
        case NodeKind::Res: return loc.str();
        case NodeKind::Arg: return loc.str() + "|" + std::to_string(index);
        case NodeKind::Unknown: return name;
    }
    return name;
}

std::string FlowNode::id() const { return std::string(nodeKindName(kind)) + "(" + key() + ")"; }

FlowNode FlowNode::fromKindAndKey(NodeKind kind, const std::string& key) {
    switch (kind) {
        case NodeKind::Param: {
            auto [fn, i] = splitIndex(key);
            return param(fn, i);
        }
        case NodeKind::Callee: return callee(parseLocKey(key));
        case NodeKind::Res: return res(parseLocKey(key));
        case NodeKind::Arg: {
            auto [l, i] = splitIndex(key);
            return arg(parseLocKey(l), i);
        }
        default: return {kind, key, {}, 0};
    }
}

int FlowGraph::addNode(const FlowNode& n) {
    auto [it, added] = index_.try_emplace(n, static_cast<int>(nodes_.size()));
    if (added) {
        nodes_.push_back(n);
        succ_.emplace_back();
    }
    return it->second;
}

std::optional<int> FlowGraph::find(const FlowNode& n) const {
    auto it = index_.find(n);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

bool FlowGraph::addEdge(int from, int to) {
    bool added = succ_[from].insert(to).second;
    if (added) ++edgeCount_;
    return added;
}

bool FlowGraph::addEdge(const FlowNode& from, const FlowNode& to) {
    int a = addNode(from);
    int b = addNode(to);
    return addEdge(a, b);
}

bool FlowGraph::hasEdge(const FlowNode& from, const FlowNode& to) const {
    auto a = find(from);
    auto b = find(to);
    return a && b && succ_[*a].count(*b) > 0;
}

std::vector<std::pair<FlowNode, FlowNode>> FlowGraph::edges() const {
    std::vector<std::pair<FlowNode, FlowNode>> out;
    out.reserve(edgeCount_);
    for (std::size_t a = 0; a < nodes_.size(); ++a)
        for (int b : succ_[a]) out.emplace_back(nodes_[a], nodes_[b]);
    std::sort(out.begin(), out.end());
    return out;
}

std::set<FlowNode> FlowGraph::reachable(const FlowNode& src) const {
    auto start = find(src);
    if (!start) throw UnknownNode(src);
    std::vector<char> seen(nodes_.size(), 0);
    std::vector<int> work{*start};
    seen[*start] = 1;
    std::set<FlowNode> out;
    while (!work.empty()) {
        int n = work.back();
        work.pop_back();
        out.insert(nodes_[n]);
        for (int m : succ_[n]) {
            if (!seen[m]) {
                seen[m] = 1;
                work.push_back(m);
            }
        }
    }
    return out;
}

bool FlowGraph::hasPath(const FlowNode& from, const FlowNode& to) const {
    auto a = find(from);
    auto b = find(to);
    if (!a || !b) return false;
    std::vector<char> seen(nodes_.size(), 0);
    std::vector<int> work{*a};
    seen[*a] = 1;
    while (!work.empty()) {
        int n = work.back();
        work.pop_back();
        if (n == *b) return true;
        for (int m : succ_[n]) {
            if (!seen[m]) {
                seen[m] = 1;
                work.push_back(m);
            }
        }
    }
    return false;
}

std::set<std::string> CallGraph::targets(const SourceLoc& site) const {
    std::set<std::string> out;
    for (auto it = edges.lower_bound({site, std::string()}); it != edges.end() && it->first == site; ++it)
        out.insert(it->second);
    return out;
}

}  // namespace cgrl
