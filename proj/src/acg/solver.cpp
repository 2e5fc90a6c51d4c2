#include <map>

#include "cgrl/acg.hpp"
#include "cgrl/trace.hpp"

namespace cgrl {

namespace {

struct Site {
    int callee = -1;
    int res = -1;
    int receiver = -1;
    std::vector<int> args;  // by position; -1 where no node exists
};

class Solver {
public:
    Solver(FlowGraph& fg, const NativeConfig& natives) : fg_(fg), natives_(natives) {}

    void run() {
        collectSites();
        for (std::size_t n = 0; n < fg_.nodes().size(); ++n) {
            if (fg_.node(n).kind == NodeKind::Func) {
                pts(n).insert(static_cast<int>(n));
                push(static_cast<int>(n));
            }
        }
        bool changed = true;
        while (changed || !work_.empty()) {
            propagate();
            changed = false;
            for (const auto& [loc, site] : sites_) changed |= rewire(site);
        }
    }

    CallGraph callGraph() {
        CallGraph cg;
        cg.entrypoints.insert(kTopLevel);
        for (std::size_t n = 0; n < fg_.nodes().size(); ++n)
            if (fg_.node(n).kind == NodeKind::Func) cg.functions.insert(fg_.node(n).name);
        for (const auto& [loc, site] : sites_)
            for (int f : pts(site.callee)) cg.edges.insert({loc, fg_.node(f).name});
        return cg;
    }

private:
    FlowGraph& fg_;
    const NativeConfig& natives_;
    std::map<SourceLoc, Site> sites_;
    std::vector<std::set<int>> pts_;
    std::vector<int> work_;
    std::vector<char> queued_;

    std::set<int>& pts(int n) {
        if (static_cast<std::size_t>(n) >= pts_.size()) pts_.resize(fg_.nodes().size());
        return pts_[n];
    }

    void push(int n) {
        if (static_cast<std::size_t>(n) >= queued_.size()) queued_.resize(fg_.nodes().size(), 0);
        if (queued_[n]) return;
        queued_[n] = 1;
        work_.push_back(n);
    }

    void collectSites() {
        for (std::size_t n = 0; n < fg_.nodes().size(); ++n) {
            const FlowNode& node = fg_.node(n);
            if (node.kind == NodeKind::Callee) {
                Site& s = sites_[node.loc];
                s.callee = static_cast<int>(n);
                s.res = fg_.addNode(FlowNode::res(node.loc));
            }
        }
        for (std::size_t n = 0; n < fg_.nodes().size(); ++n) {
            const FlowNode& node = fg_.node(n);
            if (node.kind != NodeKind::Arg) continue;
            auto it = sites_.find(node.loc);
            if (it == sites_.end()) continue;
            if (node.index < 0) {
                it->second.receiver = static_cast<int>(n);
            } else {
                auto& args = it->second.args;
                if (args.size() <= static_cast<std::size_t>(node.index)) args.resize(node.index + 1, -1);
                args[node.index] = static_cast<int>(n);
            }
        }
    }

    void propagate() {
        while (!work_.empty()) {
            int n = work_.back();
            work_.pop_back();
            queued_[n] = 0;
            const std::set<int> src = pts(n);
            for (int m : fg_.successors(n)) {
                auto& dst = pts(m);
                std::size_t before = dst.size();
                dst.insert(src.begin(), src.end());
                if (dst.size() != before) push(m);
            }
        }
    }

    bool edge(int from, int to) {
        if (from < 0 || to < 0 || !fg_.addEdge(from, to)) return false;
        if (pts_.size() < fg_.nodes().size()) pts_.resize(fg_.nodes().size());
        auto& dst = pts(to);
        std::size_t before = dst.size();
        const auto& src = pts(from);
        dst.insert(src.begin(), src.end());
        if (dst.size() != before) push(to);
        return true;
    }

    bool edge(int from, const FlowNode& to) { return edge(from, fg_.addNode(to)); }
    bool edge(const FlowNode& from, int to) { return edge(fg_.addNode(from), to); }

    int existing(const FlowNode& n) const {
        auto id = fg_.find(n);
        return id ? *id : -1;
    }

    bool rewire(const Site& site) {
        bool optimistic = fg_.variant() == Variant::Optimistic;
        bool changed = false;
        const std::set<int> callees = pts(site.callee);
        bool hasCall = false, hasApply = false;
        for (int f : callees) {
            const std::string& id = fg_.node(f).name;
            if (!isNativeId(id)) continue;
            const NativeSpec* spec = natives_.findById(id);
            if (!spec || !spec->modeled) continue;
            switch (spec->behavior) {
                case NativeBehavior::ReturnsFunction:
                    if (!site.args.empty()) changed |= edge(site.args[0], site.res);
                    break;
                case NativeBehavior::ArrayPush:
                    for (int a : site.args) changed |= edge(a, FlowNode::prop(kArrayElementProp));
                    break;
                case NativeBehavior::ArrayPop:
                    changed |= edge(FlowNode::prop(kArrayElementProp), site.res);
                    break;
                case NativeBehavior::ReflectiveCall:
                    hasCall = true;
                    if (optimistic) changed |= edge(site.receiver, site.callee);
                    break;
                case NativeBehavior::ReflectiveApply:
                    hasApply = true;
                    if (optimistic) changed |= edge(site.receiver, site.callee);
                    break;
                default:
                    break;
            }
        }
        if (!optimistic) return changed;
        const std::set<int> receivers = site.receiver >= 0 ? pts(site.receiver) : std::set<int>{};
        for (int f : callees) {
            const std::string& id = fg_.node(f).name;
            if (isNativeId(id)) continue;
            bool viaCall = hasCall && receivers.count(f);
            bool viaApply = hasApply && receivers.count(f);
            int shift = viaCall ? 1 : 0;
            if (!viaApply) {
                for (std::size_t i = shift; i < site.args.size(); ++i) {
                    int param = existing(FlowNode::param(id, static_cast<int>(i - shift)));
                    changed |= edge(site.args[i], param);
                }
            }
            changed |= edge(existing(FlowNode::ret(id)), site.res);
        }
        return changed;
    }
};

}  // namespace

SolvedGraphs solveCallGraph(FlowGraph fg, const NativeConfig& natives) {
    Solver solver(fg, natives);
    solver.run();
    CallGraph cg = solver.callGraph();
    return {std::move(fg), std::move(cg)};
}

SolvedGraphs buildCallGraph(const BoundProgram& program, Variant variant, const NativeConfig& natives) {
    SolvedGraphs out = solveCallGraph(buildInitialFlowGraph(program, variant, natives), natives);
    for (const auto& site : program.callSites()) out.callGraph.siteOwner[site.loc] = site.enclosing;
    return out;
}

CallGraph callGraphFromFlowGraph(const FlowGraph& fg) {
    CallGraph cg;
    cg.entrypoints.insert(kTopLevel);
    for (const auto& n : fg.nodes()) {
        if (n.kind != NodeKind::Func) continue;
        cg.functions.insert(n.name);
        for (const auto& m : fg.reachable(n))
            if (m.kind == NodeKind::Callee) cg.edges.insert({m.loc, n.name});
    }
    return cg;
}

}  // namespace cgrl
