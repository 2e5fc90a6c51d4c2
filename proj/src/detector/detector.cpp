#include "cgrl/detector.hpp"

#include <algorithm>
#include <map>

namespace cgrl {

namespace {

bool isArrayIndexName(const std::string& s) {
    if (s.empty() || s.size() > 15 || (s.size() > 1 && s[0] == '0')) return false;
    return std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::optional<FlowNode> present(const FlowGraph& fg, FlowNode n) {
    if (fg.contains(n)) return n;
    return std::nullopt;
}

}  // namespace

std::vector<MissedEdge> missedEdges(const DynamicCallGraph& dcg, const CallGraph& cg, const FlowTrace& trace) {
    std::map<std::pair<SourceLoc, std::string>, std::size_t> witness;
    for (const auto& e : trace.entries)
        if (e.kind == EntryKind::Invoke) witness.try_emplace({e.loc, e.funcId}, e.index);
    std::vector<MissedEdge> out;
    std::set<std::pair<SourceLoc, std::string>> seen;
    for (const auto& d : dcg.edges) {
        if (isNativeId(d.caller) && isNativeId(d.callee)) continue;
        if (cg.has(d.site, d.callee)) continue;
        if (!seen.insert({d.site, d.callee}).second) continue;
        auto it = witness.find({d.site, d.callee});
        out.push_back({d.site, d.callee, d.caller, it == witness.end() ? trace.entries.size() : it->second});
    }
    std::stable_sort(out.begin(), out.end(), [](const MissedEdge& a, const MissedEdge& b) {
        return a.invokeIndex < b.invokeIndex;
    });
    return out;
}

std::optional<FlowNode> mapTraceEntryToNode(const MatchContext& ctx, const TraceEntry& e) {
    if (e.has(kFlagEvalOrigin)) return std::nullopt;
    switch (e.kind) {
        case EntryKind::Create:
            if (!e.via.empty()) return std::nullopt;  // made by makeFunction or bind
            return present(ctx.fg, FlowNode::func(e.funcId));
        case EntryKind::VarRead:
        case EntryKind::VarWrite:
            if (!e.binding) return std::nullopt;
            if (e.isReturnRead()) return present(ctx.fg, FlowNode::res(e.loc));
            return present(ctx.fg, variableNode(e.name, *e.binding, ctx.program));
        case EntryKind::PropRead:
        case EntryKind::PropWrite:
            return present(ctx.fg, FlowNode::prop(isArrayIndexName(e.name) ? kArrayElementProp : e.name));
        case EntryKind::Invoke: {
            if (e.has(kFlagGetter) || e.has(kFlagSetter)) return std::nullopt;
            if (e.has(kFlagNativeCallbackBoundary)) {
                const NativeSpec* via = ctx.natives.find(e.via);
                bool reflective = via && via->modeled &&
                                  (via->behavior == NativeBehavior::ReflectiveCall ||
                                   via->behavior == NativeBehavior::ReflectiveApply);
                if (!reflective) return std::nullopt;
            }
            return present(ctx.fg, FlowNode::callee(e.loc));
        }
        case EntryKind::Return:
            return std::nullopt;
    }
    return std::nullopt;
}

FlowSet findMissingFlows(const MatchContext& ctx, const CopyChainResult& chain) {
    FlowSet out;
    const auto& entries = ctx.trace.entries;
    for (const auto& copy : chain.chain) {
        auto src = mapTraceEntryToNode(ctx, entries[copy.read]);
        auto dst = mapTraceEntryToNode(ctx, entries[copy.dest]);
        if (!src) out.insert(MissingFGNode{copy.read});
        if (!dst) out.insert(MissingFGNode{copy.dest});
        if (src && dst && !ctx.fg.hasPath(*src, *dst)) out.insert(MissingFGPath{*src, *dst, copy});
        if (copy.invoke) continue;
        const TraceEntry& w = entries[copy.write];
        if (w.kind == EntryKind::Invoke && !ctx.cg.has(w.loc, w.funcId))
            out.insert(DependentCall{copy.write, w.loc, w.funcId});
        if (w.kind == EntryKind::Return) {
            const SourceLoc& site = entries[copy.dest].loc;
            if (!ctx.cg.has(site, w.via)) out.insert(DependentCall{copy.write, site, w.via});
        }
    }
    if (!chain.complete) out.insert(Unresolved{chain.reason.value_or(GapReason::UnmatchedRead)});
    return out;
}

void resolveDependentCalls(std::vector<EdgeFindings>& findings) {
    std::map<std::pair<SourceLoc, std::string>, std::size_t> byKey;
    for (std::size_t i = 0; i < findings.size(); ++i) byKey.emplace(findings[i].edge.key(), i);

    std::vector<std::set<std::size_t>> deps(findings.size());
    for (std::size_t i = 0; i < findings.size(); ++i) {
        std::set<std::size_t> depWrites;
        for (const auto& f : findings[i].flows) {
            if (const auto* d = std::get_if<DependentCall>(&f)) {
                auto it = byKey.find({d->site, d->callee});
                if (it == byKey.end()) continue;
                deps[i].insert(it->second);
                depWrites.insert(d->write);
            }
        }
        FlowSet base;
        for (const auto& f : findings[i].flows) {
            if (std::holds_alternative<DependentCall>(f)) continue;
            if (const auto* p = std::get_if<MissingFGPath>(&f); p && !p->copy.invoke && depWrites.count(p->copy.write))
                continue;
            base.insert(f);
        }
        findings[i].attributed = std::move(base);
    }
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < findings.size(); ++i) {
            for (std::size_t d : deps[i]) {
                if (d == i) continue;
                for (const auto& f : findings[d].attributed) changed |= findings[i].attributed.insert(f).second;
            }
        }
    }
    for (std::size_t i = 0; i < findings.size(); ++i)
        if (findings[i].attributed.empty() && !deps[i].empty())
            findings[i].attributed.insert(Unresolved{GapReason::CyclicDependence});
}

std::vector<EdgeFindings> detect(const MatchContext& ctx, const DynamicCallGraph& dcg) {
    std::vector<EdgeFindings> out;
    TraceIndex index(ctx.trace);
    for (const auto& edge : missedEdges(dcg, ctx.cg, ctx.trace)) {
        EdgeFindings f;
        f.edge = edge;
        if (edge.invokeIndex < ctx.trace.entries.size()) {
            f.chain = findDynamicCopies(index, edge.invokeIndex);
        } else {
            f.chain.reason = GapReason::UnmatchedWrite;
        }
        f.flows = findMissingFlows(ctx, f.chain);
        out.push_back(std::move(f));
    }
    resolveDependentCalls(out);
    return out;
}

}  // namespace cgrl
