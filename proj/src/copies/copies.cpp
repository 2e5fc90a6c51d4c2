#include "cgrl/copies.hpp"

#include <algorithm>
#include <array>

namespace cgrl {

namespace {

constexpr std::array<std::pair<GapReason, const char*>, 6> kReasons{{
    {GapReason::UnmatchedRead, "UnmatchedRead"},
    {GapReason::UnmatchedWrite, "UnmatchedWrite"},
    {GapReason::NativeOpaque, "NativeOpaque"},
    {GapReason::BoundFunction, "BoundFunction"},
    {GapReason::MultiLevelNative, "MultiLevelNative"},
    {GapReason::CyclicDependence, "CyclicDependence"},
}};

bool passes(const TraceEntry& inv, int position, FuncValueId value) {
    return std::any_of(inv.args.begin(), inv.args.end(),
                       [&](const PassedArg& a) { return a.position == position && a.funcValue == value; });
}

/// Is `w` the write that `r` reads from (value already known to match)?
bool writes(const TraceEntry& r, const TraceEntry& w, FuncValueId value) {
    if (r.isParamRead())
        return w.kind == EntryKind::Invoke && w.funcId == r.binding->scope && passes(w, r.binding->index, value);
    if (w.funcValue != value) return false;
    if (r.isReturnRead()) return w.kind == EntryKind::Return && w.via == r.binding->scope;
    if (r.kind == EntryKind::VarRead)
        return w.kind == EntryKind::VarWrite && w.name == r.name && w.binding && r.binding &&
               w.binding->scope == r.binding->scope;
    if (r.kind == EntryKind::PropRead) return w.kind == EntryKind::PropWrite && w.name == r.name;
    return false;
}

bool isNativeInvoke(const TraceEntry& e) {
    return e.kind == EntryKind::Invoke && (e.has(kFlagNativeCallbackBoundary) || isNativeId(e.funcId));
}

GapReason unmatchedReadReason(const FlowTrace& trace, std::size_t read) {
    const TraceEntry& r = trace.entries[read];
    if (r.isParamRead()) {
        for (std::size_t i = read; i-- > 0;) {
            const TraceEntry& e = trace.entries[i];
            if (e.kind == EntryKind::Invoke && e.funcId == r.binding->scope) {
                if (e.has(kFlagNativeCallbackBoundary)) return GapReason::NativeOpaque;
                break;
            }
        }
    }
    if (read > 0 && isNativeInvoke(trace.entries[read - 1])) return GapReason::NativeOpaque;
    return GapReason::UnmatchedRead;
}

GapReason unmatchedWriteReason(const FlowTrace& trace, std::size_t from) {
    if (trace.entries[from].has(kFlagNativeCallbackBoundary)) return GapReason::NativeOpaque;
    if (from > 0 && isNativeInvoke(trace.entries[from - 1])) return GapReason::NativeOpaque;
    return GapReason::UnmatchedWrite;
}

template <class Preceding, class Matching>
CopyChainResult reconstruct(const FlowTrace& trace, std::size_t invoke, Preceding preceding, Matching matching) {
    if (invoke >= trace.entries.size() || trace.entries[invoke].kind != EntryKind::Invoke) throw NotAnInvoke(invoke);
    const TraceEntry& call = trace.entries[invoke];
    CopyChainResult out;
    if (call.has(kFlagBoundCall)) {
        out.reason = GapReason::BoundFunction;
        return out;
    }
    if (call.has(kFlagMultiLevelNative)) {
        out.reason = GapReason::MultiLevelNative;
        return out;
    }
    FuncValueId f = call.funcValue;
    auto tr = preceding(invoke, f);
    if (!tr) {
        out.reason = unmatchedWriteReason(trace, invoke);
        return out;
    }
    std::vector<DynamicCopy> reversed{{*tr, invoke, invoke, true}};
    while (trace.entries[*tr].kind != EntryKind::Create) {
        auto tw = matching(*tr, f);
        if (!tw) {
            out.reason = unmatchedReadReason(trace, *tr);
            break;
        }
        auto next = preceding(*tw, f);
        if (!next) {
            out.reason = unmatchedWriteReason(trace, *tw);
            break;
        }
        reversed.push_back({*next, *tw, *tr, false});
        tr = next;
    }
    out.complete = !out.reason;
    out.chain.assign(reversed.rbegin(), reversed.rend());
    return out;
}

}  // namespace

const char* gapReasonName(GapReason r) {
    for (const auto& [k, n] : kReasons)
        if (k == r) return n;
    return "?";
}

std::optional<GapReason> parseGapReason(const std::string& s) {
    for (const auto& [k, n] : kReasons)
        if (s == n) return k;
    return std::nullopt;
}

TraceIndex::TraceIndex(const FlowTrace& trace) : trace_(trace) {
    for (const auto& e : trace.entries) {
        byValue_[e.funcValue].push_back(e.index);
        if (e.kind == EntryKind::Invoke)
            for (const auto& a : e.args) {
                auto& list = passing_[a.funcValue];
                if (list.empty() || list.back() != e.index) list.push_back(e.index);
            }
    }
}

std::optional<std::size_t> TraceIndex::precedingReadOrCreate(std::size_t from, FuncValueId value) const {
    auto it = byValue_.find(value);
    if (it == byValue_.end()) return std::nullopt;
    const auto& list = it->second;
    for (auto p = std::lower_bound(list.begin(), list.end(), from); p != list.begin();) {
        --p;
        if (trace_.entries[*p].isReadOrCreate()) return *p;
    }
    return std::nullopt;
}

std::optional<std::size_t> TraceIndex::matchingWrite(std::size_t read, FuncValueId value) const {
    const TraceEntry& r = trace_.entries[read];
    const auto& table = r.isParamRead() ? passing_ : byValue_;
    auto it = table.find(value);
    if (it == table.end()) return std::nullopt;
    const auto& list = it->second;
    for (auto p = std::lower_bound(list.begin(), list.end(), read); p != list.begin();) {
        --p;
        if (writes(r, trace_.entries[*p], value)) return *p;
    }
    return std::nullopt;
}

std::optional<std::size_t> precedingReadOrCreate(const FlowTrace& trace, std::size_t from, FuncValueId value) {
    for (std::size_t i = std::min(from, trace.entries.size()); i-- > 0;) {
        const TraceEntry& e = trace.entries[i];
        if (e.funcValue == value && e.isReadOrCreate()) return i;
    }
    return std::nullopt;
}

std::optional<std::size_t> matchingWrite(const FlowTrace& trace, std::size_t read, FuncValueId value) {
    const TraceEntry& r = trace.entries[read];
    for (std::size_t i = read; i-- > 0;)
        if (writes(r, trace.entries[i], value)) return i;
    return std::nullopt;
}

CopyChainResult findDynamicCopies(const TraceIndex& index, std::size_t invoke) {
    return reconstruct(
        index.trace(), invoke, [&](std::size_t from, FuncValueId f) { return index.precedingReadOrCreate(from, f); },
        [&](std::size_t read, FuncValueId f) { return index.matchingWrite(read, f); });
}

CopyChainResult findDynamicCopies(const FlowTrace& trace, std::size_t invoke) {
    return findDynamicCopies(TraceIndex(trace), invoke);
}

}  // namespace cgrl
