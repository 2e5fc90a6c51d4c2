// Backward reconstruction of the dynamic copies that carried a function value
// from its creation to an invocation.
#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "cgrl/trace.hpp"

namespace cgrl {

/// Why a chain (or a missed edge's explanation) stops short.
enum class GapReason { UnmatchedRead, UnmatchedWrite, NativeOpaque, BoundFunction, MultiLevelNative, CyclicDependence };

const char* gapReasonName(GapReason r);
std::optional<GapReason> parseGapReason(const std::string& s);

/// t_r' --t_w--> t_r. For the final, invoke-labeled copy `write` and `dest`
/// are both the Invoke entry.
struct DynamicCopy {
    std::size_t read = 0;
    std::size_t write = 0;
    std::size_t dest = 0;
    bool invoke = false;

    auto operator<=>(const DynamicCopy&) const = default;
    bool operator==(const DynamicCopy&) const = default;
};

struct CopyChainResult {
    std::vector<DynamicCopy> chain;  // creation first, invocation last
    bool complete = false;
    std::optional<GapReason> reason;

    bool operator==(const CopyChainResult&) const = default;
};

class NotAnInvoke : public std::invalid_argument {
public:
    explicit NotAnInvoke(std::size_t index)
        : std::invalid_argument("trace entry " + std::to_string(index) + " is not an Invoke") {}
};

/// Per-function-value position lists over a trace, so that backward searches
/// touch only entries of the value involved.
class TraceIndex {
public:
    explicit TraceIndex(const FlowTrace& trace);

    const FlowTrace& trace() const { return trace_; }

    std::optional<std::size_t> precedingReadOrCreate(std::size_t from, FuncValueId value) const;
    std::optional<std::size_t> matchingWrite(std::size_t read, FuncValueId value) const;

private:
    const FlowTrace& trace_;
    std::unordered_map<FuncValueId, std::vector<std::size_t>> byValue_;
    /// Invokes that passed the value as an argument.
    std::unordered_map<FuncValueId, std::vector<std::size_t>> passing_;
};

std::optional<std::size_t> precedingReadOrCreate(const FlowTrace& trace, std::size_t from, FuncValueId value);
std::optional<std::size_t> matchingWrite(const FlowTrace& trace, std::size_t read, FuncValueId value);

CopyChainResult findDynamicCopies(const TraceIndex& index, std::size_t invoke);
CopyChainResult findDynamicCopies(const FlowTrace& trace, std::size_t invoke);

}  // namespace cgrl
