// Dynamic artifacts: the function-value flow trace and the dynamic call graph.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "cgrl/ast.hpp"
#include "cgrl/source_loc.hpp"

namespace cgrl {

/// Runtime identity of a function value (distinct closures have distinct ids).
using FuncValueId = std::uint32_t;

enum class EntryKind { Create, VarRead, VarWrite, PropRead, PropWrite, Invoke, Return };

const char* entryKindName(EntryKind kind);
std::optional<EntryKind> parseEntryKind(const std::string& name);

enum EntryFlag : std::uint32_t {
    kFlagGetter = 1u << 0,
    kFlagSetter = 1u << 1,
    kFlagSynthetic = 1u << 2,
    kFlagEvalOrigin = 1u << 3,
    kFlagNativeCallbackBoundary = 1u << 4,
    kFlagBoundCall = 1u << 5,
    kFlagMultiLevelNative = 1u << 6,
};

std::vector<std::string> flagNames(std::uint32_t flags);
std::optional<std::uint32_t> parseFlag(const std::string& name);

inline constexpr const char* kNativePrefix = "native:";
inline bool isNativeId(const std::string& id) { return id.rfind(kNativePrefix, 0) == 0; }

/// A function value passed at an argument position of an Invoke.
struct PassedArg {
    int position = 0;
    FuncValueId funcValue = 0;
    bool operator==(const PassedArg&) const = default;
};

/// One event on a function value.
///
///  - Create: `funcId` is the created function.
///  - VarRead / VarWrite: `name` and `binding` name the variable. A read with
///    a Return binding is the call-site read of a callee's return value;
///    `binding.scope` is then the callee's FunctionId.
///  - PropRead / PropWrite: `name` is the property name only; base objects
///    are not recorded.
///  - Invoke: `args` lists function values passed by position.
///  - Return: `via` is the FunctionId of the returning function.
///
/// `via` additionally names the native through which an Invoke happened, or
/// the native (makeFunction, bind) that created a function value.
struct TraceEntry {
    std::size_t index = 0;
    EntryKind kind = EntryKind::Create;
    std::string name;
    std::optional<Binding> binding;
    std::string funcId;
    FuncValueId funcValue = 0;
    SourceLoc loc;
    std::uint32_t flags = 0;
    std::vector<PassedArg> args;
    std::string via;
    std::optional<FuncValueId> boundTarget;
    std::optional<std::uint64_t> baseId;  // reserved; never filled

    bool has(std::uint32_t f) const { return (flags & f) != 0; }
    bool isReadOrCreate() const {
        return kind == EntryKind::Create || kind == EntryKind::VarRead || kind == EntryKind::PropRead;
    }
    bool isParamRead() const {
        return kind == EntryKind::VarRead && binding && binding->kind == BindingKind::Param;
    }
    bool isReturnRead() const {
        return kind == EntryKind::VarRead && binding && binding->kind == BindingKind::Return;
    }
    bool operator==(const TraceEntry&) const = default;
};

struct FlowTrace {
    std::vector<TraceEntry> entries;
    /// funcValue -> FunctionId of the creating literal (or native id).
    std::map<FuncValueId, std::string> creators;

    bool operator==(const FlowTrace&) const = default;
};

struct DynamicEdge {
    std::string caller;  // FunctionId, kTopLevel, or native id
    SourceLoc site;
    std::string callee;  // FunctionId or native id

    auto operator<=>(const DynamicEdge&) const = default;
    bool operator==(const DynamicEdge&) const = default;
};

struct DynamicCallGraph {
    std::set<DynamicEdge> edges;
    std::set<std::string> entrypoints;

    bool operator==(const DynamicCallGraph&) const = default;
};

}  // namespace cgrl
