#include "cgrl/trace.hpp"

#include <array>
#include <utility>

namespace cgrl {

namespace {

constexpr std::array<std::pair<EntryKind, const char*>, 7> kKinds{{
    {EntryKind::Create, "Create"},
    {EntryKind::VarRead, "VarRead"},
    {EntryKind::VarWrite, "VarWrite"},
    {EntryKind::PropRead, "PropRead"},
    {EntryKind::PropWrite, "PropWrite"},
    {EntryKind::Invoke, "Invoke"},
    {EntryKind::Return, "Return"},
}};

constexpr std::array<std::pair<std::uint32_t, const char*>, 7> kFlags{{
    {kFlagGetter, "getter"},
    {kFlagSetter, "setter"},
    {kFlagSynthetic, "synthetic"},
    {kFlagEvalOrigin, "evalOrigin"},
    {kFlagNativeCallbackBoundary, "nativeCallbackBoundary"},
    {kFlagBoundCall, "boundCall"},
    {kFlagMultiLevelNative, "multiLevelNative"},
}};

}  // namespace

const char* entryKindName(EntryKind kind) {
    for (const auto& [k, n] : kKinds)
        if (k == kind) return n;
    return "?";
}

std::optional<EntryKind> parseEntryKind(const std::string& name) {
    for (const auto& [k, n] : kKinds)
        if (name == n) return k;
    return std::nullopt;
}

std::vector<std::string> flagNames(std::uint32_t flags) {
    std::vector<std::string> out;
    for (const auto& [f, n] : kFlags)
        if (flags & f) out.emplace_back(n);
    return out;
}

std::optional<std::uint32_t> parseFlag(const std::string& name) {
    for (const auto& [f, n] : kFlags)
        if (name == n) return f;
    return std::nullopt;
}

}  // namespace cgrl
