#include "cgrl/natives.hpp"

#include <array>
#include <set>
#include <stdexcept>
#include <utility>

namespace cgrl {

namespace {

constexpr std::array<std::pair<NativeBehavior, const char*>, 10> kBehaviors{{
    {NativeBehavior::Pure, "pure"},
    {NativeBehavior::InvokesArgument, "invokes-argument"},
    {NativeBehavior::ReturnsFunction, "returns-function"},
    {NativeBehavior::EvaluatesCode, "evaluates-code"},
    {NativeBehavior::MakesFunction, "makes-function"},
    {NativeBehavior::Binds, "binds"},
    {NativeBehavior::ReflectiveCall, "reflective-call"},
    {NativeBehavior::ReflectiveApply, "reflective-apply"},
    {NativeBehavior::ArrayPush, "array-push"},
    {NativeBehavior::ArrayPop, "array-pop"},
}};

constexpr std::array<std::pair<NativeAccess, const char*>, 3> kAccess{{
    {NativeAccess::Global, "global"},
    {NativeAccess::FunctionMethod, "function-method"},
    {NativeAccess::ArrayMethod, "array-method"},
}};

}  // namespace

const char* behaviorName(NativeBehavior b) {
    for (const auto& [k, n] : kBehaviors)
        if (k == b) return n;
    return "?";
}

std::optional<NativeBehavior> parseBehavior(const std::string& s) {
    for (const auto& [k, n] : kBehaviors)
        if (s == n) return k;
    return std::nullopt;
}

std::string NativeSpec::id() const { return std::string("native:") + name; }

NativeConfig::NativeConfig(std::vector<NativeSpec> natives) : natives_(std::move(natives)) {
    std::set<std::string> seen;
    for (const auto& n : natives_)
        if (!seen.insert(n.name).second) throw std::invalid_argument("duplicate native '" + n.name + "'");
}

NativeConfig NativeConfig::defaults() {
    using B = NativeBehavior;
    using A = NativeAccess;
    return NativeConfig({
        {"call", true, B::ReflectiveCall, A::FunctionMethod},
        {"apply", true, B::ReflectiveApply, A::FunctionMethod},
        {"bind", true, B::Binds, A::FunctionMethod},
        {"push", true, B::ArrayPush, A::ArrayMethod},
        {"pop", true, B::ArrayPop, A::ArrayMethod},
        {"evalCode", true, B::EvaluatesCode, A::Global},
        {"makeFunction", true, B::MakesFunction, A::Global},
        {"print", true, B::Pure, A::Global},
        {"randomInt", true, B::Pure, A::Global},
        {"forEachItem", false, B::InvokesArgument, A::Global},
        {"identityFn", false, B::ReturnsFunction, A::Global},
        {"timestamp", false, B::Pure, A::Global},
    });
}

const NativeSpec* NativeConfig::find(const std::string& name) const {
    for (const auto& n : natives_)
        if (n.name == name) return &n;
    return nullptr;
}

const NativeSpec* NativeConfig::findById(const std::string& id) const {
    if (id.rfind("native:", 0) != 0) return nullptr;
    return find(id.substr(7));
}

const NativeSpec* NativeConfig::method(NativeAccess access, const std::string& name) const {
    const NativeSpec* n = find(name);
    return n && n->access == access ? n : nullptr;
}

std::vector<std::string> NativeConfig::globalNames() const {
    std::vector<std::string> out;
    for (const auto& n : natives_)
        if (n.access == NativeAccess::Global) out.push_back(n.name);
    return out;
}

std::size_t NativeConfig::indexOf(const NativeSpec& spec) const {
    return static_cast<std::size_t>(&spec - natives_.data());
}

nlohmann::json NativeConfig::toJson() const {
    nlohmann::json list = nlohmann::json::array();
    for (const auto& n : natives_) {
        const char* access = "global";
        for (const auto& [k, s] : kAccess)
            if (k == n.access) access = s;
        list.push_back({{"name", n.name}, {"modeled", n.modeled}, {"behavior", behaviorName(n.behavior)},
                        {"access", access}});
    }
    return {{"schemaVersion", 1}, {"kind", "nativeConfig"}, {"natives", std::move(list)}};
}

NativeConfig NativeConfig::fromJson(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("natives") || !j["natives"].is_array())
        throw std::invalid_argument("field 'natives' missing or not an array");
    std::vector<NativeSpec> out;
    for (std::size_t i = 0; i < j["natives"].size(); ++i) {
        const auto& e = j["natives"][i];
        std::string where = "natives[" + std::to_string(i) + "]";
        if (!e.contains("name") || !e["name"].is_string())
            throw std::invalid_argument("field '" + where + ".name' missing or not a string");
        if (!e.contains("modeled") || !e["modeled"].is_boolean())
            throw std::invalid_argument("field '" + where + ".modeled' missing or not a boolean");
        NativeSpec spec;
        spec.name = e["name"].get<std::string>();
        spec.modeled = e["modeled"].get<bool>();
        auto behavior = parseBehavior(e.value("behavior", std::string()));
        if (!behavior) throw std::invalid_argument("field '" + where + ".behavior' is not a known behavior");
        spec.behavior = *behavior;
        std::string access = e.value("access", std::string("global"));
        bool known = false;
        for (const auto& [k, s] : kAccess) {
            if (access == s) {
                spec.access = k;
                known = true;
            }
        }
        if (!known) throw std::invalid_argument("field '" + where + ".access' is not a known access kind");
        out.push_back(std::move(spec));
    }
    return NativeConfig(std::move(out));
}

}  // namespace cgrl
