// Registry of native (built-in) functions.
//
// "modeled" means the static analysis has a function node and, where the
// behavior allows it, summary edges for the native. Unmodeled natives are
// invisible to the static analysis.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace cgrl {

enum class NativeBehavior {
    Pure,             // returns a non-function value
    InvokesArgument,  // calls back its function-valued argument(s)
    ReturnsFunction,  // returns its first argument
    EvaluatesCode,    // evalCode(string): runs code in the caller's scope
    MakesFunction,    // makeFunction(params, body): Function-constructor analog
    Binds,            // f.bind(thisArg, ...args)
    ReflectiveCall,   // f.call(thisArg, ...args)
    ReflectiveApply,  // f.apply(thisArg, argsArray)
    ArrayPush,        // arr.push(v)
    ArrayPop,         // arr.pop()
};

enum class NativeAccess { Global, FunctionMethod, ArrayMethod };

const char* behaviorName(NativeBehavior b);
std::optional<NativeBehavior> parseBehavior(const std::string& s);

struct NativeSpec {
    std::string name;
    bool modeled = false;
    NativeBehavior behavior = NativeBehavior::Pure;
    NativeAccess access = NativeAccess::Global;

    /// "native:<name>"
    std::string id() const;
};

class NativeConfig {
public:
    NativeConfig() = default;
    explicit NativeConfig(std::vector<NativeSpec> natives);

    /// call, apply, bind, push, pop, evalCode, makeFunction, print and
    /// randomInt are modeled; forEachItem, identityFn and timestamp are not.
    static NativeConfig defaults();

    const std::vector<NativeSpec>& natives() const { return natives_; }
    const NativeSpec* find(const std::string& name) const;
    const NativeSpec* findById(const std::string& id) const;
    const NativeSpec* method(NativeAccess access, const std::string& name) const;
    std::vector<std::string> globalNames() const;
    std::size_t indexOf(const NativeSpec& spec) const;

    nlohmann::json toJson() const;
    /// Throws std::invalid_argument naming the offending field.
    static NativeConfig fromJson(const nlohmann::json& j);

private:
    std::vector<NativeSpec> natives_;
};

}  // namespace cgrl
