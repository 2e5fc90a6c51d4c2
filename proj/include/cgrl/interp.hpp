// Tree-walking MiniJS interpreter that records the dynamic call graph and the
// function-value flow trace.
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cgrl/frontend.hpp"
#include "cgrl/natives.hpp"
#include "cgrl/trace.hpp"

namespace cgrl {

class RuntimeError : public std::runtime_error {
public:
    RuntimeError(SourceLoc loc, const std::string& message);
    const SourceLoc& loc() const { return loc_; }

private:
    SourceLoc loc_;
};

class StepBudgetExceeded : public RuntimeError {
public:
    StepBudgetExceeded(SourceLoc loc, std::uint64_t budget);
};

struct ExecutionOptions {
    std::uint64_t stepBudget = 10'000'000;
    std::uint64_t seed = 0;
    /// Nesting limit for calls; deeper recursion is a RuntimeError.
    std::size_t maxCallDepth = 1000;
};

struct ExecutionError {
    enum class Kind { Runtime, StepBudget };
    Kind kind = Kind::Runtime;
    SourceLoc loc;
    std::string message;
};

/// The trace and call graph survive a failed run; `error` says why it stopped.
struct ExecutionResult {
    DynamicCallGraph dcg;
    FlowTrace trace;
    std::optional<ExecutionError> error;
    std::vector<std::string> output;  // lines passed to print()
};

/// Parses and resolves `source`, treating the config's global natives as
/// predeclared.
BoundProgram loadProgram(std::string_view source, const std::string& unit, const NativeConfig& natives);

ExecutionResult execute(const BoundProgram& program, const NativeConfig& natives,
                        const ExecutionOptions& options = {});

/// Unit names given to dynamically evaluated code.
inline constexpr const char* kEvalUnitPrefix = "<evalCode#";
inline constexpr const char* kMakeFunctionUnitPrefix = "<makeFunction#";
/// Unit of the synthetic locations at which natives are created.
inline constexpr const char* kNativeUnit = "<native>";

}  // namespace cgrl
