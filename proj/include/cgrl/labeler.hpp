// Root-cause labels for missing flows, and property-name categories for
// dynamic property accesses.
#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "cgrl/detector.hpp"

namespace cgrl {

enum class RootCauseLabel {
    DynamicPropertyAccess,
    ParameterPass,
    FunctionReturn,
    CallToUnmodelledNative,
    CallsFromUnmodelledNative,
    CreationViaFunctionConstructor,
    CallToGetterSetter,
    UseOfEval,
    EvalViaNewFunction,
    CallToBoundedFunction,
    MultipleLevelsOfNative,
    UseOfWith,  // MiniJS has no `with`; never produced
    Others,
};

const char* labelName(RootCauseLabel l);
std::optional<RootCauseLabel> parseLabel(const std::string& s);

enum class PropertyNameCategory {
    ForInLoop,
    ParameterPassed,
    OuterScopeVariable,
    PropertyRead,
    StringConcat,       // no constant prefix or suffix
    StringConcatConst,  // constant prefix or suffix
    LocalComputation,
    Unknown,
};

const char* categoryName(PropertyNameCategory c);
std::optional<PropertyNameCategory> parseCategory(const std::string& s);

class NotADynamicAccess : public std::invalid_argument {
public:
    explicit NotADynamicAccess(const SourceLoc& loc)
        : std::invalid_argument(loc.str() + ": not a dynamic property access") {}
};

RootCauseLabel labelFlow(const MissingFlow& flow, const FlowTrace& trace, const BoundProgram& program,
                         const NativeConfig& natives);

/// Location of the dynamic property access a DynamicPropertyAccess flow hinges on.
std::optional<SourceLoc> dynamicAccessOf(const MissingFlow& flow, const FlowTrace& trace,
                                         const BoundProgram& program);

/// Intra-procedural classification of the name expression at `accessLoc`.
PropertyNameCategory classifyPropertyName(const SourceLoc& accessLoc, const BoundProgram& program);

}  // namespace cgrl
