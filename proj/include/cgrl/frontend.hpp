// MiniJS frontend: lexing, parsing, scope resolution, printing, AST dump.
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "cgrl/ast.hpp"

namespace cgrl {

class SyntaxError : public std::runtime_error {
public:
    SyntaxError(SourceLoc loc, const std::string& message);
    const SourceLoc& loc() const { return loc_; }

private:
    SourceLoc loc_;
};

class UnboundVariable : public std::runtime_error {
public:
    UnboundVariable(std::string name, SourceLoc loc);
    const std::string& name() const { return name_; }
    const SourceLoc& loc() const { return loc_; }

private:
    std::string name_;
    SourceLoc loc_;
};

/// A call expression together with the function it syntactically sits in.
struct CallSiteInfo {
    SourceLoc loc;
    std::string enclosing;  // FunctionId or kTopLevel
    const ast::Call* call = nullptr;
};

/// A property access (read or write target) and its enclosing function.
struct AccessInfo {
    SourceLoc loc;
    std::string enclosing;
    const ast::Member* member = nullptr;
};

/// A Program whose identifiers carry resolved bindings, plus lookup tables
/// keyed by source location.
class BoundProgram {
public:
    BoundProgram() = default;
    BoundProgram(BoundProgram&&) noexcept = default;
    BoundProgram& operator=(BoundProgram&&) noexcept = default;

    const Program& program() const { return program_; }
    const std::vector<CallSiteInfo>& callSites() const { return callSites_; }
    const std::vector<AccessInfo>& accesses() const { return accesses_; }

    const ast::Expr* exprAt(const SourceLoc& loc) const;
    const AccessInfo* accessAt(const SourceLoc& loc) const;
    /// FunctionId of the function syntactically enclosing `loc`, or kTopLevel.
    /// Empty when `loc` is not a known expression location.
    std::string enclosingFunction(const SourceLoc& loc) const;
    const ast::FunctionDef* function(const std::string& id) const { return program_.function(id); }

private:
    friend BoundProgram resolveBindings(Program program, const std::vector<std::string>& predeclared,
                                        bool allowFree);
    Program program_;
    std::vector<CallSiteInfo> callSites_;
    std::vector<AccessInfo> accesses_;
    std::unordered_map<SourceLoc, const ast::Expr*, SourceLocHash> exprs_;
    std::unordered_map<SourceLoc, std::string, SourceLocHash> enclosing_;
    std::unordered_map<SourceLoc, std::size_t, SourceLocHash> accessIndex_;
};

/// Parses MiniJS text. Throws SyntaxError; never returns a partial AST.
Program parseProgram(std::string_view source, const std::string& unitName, int evalDepth = 0);

/// Resolves every identifier. Names in `predeclared` (natives) resolve as
/// globals. With `allowFree`, unresolvable names also resolve as globals
/// instead of throwing UnboundVariable (used for dynamically evaluated code).
BoundProgram resolveBindings(Program program, const std::vector<std::string>& predeclared = {},
                             bool allowFree = false);

/// Pretty-prints a program as parseable MiniJS.
std::string printProgram(const Program& program);

/// JSON AST dump: {kind, loc:{unit,line,col,evalDepth}, ..., children:[...]}.
nlohmann::json astToJson(const Program& program);

nlohmann::json locToJson(const SourceLoc& loc);
SourceLoc locFromJson(const nlohmann::json& j);

}  // namespace cgrl
