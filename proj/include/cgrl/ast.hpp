// AST for MiniJS, the JavaScript-like core language the toolkit analyzes.
//
// Every node carries the SourceLoc of its distinguishing token: identifiers
// and literals at their first character, member accesses at the `.` or `[`,
// calls at the `(`, assignments and binary operators at the operator, and
// function literals at the `function` (or `get`/`set`) keyword. That keeps
// locations injective within a unit.
#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cgrl/source_loc.hpp"

namespace cgrl {

/// How a variable reference resolves.
enum class BindingKind {
    Local,   // var/function declared in the enclosing function
    Param,   // formal parameter of the enclosing function
    Outer,   // declared in an enclosing lexical scope (incl. top level)
    Global,  // top-level reference to a top-level name, or a native
    Return,  // pseudo-variable holding a function's return value (trace only)
};

struct Binding {
    BindingKind kind = BindingKind::Global;
    /// FunctionId of the declaring function; kGlobalScope for top-level names.
    std::string scope;
    /// Formal index for Param bindings, -1 otherwise.
    int index = -1;

    bool operator==(const Binding&) const = default;
};

inline constexpr const char* kGlobalScope = "<global>";
inline constexpr const char* kTopLevel = "toplevel";

const char* bindingKindName(BindingKind kind);
std::optional<BindingKind> parseBindingKind(const std::string& name);

namespace ast {

struct Expr;
struct Stmt;
struct FunctionDef;
using ExprPtr = std::unique_ptr<Expr>;
using StmtPtr = std::unique_ptr<Stmt>;

struct NumberLit { double value = 0; };
struct StringLit { std::string value; };
struct BoolLit { bool value = false; };
struct NullLit {};
struct ThisExpr {};

struct Ident {
    std::string name;
    Binding binding;  // filled by resolveBindings
};

struct FunctionExpr { FunctionDef* def = nullptr; };

struct Property {
    enum class Kind { Data, Getter, Setter };
    Kind kind = Kind::Data;
    std::string key;
    SourceLoc keyLoc;
    ExprPtr value;                   // Data
    FunctionDef* accessor = nullptr; // Getter / Setter
};

struct ObjectLit { std::vector<Property> props; };
struct ArrayLit { std::vector<ExprPtr> elements; };

/// `object.name`, `object["name"]` (both static) or `object[nameExpr]`.
struct Member {
    ExprPtr object;
    std::string name;   // static accesses only
    ExprPtr nameExpr;   // dynamic accesses only
    bool bracket = false;

    bool isDynamic() const { return nameExpr != nullptr; }
};

struct Call {
    ExprPtr callee;
    std::vector<ExprPtr> args;
};

struct Assign {
    ExprPtr target;  // Ident or Member
    ExprPtr value;
};

struct Binary {
    std::string op;  // + - * / % < > <= >= == != === !== && ||
    ExprPtr lhs;
    ExprPtr rhs;
};

struct Unary {
    std::string op;  // ! -
    ExprPtr operand;
};

struct Expr {
    SourceLoc loc;
    std::variant<NumberLit, StringLit, BoolLit, NullLit, ThisExpr, Ident, FunctionExpr,
                 ObjectLit, ArrayLit, Member, Call, Assign, Binary, Unary>
        node;

    template <class T> T* as() { return std::get_if<T>(&node); }
    template <class T> const T* as() const { return std::get_if<T>(&node); }
};

struct VarDecl {
    std::string name;
    SourceLoc nameLoc;
    ExprPtr init;
    Binding binding;
};

struct FuncDecl {
    FunctionDef* def = nullptr;
    Binding binding;
};

struct ExprStmt { ExprPtr expr; };
struct Return { ExprPtr value; };

struct If {
    ExprPtr cond;
    StmtPtr then;
    StmtPtr otherwise;
};

struct While {
    ExprPtr cond;
    StmtPtr body;
};

/// `for ([var] name in object) body`
struct ForIn {
    bool declares = false;
    std::string var;
    SourceLoc varLoc;
    Binding binding;
    ExprPtr object;
    StmtPtr body;
};

struct Block { std::vector<StmtPtr> body; };
struct Empty {};

struct Stmt {
    SourceLoc loc;
    std::variant<VarDecl, FuncDecl, ExprStmt, Return, If, While, ForIn, Block, Empty> node;

    template <class T> T* as() { return std::get_if<T>(&node); }
    template <class T> const T* as() const { return std::get_if<T>(&node); }
};

enum class FunctionKind { Ordinary, Getter, Setter };

struct FunctionDef {
    std::string id;    // "<name>#<ordinal>", unit-qualified for evaluated code
    std::string name;  // empty for anonymous literals
    FunctionKind kind = FunctionKind::Ordinary;
    bool declaration = false;
    std::vector<std::string> params;
    std::vector<SourceLoc> paramLocs;
    std::vector<StmtPtr> body;
    SourceLoc loc;
    FunctionDef* parent = nullptr;  // lexically enclosing function
    /// Hoisted `var` and function-declaration names (filled by resolveBindings).
    std::vector<std::string> locals;
    /// Named function expression whose name is bound inside its own body.
    bool bindsSelf = false;
    bool selfReferenced = false;
};

}  // namespace ast

struct Program {
    std::string unit;
    int evalDepth = 0;
    std::vector<ast::StmtPtr> body;
    /// One entry per function literal, declaration, or accessor, in source order.
    std::vector<std::unique_ptr<ast::FunctionDef>> functions;
    /// Hoisted top-level names (filled by resolveBindings).
    std::vector<std::string> topLevelNames;

    const ast::FunctionDef* function(const std::string& id) const;
};

}  // namespace cgrl
