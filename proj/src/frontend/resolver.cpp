#include <algorithm>
#include <unordered_set>

#include "cgrl/frontend.hpp"

namespace cgrl {

UnboundVariable::UnboundVariable(std::string name, SourceLoc loc)
    : std::runtime_error(loc.str() + ": unbound variable '" + name + "'"),
      name_(std::move(name)),
      loc_(std::move(loc)) {}

const char* bindingKindName(BindingKind kind) {
    switch (kind) {
        case BindingKind::Local: return "local";
        case BindingKind::Param: return "param";
        case BindingKind::Outer: return "outer";
        case BindingKind::Global: return "global";
        case BindingKind::Return: return "return";
    }
    return "?";
}

std::optional<BindingKind> parseBindingKind(const std::string& name) {
    for (auto k : {BindingKind::Local, BindingKind::Param, BindingKind::Outer, BindingKind::Global,
                   BindingKind::Return})
        if (name == bindingKindName(k)) return k;
    return std::nullopt;
}

namespace {

using namespace ast;

void collectDeclarations(const Stmt& s, std::vector<std::string>& out) {
    auto add = [&out](const std::string& n) {
        if (std::find(out.begin(), out.end(), n) == out.end()) out.push_back(n);
    };
    std::visit(
        [&](const auto& node) {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, VarDecl>) {
                add(node.name);
            } else if constexpr (std::is_same_v<T, FuncDecl>) {
                add(node.def->name);
            } else if constexpr (std::is_same_v<T, If>) {
                collectDeclarations(*node.then, out);
                if (node.otherwise) collectDeclarations(*node.otherwise, out);
            } else if constexpr (std::is_same_v<T, While>) {
                collectDeclarations(*node.body, out);
            } else if constexpr (std::is_same_v<T, ForIn>) {
                if (node.declares) add(node.var);
                collectDeclarations(*node.body, out);
            } else if constexpr (std::is_same_v<T, Block>) {
                for (const auto& c : node.body) collectDeclarations(*c, out);
            }
        },
        s.node);
}

struct Scope {
    FunctionDef* fn = nullptr;  // null for top level
    std::vector<std::string> names;
    bool declares(const std::string& n) const {
        return std::find(names.begin(), names.end(), n) != names.end();
    }
};

class Resolver {
public:
    Resolver(const std::vector<std::string>& predeclared, bool allowFree)
        : natives_(predeclared.begin(), predeclared.end()), allowFree_(allowFree) {}

    std::vector<CallSiteInfo> callSites;
    std::vector<AccessInfo> accesses;
    std::unordered_map<SourceLoc, const Expr*, SourceLocHash> exprs;
    std::unordered_map<SourceLoc, std::string, SourceLocHash> enclosing;

    void run(Program& program) {
        for (const auto& s : program.body) collectDeclarations(*s, program.topLevelNames);
        scopes_.push_back(Scope{nullptr, program.topLevelNames});
        for (auto& s : program.body) stmt(*s);
        scopes_.pop_back();
    }

private:
    std::unordered_set<std::string> natives_;
    bool allowFree_;
    std::vector<Scope> scopes_;

    std::string currentFn() const {
        const FunctionDef* fn = scopes_.back().fn;
        return fn ? fn->id : kTopLevel;
    }

    Binding resolve(const std::string& name, const SourceLoc& loc) {
        for (std::size_t k = scopes_.size(); k-- > 0;) {
            const Scope& sc = scopes_[k];
            bool innermost = k + 1 == scopes_.size();
            if (sc.fn) {
                const auto& params = sc.fn->params;
                // Last duplicate formal wins, as in JS.
                for (std::size_t i = params.size(); i-- > 0;) {
                    if (params[i] == name) {
                        if (innermost) return {BindingKind::Param, sc.fn->id, static_cast<int>(i)};
                        return {BindingKind::Outer, sc.fn->id, -1};
                    }
                }
                if (sc.declares(name)) {
                    if (sc.fn->bindsSelf && name == sc.fn->name) sc.fn->selfReferenced = true;
                    return {innermost ? BindingKind::Local : BindingKind::Outer, sc.fn->id, -1};
                }
            } else if (sc.declares(name)) {
                return {innermost ? BindingKind::Global : BindingKind::Outer, kGlobalScope, -1};
            }
        }
        if (natives_.count(name) || allowFree_) return {BindingKind::Global, kGlobalScope, -1};
        throw UnboundVariable(name, loc);
    }

    void function(FunctionDef& def) {
        for (const auto& s : def.body) collectDeclarations(*s, def.locals);
        Scope sc{&def, def.locals};
        // A named function expression sees its own name.
        if (!def.declaration && !def.name.empty() && def.kind == FunctionKind::Ordinary && !sc.declares(def.name) &&
            std::find(def.params.begin(), def.params.end(), def.name) == def.params.end()) {
            sc.names.push_back(def.name);
            def.locals.push_back(def.name);
            def.bindsSelf = true;
        }
        scopes_.push_back(std::move(sc));
        for (auto& s : def.body) stmt(*s);
        scopes_.pop_back();
    }

    void stmt(Stmt& s) {
        std::visit(
            [&](auto& node) {
                using T = std::decay_t<decltype(node)>;
                if constexpr (std::is_same_v<T, VarDecl>) {
                    node.binding = resolve(node.name, node.nameLoc);
                    if (node.init) expr(*node.init);
                } else if constexpr (std::is_same_v<T, FuncDecl>) {
                    node.binding = resolve(node.def->name, node.def->loc);
                    enclosing[node.def->loc] = currentFn();
                    function(*node.def);
                } else if constexpr (std::is_same_v<T, ExprStmt>) {
                    expr(*node.expr);
                } else if constexpr (std::is_same_v<T, Return>) {
                    if (node.value) expr(*node.value);
                } else if constexpr (std::is_same_v<T, If>) {
                    expr(*node.cond);
                    stmt(*node.then);
                    if (node.otherwise) stmt(*node.otherwise);
                } else if constexpr (std::is_same_v<T, While>) {
                    expr(*node.cond);
                    stmt(*node.body);
                } else if constexpr (std::is_same_v<T, ForIn>) {
                    node.binding = resolve(node.var, node.varLoc);
                    expr(*node.object);
                    stmt(*node.body);
                } else if constexpr (std::is_same_v<T, Block>) {
                    for (auto& c : node.body) stmt(*c);
                }
            },
            s.node);
    }

    void expr(Expr& e) {
        exprs.emplace(e.loc, &e);
        enclosing[e.loc] = currentFn();
        std::visit(
            [&](auto& node) {
                using T = std::decay_t<decltype(node)>;
                if constexpr (std::is_same_v<T, Ident>) {
                    node.binding = resolve(node.name, e.loc);
                } else if constexpr (std::is_same_v<T, FunctionExpr>) {
                    function(*node.def);
                } else if constexpr (std::is_same_v<T, ObjectLit>) {
                    for (auto& p : node.props) {
                        if (p.value) expr(*p.value);
                        if (p.accessor) {
                            enclosing[p.accessor->loc] = currentFn();
                            function(*p.accessor);
                        }
                    }
                } else if constexpr (std::is_same_v<T, ArrayLit>) {
                    for (auto& el : node.elements) expr(*el);
                } else if constexpr (std::is_same_v<T, Member>) {
                    accesses.push_back({e.loc, currentFn(), &node});
                    expr(*node.object);
                    if (node.nameExpr) expr(*node.nameExpr);
                } else if constexpr (std::is_same_v<T, Call>) {
                    callSites.push_back({e.loc, currentFn(), &node});
                    expr(*node.callee);
                    for (auto& a : node.args) expr(*a);
                } else if constexpr (std::is_same_v<T, Assign>) {
                    expr(*node.target);
                    expr(*node.value);
                } else if constexpr (std::is_same_v<T, Binary>) {
                    expr(*node.lhs);
                    expr(*node.rhs);
                } else if constexpr (std::is_same_v<T, Unary>) {
                    expr(*node.operand);
                }
            },
            e.node);
    }
};

}  // namespace

BoundProgram resolveBindings(Program program, const std::vector<std::string>& predeclared, bool allowFree) {
    Resolver r(predeclared, allowFree);
    r.run(program);
    BoundProgram bound;
    bound.program_ = std::move(program);
    bound.callSites_ = std::move(r.callSites);
    bound.accesses_ = std::move(r.accesses);
    bound.exprs_ = std::move(r.exprs);
    bound.enclosing_ = std::move(r.enclosing);
    for (std::size_t i = 0; i < bound.accesses_.size(); ++i) bound.accessIndex_[bound.accesses_[i].loc] = i;
    return bound;
}

const ast::Expr* BoundProgram::exprAt(const SourceLoc& loc) const {
    auto it = exprs_.find(loc);
    return it == exprs_.end() ? nullptr : it->second;
}

const AccessInfo* BoundProgram::accessAt(const SourceLoc& loc) const {
    auto it = accessIndex_.find(loc);
    return it == accessIndex_.end() ? nullptr : &accesses_[it->second];
}

std::string BoundProgram::enclosingFunction(const SourceLoc& loc) const {
    auto it = enclosing_.find(loc);
    return it == enclosing_.end() ? std::string() : it->second;
}

}  // namespace cgrl
