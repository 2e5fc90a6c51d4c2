#include "cgrl/labeler.hpp"

#include <array>
#include <map>
#include <set>

#include "cgrl/interp.hpp"

namespace cgrl {

namespace {

using namespace ast;

constexpr std::array<std::pair<RootCauseLabel, const char*>, 13> kLabels{{
    {RootCauseLabel::DynamicPropertyAccess, "DynamicPropertyAccess"},
    {RootCauseLabel::ParameterPass, "ParameterPass"},
    {RootCauseLabel::FunctionReturn, "FunctionReturn"},
    {RootCauseLabel::CallToUnmodelledNative, "CallToUnmodelledNative"},
    {RootCauseLabel::CallsFromUnmodelledNative, "CallsFromUnmodelledNative"},
    {RootCauseLabel::CreationViaFunctionConstructor, "CreationViaFunctionConstructor"},
    {RootCauseLabel::CallToGetterSetter, "CallToGetterSetter"},
    {RootCauseLabel::UseOfEval, "UseOfEval"},
    {RootCauseLabel::EvalViaNewFunction, "EvalViaNewFunction"},
    {RootCauseLabel::CallToBoundedFunction, "CallToBoundedFunction"},
    {RootCauseLabel::MultipleLevelsOfNative, "MultipleLevelsOfNative"},
    {RootCauseLabel::UseOfWith, "UseOfWith"},
    {RootCauseLabel::Others, "Others"},
}};

constexpr std::array<std::pair<PropertyNameCategory, const char*>, 8> kCategories{{
    {PropertyNameCategory::ForInLoop, "ForInLoop"},
    {PropertyNameCategory::ParameterPassed, "ParameterPassed"},
    {PropertyNameCategory::OuterScopeVariable, "OuterScopeVariable"},
    {PropertyNameCategory::PropertyRead, "PropertyRead"},
    {PropertyNameCategory::StringConcat, "StringConcat"},
    {PropertyNameCategory::StringConcatConst, "StringConcatConstPrefixSuffix"},
    {PropertyNameCategory::LocalComputation, "LocalComputation"},
    {PropertyNameCategory::Unknown, "Unknown"},
}};

bool isDynamicAccess(const TraceEntry& e, const BoundProgram& program) {
    if (e.kind != EntryKind::PropRead && e.kind != EntryKind::PropWrite) return false;
    const AccessInfo* a = program.accessAt(e.loc);
    return a && a->member->isDynamic();
}

bool isUnmodeledNativeInvoke(const TraceEntry& e, const NativeConfig& natives) {
    if (e.kind != EntryKind::Invoke || !isNativeId(e.funcId)) return false;
    const NativeSpec* spec = natives.findById(e.funcId);
    return !spec || !spec->modeled;
}

bool viaReflective(const TraceEntry& e, const NativeConfig& natives) {
    if (!e.has(kFlagNativeCallbackBoundary)) return false;
    const NativeSpec* spec = natives.find(e.via);
    return spec && (spec->behavior == NativeBehavior::ReflectiveCall || spec->behavior == NativeBehavior::ReflectiveApply);
}

std::optional<RootCauseLabel> evalLabel(const std::vector<const TraceEntry*>& involved) {
    for (const TraceEntry* e : involved) {
        if (!e->has(kFlagEvalOrigin)) continue;
        if (e->loc.unit.rfind(kMakeFunctionUnitPrefix, 0) == 0) return RootCauseLabel::EvalViaNewFunction;
        return RootCauseLabel::UseOfEval;
    }
    return std::nullopt;
}

RootCauseLabel labelNode(const TraceEntry& e, const BoundProgram& program, const NativeConfig& natives) {
    if (e.kind == EntryKind::Create && isNativeId(e.funcId)) return RootCauseLabel::CallToUnmodelledNative;
    if (e.kind == EntryKind::Create && !e.via.empty()) {
        const NativeSpec* spec = natives.find(e.via);
        if (spec && spec->behavior == NativeBehavior::MakesFunction) return RootCauseLabel::CreationViaFunctionConstructor;
        return RootCauseLabel::Others;
    }
    if (e.has(kFlagGetter) || e.has(kFlagSetter)) return RootCauseLabel::CallToGetterSetter;
    if (e.kind == EntryKind::Invoke && e.has(kFlagNativeCallbackBoundary)) return RootCauseLabel::CallsFromUnmodelledNative;
    if (isDynamicAccess(e, program)) return RootCauseLabel::DynamicPropertyAccess;
    return RootCauseLabel::Others;
}

RootCauseLabel labelPath(const MissingFGPath& p, const FlowTrace& trace, const BoundProgram& program,
                         const NativeConfig& natives) {
    const auto& es = trace.entries;
    const TraceEntry& read = es[p.copy.read];
    const TraceEntry& write = es[p.copy.write];
    const TraceEntry& dest = es[p.copy.dest];
    if (isDynamicAccess(read, program) || isDynamicAccess(write, program) || isDynamicAccess(dest, program))
        return RootCauseLabel::DynamicPropertyAccess;
    if (!p.copy.invoke) {
        if (write.kind == EntryKind::Invoke) {
            if (write.has(kFlagGetter) || write.has(kFlagSetter)) return RootCauseLabel::CallToGetterSetter;
            return RootCauseLabel::ParameterPass;
        }
        if (write.kind == EntryKind::Return) return RootCauseLabel::FunctionReturn;
        // formal write at a call, seen from a closure reading the formal
        if (write.kind == EntryKind::VarWrite && write.binding && write.binding->kind == BindingKind::Param)
            return RootCauseLabel::ParameterPass;
    }
    for (std::size_t i = p.copy.read + 1; i < p.copy.write; ++i)
        if (isUnmodeledNativeInvoke(es[i], natives)) return RootCauseLabel::CallToUnmodelledNative;
    if (p.copy.invoke && viaReflective(write, natives)) return RootCauseLabel::ParameterPass;
    return RootCauseLabel::Others;
}

// ---- property names ----

int rank(PropertyNameCategory c) {
    switch (c) {
        case PropertyNameCategory::ForInLoop: return 0;
        case PropertyNameCategory::ParameterPassed: return 1;
        case PropertyNameCategory::OuterScopeVariable: return 2;
        case PropertyNameCategory::PropertyRead: return 3;
        case PropertyNameCategory::StringConcatConst: return 4;
        case PropertyNameCategory::StringConcat: return 5;
        case PropertyNameCategory::LocalComputation: return 6;
        case PropertyNameCategory::Unknown: return 7;
    }
    return 7;
}

/// Local categories only survive when every part is local.
PropertyNameCategory combine(const std::vector<PropertyNameCategory>& parts) {
    if (parts.empty()) return PropertyNameCategory::Unknown;
    PropertyNameCategory best = PropertyNameCategory::Unknown;
    bool allLocal = true;
    for (auto c : parts) {
        if (c == PropertyNameCategory::LocalComputation) continue;
        if (c == PropertyNameCategory::Unknown) {
            allLocal = false;
            continue;
        }
        if (rank(c) < rank(best)) best = c;
    }
    if (best != PropertyNameCategory::Unknown) return best;
    return allLocal ? PropertyNameCategory::LocalComputation : PropertyNameCategory::Unknown;
}

class NameClassifier {
public:
    explicit NameClassifier(const std::vector<StmtPtr>& body) {
        for (const auto& s : body) stmt(*s);
    }

    PropertyNameCategory classify(const Expr& e) {
        return std::visit(
            [&](const auto& node) -> PropertyNameCategory {
                using T = std::decay_t<decltype(node)>;
                if constexpr (std::is_same_v<T, NumberLit> || std::is_same_v<T, StringLit> ||
                              std::is_same_v<T, BoolLit> || std::is_same_v<T, NullLit>) {
                    return PropertyNameCategory::LocalComputation;
                } else if constexpr (std::is_same_v<T, Ident>) {
                    return ident(node);
                } else if constexpr (std::is_same_v<T, Member>) {
                    return PropertyNameCategory::PropertyRead;
                } else if constexpr (std::is_same_v<T, Assign>) {
                    return classify(*node.value);
                } else if constexpr (std::is_same_v<T, Binary>) {
                    if (node.op == "+") return concat(e);
                    return combine({classify(*node.lhs), classify(*node.rhs)});
                } else if constexpr (std::is_same_v<T, Unary>) {
                    return classify(*node.operand);
                } else {
                    return PropertyNameCategory::Unknown;
                }
            },
            e.node);
    }

private:
    std::map<std::string, std::vector<const Expr*>> defs_;
    std::set<std::string> forInVars_;
    std::set<std::string> visiting_;

    static std::string key(const std::string& name, const Binding& b) { return b.scope + "::" + name; }

    void stmt(const Stmt& s) {
        std::visit(
            [&](const auto& node) {
                using T = std::decay_t<decltype(node)>;
                if constexpr (std::is_same_v<T, VarDecl>) {
                    if (node.init) {
                        defs_[key(node.name, node.binding)].push_back(node.init.get());
                        expr(*node.init);
                    }
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
                    forInVars_.insert(key(node.var, node.binding));
                    expr(*node.object);
                    stmt(*node.body);
                } else if constexpr (std::is_same_v<T, Block>) {
                    for (const auto& c : node.body) stmt(*c);
                }
            },
            s.node);
    }

    // Collects assignments; does not enter nested functions.
    void expr(const Expr& e) {
        std::visit(
            [&](const auto& node) {
                using T = std::decay_t<decltype(node)>;
                if constexpr (std::is_same_v<T, Assign>) {
                    if (const auto* id = node.target->template as<Ident>())
                        defs_[key(id->name, id->binding)].push_back(node.value.get());
                    expr(*node.target);
                    expr(*node.value);
                } else if constexpr (std::is_same_v<T, ObjectLit>) {
                    for (const auto& p : node.props)
                        if (p.value) expr(*p.value);
                } else if constexpr (std::is_same_v<T, ArrayLit>) {
                    for (const auto& el : node.elements) expr(*el);
                } else if constexpr (std::is_same_v<T, Member>) {
                    expr(*node.object);
                    if (node.nameExpr) expr(*node.nameExpr);
                } else if constexpr (std::is_same_v<T, Call>) {
                    expr(*node.callee);
                    for (const auto& a : node.args) expr(*a);
                } else if constexpr (std::is_same_v<T, Binary>) {
                    expr(*node.lhs);
                    expr(*node.rhs);
                } else if constexpr (std::is_same_v<T, Unary>) {
                    expr(*node.operand);
                }
            },
            e.node);
    }

    PropertyNameCategory ident(const Ident& id) {
        const Binding& b = id.binding;
        std::string k = key(id.name, b);
        if (b.kind == BindingKind::Param) return PropertyNameCategory::ParameterPassed;
        if (b.kind == BindingKind::Outer) return PropertyNameCategory::OuterScopeVariable;
        if (forInVars_.count(k)) return PropertyNameCategory::ForInLoop;
        auto it = defs_.find(k);
        if (it == defs_.end() || visiting_.count(k)) return PropertyNameCategory::Unknown;
        visiting_.insert(k);
        std::vector<PropertyNameCategory> parts;
        for (const Expr* d : it->second) parts.push_back(classify(*d));
        visiting_.erase(k);
        return combine(parts);
    }

    static void leaves(const Expr& e, std::vector<const Expr*>& out) {
        if (const auto* b = e.as<Binary>(); b && b->op == "+") {
            leaves(*b->lhs, out);
            leaves(*b->rhs, out);
        } else {
            out.push_back(&e);
        }
    }

    PropertyNameCategory concat(const Expr& e) {
        std::vector<const Expr*> parts;
        leaves(e, parts);
        bool constant = parts.front()->as<StringLit>() || parts.back()->as<StringLit>();
        std::vector<PropertyNameCategory> cats{constant ? PropertyNameCategory::StringConcatConst
                                                        : PropertyNameCategory::StringConcat};
        for (const Expr* p : parts) cats.push_back(classify(*p));
        return combine(cats);
    }
};

}  // namespace

const char* labelName(RootCauseLabel l) {
    for (const auto& [k, n] : kLabels)
        if (k == l) return n;
    return "?";
}

std::optional<RootCauseLabel> parseLabel(const std::string& s) {
    for (const auto& [k, n] : kLabels)
        if (s == n) return k;
    return std::nullopt;
}

const char* categoryName(PropertyNameCategory c) {
    for (const auto& [k, n] : kCategories)
        if (k == c) return n;
    return "?";
}

std::optional<PropertyNameCategory> parseCategory(const std::string& s) {
    for (const auto& [k, n] : kCategories)
        if (s == n) return k;
    return std::nullopt;
}

RootCauseLabel labelFlow(const MissingFlow& flow, const FlowTrace& trace, const BoundProgram& program,
                         const NativeConfig& natives) {
    const auto& es = trace.entries;
    if (const auto* n = std::get_if<MissingFGNode>(&flow)) {
        if (auto l = evalLabel({&es[n->entry]})) return *l;
        return labelNode(es[n->entry], program, natives);
    }
    if (const auto* p = std::get_if<MissingFGPath>(&flow)) {
        if (auto l = evalLabel({&es[p->copy.read], &es[p->copy.write], &es[p->copy.dest]})) return *l;
        return labelPath(*p, trace, program, natives);
    }
    if (const auto* u = std::get_if<Unresolved>(&flow)) {
        if (u->reason == GapReason::BoundFunction) return RootCauseLabel::CallToBoundedFunction;
        if (u->reason == GapReason::MultiLevelNative) return RootCauseLabel::MultipleLevelsOfNative;
    }
    return RootCauseLabel::Others;
}

std::optional<SourceLoc> dynamicAccessOf(const MissingFlow& flow, const FlowTrace& trace, const BoundProgram& program) {
    const auto& es = trace.entries;
    std::vector<std::size_t> candidates;
    if (const auto* n = std::get_if<MissingFGNode>(&flow)) candidates = {n->entry};
    if (const auto* p = std::get_if<MissingFGPath>(&flow)) candidates = {p->copy.read, p->copy.write, p->copy.dest};
    for (std::size_t i : candidates)
        if (isDynamicAccess(es[i], program)) return es[i].loc;
    return std::nullopt;
}

PropertyNameCategory classifyPropertyName(const SourceLoc& accessLoc, const BoundProgram& program) {
    const AccessInfo* access = program.accessAt(accessLoc);
    if (!access || !access->member->isDynamic()) throw NotADynamicAccess(accessLoc);
    const std::vector<StmtPtr>* body = &program.program().body;
    if (access->enclosing != kTopLevel) {
        const FunctionDef* def = program.function(access->enclosing);
        if (!def) throw NotADynamicAccess(accessLoc);
        body = &def->body;
    }
    NameClassifier classifier(*body);
    return classifier.classify(*access->member->nameExpr);
}

}  // namespace cgrl
