#include "cgrl/acg.hpp"

namespace cgrl {

FlowNode variableNode(const std::string& name, const Binding& binding, const BoundProgram& program) {
    if (binding.kind == BindingKind::Param) return FlowNode::param(binding.scope, binding.index);
    if (binding.kind == BindingKind::Outer && binding.scope != kGlobalScope) {
        if (const ast::FunctionDef* def = program.function(binding.scope)) {
            for (std::size_t i = def->params.size(); i-- > 0;)
                if (def->params[i] == name) return FlowNode::param(def->id, static_cast<int>(i));
        }
    }
    return FlowNode::var(binding.scope, name);
}

namespace {

using namespace ast;
using Nodes = std::vector<FlowNode>;

class Builder {
public:
    Builder(const BoundProgram& program, FlowGraph& fg) : program_(program), fg_(fg) {}

    void run() {
        for (const auto& s : program_.program().body) stmt(*s);
    }

private:
    const BoundProgram& program_;
    FlowGraph& fg_;
    std::vector<const FunctionDef*> fnStack_;

    void flow(const Nodes& from, const FlowNode& to) {
        fg_.addNode(to);
        for (const auto& n : from) fg_.addEdge(n, to);
    }

    FlowNode function(const FunctionDef& def) {
        FlowNode f = FlowNode::func(def.id);
        fg_.addNode(f);
        fg_.addNode(FlowNode::ret(def.id));
        for (std::size_t i = 0; i < def.params.size(); ++i) fg_.addNode(FlowNode::param(def.id, static_cast<int>(i)));
        if (def.bindsSelf) fg_.addEdge(f, FlowNode::var(def.id, def.name));
        fnStack_.push_back(&def);
        for (const auto& s : def.body) stmt(*s);
        fnStack_.pop_back();
        return f;
    }

    void stmt(const Stmt& s) {
        std::visit(
            [&](const auto& node) {
                using T = std::decay_t<decltype(node)>;
                if constexpr (std::is_same_v<T, VarDecl>) {
                    if (node.init) flow(expr(*node.init), variableNode(node.name, node.binding, program_));
                } else if constexpr (std::is_same_v<T, FuncDecl>) {
                    FlowNode f = function(*node.def);
                    flow({f}, variableNode(node.def->name, node.binding, program_));
                } else if constexpr (std::is_same_v<T, ExprStmt>) {
                    expr(*node.expr);
                } else if constexpr (std::is_same_v<T, Return>) {
                    if (node.value) {
                        Nodes v = expr(*node.value);
                        if (!fnStack_.empty()) flow(v, FlowNode::ret(fnStack_.back()->id));
                    }
                } else if constexpr (std::is_same_v<T, If>) {
                    expr(*node.cond);
                    stmt(*node.then);
                    if (node.otherwise) stmt(*node.otherwise);
                } else if constexpr (std::is_same_v<T, While>) {
                    expr(*node.cond);
                    stmt(*node.body);
                } else if constexpr (std::is_same_v<T, ForIn>) {
                    expr(*node.object);
                    stmt(*node.body);
                } else if constexpr (std::is_same_v<T, Block>) {
                    for (const auto& c : node.body) stmt(*c);
                }
            },
            s.node);
    }

    /// Visits `e` and returns the nodes that represent its value.
    Nodes expr(const Expr& e) {
        return std::visit(
            [&](const auto& node) -> Nodes {
                using T = std::decay_t<decltype(node)>;
                if constexpr (std::is_same_v<T, Ident>) {
                    return {variableNode(node.name, node.binding, program_)};
                } else if constexpr (std::is_same_v<T, FunctionExpr>) {
                    return {function(*node.def)};
                } else if constexpr (std::is_same_v<T, ObjectLit>) {
                    for (const auto& p : node.props) {
                        if (p.kind == Property::Kind::Data)
                            flow(expr(*p.value), FlowNode::prop(p.key));
                        else
                            function(*p.accessor);
                    }
                    return {};
                } else if constexpr (std::is_same_v<T, ArrayLit>) {
                    for (const auto& el : node.elements) flow(expr(*el), FlowNode::prop(kArrayElementProp));
                    return {};
                } else if constexpr (std::is_same_v<T, Member>) {
                    expr(*node.object);
                    if (node.isDynamic()) {
                        expr(*node.nameExpr);
                        return {};
                    }
                    return {FlowNode::prop(node.name)};
                } else if constexpr (std::is_same_v<T, Call>) {
                    return call(e, node);
                } else if constexpr (std::is_same_v<T, Assign>) {
                    return assign(node);
                } else if constexpr (std::is_same_v<T, Binary>) {
                    Nodes l = expr(*node.lhs);
                    Nodes r = expr(*node.rhs);
                    if (node.op != "||" && node.op != "&&") return {};
                    l.insert(l.end(), r.begin(), r.end());
                    return l;
                } else if constexpr (std::is_same_v<T, Unary>) {
                    expr(*node.operand);
                    return {};
                } else {
                    return {};
                }
            },
            e.node);
    }

    Nodes call(const Expr& e, const Call& c) {
        const SourceLoc& site = e.loc;
        FlowNode calleeNode = FlowNode::callee(site);
        FlowNode resNode = FlowNode::res(site);
        fg_.addNode(calleeNode);
        fg_.addNode(resNode);
        if (const auto* m = c.callee->as<Member>()) {
            flow(expr(*m->object), FlowNode::arg(site, -1));
            if (m->isDynamic())
                expr(*m->nameExpr);
            else
                flow({FlowNode::prop(m->name)}, calleeNode);
        } else {
            flow(expr(*c.callee), calleeNode);
        }
        for (std::size_t i = 0; i < c.args.size(); ++i)
            flow(expr(*c.args[i]), FlowNode::arg(site, static_cast<int>(i)));
        if (fg_.variant() == Variant::Pessimistic) {
            if (const auto* fe = c.callee->as<FunctionExpr>()) {
                const FunctionDef& def = *fe->def;
                for (std::size_t i = 0; i < c.args.size() && i < def.params.size(); ++i)
                    fg_.addEdge(FlowNode::arg(site, static_cast<int>(i)), FlowNode::param(def.id, static_cast<int>(i)));
                fg_.addEdge(FlowNode::ret(def.id), resNode);
            }
        }
        return {resNode};
    }

    Nodes assign(const Assign& a) {
        Nodes v = expr(*a.value);
        if (const auto* id = a.target->as<Ident>()) {
            flow(v, variableNode(id->name, id->binding, program_));
        } else if (const auto* m = a.target->as<Member>()) {
            expr(*m->object);
            if (m->isDynamic())
                expr(*m->nameExpr);
            else
                flow(v, FlowNode::prop(m->name));
        }
        return v;
    }
};

}  // namespace

FlowGraph buildInitialFlowGraph(const BoundProgram& program, Variant variant, const NativeConfig& natives) {
    FlowGraph fg(variant);
    for (const auto& spec : natives.natives()) {
        if (!spec.modeled) continue;
        FlowNode f = FlowNode::func(spec.id());
        if (spec.access == NativeAccess::Global)
            fg.addEdge(f, FlowNode::var(kGlobalScope, spec.name));
        else
            fg.addEdge(f, FlowNode::prop(spec.name));
    }
    Builder(program, fg).run();
    return fg;
}

}  // namespace cgrl
