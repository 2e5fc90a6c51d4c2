// Pretty printer and JSON AST dump.

#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "cgrl/frontend.hpp"

namespace cgrl {

namespace {

using namespace ast;

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    return out + "\"";
}

std::string number(double v) {
    if (v == std::floor(v) && std::abs(v) < 1e15) return std::to_string(static_cast<long long>(v));
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

bool isIdentifierName(const std::string& s) {
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_' || s[0] == '$')) return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$')) return false;
    return true;
}

class Printer {
public:
    std::ostringstream out;

    void stmts(const std::vector<StmtPtr>& body, int depth) {
        for (const auto& s : body) stmt(*s, depth);
    }

    void indent(int depth) { out << std::string(static_cast<std::size_t>(depth) * 2, ' '); }

    void function(const FunctionDef& def, int depth, bool withKeyword) {
        if (withKeyword) {
            out << "function";
            if (!def.name.empty()) out << ' ' << def.name;
        }
        out << '(';
        for (std::size_t i = 0; i < def.params.size(); ++i) out << (i ? ", " : "") << def.params[i];
        out << ") {\n";
        stmts(def.body, depth + 1);
        indent(depth);
        out << '}';
    }

    void block(const Stmt& s, int depth) {
        if (const auto* b = s.as<Block>()) {
            out << "{\n";
            stmts(b->body, depth + 1);
            indent(depth);
            out << '}';
        } else {
            out << "{\n";
            stmt(s, depth + 1);
            indent(depth);
            out << '}';
        }
    }

    void stmt(const Stmt& s, int depth) {
        indent(depth);
        std::visit(
            [&](const auto& node) {
                using T = std::decay_t<decltype(node)>;
                if constexpr (std::is_same_v<T, VarDecl>) {
                    out << "var " << node.name;
                    if (node.init) {
                        out << " = ";
                        expr(*node.init, depth);
                    }
                    out << ";\n";
                } else if constexpr (std::is_same_v<T, FuncDecl>) {
                    function(*node.def, depth, true);
                    out << '\n';
                } else if constexpr (std::is_same_v<T, ExprStmt>) {
                    expr(*node.expr, depth);
                    out << ";\n";
                } else if constexpr (std::is_same_v<T, Return>) {
                    out << "return";
                    if (node.value) {
                        out << ' ';
                        expr(*node.value, depth);
                    }
                    out << ";\n";
                } else if constexpr (std::is_same_v<T, If>) {
                    out << "if (";
                    expr(*node.cond, depth);
                    out << ") ";
                    block(*node.then, depth);
                    if (node.otherwise) {
                        out << " else ";
                        block(*node.otherwise, depth);
                    }
                    out << '\n';
                } else if constexpr (std::is_same_v<T, While>) {
                    out << "while (";
                    expr(*node.cond, depth);
                    out << ") ";
                    block(*node.body, depth);
                    out << '\n';
                } else if constexpr (std::is_same_v<T, ForIn>) {
                    out << "for (" << (node.declares ? "var " : "") << node.var << " in ";
                    expr(*node.object, depth);
                    out << ") ";
                    block(*node.body, depth);
                    out << '\n';
                } else if constexpr (std::is_same_v<T, Block>) {
                    block(s, depth);
                    out << '\n';
                } else {
                    out << ";\n";
                }
            },
            s.node);
    }

    void expr(const Expr& e, int depth) {
        std::visit(
            [&](const auto& node) {
                using T = std::decay_t<decltype(node)>;
                if constexpr (std::is_same_v<T, NumberLit>) {
                    out << number(node.value);
                } else if constexpr (std::is_same_v<T, StringLit>) {
                    out << quote(node.value);
                } else if constexpr (std::is_same_v<T, BoolLit>) {
                    out << (node.value ? "true" : "false");
                } else if constexpr (std::is_same_v<T, NullLit>) {
                    out << "null";
                } else if constexpr (std::is_same_v<T, ThisExpr>) {
                    out << "this";
                } else if constexpr (std::is_same_v<T, Ident>) {
                    out << node.name;
                } else if constexpr (std::is_same_v<T, FunctionExpr>) {
                    out << '(';
                    function(*node.def, depth, true);
                    out << ')';
                } else if constexpr (std::is_same_v<T, ObjectLit>) {
                    out << "({";
                    for (std::size_t i = 0; i < node.props.size(); ++i) {
                        const Property& p = node.props[i];
                        out << (i ? ", " : "");
                        std::string key = isIdentifierName(p.key) ? p.key : quote(p.key);
                        if (p.kind == Property::Kind::Data) {
                            out << key << ": ";
                            expr(*p.value, depth);
                        } else {
                            out << (p.kind == Property::Kind::Getter ? "get " : "set ") << key;
                            function(*p.accessor, depth, false);
                        }
                    }
                    out << "})";
                } else if constexpr (std::is_same_v<T, ArrayLit>) {
                    out << '[';
                    for (std::size_t i = 0; i < node.elements.size(); ++i) {
                        out << (i ? ", " : "");
                        expr(*node.elements[i], depth);
                    }
                    out << ']';
                } else if constexpr (std::is_same_v<T, Member>) {
                    expr(*node.object, depth);
                    if (node.isDynamic()) {
                        out << '[';
                        expr(*node.nameExpr, depth);
                        out << ']';
                    } else if (node.bracket || !isIdentifierName(node.name)) {
                        out << '[' << quote(node.name) << ']';
                    } else {
                        out << '.' << node.name;
                    }
                } else if constexpr (std::is_same_v<T, Call>) {
                    expr(*node.callee, depth);
                    out << '(';
                    for (std::size_t i = 0; i < node.args.size(); ++i) {
                        out << (i ? ", " : "");
                        expr(*node.args[i], depth);
                    }
                    out << ')';
                } else if constexpr (std::is_same_v<T, Assign>) {
                    out << '(';
                    expr(*node.target, depth);
                    out << " = ";
                    expr(*node.value, depth);
                    out << ')';
                } else if constexpr (std::is_same_v<T, Binary>) {
                    out << '(';
                    expr(*node.lhs, depth);
                    out << ' ' << node.op << ' ';
                    expr(*node.rhs, depth);
                    out << ')';
                } else if constexpr (std::is_same_v<T, Unary>) {
                    out << '(' << node.op;
                    expr(*node.operand, depth);
                    out << ')';
                }
            },
            e.node);
    }
};

nlohmann::json node(const char* kind, const SourceLoc& loc) {
    return nlohmann::json{{"kind", kind}, {"loc", locToJson(loc)}};
}

nlohmann::json bindingJson(const Binding& b) {
    nlohmann::json j{{"kind", bindingKindName(b.kind)}, {"scope", b.scope}};
    if (b.kind == BindingKind::Param) j["index"] = b.index;
    return j;
}

nlohmann::json exprJson(const Expr& e);
nlohmann::json stmtJson(const Stmt& s);

nlohmann::json functionJson(const FunctionDef& def) {
    nlohmann::json j = node("Function", def.loc);
    j["id"] = def.id;
    if (!def.name.empty()) j["name"] = def.name;
    j["params"] = def.params;
    nlohmann::json body = nlohmann::json::array();
    for (const auto& s : def.body) body.push_back(stmtJson(*s));
    j["children"] = std::move(body);
    return j;
}

nlohmann::json exprJson(const Expr& e) {
    return std::visit(
        [&](const auto& n) -> nlohmann::json {
            using T = std::decay_t<decltype(n)>;
            nlohmann::json j;
            nlohmann::json kids = nlohmann::json::array();
            if constexpr (std::is_same_v<T, NumberLit>) {
                j = node("Number", e.loc);
                j["value"] = n.value;
            } else if constexpr (std::is_same_v<T, StringLit>) {
                j = node("String", e.loc);
                j["value"] = n.value;
            } else if constexpr (std::is_same_v<T, BoolLit>) {
                j = node("Bool", e.loc);
                j["value"] = n.value;
            } else if constexpr (std::is_same_v<T, NullLit>) {
                j = node("Null", e.loc);
            } else if constexpr (std::is_same_v<T, ThisExpr>) {
                j = node("This", e.loc);
            } else if constexpr (std::is_same_v<T, Ident>) {
                j = node("Ident", e.loc);
                j["name"] = n.name;
                if (!n.binding.scope.empty()) j["binding"] = bindingJson(n.binding);
            } else if constexpr (std::is_same_v<T, FunctionExpr>) {
                return functionJson(*n.def);
            } else if constexpr (std::is_same_v<T, ObjectLit>) {
                j = node("Object", e.loc);
                for (const auto& p : n.props) {
                    nlohmann::json pj = node(p.kind == Property::Kind::Data     ? "Property"
                                             : p.kind == Property::Kind::Getter ? "Getter"
                                                                                : "Setter",
                                             p.keyLoc);
                    pj["key"] = p.key;
                    pj["children"] = nlohmann::json::array(
                        {p.value ? exprJson(*p.value) : functionJson(*p.accessor)});
                    kids.push_back(std::move(pj));
                }
            } else if constexpr (std::is_same_v<T, ArrayLit>) {
                j = node("Array", e.loc);
                for (const auto& el : n.elements) kids.push_back(exprJson(*el));
            } else if constexpr (std::is_same_v<T, Member>) {
                j = node("Member", e.loc);
                j["access"] = n.isDynamic() ? "dynamic" : "static";
                kids.push_back(exprJson(*n.object));
                if (n.isDynamic())
                    kids.push_back(exprJson(*n.nameExpr));
                else
                    j["name"] = n.name;
            } else if constexpr (std::is_same_v<T, Call>) {
                j = node("Call", e.loc);
                kids.push_back(exprJson(*n.callee));
                for (const auto& a : n.args) kids.push_back(exprJson(*a));
            } else if constexpr (std::is_same_v<T, Assign>) {
                j = node("Assign", e.loc);
                kids.push_back(exprJson(*n.target));
                kids.push_back(exprJson(*n.value));
            } else if constexpr (std::is_same_v<T, Binary>) {
                j = node("Binary", e.loc);
                j["op"] = n.op;
                kids.push_back(exprJson(*n.lhs));
                kids.push_back(exprJson(*n.rhs));
            } else if constexpr (std::is_same_v<T, Unary>) {
                j = node("Unary", e.loc);
                j["op"] = n.op;
                kids.push_back(exprJson(*n.operand));
            }
            j["children"] = std::move(kids);
            return j;
        },
        e.node);
}

nlohmann::json stmtJson(const Stmt& s) {
    return std::visit(
        [&](const auto& n) -> nlohmann::json {
            using T = std::decay_t<decltype(n)>;
            nlohmann::json j;
            nlohmann::json kids = nlohmann::json::array();
            if constexpr (std::is_same_v<T, VarDecl>) {
                j = node("Var", s.loc);
                j["name"] = n.name;
                if (n.init) kids.push_back(exprJson(*n.init));
            } else if constexpr (std::is_same_v<T, FuncDecl>) {
                j = functionJson(*n.def);
                j["kind"] = "FunctionDecl";
                return j;
            } else if constexpr (std::is_same_v<T, ExprStmt>) {
                j = node("ExprStmt", s.loc);
                kids.push_back(exprJson(*n.expr));
            } else if constexpr (std::is_same_v<T, Return>) {
                j = node("Return", s.loc);
                if (n.value) kids.push_back(exprJson(*n.value));
            } else if constexpr (std::is_same_v<T, If>) {
                j = node("If", s.loc);
                kids.push_back(exprJson(*n.cond));
                kids.push_back(stmtJson(*n.then));
                if (n.otherwise) kids.push_back(stmtJson(*n.otherwise));
            } else if constexpr (std::is_same_v<T, While>) {
                j = node("While", s.loc);
                kids.push_back(exprJson(*n.cond));
                kids.push_back(stmtJson(*n.body));
            } else if constexpr (std::is_same_v<T, ForIn>) {
                j = node("ForIn", s.loc);
                j["var"] = n.var;
                j["declares"] = n.declares;
                kids.push_back(exprJson(*n.object));
                kids.push_back(stmtJson(*n.body));
            } else if constexpr (std::is_same_v<T, Block>) {
                j = node("Block", s.loc);
                for (const auto& c : n.body) kids.push_back(stmtJson(*c));
            } else {
                j = node("Empty", s.loc);
            }
            j["children"] = std::move(kids);
            return j;
        },
        s.node);
}

}  // namespace

std::string printProgram(const Program& program) {
    Printer p;
    p.stmts(program.body, 0);
    return p.out.str();
}

nlohmann::json locToJson(const SourceLoc& loc) {
    return {{"unit", loc.unit}, {"line", loc.line}, {"col", loc.col}, {"evalDepth", loc.evalDepth}};
}

SourceLoc locFromJson(const nlohmann::json& j) {
    SourceLoc loc;
    loc.unit = j.at("unit").get<std::string>();
    loc.line = j.at("line").get<int>();
    loc.col = j.at("col").get<int>();
    loc.evalDepth = j.value("evalDepth", 0);
    return loc;
}

nlohmann::json astToJson(const Program& program) {
    nlohmann::json body = nlohmann::json::array();
    for (const auto& s : program.body) body.push_back(stmtJson(*s));
    return {{"schemaVersion", 1}, {"kind", "Program"}, {"unit", program.unit}, {"children", std::move(body)}};
}

}  // namespace cgrl
