// Recursive-descent parser for MiniJS. The grammar is LL(1) apart from the
// contextual `get`/`set` keywords inside object literals, which need one
// extra token of lookahead.

#include <cmath>

#include "cgrl/frontend.hpp"
#include "lexer.hpp"

namespace cgrl {

SyntaxError::SyntaxError(SourceLoc loc, const std::string& message)
    : std::runtime_error(loc.str() + ": syntax error: " + message), loc_(std::move(loc)) {}

namespace {

using namespace ast;
using detail::Token;
using detail::TokKind;

class Parser {
public:
    Parser(std::vector<Token> toks, Program& program) : toks_(std::move(toks)), program_(program) {}

    void parseAll() {
        while (!at(TokKind::End)) program_.body.push_back(statement());
    }

private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    Program& program_;
    FunctionDef* current_ = nullptr;

    const Token& peek(std::size_t ahead = 0) const {
        std::size_t k = std::min(pos_ + ahead, toks_.size() - 1);
        return toks_[k];
    }
    bool at(TokKind kind) const { return peek().kind == kind; }
    bool atPunct(std::string_view p, std::size_t ahead = 0) const {
        return peek(ahead).kind == TokKind::Punct && peek(ahead).text == p;
    }
    bool atKeyword(std::string_view k) const { return peek().kind == TokKind::Keyword && peek().text == k; }

    Token take() { return toks_[std::min(pos_++, toks_.size() - 1)]; }

    [[noreturn]] void fail(const std::string& expected) const {
        const Token& t = peek();
        std::string found = t.kind == TokKind::End ? "end of input" : "'" + t.text + "'";
        throw SyntaxError(t.loc, "expected " + expected + ", found " + found);
    }

    Token expectPunct(std::string_view p) {
        if (!atPunct(p)) fail("'" + std::string(p) + "'");
        return take();
    }
    Token expectKeyword(std::string_view k) {
        if (!atKeyword(k)) fail("'" + std::string(k) + "'");
        return take();
    }
    Token expectIdent() {
        if (!at(TokKind::Ident)) fail("identifier");
        return take();
    }

    template <class T>
    ExprPtr makeExpr(SourceLoc loc, T node) {
        auto e = std::make_unique<Expr>();
        e->loc = std::move(loc);
        e->node = std::move(node);
        return e;
    }
    template <class T>
    StmtPtr makeStmt(SourceLoc loc, T node) {
        auto s = std::make_unique<Stmt>();
        s->loc = std::move(loc);
        s->node = std::move(node);
        return s;
    }

    FunctionDef* newFunction(const SourceLoc& loc, std::string name, FunctionKind kind) {
        auto def = std::make_unique<FunctionDef>();
        std::size_t ordinal = program_.functions.size();
        std::string base = name.empty() ? "anon" : name;
        if (kind == FunctionKind::Getter) base = "get_" + base;
        if (kind == FunctionKind::Setter) base = "set_" + base;
        def->id = base + "#" + std::to_string(ordinal);
        if (program_.evalDepth > 0) def->id = program_.unit + "/" + def->id;
        def->name = std::move(name);
        def->kind = kind;
        def->loc = loc;
        def->parent = current_;
        program_.functions.push_back(std::move(def));
        return program_.functions.back().get();
    }

    // params and body; `def` is already registered
    void functionRest(FunctionDef* def) {
        expectPunct("(");
        if (!atPunct(")")) {
            while (true) {
                Token p = expectIdent();
                def->params.push_back(p.text);
                def->paramLocs.push_back(p.loc);
                if (!atPunct(",")) break;
                take();
            }
        }
        expectPunct(")");
        FunctionDef* saved = current_;
        current_ = def;
        expectPunct("{");
        while (!atPunct("}")) {
            if (at(TokKind::End)) fail("'}'");
            def->body.push_back(statement());
        }
        take();
        current_ = saved;
    }

    StmtPtr statement() {
        const Token& t = peek();
        if (t.kind == TokKind::Keyword) {
            if (t.text == "function") {
                Token kw = take();
                Token name = expectIdent();
                FunctionDef* def = newFunction(kw.loc, name.text, FunctionKind::Ordinary);
                def->declaration = true;
                functionRest(def);
                return makeStmt(kw.loc, FuncDecl{def, {}});
            }
            if (t.text == "var") {
                Token kw = take();
                Token name = expectIdent();
                VarDecl decl;
                decl.name = name.text;
                decl.nameLoc = name.loc;
                if (atPunct("=")) {
                    take();
                    decl.init = expression();
                }
                expectPunct(";");
                return makeStmt(kw.loc, std::move(decl));
            }
            if (t.text == "return") {
                Token kw = take();
                if (!current_) throw SyntaxError(kw.loc, "'return' outside of a function");
                Return r;
                if (!atPunct(";")) r.value = expression();
                expectPunct(";");
                return makeStmt(kw.loc, std::move(r));
            }
            if (t.text == "if") {
                Token kw = take();
                expectPunct("(");
                If s;
                s.cond = expression();
                expectPunct(")");
                s.then = statement();
                if (atKeyword("else")) {
                    take();
                    s.otherwise = statement();
                }
                return makeStmt(kw.loc, std::move(s));
            }
            if (t.text == "while") {
                Token kw = take();
                expectPunct("(");
                While s;
                s.cond = expression();
                expectPunct(")");
                s.body = statement();
                return makeStmt(kw.loc, std::move(s));
            }
            if (t.text == "for") {
                Token kw = take();
                expectPunct("(");
                ForIn s;
                if (atKeyword("var")) {
                    take();
                    s.declares = true;
                }
                Token name = expectIdent();
                s.var = name.text;
                s.varLoc = name.loc;
                expectKeyword("in");
                s.object = expression();
                expectPunct(")");
                s.body = statement();
                return makeStmt(kw.loc, std::move(s));
            }
        }
        if (atPunct("{")) {
            Token open = take();
            Block b;
            while (!atPunct("}")) {
                if (at(TokKind::End)) fail("'}'");
                b.body.push_back(statement());
            }
            take();
            return makeStmt(open.loc, std::move(b));
        }
        if (atPunct(";")) {
            Token semi = take();
            return makeStmt(semi.loc, Empty{});
        }
        ExprPtr e = expression();
        SourceLoc loc = e->loc;
        expectPunct(";");
        return makeStmt(loc, ExprStmt{std::move(e)});
    }

    ExprPtr expression() { return assignment(); }

    ExprPtr assignment() {
        ExprPtr lhs = logicalOr();
        if (atPunct("=")) {
            Token op = take();
            if (!lhs->as<Ident>() && !lhs->as<Member>())
                throw SyntaxError(op.loc, "invalid assignment target");
            ExprPtr rhs = assignment();
            return makeExpr(op.loc, Assign{std::move(lhs), std::move(rhs)});
        }
        return lhs;
    }

    template <class Next>
    ExprPtr binaryLevel(std::initializer_list<std::string_view> ops, Next next) {
        ExprPtr lhs = (this->*next)();
        while (true) {
            bool matched = false;
            for (auto op : ops) {
                if (atPunct(op)) {
                    Token t = take();
                    ExprPtr rhs = (this->*next)();
                    lhs = makeExpr(t.loc, Binary{t.text, std::move(lhs), std::move(rhs)});
                    matched = true;
                    break;
                }
            }
            if (!matched) return lhs;
        }
    }

    ExprPtr logicalOr() { return binaryLevel({"||"}, &Parser::logicalAnd); }
    ExprPtr logicalAnd() { return binaryLevel({"&&"}, &Parser::equality); }
    ExprPtr equality() { return binaryLevel({"===", "!==", "==", "!="}, &Parser::relational); }
    ExprPtr relational() { return binaryLevel({"<=", ">=", "<", ">"}, &Parser::additive); }
    ExprPtr additive() { return binaryLevel({"+", "-"}, &Parser::multiplicative); }
    ExprPtr multiplicative() { return binaryLevel({"*", "/", "%"}, &Parser::unary); }

    ExprPtr unary() {
        if (atPunct("!") || atPunct("-")) {
            Token op = take();
            ExprPtr operand = unary();
            return makeExpr(op.loc, Unary{op.text, std::move(operand)});
        }
        return postfix();
    }

    ExprPtr postfix() {
        ExprPtr e = primary();
        while (true) {
            if (atPunct(".")) {
                Token dot = take();
                const Token& name = peek();
                if (name.kind != TokKind::Ident && name.kind != TokKind::Keyword) fail("property name");
                Member m;
                m.object = std::move(e);
                m.name = take().text;
                e = makeExpr(dot.loc, std::move(m));
            } else if (atPunct("[")) {
                Token open = take();
                Member m;
                m.object = std::move(e);
                m.bracket = true;
                ExprPtr name = expression();
                if (const auto* lit = name->as<StringLit>())
                    m.name = lit->value;
                else
                    m.nameExpr = std::move(name);
                expectPunct("]");
                e = makeExpr(open.loc, std::move(m));
            } else if (atPunct("(")) {
                Token open = take();
                Call c;
                c.callee = std::move(e);
                if (!atPunct(")")) {
                    while (true) {
                        c.args.push_back(expression());
                        if (!atPunct(",")) break;
                        take();
                    }
                }
                expectPunct(")");
                e = makeExpr(open.loc, std::move(c));
            } else {
                return e;
            }
        }
    }

    ExprPtr primary() {
        const Token& t = peek();
        switch (t.kind) {
            case TokKind::Number: {
                Token n = take();
                return makeExpr(n.loc, NumberLit{n.number});
            }
            case TokKind::String: {
                Token s = take();
                return makeExpr(s.loc, StringLit{s.text});
            }
            case TokKind::Ident: {
                Token id = take();
                return makeExpr(id.loc, Ident{id.text, {}});
            }
            case TokKind::Keyword: {
                if (t.text == "true" || t.text == "false") {
                    Token b = take();
                    return makeExpr(b.loc, BoolLit{b.text == "true"});
                }
                if (t.text == "null") return makeExpr(take().loc, NullLit{});
                if (t.text == "this") return makeExpr(take().loc, ThisExpr{});
                if (t.text == "function") {
                    Token kw = take();
                    std::string name;
                    if (at(TokKind::Ident)) name = take().text;
                    FunctionDef* def = newFunction(kw.loc, name, FunctionKind::Ordinary);
                    functionRest(def);
                    return makeExpr(kw.loc, FunctionExpr{def});
                }
                break;
            }
            case TokKind::Punct: {
                if (t.text == "(") {
                    take();
                    ExprPtr inner = expression();
                    expectPunct(")");
                    return inner;
                }
                if (t.text == "{") return objectLiteral();
                if (t.text == "[") {
                    Token open = take();
                    ArrayLit a;
                    if (!atPunct("]")) {
                        while (true) {
                            a.elements.push_back(expression());
                            if (!atPunct(",")) break;
                            take();
                        }
                    }
                    expectPunct("]");
                    return makeExpr(open.loc, std::move(a));
                }
                break;
            }
            case TokKind::End: break;
        }
        fail("expression");
    }

    std::string propertyKey() {
        const Token& t = peek();
        if (t.kind == TokKind::Ident || t.kind == TokKind::Keyword || t.kind == TokKind::String) return take().text;
        if (t.kind == TokKind::Number) {
            Token n = take();
            double v = n.number;
            if (v == std::floor(v) && std::abs(v) < 1e15) return std::to_string(static_cast<long long>(v));
            return n.text;
        }
        fail("property key");
    }

    ExprPtr objectLiteral() {
        Token open = expectPunct("{");
        ObjectLit obj;
        while (!atPunct("}")) {
            Property prop;
            const Token& t = peek();
            bool accessor = t.kind == TokKind::Ident && (t.text == "get" || t.text == "set") &&
                            !atPunct(":", 1) && !atPunct(",", 1) && !atPunct("}", 1);
            if (accessor) {
                Token kw = take();
                bool getter = kw.text == "get";
                prop.kind = getter ? Property::Kind::Getter : Property::Kind::Setter;
                prop.keyLoc = peek().loc;
                prop.key = propertyKey();
                FunctionDef* def =
                    newFunction(kw.loc, prop.key, getter ? FunctionKind::Getter : FunctionKind::Setter);
                functionRest(def);
                if (getter && !def->params.empty())
                    throw SyntaxError(kw.loc, "getter must not declare parameters");
                if (!getter && def->params.size() != 1)
                    throw SyntaxError(kw.loc, "setter must declare exactly one parameter");
                prop.accessor = def;
            } else {
                prop.keyLoc = peek().loc;
                prop.key = propertyKey();
                expectPunct(":");
                prop.value = expression();
            }
            obj.props.push_back(std::move(prop));
            if (!atPunct(",")) break;
            take();
        }
        expectPunct("}");
        return makeExpr(open.loc, std::move(obj));
    }
};

}  // namespace

Program parseProgram(std::string_view source, const std::string& unitName, int evalDepth) {
    Program program;
    program.unit = unitName;
    program.evalDepth = evalDepth;
    Parser parser(detail::tokenize(source, unitName, evalDepth), program);
    parser.parseAll();
    return program;
}

const ast::FunctionDef* Program::function(const std::string& id) const {
    for (const auto& f : functions)
        if (f->id == id) return f.get();
    return nullptr;
}

std::string SourceLoc::str() const {
    std::string s = unit + ":" + std::to_string(line) + ":" + std::to_string(col);
    if (evalDepth > 0) s += "@eval" + std::to_string(evalDepth);
    return s;
}

std::size_t SourceLocHash::operator()(const SourceLoc& loc) const noexcept {
    std::size_t h = std::hash<std::string>{}(loc.unit);
    auto mix = [&h](std::size_t v) { h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
    mix(static_cast<std::size_t>(loc.line));
    mix(static_cast<std::size_t>(loc.col));
    mix(static_cast<std::size_t>(loc.evalDepth));
    return h;
}

}  // namespace cgrl
