#include <doctest.h>

#include <random>
#include <set>

#include "cgrl/frontend.hpp"
#include "support.hpp"

using namespace cgrl;
using namespace cgrl::ast;

namespace {

struct LocCollector {
    std::vector<SourceLoc> exprs;
    std::vector<SourceLoc> stmts;

    void stmt(const Stmt& s) {
        if (!s.as<ExprStmt>()) stmts.push_back(s.loc);
        std::visit(
            [&](const auto& n) {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, VarDecl>) {
                    if (n.init) expr(*n.init);
                } else if constexpr (std::is_same_v<T, ExprStmt>) {
                    expr(*n.expr);
                } else if constexpr (std::is_same_v<T, Return>) {
                    if (n.value) expr(*n.value);
                } else if constexpr (std::is_same_v<T, If>) {
                    expr(*n.cond);
                    stmt(*n.then);
                    if (n.otherwise) stmt(*n.otherwise);
                } else if constexpr (std::is_same_v<T, While>) {
                    expr(*n.cond);
                    stmt(*n.body);
                } else if constexpr (std::is_same_v<T, ForIn>) {
                    expr(*n.object);
                    stmt(*n.body);
                } else if constexpr (std::is_same_v<T, Block>) {
                    for (const auto& c : n.body) stmt(*c);
                }
            },
            s.node);
    }

    void expr(const Expr& e) {
        exprs.push_back(e.loc);
        std::visit(
            [&](const auto& n) {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, ObjectLit>) {
                    for (const auto& p : n.props)
                        if (p.value) expr(*p.value);
                } else if constexpr (std::is_same_v<T, ArrayLit>) {
                    for (const auto& el : n.elements) expr(*el);
                } else if constexpr (std::is_same_v<T, Member>) {
                    expr(*n.object);
                    if (n.nameExpr) expr(*n.nameExpr);
                } else if constexpr (std::is_same_v<T, Call>) {
                    expr(*n.callee);
                    for (const auto& a : n.args) expr(*a);
                } else if constexpr (std::is_same_v<T, Assign>) {
                    expr(*n.target);
                    expr(*n.value);
                } else if constexpr (std::is_same_v<T, Binary>) {
                    expr(*n.lhs);
                    expr(*n.rhs);
                } else if constexpr (std::is_same_v<T, Unary>) {
                    expr(*n.operand);
                }
            },
            e.node);
    }

    void program(const Program& p) {
        for (const auto& s : p.body) stmt(*s);
        for (const auto& f : p.functions)
            for (const auto& s : f->body) stmt(*s);
    }
};

nlohmann::json stripLocs(nlohmann::json j) {
    if (j.is_object()) {
        j.erase("loc");
        for (auto& [k, v] : j.items()) v = stripLocs(v);
    } else if (j.is_array()) {
        for (auto& v : j) v = stripLocs(v);
    }
    return j;
}

std::vector<std::string> ids(const Program& p) {
    std::vector<std::string> out;
    for (const auto& f : p.functions) out.push_back(f->id);
    return out;
}

void checkRoundTrip(const std::string& source) {
    Program a = parseProgram(source, "u");
    std::string printed = printProgram(a);
    Program b = parseProgram(printed, "u");
    CHECK(stripLocs(astToJson(a)) == stripLocs(astToJson(b)));
    CHECK(ids(a) == ids(b));
    CHECK(printProgram(b) == printed);
}

void checkInjective(const std::string& source) {
    Program p = parseProgram(source, "u");
    LocCollector c;
    c.program(p);
    std::set<SourceLoc> seen;
    for (const auto& l : c.exprs) {
        CHECK(l.line >= 1);
        CHECK(l.col >= 0);
        CHECK_MESSAGE(seen.insert(l).second, "shared location ", l.str());
    }
    for (const auto& l : c.stmts) CHECK_MESSAGE(seen.insert(l).second, "shared location ", l.str());
}

}  // namespace

TEST_CASE("The phone example parses into main, f1, f2 and a top-level call on line 8") {
    Program p = parseProgram(test::readFile(test::corpusDir() + "/phone.mjs"), "phone");
    REQUIRE(p.functions.size() == 3);
    CHECK(p.functions[0]->id == "main#0");
    CHECK(p.functions[0]->loc.line == 1);
    CHECK(p.functions[1]->id == "f1#1");
    CHECK(p.functions[1]->loc.line == 2);
    CHECK(p.functions[2]->id == "f2#2");
    CHECK(p.functions[2]->loc.line == 3);
    const Stmt& last = *p.body.back();
    REQUIRE(last.as<ExprStmt>());
    CHECK(last.as<ExprStmt>()->expr->as<Call>());
    CHECK(last.loc.line == 8);
}

TEST_CASE("empty source gives an empty program") {
    Program p = parseProgram("", "empty");
    CHECK(p.body.empty());
    CHECK(p.functions.empty());
}

TEST_CASE("dynamic callee keeps its concatenation name expression") {
    BoundProgram bp = resolveBindings(parseProgram(test::readFile(test::corpusDir() + "/phone.mjs"), "phone"));
    const AccessInfo* a = bp.accessAt({"phone", 6, 5, 0});
    REQUIRE(a);
    CHECK(a->member->isDynamic());
    CHECK(a->enclosing == "main#0");
    const Binary* concat = a->member->nameExpr->as<Binary>();
    REQUIRE(concat);
    CHECK(concat->op == "+");
    CHECK(concat->lhs->as<StringLit>()->value == "My");
    CHECK(concat->rhs->as<StringLit>()->value == "Phone");
    const AccessInfo* name = bp.accessAt({"phone", 5, 5, 0});
    REQUIRE(name);
    CHECK_FALSE(name->member->isDynamic());
}

TEST_CASE("bindings: locals, formals, outer scope, globals") {
    BoundProgram bp = resolveBindings(parseProgram(
        "var n = \"k\";\nfunction g(o) { return o[n]; }\nfunction f(p) { p(); }\n", "b"));
    const FunctionDef* g = bp.function("g#0");
    REQUIRE(g);
    const Expr& ret = *g->body[0]->as<Return>()->value;
    const Member* m = ret.as<Member>();
    REQUIRE(m);
    const Ident* o = m->object->as<Ident>();
    const Ident* n = m->nameExpr->as<Ident>();
    CHECK(o->binding.kind == BindingKind::Param);
    CHECK(o->binding.index == 0);
    CHECK(n->binding.kind == BindingKind::Outer);
    const FunctionDef* f = bp.function("f#1");
    const Call* call = f->body[0]->as<ExprStmt>()->expr->as<Call>();
    const Ident* p = call->callee->as<Ident>();
    CHECK(p->binding.kind == BindingKind::Param);
    CHECK(p->binding.scope == "f#1");
    CHECK(p->binding.index == 0);
}

TEST_CASE("Phone example locals are bound to main") {
    BoundProgram bp = resolveBindings(parseProgram(test::readFile(test::corpusDir() + "/phone.mjs"), "phone"));
    const FunctionDef* main = bp.function("main#0");
    REQUIRE(main);
    for (int i = 0; i < 3; ++i) {
        const VarDecl* d = main->body[i]->as<VarDecl>();
        REQUIRE(d);
        CHECK(d->binding.kind == BindingKind::Local);
        CHECK(d->binding.scope == "main#0");
    }
}

TEST_CASE("static iff single literal name") {
    BoundProgram bp = resolveBindings(parseProgram("var x = {};\nx.p = 1;\nx[\"q\"] = 2;\nx[0] = 3;\nx[\"a\" + \"b\"] = 4;\n", "s"));
    CHECK_FALSE(bp.accessAt({"s", 2, 1, 0})->member->isDynamic());
    CHECK_FALSE(bp.accessAt({"s", 3, 1, 0})->member->isDynamic());
    CHECK(bp.accessAt({"s", 4, 1, 0})->member->isDynamic());
    CHECK(bp.accessAt({"s", 5, 1, 0})->member->isDynamic());
}

TEST_CASE("rewriting x[\"p\"] to x.p leaves other classifications alone") {
    const char* before = "var x = {};\nx[\"p\"] = 1;\nvar k = \"p\";\nx[k] = 2;\nx.q = 3;\n";
    const char* after = "var x = {};\nx.p = 1;\nvar k = \"p\";\nx[k] = 2;\nx.q = 3;\n";
    BoundProgram a = resolveBindings(parseProgram(before, "r"));
    BoundProgram b = resolveBindings(parseProgram(after, "r"));
    REQUIRE(a.accesses().size() == b.accesses().size());
    for (std::size_t i = 1; i < a.accesses().size(); ++i)
        CHECK(a.accesses()[i].member->isDynamic() == b.accesses()[i].member->isDynamic());
}

TEST_CASE("syntax errors carry a location and no partial AST") {
    try {
        parseProgram("var x = ;", "e");
        FAIL("expected SyntaxError");
    } catch (const SyntaxError& e) {
        CHECK(e.loc().line == 1);
        CHECK(e.loc().col == 8);
    }
    CHECK_THROWS_AS(parseProgram("function (", "e"), SyntaxError);
    CHECK_THROWS_AS(parseProgram("x[", "e"), SyntaxError);
}

TEST_CASE("unbound variables are reported") {
    try {
        resolveBindings(parseProgram("var a = 1;\nb();\n", "e"));
        FAIL("expected UnboundVariable");
    } catch (const UnboundVariable& e) {
        CHECK(e.name() == "b");
        CHECK(e.loc().line == 2);
    }
    CHECK_NOTHROW(resolveBindings(parseProgram("b();", "e"), {"b"}));
    CHECK_NOTHROW(resolveBindings(parseProgram("b();", "e"), {}, true));
}

TEST_CASE("FunctionIds are stable across parses") {
    std::string src = test::readFile(test::corpusDir() + "/fine/property_names.mjs");
    CHECK(ids(parseProgram(src, "a")) == ids(parseProgram(src, "a")));
}

TEST_CASE("parse-print-parse is a fixpoint on the corpus") {
    for (const auto& f : test::corpusFiles()) {
        CAPTURE(f);
        checkRoundTrip(test::readFile(f));
    }
}

TEST_CASE("parse-print-parse is a fixpoint on generated programs") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 50; ++i) {
        std::string src = test::generateProgram(rng, 30);
        CAPTURE(src);
        checkRoundTrip(src);
    }
}

TEST_CASE("locations are injective on the corpus and generated programs") {
    for (const auto& f : test::corpusFiles()) {
        CAPTURE(f);
        checkInjective(test::readFile(f));
    }
    std::mt19937_64 rng(11);
    for (int i = 0; i < 50; ++i) checkInjective(test::generateProgram(rng, 30));
}
