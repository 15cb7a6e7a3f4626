#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "paplang/acceptance.hpp"
#include "paplang/consts.hpp"
#include "paplang/syntax.hpp"

using namespace paplang;

TEST_CASE("types parse and print with the right precedence") {
    CHECK(tyToString(parseTy("R -> R x R")) == "R -> R x R");
    TyPtr t = parseTy("R -> R x R");
    CHECK(t->kind == Ty::Kind::Fun);
    CHECK(t->b->kind == Ty::Kind::Prod);
    CHECK(tyEqual(parseTy("R^3"), tyRealVec(3)));
    CHECK(tyEqual(parseTy("(R -> R) -> R"), tyFun(tyFun(tyReal(), tyReal()), tyReal())));
    CHECK(tyEqual(parseTy("R x R x R"), tyProd(tyReal(), tyProd(tyReal(), tyReal()))));
}

TEST_CASE("factorial parses to the expected shape") {
    TermPtr t = parseTerm("mu f : R -> R. lam x : R. if (x > 0) (x * f (x - 1)) 1");
    REQUIRE(t->kind == Term::Kind::Mu);
    CHECK(t->a->kind == Term::Kind::Lam);
    CHECK(t->a->a->kind == Term::Kind::If);
}

TEST_CASE("pair sugar desugars to applications of pair") {
    TermPtr t = parseTerm("(1.0, 2.0)");
    REQUIRE(t->kind == Term::Kind::App);
    REQUIRE(t->a->kind == Term::Kind::App);
    REQUIRE(t->a->a->kind == Term::Kind::Const);
    CHECK(t->a->a->prim->name == "pair");
}

TEST_CASE("infix operators are sugar for constants") {
    TermPtr t = parseTerm("lam x : R. x + 2 * x");
    const TermPtr& body = t->a;
    REQUIRE(body->kind == Term::Kind::App);
    CHECK(body->a->a->prim->name == "+");
}

TEST_CASE("unbound identifiers are scope errors") {
    CHECK_THROWS_AS(parseTerm("lam x : R. y"), ScopeError);
    CHECK_THROWS_AS(parseProgram("nope 1.0"), ScopeError);
}

TEST_CASE("guards must compare against the literal 0") {
    CHECK_THROWS_AS(parseTerm("lam x : R. if (x > 1) x x"), ParseError);
}

TEST_CASE("let bindings inline and respect shadowing") {
    Program p = parseProgram("let d = lam x : R. x + x; d");
    REQUIRE(p.term);
    CHECK(p.term->kind == Term::Kind::Lam);
    Program q = parseProgram("let c = 3.0; lam c : R. c");
    CHECK(q.term->a->kind == Term::Kind::Var); // the binder wins
}

TEST_CASE("alpha equivalence ignores binder names") {
    CHECK(alphaEqual(parseTerm("lam x : R. x"), parseTerm("lam y : R. y")));
    CHECK_FALSE(alphaEqual(parseTerm("lam x : R. x"), parseTerm("lam y : R. y + 1")));
    CHECK(alphaEqual(parseTerm("mu f : R -> R. lam x : R. f x"),
                     parseTerm("mu g : R -> R. lam z : R. g z")));
}

TEST_CASE("a free variable prints as its name") {
    CHECK(pretty(mkVar("x")) == "x");
}

TEST_CASE("prob blocks parse and print") {
    Program p = parseProgram("prob { x <- sample; score (exp (0 - x * x)); return x }");
    REQUIRE(p.prob);
    CHECK(p.prob->kind == ProbTerm::Kind::Do);
    Program q = parseProgram(pretty(p.prob));
    REQUIRE(q.prob);
}

TEST_CASE("round trip: corpus programs re-parse alpha-equivalently") {
    auto corpus = loadCorpus(defaultCorpusDir());
    CHECK(corpus.size() >= 25);
    for (const auto& e : corpus) {
        CAPTURE(e.file);
        if (e.probabilistic()) {
            Program again = parseProgram(pretty(e.prog.prob));
            REQUIRE(again.prob);
        } else {
            TermPtr again = parseTerm(pretty(e.prog.term));
            CHECK(alphaEqual(again, e.prog.term));
            // idempotence: printing the reparse gives the same text
            CHECK(pretty(again) == pretty(e.prog.term));
        }
    }
}
