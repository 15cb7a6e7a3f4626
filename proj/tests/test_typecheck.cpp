#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "paplang/acceptance.hpp"
#include "paplang/eval.hpp"
#include "paplang/typecheck.hpp"

using namespace paplang;

TEST_CASE("factorial has type R -> R") {
    TermPtr t = parseTerm("mu f : R -> R. lam x : R. if (x > 0) (x * f (x - 1)) 1");
    CHECK(tyToString(infer(t)) == "R -> R");
}

TEST_CASE("pair instances are resolved from the arguments") {
    CHECK(tyEqual(infer(parseTerm("(1.0, 2.0)")), tyProd(tyReal(), tyReal())));
    CHECK(tyEqual(infer(parseTerm("((1.0, 2.0), 3.0)")),
                  tyProd(tyProd(tyReal(), tyReal()), tyReal())));
    CHECK(tyEqual(infer(parseTerm("lam p : R x R. fst p")),
                  tyFun(tyProd(tyReal(), tyReal()), tyReal())));
    CHECK(tyEqual(infer(parseTerm("lam p : R x R. snd p")),
                  tyFun(tyProd(tyReal(), tyReal()), tyReal())));
}

TEST_CASE("guards must have type R") {
    try {
        infer(parseTerm("lam p : R x R. if (p > 0) 1 2"));
        FAIL("expected a type error");
    } catch (const TypeError& e) {
        CHECK(e.rule == "if");
    }
}

TEST_CASE("application requires matching argument types") {
    CHECK_THROWS_AS(infer(parseTerm("sin (1.0, 2.0)")), TypeError);
    CHECK_THROWS_AS(infer(parseTerm("fst 1.0")), TypeError);
    CHECK_THROWS_AS(infer(parseTerm("1.0 2.0")), TypeError);
}

TEST_CASE("unapplied polymorphic constants are rejected") {
    CHECK_THROWS_AS(infer(parseTerm("pair")), TypeError);
    CHECK_THROWS_AS(infer(parseTerm("fst")), TypeError);
}

TEST_CASE("mu bodies must produce the annotated function type") {
    CHECK(tyToString(infer(parseTerm("mu f : R -> R. lam x : R. f x"))) == "R -> R");
    CHECK_THROWS_AS(infer(parseTerm("mu f : R -> R. lam x : R. (x, x)")), TypeError);
}

TEST_CASE("higher-order terms typecheck") {
    TermPtr t = parseTerm("lam g : R -> R. lam y : R. g (g y)");
    CHECK(tyToString(infer(t)) == "(R -> R) -> R -> R");
}

TEST_CASE("inference is deterministic and corpus-wide sound") {
    auto corpus = loadCorpus(defaultCorpusDir());
    for (const auto& e : corpus) {
        if (e.probabilistic()) continue;
        CAPTURE(e.file);
        TyPtr a = infer(e.prog.term);
        TyPtr b = infer(e.prog.term);
        CHECK(tyEqual(a, b));
        CHECK(tyToString(a) == e.tyText);
    }
}
