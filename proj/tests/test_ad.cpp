#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "paplang/acceptance.hpp"
#include "paplang/ad.hpp"
#include "paplang/eval.hpp"
#include "paplang/typecheck.hpp"

using namespace paplang;

TEST_CASE("dual types double every real leaf") {
    CHECK(tyToString(dualTy(parseTy("R"))) == "R x R");
    CHECK(tyToString(dualTy(parseTy("R -> R"))) == "R x R -> R x R");
    CHECK(tyToString(dualTy(parseTy("R x R"))) == "(R x R) x R x R");
}

TEST_CASE("log transforms to the expected dual") {
    TermPtr t = parseTerm("lam x : R. log x");
    auto r = derivative(t, {2.0}, {1.0}, 10);
    REQUIRE(r);
    CHECK(r->primal[0] == std::log(2.0));
    CHECK(r->tangent[0] == 0.5);
    Outcome o;
    CHECK_FALSE(derivative(t, {0.0}, {1.0}, 10, &o));
    CHECK(o.kind == Outcome::Kind::DomainError);
}

TEST_CASE("dual primitives compute product-rule tangents") {
    Outcome o = eval(parseTerm("mulD (2.0, 3.0) (4.0, 5.0)"), 1);
    REQUIRE(o.halted());
    CHECK(flattenValue(o.value) == std::vector<double>{8.0, 3.0 * 4.0 + 2.0 * 5.0});
    o = eval(parseTerm("divD (1.0, 0.0) (2.0, 0.0)"), 1);
    REQUIRE(o.halted());
    CHECK(flattenValue(o.value) == std::vector<double>{0.5, 0.0});
}

TEST_CASE("sin at 0 has tangent 1") {
    auto r = derivative(parseTerm("lam x : R. sin x"), {0.0}, {1.0}, 10);
    REQUIRE(r);
    CHECK(r->primal[0] == 0.0);
    CHECK(r->tangent[0] == 1.0);
}

TEST_CASE("branching identity misses the true derivative at 0") {
    TermPtr t = parseTerm("lam x : R. if (x > 0) x (if (0 - x > 0) x 0)");
    auto r = derivative(t, {0.0}, {1.0}, 10);
    REQUIRE(r);
    CHECK(r->primal[0] == 0.0);
    CHECK(r->tangent[0] == 0.0);
    auto r2 = derivative(t, {0.5}, {1.0}, 10);
    REQUIRE(r2);
    CHECK(r2->tangent[0] == 1.0);
}

TEST_CASE("strict factorial bottoms identically under primal and dual") {
    TermPtr t = parseFile(defaultCorpusDir() + "/factorial_strict.pap").term;
    TermPtr dt = adTransform(t);
    for (long fuel : {1L, 10L, 1000L}) {
        Outcome p;
        evalFlat(t, tyReal(), {-1.0}, fuel, &p);
        CHECK(p.kind == Outcome::Kind::FuelExhausted);
        Outcome d = eval(dt, fuel);
        REQUIRE(d.halted());
        d = applyValue(d.value, unflattenDual(tyReal(), {-1.0}, {1.0}), fuel);
        CHECK(d.kind == Outcome::Kind::FuelExhausted);
    }
}

TEST_CASE("primal components are preserved bitwise") {
    auto corpus = loadCorpus(defaultCorpusDir());
    std::mt19937_64 rng(11);
    for (const auto& e : corpus) {
        if (e.probabilistic()) continue;
        CAPTURE(e.file);
        TyPtr ty = infer(e.prog.term);
        int dim = tyFlatDim(ty->a);
        std::uniform_real_distribution<double> d(e.lo, e.hi);
        for (int i = 0; i < 50; ++i) {
            std::vector<double> x(dim);
            for (auto& v : x) v = d(rng);
            auto pv = evalFlat(e.prog.term, ty->a, x, 1024);
            auto dv = derivative(e.prog.term, x, std::vector<double>(dim, 1.0), 1024);
            REQUIRE((bool)pv == (bool)dv);
            if (pv) CHECK(*pv == dv->primal);
        }
    }
}

TEST_CASE("tangents are linear in the direction") {
    TermPtr t = parseTerm("lam x : R. sin (x * x) + exp x");
    for (double x : {-1.3, 0.2, 2.0}) {
        auto r1 = derivative(t, {x}, {1.0}, 10);
        auto r2 = derivative(t, {x}, {2.0}, 10);
        REQUIRE(r1);
        REQUIRE(r2);
        CHECK(r2->tangent[0] == doctest::Approx(2.0 * r1->tangent[0]).epsilon(1e-15));
    }
}

TEST_CASE("constants without a registered dual are rejected") {
    ConstTable table = ConstTable::defaults();
    Prim weird;
    weird.name = "weird";
    weird.arity = 1;
    weird.type = tyFun(tyReal(), tyReal());
    weird.apply = [](const std::vector<ValuePtr>& a) { return Outcome::halt(a[0]); };
    table.add(weird);
    TermPtr t = parseTerm("lam x : R. weird x", table);
    CHECK_THROWS_AS(adTransform(t, table), MissingDual);
}

TEST_CASE("the transform preserves the control skeleton") {
    TermPtr t = parseTerm("mu f : R -> R. lam x : R. if (x > 0) (f (x - 1)) x");
    TermPtr dt = adTransform(t);
    CHECK(dt->kind == Term::Kind::Mu);
    CHECK(dt->a->kind == Term::Kind::Lam);
    CHECK(dt->a->a->kind == Term::Kind::If);
    CHECK(tyToString(infer(dt)) == "R x R -> R x R");
}
