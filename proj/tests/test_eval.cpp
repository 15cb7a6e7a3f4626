#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "paplang/acceptance.hpp"
#include "paplang/eval.hpp"
#include "paplang/typecheck.hpp"

using namespace paplang;

namespace {
Outcome runAt(const TermPtr& t, double x, long fuel) {
    Outcome o;
    evalFlat(t, tyReal(), {x}, fuel, &o);
    return o;
}
double haltVal(const TermPtr& t, double x, long fuel) {
    auto v = evalFlat(t, tyReal(), {x}, fuel);
    REQUIRE(v);
    REQUIRE(v->size() == 1);
    return (*v)[0];
}
} // namespace

TEST_CASE("factorial evaluates with enough fuel and bottoms without") {
    TermPtr f = parseTerm("mu f : R -> R. lam x : R. if (x > 0) (x * f (x - 1)) 1");
    CHECK(haltVal(f, 3.0, 10) == 6.0);
    CHECK(haltVal(f, 0.0, 10) == 1.0);
    CHECK(haltVal(f, -1.0, 10) == 1.0);
    CHECK(runAt(f, 3.0, 2).kind == Outcome::Kind::FuelExhausted);
    CHECK(runAt(f, 3.0, 4).kind == Outcome::Kind::Halt);
}

TEST_CASE("a guard of exactly 0 takes the else branch") {
    TermPtr t = parseTerm("lam x : R. if (x > 0) 1 2");
    CHECK(haltVal(t, 0.0, 1) == 2.0);
    CHECK(haltVal(t, 1e-300, 1) == 1.0);
}

TEST_CASE("primitive domain violations are domain errors") {
    CHECK(eval(parseTerm("log 0"), 1).kind == Outcome::Kind::DomainError);
    CHECK(eval(parseTerm("log (0 - 1)"), 1).kind == Outcome::Kind::DomainError);
    CHECK(eval(parseTerm("sqrt (0 - 1)"), 1).kind == Outcome::Kind::DomainError);
    CHECK(eval(parseTerm("1 / 0"), 1).kind == Outcome::Kind::DomainError);
    // overflow to infinity is also outside the reals
    CHECK(eval(parseTerm("exp 1000"), 1).kind == Outcome::Kind::DomainError);
}

TEST_CASE("application is strict in the argument") {
    Outcome o = eval(parseTerm("(lam x : R. 1.0) (log 0)"), 10);
    CHECK(o.kind == Outcome::Kind::DomainError);
}

TEST_CASE("instrumented constants confirm each operand evaluates exactly once") {
    ConstTable table = ConstTable::defaults();
    static int ticks;
    ticks = 0;
    Prim tick;
    tick.name = "tick";
    tick.arity = 1;
    tick.type = tyFun(tyReal(), tyReal());
    tick.apply = [](const std::vector<ValuePtr>& a) {
        ++ticks;
        return Outcome::halt(a[0]);
    };
    table.add(tick);
    Outcome o = eval(parseTerm("tick 1.0 + tick 2.0", table), 1);
    CHECK(o.kind == Outcome::Kind::Halt);
    CHECK(ticks == 2);
}

TEST_CASE("curried pair builds a pair value") {
    Outcome o = eval(parseTerm("pair 1.0 2.0"), 1);
    REQUIRE(o.halted());
    CHECK(flattenValue(o.value) == std::vector<double>{1.0, 2.0});
}

TEST_CASE("pi is a nullary constant") {
    Outcome o = eval(parseTerm("pi"), 1);
    REQUIRE(o.halted());
    CHECK(o.value->xs[0] == doctest::Approx(3.14159265358979).epsilon(1e-12));
}

TEST_CASE("cantor squares off the Cantor set and diverges on it") {
    TermPtr t = parseFile(defaultCorpusDir() + "/cantor.pap").term;
    CHECK(haltVal(t, 0.5, 200) == 0.25);
    CHECK(std::fabs(haltVal(t, 0.1, 200) - 0.01) < 1e-15);
    for (double x : {0.25, 0.75, 1.0 / 13.0, -0.5, 1.5}) {
        CAPTURE(x);
        CHECK(runAt(t, x, 2000).kind == Outcome::Kind::FuelExhausted);
    }
}

TEST_CASE("fuel monotonicity and determinism across the corpus") {
    auto corpus = loadCorpus(defaultCorpusDir());
    std::mt19937_64 rng(7);
    for (const auto& e : corpus) {
        if (e.probabilistic()) continue;
        CAPTURE(e.file);
        TyPtr ty = infer(e.prog.term);
        int dim = tyFlatDim(ty->a);
        std::uniform_real_distribution<double> d(e.lo, e.hi);
        for (int i = 0; i < 20; ++i) {
            std::vector<double> x(dim);
            for (auto& v : x) v = d(rng);
            for (long n : {8L, 64L, 512L}) {
                auto v1 = evalFlat(e.prog.term, ty->a, x, n);
                auto v1b = evalFlat(e.prog.term, ty->a, x, n);
                CHECK(v1 == v1b); // determinism
                if (!v1) continue;
                for (long m : {n + 1, n + 17}) {
                    auto v2 = evalFlat(e.prog.term, ty->a, x, m);
                    REQUIRE(v2);
                    CHECK(*v2 == *v1);
                }
            }
        }
    }
}

TEST_CASE("halt values match the inferred type shape") {
    Outcome o = eval(parseTerm("((1.0, 2.0), 3.0)"), 1);
    REQUIRE(o.halted());
    CHECK(o.value->kind == Value::Kind::Pair);
    CHECK(flattenValue(o.value).size() == 3);
}
