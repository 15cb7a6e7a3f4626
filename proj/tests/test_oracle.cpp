#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "paplang/acceptance.hpp"
#include "paplang/ad.hpp"
#include "paplang/eval.hpp"
#include "paplang/oracle.hpp"
#include "paplang/typecheck.hpp"

using namespace paplang;

TEST_CASE("symbolic expressions evaluate and differentiate") {
    ExprPtr sq = exBinary(Expr::Op::Mul, exCoord(0), exCoord(0));
    CHECK(*exEval(sq, {3.0}) == 9.0);
    CHECK(*exEval(exDiff(sq, 0), {3.0}) == 6.0);
    ExprPtr lg = exUnary(Expr::Op::Log, exCoord(0));
    CHECK_FALSE(exEval(lg, {-1.0}));
    CHECK(*exEval(exDiff(lg, 0), {2.0}) == 0.5);
}

TEST_CASE("analytic set membership is three-valued") {
    AnalyticSet s;
    s.dim = 1;
    s.strictGuards = {exCoord(0)};
    CHECK(contains(s, {1.0}) == Tri::True);
    CHECK(contains(s, {0.0}) == Tri::False);
    AnalyticSet u;
    u.dim = 1;
    u.strictGuards = {exUnary(Expr::Op::Log, exCoord(0))};
    CHECK(contains(u, {-1.0}) == Tri::Undefined);
    CHECK(contains(u, {2.0}) == Tri::True);
}

TEST_CASE("relu extracts into two disjoint pieces") {
    PiecewiseRep r = extractRep(parseTerm("lam x : R. if (x > 0) x 0"), 4);
    CHECK(r.pieces.size() == 2);
    CHECK(r.unresolved.empty());
    CHECK(*pwEval(r, {2.0}) == std::vector<double>{2.0});
    CHECK(*pwEval(r, {-2.0}) == std::vector<double>{0.0});
}

TEST_CASE("factorial under a small budget reports the unresolved tail") {
    TermPtr f = parseTerm("mu f : R -> R. lam x : R. if (x > 0) (x * f (x - 1)) 1");
    PiecewiseRep r = extractRep(f, 5);
    CHECK(!r.pieces.empty());
    CHECK(!r.unresolved.empty());
    CHECK((*pwEval(r, {2.5}))[0] == 2.5 * 1.5 * 0.5);
    CHECK((*pwEval(r, {-1.0}))[0] == 1.0);
    CHECK_FALSE(pwEval(r, {20.0})); // beyond the budget: no piece covers it
}

TEST_CASE("overlapping pieces are a reported error") {
    PiecewiseRep bad;
    bad.inDim = 1;
    bad.outDim = 1;
    Piece p;
    p.set.dim = 1;
    p.fn = {exCoord(0)};
    bad.pieces = {p, p};
    CHECK_THROWS_AS(pwEval(bad, {1.0}), PwError);
}

TEST_CASE("higher-order argument types are rejected") {
    CHECK_THROWS_AS(extractRep(parseTerm("lam f : R -> R. f 1.0"), 4), NotFirstOrder);
}

TEST_CASE("oracle agreement: pieces reproduce evaluation bitwise") {
    auto corpus = loadCorpus(defaultCorpusDir());
    std::mt19937_64 rng(3);
    for (const auto& e : corpus) {
        if (e.probabilistic() || !e.oracle) continue;
        CAPTURE(e.file);
        TyPtr ty = infer(e.prog.term);
        int dim = tyFlatDim(ty->a);
        PiecewiseRep r = extractRep(e.prog.term, e.unrollBudget);
        std::uniform_real_distribution<double> d(e.lo, e.hi);
        int compared = 0;
        for (int i = 0; i < 200; ++i) {
            std::vector<double> x(dim);
            for (auto& v : x) v = d(rng);
            auto pw = pwEval(r, x);
            auto ev = evalFlat(e.prog.term, ty->a, x, 4096);
            if (!pw || !ev) continue;
            CHECK(*pw == *ev);
            ++compared;
        }
        CHECK(compared > 50);
    }
}

TEST_CASE("composition is sound and obeys the chain rule") {
    PiecewiseRep rF = extractRep(parseTerm("lam x : R. if (x > 0) x 0"), 4);
    PiecewiseRep rG = extractRep(parseTerm("lam y : R. y * y + 1"), 4);
    PiecewiseRep rGF = composeReps(rF, rG);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> d(-2.0, 2.0);
    IntensionalDeriv dF = intensionalDeriv(rF);
    IntensionalDeriv dG = intensionalDeriv(rG);
    IntensionalDeriv dGF = intensionalDeriv(rGF);
    for (int i = 0; i < 100; ++i) {
        double x = d(rng);
        auto mid = pwEval(rF, {x});
        REQUIRE(mid);
        auto whole = pwEval(rGF, {x});
        auto stepwise = pwEval(rG, *mid);
        REQUIRE(whole);
        REQUIRE(stepwise);
        CHECK(*whole == *stepwise);

        auto jF = intensionalJacobian(dF, {x});
        auto jG = intensionalJacobian(dG, *mid);
        auto jGF = intensionalJacobian(dGF, {x});
        REQUIRE(jF);
        REQUIRE(jG);
        REQUIRE(jGF);
        double prod = (*jG)[0][0] * (*jF)[0][0];
        CHECK(std::fabs((*jGF)[0][0] - prod) <= 1e-12 * std::max(1.0, std::fabs(prod)));
    }
}

TEST_CASE("finite differences approximate smooth derivatives") {
    auto fd = finiteDiff(parseTerm("lam x : R. x * x"), {1.0});
    REQUIRE(fd);
    CHECK((*fd)[0][0] == doctest::Approx(2.0).epsilon(1e-8));
    CHECK_FALSE(finiteDiff(parseTerm("lam x : R. log x"), {0.0}));
}

TEST_CASE("ae check: identity passes everywhere with zero error") {
    std::mt19937_64 rng(9);
    Sampler s = [](std::mt19937_64& g) {
        std::uniform_real_distribution<double> d(-1.0, 1.0);
        return std::vector<double>{d(g)};
    };
    AeReport r = aeCheck(parseTerm("lam x : R. x"), s, 200, 1e-4, rng);
    CHECK(r.failed == 0);
    CHECK(r.boundary == 0);
    CHECK(r.passed == 200);
}

TEST_CASE("ae check: the constant-zero sampler is fully boundary-flagged") {
    std::mt19937_64 rng(9);
    Sampler s = [](std::mt19937_64&) { return std::vector<double>{0.0}; };
    TermPtr t = parseTerm("lam x : R. if (x > 0) x (if (0 - x > 0) x 0)");
    AeReport r = aeCheck(t, s, 50, 1e-4, rng);
    CHECK(r.boundary == 50);
    CHECK(r.passed == 0);
    CHECK(r.failed == 0);
}

TEST_CASE("ad and the intensional jacobian agree off the boundary") {
    TermPtr t = parseTerm("lam x : R. if (x > 0) (sin x) (x * x)");
    IntensionalDeriv d = intensionalDeriv(t, 4);
    for (double x : {-1.5, -0.2, 0.4, 2.0}) {
        auto j = intensionalJacobian(d, {x});
        auto r = derivative(t, {x}, {1.0}, 10);
        REQUIRE(j);
        REQUIRE(r);
        CHECK(r->tangent[0] == doctest::Approx((*j)[0][0]).epsilon(1e-12));
    }
}
