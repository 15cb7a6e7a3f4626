#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "paplang/acceptance.hpp"
#include "paplang/eval.hpp"
#include "paplang/oracle.hpp"
#include "paplang/ppl.hpp"
#include "paplang/typecheck.hpp"

using namespace paplang;

namespace {
ProbPtr prob(const std::string& text) {
    Program p = parseProgram(text);
    REQUIRE(p.prob);
    return p.prob;
}
double dens(const ProbPtr& p, const Trace& tr) {
    auto r = traceDensity(p, tr);
    REQUIRE(r.density);
    return *r.density;
}
} // namespace

TEST_CASE("sample consumes the head of the trace with unit weight") {
    ProbPtr p = prob("prob { x <- sample; return x }");
    CHECK(dens(p, {0.7}) == 1.0);
    CHECK(dens(p, {}) == 0.0);        // empty trace: no value, weight 0
    CHECK(dens(p, {0.3, 0.4}) == 0.0); // leftover randomness
}

TEST_CASE("score multiplies the weight") {
    CHECK(dens(prob("prob { score 0.5; return 1.0 }"), {}) == 0.5);
    CHECK(dens(prob("prob { score 0.5; score 0.25; return 1.0 }"), {}) == 0.125);
}

TEST_CASE("return on the empty trace has density 1") {
    CHECK(dens(prob("prob { return 1.0 }"), {}) == 1.0);
    CHECK(dens(prob("prob { return 1.0 }"), {0.1}) == 0.0);
}

TEST_CASE("negative scores are runtime errors") {
    auto r = traceDensity(prob("prob { score (0 - 1) ; return 1.0 }"), {});
    CHECK_FALSE(r.density);
    CHECK(r.outcome.kind == Outcome::Kind::DomainError);
    CHECK(r.outcome.detail == "negative score weight");
}

TEST_CASE("score arguments must be scalars") {
    CHECK_THROWS_AS(traceDensity(prob("prob { score (1.0, 2.0); return 1.0 }"), {}),
                    ElaborationError);
}

TEST_CASE("gaussian-score program matches its closed form") {
    ProbPtr p = prob("prob { x <- sample; score (exp (0 - x * x)); return x }");
    CHECK(std::fabs(dens(p, {0.3}) - std::exp(-0.09)) <= 1e-12);
    CHECK(dens(p, {0.3, 0.4}) == 0.0);
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> d(-2.0, 2.0);
    for (int i = 0; i < 100; ++i) {
        double t = d(rng);
        CHECK(dens(p, {t}) == doctest::Approx(std::exp(-t * t)).epsilon(1e-14));
    }
}

TEST_CASE("weights multiply across do and remainders thread through") {
    ProbPtr two = prob("prob { x <- sample; y <- sample; return (x + y) }");
    CHECK(dens(two, {0.2, 0.9}) == 1.0);
    CHECK(dens(two, {0.2}) == 0.0);
    CHECK(dens(two, {0.2, 0.9, 0.1}) == 0.0);

    ProbPtr scored = prob("prob { x <- sample; score (2 * x); y <- sample; score (3 * y); return x }");
    CHECK(dens(scored, {0.5, 0.5}) == doctest::Approx(1.0 * 1.5).epsilon(1e-15));
}

TEST_CASE("value results are computed, not just weights") {
    // bind the sampled value and square it in the return
    ProbPtr p = prob("prob { x <- sample; return (x * x) }");
    TermPtr e = elaborate(p, 1);
    TyPtr ty = infer(e);
    // trace (1, (0.7, 0.0)) -> ((1, 0.49), (1, (0, ...)))
    auto out = evalFlat(e, ty->a, {1.0, 0.7, 0.0}, 16);
    REQUIRE(out);
    REQUIRE(out->size() >= 2);
    CHECK((*out)[0] == 1.0);
    CHECK((*out)[1] == doctest::Approx(0.49).epsilon(1e-15));
}

TEST_CASE("the density gradient matches calculus and finite differences") {
    ProbPtr p = prob("prob { x <- sample; score (exp (0 - x * x)); return x }");
    auto g = densityGradient(p, {0.3});
    REQUIRE(g);
    REQUIRE(g->size() == 1);
    CHECK((*g)[0] == doctest::Approx(-0.6 * std::exp(-0.09)).epsilon(1e-12));

    auto g0 = densityGradient(prob("prob { return 1.0 }"), {});
    REQUIRE(g0);
    CHECK(g0->empty());
}

TEST_CASE("branching densities are boundary-flagged at the kink") {
    ProbPtr p = prob("prob { x <- sample; score (if (x - 0.3 > 0) x (0.5 * x)); return x }");
    TermPtr d = densityTerm(p, 1);
    IntensionalDeriv id = intensionalDeriv(d, 8);
    CHECK(nearBoundary(id, {0.3}));
    CHECK_FALSE(nearBoundary(id, {0.7}));
    auto g = densityGradient(p, {0.3});
    REQUIRE(g); // the intensional value is still reported
}

TEST_CASE("density terms are first-order and piecewise-extractable") {
    ProbPtr p = prob("prob { x <- sample; score (exp (0 - x * x)); return x }");
    TermPtr d = densityTerm(p, 1);
    CHECK(tyToString(infer(d)) == "R -> R");
    PiecewiseRep r = extractRep(d, 8);
    CHECK(!r.pieces.empty());
    CHECK(r.unresolved.empty());
    auto v = pwEval(r, {0.3});
    REQUIRE(v);
    CHECK((*v)[0] == doctest::Approx(std::exp(-0.09)).epsilon(1e-15));
}
