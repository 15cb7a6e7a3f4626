#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "paplang/acceptance.hpp"
#include "paplang/cov.hpp"
#include "paplang/eval.hpp"
#include "paplang/oracle.hpp"
#include "paplang/typecheck.hpp"

using namespace paplang;

namespace {
DensityQuery uniformQuery(const std::string& fText, double lo, double hi, double y,
                          int budget = 4) {
    DensityQuery q;
    double c = 1.0 / (hi - lo);
    q.mu = LebesgueBox{{lo}, {hi}, mkLam("u", tyReal(), mkLit(c))};
    q.f = parseTerm(fText);
    q.rep = intensionalDeriv(q.f, budget);
    q.y = {y};
    return q;
}
const char* kPw = "lam x : R. if (x > 0) (2 * x) (3 * x)";
} // namespace

TEST_CASE("piecewise-linear pushforward has the hand-computed densities") {
    auto d1 = pushforwardDensity(uniformQuery(kPw, -1.0, 1.0, 1.0));
    REQUIRE(d1);
    CHECK(std::fabs(*d1 - 0.25) <= 1e-12);
    auto d2 = pushforwardDensity(uniformQuery(kPw, -1.0, 1.0, -1.5));
    REQUIRE(d2);
    CHECK(std::fabs(*d2 - 0.5 / 3.0) <= 1e-12);
}

TEST_CASE("a supplied inverse gives the same densities as bisection") {
    DensityQuery q = uniformQuery(kPw, -1.0, 1.0, 1.0);
    q.inverse = parseTerm("lam y : R. if (y > 0) (y / 2) (y / 3)");
    auto d = pushforwardDensity(q);
    REQUIRE(d);
    CHECK(std::fabs(*d - 0.25) <= 1e-12);
    q.y = {-1.5};
    d = pushforwardDensity(q);
    REQUIRE(d);
    CHECK(std::fabs(*d - 0.5 / 3.0) <= 1e-12);
}

TEST_CASE("identity pushforward returns the base density") {
    auto d = pushforwardDensity(uniformQuery("lam x : R. x", -1.0, 1.0, 0.3));
    REQUIRE(d);
    CHECK(*d == 0.5);
}

TEST_CASE("points outside the image are off support") {
    CHECK_FALSE(pushforwardDensity(uniformQuery(kPw, -1.0, 1.0, 5.0)));
    CHECK_FALSE(pushforwardDensity(uniformQuery(kPw, -1.0, 1.0, -4.0)));
}

TEST_CASE("finite differences of the active piece match the symbolic jacobian") {
    for (double y : {1.0, -1.5, 0.4, -0.7}) {
        auto a = pushforwardDensity(uniformQuery(kPw, -1.0, 1.0, y), JacobianSource::Intensional);
        auto b = pushforwardDensity(uniformQuery(kPw, -1.0, 1.0, y),
                                    JacobianSource::FiniteDiffOfPiece);
        REQUIRE(a);
        REQUIRE(b);
        CHECK(std::fabs(*a - *b) <= 1e-6 * std::fabs(*a));
    }
}

TEST_CASE("pushforward densities integrate to one") {
    const int n = 4000;
    double lo = -3.0001, hi = 2.0001, sum = 0.0;
    for (int i = 0; i < n; ++i) {
        double y = lo + (hi - lo) * (i + 0.5) / n;
        auto d = pushforwardDensity(uniformQuery(kPw, -1.0, 1.0, y));
        if (d) sum += *d * (hi - lo) / n;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("monte carlo verification stays within the tv budget") {
    std::mt19937_64 rng(42);
    McReport r = mcVerify(uniformQuery(kPw, -1.0, 1.0, 0.0), 20000, 40, rng);
    CHECK(r.tvDistance < 0.02);
    McReport rid = mcVerify(uniformQuery("lam x : R. x", -1.0, 1.0, 0.0), 20000, 40, rng);
    CHECK(rid.tvDistance < 0.02);
}

TEST_CASE("densities survive a pointwise-wrong derivative") {
    const char* ib = "lam x : R. if (x > 0) x (if (0 - x > 0) x 0)";
    auto d = pushforwardDensity(uniformQuery(ib, -1.0, 1.0, 0.4));
    REQUIRE(d);
    CHECK(*d == 0.5);
    std::mt19937_64 rng(42);
    McReport r = mcVerify(uniformQuery(ib, -1.0, 1.0, 0.0), 20000, 40, rng);
    CHECK(r.tvDistance < 0.02);
}

TEST_CASE("chart supports push densities along the parameter") {
    DensityQuery q;
    Chart c;
    c.gamma = parseTerm("lam t : R. (t, 2 * t)");
    c.tlo = 0.0;
    c.thi = 1.0;
    c.paramDensity = parseTerm("lam t : R. 1.0");
    q.mu = c;
    q.f = parseTerm("lam p : R x R. fst p + snd p");
    q.rep = intensionalDeriv(q.f, 4);
    q.y = {1.5};
    auto d = pushforwardDensity(q);
    REQUIRE(d);
    CHECK(std::fabs(*d - 1.0 / 3.0) <= 1e-9);
    std::mt19937_64 rng(42);
    McReport r = mcVerify(q, 20000, 40, rng);
    CHECK(r.tvDistance < 0.02);
}

TEST_CASE("singular jacobians are reported, not divided by") {
    CHECK_THROWS_AS(pushforwardDensity(uniformQuery("lam x : R. 0 * x", -1.0, 1.0, 0.0)),
                    CovError);
}
