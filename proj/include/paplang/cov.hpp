#pragma once

#include <optional>
#include <random>
#include <variant>
#include <vector>

#include "paplang/oracle.hpp"
#include "paplang/syntax.hpp"

namespace paplang {

// Base measures: an axis-aligned box with a Lebesgue density, or a 1-D chart
// embedding a curve support into R^n.
struct LebesgueBox {
    std::vector<double> lo, hi;
    TermPtr density; // R^n -> R, nonnegative on the box
};

struct Chart {
    TermPtr gamma;      // R -> R^n, injective on [tlo, thi]
    double tlo = 0.0, thi = 1.0;
    TermPtr paramDensity; // R -> R
};

using BaseMeasure = std::variant<LebesgueBox, Chart>;

struct DensityQuery {
    BaseMeasure mu;
    TermPtr f;                    // the PAP bijection
    IntensionalDeriv rep;         // intensional Jacobian source for f
    std::vector<double> y;        // evaluation point
    TermPtr inverse;              // optional f^{-1}; 1-D pieces are bisected otherwise
    long fuel = 1024;
};

enum class JacobianSource { Intensional, FiniteDiffOfPiece };

struct CovError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// rho(x) / |det J f_i(x)| at x = f^{-1}(y) on the active piece; nullopt when
// no piece's image covers y. Throws CovError on a singular Jacobian.
std::optional<double> pushforwardDensity(const DensityQuery& q,
                                         JacobianSource src = JacobianSource::Intensional);

struct McReport {
    double tvDistance = 0.0;
    std::vector<double> binLo;
    std::vector<double> empirical; // per-bin empirical mass
    std::vector<double> predicted; // per-bin integral of the pushforward density
};

// Draws `samples` points from mu, pushes them through eval(f), histograms the
// (scalar) outputs, and compares against integrals of pushforwardDensity.
McReport mcVerify(const DensityQuery& q, int samples, int bins, std::mt19937_64& rng);

} // namespace paplang
