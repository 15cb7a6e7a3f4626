#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "paplang/syntax.hpp"

namespace paplang {

// ---------------------------------------------------------------------------
// Branch-free analytic expressions over flat input coordinates.
// ---------------------------------------------------------------------------

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    enum class Kind { Lit, Coord, Unary, Binary };
    enum class Op { Add, Sub, Mul, Div, Neg, Sin, Cos, Exp, Log, Sqrt, Nonneg };
    Kind kind = Kind::Lit;
    double lit = 0.0;
    int coord = 0;
    Op op = Op::Add;
    ExprPtr a, b;
};

ExprPtr exLit(double v);
ExprPtr exCoord(int i);
ExprPtr exUnary(Expr::Op op, ExprPtr a);
ExprPtr exBinary(Expr::Op op, ExprPtr a, ExprPtr b);

// nullopt when out of the expression's open domain or the result is not finite.
std::optional<double> exEval(const ExprPtr& e, const std::vector<double>& x);
// Symbolic partial derivative d e / d x_coord, lightly simplified.
ExprPtr exDiff(const ExprPtr& e, int coord);
std::string exToString(const ExprPtr& e);

// ---------------------------------------------------------------------------
// Analytic sets and piecewise representations
// ---------------------------------------------------------------------------

// { x | all strict guards > 0, all nonstrict guards <= 0 }, within the open
// set where every guard is defined.
struct AnalyticSet {
    int dim = 0;
    std::vector<ExprPtr> strictGuards;
    std::vector<ExprPtr> nonstrictGuards;
};

enum class Tri { False, True, Undefined };
Tri contains(const AnalyticSet& s, const std::vector<double>& x);

struct Piece {
    AnalyticSet set;
    std::vector<ExprPtr> fn; // outDim components
};

struct PiecewiseRep {
    int inDim = 0;
    int outDim = 0;
    std::vector<Piece> pieces;
    // Path conditions whose residual still contained a mu after the unroll
    // budget; reported, never silently dropped.
    std::vector<AnalyticSet> unresolved;
};

struct PwError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Evaluates the unique containing piece; nullopt when no piece contains x.
// Throws PwError("multiple pieces") on a disjointness violation.
std::optional<std::vector<double>> pwEval(const PiecewiseRep& r, const std::vector<double>& x);

// Symbolic path enumeration: unrolls each mu up to `unrollBudget`, enumerates
// branch decisions, emits one piece per path. t must be closed and of
// first-order type.
struct NotFirstOrder : std::runtime_error {
    using std::runtime_error::runtime_error;
};
PiecewiseRep extractRep(const TermPtr& t, int unrollBudget);

// Pairwise refinement: pieces {x in A | f(x) in B} with fn = g . f.
PiecewiseRep composeReps(const PiecewiseRep& rF, const PiecewiseRep& rG);

// A rep together with the symbolic Jacobian of each piece.
struct IntensionalDeriv {
    PiecewiseRep rep;
    std::vector<std::vector<std::vector<ExprPtr>>> pieceJacobians; // [piece][row][col]
    // Every distinct guard with its gradient, for boundary classification.
    std::vector<std::pair<ExprPtr, std::vector<ExprPtr>>> boundaryGuards;
};

IntensionalDeriv intensionalDeriv(PiecewiseRep rep);
IntensionalDeriv intensionalDeriv(const TermPtr& t, int unrollBudget);

// Jacobian of the active piece at x; nullopt when x is off every piece.
std::optional<std::vector<std::vector<double>>> intensionalJacobian(
    const IntensionalDeriv& d, const std::vector<double>& x);

// ---------------------------------------------------------------------------
// Finite differences and the almost-everywhere check
// ---------------------------------------------------------------------------

// Central-difference step, scaled by the magnitude of the coordinate.
double fdStep(double xi);
constexpr double kFdBaseStep = 1e-6;
constexpr double kAeTol = 1e-4;

// Central differences, step h per coordinate (h <= 0 picks fdStep). nullopt
// if any stencil point bottoms.
std::optional<std::vector<std::vector<double>>> finiteDiff(
    const TermPtr& t, const std::vector<double>& x, double h = 0.0, long fuel = 1024);

// True when x lies within the finite-difference step of a guard
// zero-crossing of the representation.
bool nearBoundary(const IntensionalDeriv& d, const std::vector<double>& x);

struct AeReport {
    int passed = 0;
    int failed = 0;
    int boundary = 0;
    double worstAbsErr = 0.0;
    std::vector<std::vector<double>> failures; // failing sample points
};

using Sampler = std::function<std::vector<double>(std::mt19937_64&)>;

// Compares AD tangents against central finite differences at sampled points;
// points within a step of a guard crossing are classified as boundary and
// exempted.
AeReport aeCheck(const TermPtr& t, const Sampler& sampler, int count, double tol,
                 std::mt19937_64& rng, int unrollBudget = 16, long fuel = 1024);

} // namespace paplang
