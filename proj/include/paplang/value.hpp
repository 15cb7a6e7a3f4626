#pragma once

#include <memory>
#include <string>
#include <vector>

#include "paplang/syntax.hpp"

namespace paplang {

struct Value;
using ValuePtr = std::shared_ptr<const Value>;

// Persistent environment: copy-on-extend linked list.
struct EnvNode;
using Env = std::shared_ptr<const EnvNode>;

struct EnvNode {
    std::string name;
    ValuePtr val;
    Env next;
};

Env envExtend(Env env, std::string name, ValuePtr val);
ValuePtr envLookup(const Env& env, const std::string& name);

// Runtime values. Rec is the n-th Kleene approximant of a mu-term: applying
// it unfolds the body once with the recursive name bound to the (n-1)-th
// approximant; at depth 0 it is the everywhere-bottom function.
struct Value {
    enum class Kind { Reals, Pair, Closure, Rec, Prim };
    Kind kind = Kind::Reals;

    std::vector<double> xs;       // Reals
    ValuePtr first, second;       // Pair

    std::string name;             // Closure param / Rec fname
    TermPtr body;                 // Closure body / Mu body
    Env env;
    long depth = 0;               // Rec: remaining unfoldings

    const Prim* prim = nullptr;   // Prim: partially applied primitive
    std::vector<ValuePtr> args;
};

ValuePtr mkReal(double x);
ValuePtr mkReals(std::vector<double> xs);
ValuePtr mkPairV(ValuePtr a, ValuePtr b);

bool valueEqual(const ValuePtr& a, const ValuePtr& b); // structural, Reals bitwise
std::string valueToString(const ValuePtr& v);

// Evaluation result: Halt(v) or one of the two bottom flavors.
struct Outcome {
    enum class Kind { Halt, FuelExhausted, DomainError };
    Kind kind = Kind::Halt;
    ValuePtr value;      // Halt
    std::string detail;  // DomainError

    bool halted() const { return kind == Kind::Halt; }
    static Outcome halt(ValuePtr v) { return {Kind::Halt, std::move(v), {}}; }
    static Outcome fuelExhausted() { return {Kind::FuelExhausted, nullptr, {}}; }
    static Outcome domainError(std::string d) {
        return {Kind::DomainError, nullptr, std::move(d)};
    }
};

// Flattening between structured real-valued data and flat coordinate vectors.
void flattenValue(const ValuePtr& v, std::vector<double>& out);
std::vector<double> flattenValue(const ValuePtr& v);
ValuePtr unflattenValue(const TyPtr& ty, const std::vector<double>& xs);
// Dual-structured value for ad: each R^k leaf becomes (primal, tangent).
ValuePtr unflattenDual(const TyPtr& ty, const std::vector<double>& primal,
                       const std::vector<double>& tangent);
// Splits a value of dual type back into (primal, tangent) flat vectors.
void splitDual(const TyPtr& ty, const ValuePtr& v, std::vector<double>& primal,
               std::vector<double>& tangent);

} // namespace paplang
