#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "paplang/syntax.hpp"
#include "paplang/value.hpp"

namespace paplang {

// A primitive constant. Monomorphic primitives carry their type; pair/fst/snd
// are type-indexed families whose instance is picked during type inference.
struct Prim {
    enum class Poly { None, Pair, Fst, Snd };

    std::string name;
    int arity = 0;                 // 0 for nullary value constants
    TyPtr type;                    // null for Poly != None
    Poly poly = Poly::None;
    // Called once all `arity` arguments are collected. Must be deterministic
    // and total on its declared domain; outside it, returns DomainError.
    std::function<Outcome(const std::vector<ValuePtr>&)> apply;
    // Name of the dual-number translation c_D ("" means the constant is its
    // own translation, as for pair/fst/snd).
    std::string dualName;
};

class ConstTable {
public:
    const Prim* find(const std::string& name) const;
    const Prim& get(const std::string& name) const; // throws if missing
    void add(Prim p);
    std::vector<std::string> names() const;

    // Default table: arithmetic, sin/cos/exp/log/sqrt, pi, nonneg,
    // pair/fst/snd, and all their dual translations.
    static const ConstTable& defaults();

private:
    std::map<std::string, Prim> prims_;
};

} // namespace paplang
