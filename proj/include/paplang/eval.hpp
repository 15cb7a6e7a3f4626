#pragma once

#include <optional>

#include "paplang/consts.hpp"
#include "paplang/syntax.hpp"
#include "paplang/value.hpp"

namespace paplang {

// Fuel-indexed evaluator. Fuel is charged only at mu-unfoldings: eval with
// fuel n computes the n-th Kleene approximant of every fixpoint in the term.
// Beta-reduction and primitives are free.
Outcome eval(const TermPtr& t, const Env& env, long fuel);
Outcome eval(const TermPtr& t, long fuel);

// Applies a function value (closure, recursive approximant, or partially
// applied primitive) to an argument.
Outcome applyValue(const ValuePtr& f, const ValuePtr& v, long fuel);

// Convenience: applies a closed first-order term to flat coordinates and
// returns flat outputs (nullopt encodes bottom; `out` distinguishes reasons).
std::optional<std::vector<double>> evalFlat(const TermPtr& t, const TyPtr& argTy,
                                            const std::vector<double>& x, long fuel,
                                            Outcome* out = nullptr);

} // namespace paplang
