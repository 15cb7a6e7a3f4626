#pragma once

#include <optional>

#include "paplang/consts.hpp"
#include "paplang/eval.hpp"
#include "paplang/syntax.hpp"

namespace paplang {

struct MissingDual : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// D[R^k] = R^k x R^k, structural on products and arrows.
TyPtr dualTy(const TyPtr& ty);

// The forward-mode macro: a source-to-source rewrite preserving the mu/if
// skeleton node for node. Constants map to their registered duals; numeric
// literals c become the pair (c, 0).
TermPtr adTransform(const TermPtr& t, const ConstTable& table = ConstTable::defaults());

struct DualResult {
    std::vector<double> primal;
    std::vector<double> tangent;
};

// Evaluates D[t] at the dual point (x, direction). t must be a closed term of
// first-order type. Bottom outcomes are reported through `out`.
std::optional<DualResult> derivative(const TermPtr& t, const std::vector<double>& x,
                                     const std::vector<double>& direction, long fuel,
                                     Outcome* out = nullptr,
                                     const ConstTable& table = ConstTable::defaults());

} // namespace paplang
