#pragma once

#include <string>
#include <utility>
#include <vector>

#include "paplang/consts.hpp"
#include "paplang/syntax.hpp"

namespace paplang {

struct TypeError : std::runtime_error {
    Loc loc;
    std::string rule;
    TypeError(std::string rule_, std::string msg, Loc l)
        : std::runtime_error("[" + rule_ + "] " + msg), loc(l), rule(std::move(rule_)) {}
};

// Ordered context; lookup returns the innermost binding.
class Ctx {
public:
    Ctx() = default;
    Ctx extend(const std::string& name, TyPtr ty) const;
    const TyPtr* lookup(const std::string& name) const;

private:
    std::vector<std::pair<std::string, TyPtr>> binds_;
};

// Infers the unique type of t, or throws TypeError. Instances of the
// pair/fst/snd family are resolved from the types of their arguments.
TyPtr infer(const Ctx& ctx, const TermPtr& t);
TyPtr infer(const TermPtr& t);

} // namespace paplang
