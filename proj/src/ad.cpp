#include "paplang/ad.hpp"

#include "paplang/typecheck.hpp"

namespace paplang {

TyPtr dualTy(const TyPtr& ty) {
    switch (ty->kind) {
    case Ty::Kind::RealVec:
        return tyProd(ty, ty);
    case Ty::Kind::Prod:
        return tyProd(dualTy(ty->a), dualTy(ty->b));
    case Ty::Kind::Fun:
        return tyFun(dualTy(ty->a), dualTy(ty->b));
    }
    return nullptr;
}

namespace {

// (c, 0): a real constant pairs with the zero tangent
TermPtr dualConstPair(const TermPtr& c, const ConstTable& table) {
    auto pairC = mkConst(&table.get("pair"), c->loc);
    return mkApp(mkApp(pairC, c, c->loc), mkLit(0.0, c->loc), c->loc);
}

TermPtr transform(const TermPtr& t, const ConstTable& table) {
    switch (t->kind) {
    case Term::Kind::Var:
        return t;
    case Term::Kind::Const: {
        if (t->isLit) return dualConstPair(t, table);
        const Prim* p = t->prim;
        if (p->poly != Prim::Poly::None) return t; // pair/fst/snd are structural
        if (!p->dualName.empty()) return mkConst(&table.get(p->dualName), t->loc);
        if (p->arity == 0 && p->type->kind == Ty::Kind::RealVec && p->type->dim == 1)
            return dualConstPair(t, table);
        throw MissingDual("constant '" + p->name + "' has no dual translation");
    }
    case Term::Kind::App:
        return mkApp(transform(t->a, table), transform(t->b, table), t->loc);
    case Term::Kind::If: {
        auto fstC = mkConst(&table.get("fst"), t->loc);
        auto guard = mkApp(fstC, transform(t->a, table), t->loc);
        return mkIf(guard, transform(t->b, table), transform(t->c, table), t->loc);
    }
    case Term::Kind::Lam:
        return mkLam(t->name, dualTy(t->ty), transform(t->a, table), t->loc);
    case Term::Kind::Mu:
        return mkMu(t->name, dualTy(t->ty), transform(t->a, table), t->loc);
    }
    throw std::logic_error("unreachable term kind");
}

} // namespace

TermPtr adTransform(const TermPtr& t, const ConstTable& table) {
    return transform(t, table);
}

std::optional<DualResult> derivative(const TermPtr& t, const std::vector<double>& x,
                                     const std::vector<double>& direction, long fuel,
                                     Outcome* out, const ConstTable& table) {
    TyPtr ty = infer(t);
    if (ty->kind != Ty::Kind::Fun || !tyIsData(ty->a) || !tyIsData(ty->b))
        throw std::invalid_argument("derivative requires a closed first-order function");

    TermPtr dt = adTransform(t, table);
    Outcome f = eval(dt, nullptr, fuel);
    if (f.halted()) {
        ValuePtr arg = unflattenDual(ty->a, x, direction);
        f = applyValue(f.value, arg, fuel);
    }
    if (out) *out = f;
    if (!f.halted()) return std::nullopt;

    DualResult r;
    splitDual(ty->b, f.value, r.primal, r.tangent);
    return r;
}

} // namespace paplang
