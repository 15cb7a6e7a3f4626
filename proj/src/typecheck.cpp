#include "paplang/typecheck.hpp"

namespace paplang {

Ctx Ctx::extend(const std::string& name, TyPtr ty) const {
    Ctx out = *this;
    out.binds_.emplace_back(name, std::move(ty));
    return out;
}

const TyPtr* Ctx::lookup(const std::string& name) const {
    for (auto it = binds_.rbegin(); it != binds_.rend(); ++it)
        if (it->first == name) return &it->second;
    return nullptr;
}

namespace {

bool isPoly(const TermPtr& t, Prim::Poly kind) {
    return t->kind == Term::Kind::Const && !t->isLit && t->prim &&
           t->prim->poly == kind;
}

} // namespace

TyPtr infer(const Ctx& ctx, const TermPtr& t) {
    switch (t->kind) {
    case Term::Kind::Var: {
        const TyPtr* ty = ctx.lookup(t->name);
        if (!ty) throw TypeError("var", "variable '" + t->name + "' not in context", t->loc);
        return *ty;
    }
    case Term::Kind::Const: {
        if (t->isLit) return tyReal();
        if (t->prim->poly != Prim::Poly::None)
            throw TypeError("const",
                            "cannot infer the type instance of '" + t->name +
                                "' outside an application",
                            t->loc);
        return t->prim->type;
    }
    case Term::Kind::App: {
        const TermPtr& fn = t->a;
        // fst/snd: instance from the argument type
        if (isPoly(fn, Prim::Poly::Fst) || isPoly(fn, Prim::Poly::Snd)) {
            TyPtr argTy = infer(ctx, t->b);
            if (argTy->kind != Ty::Kind::Prod)
                throw TypeError("app",
                                fn->name + " expects a product argument, found " +
                                    tyToString(argTy),
                                t->loc);
            return isPoly(fn, Prim::Poly::Fst) ? argTy->a : argTy->b;
        }
        // pair e1 e2: instance from both argument types
        if (fn->kind == Term::Kind::App && isPoly(fn->a, Prim::Poly::Pair)) {
            TyPtr t1 = infer(ctx, fn->b);
            TyPtr t2 = infer(ctx, t->b);
            return tyProd(t1, t2);
        }
        TyPtr fnTy = infer(ctx, fn);
        if (fnTy->kind != Ty::Kind::Fun)
            throw TypeError("app", "applied a non-function of type " + tyToString(fnTy),
                            t->loc);
        TyPtr argTy = infer(ctx, t->b);
        if (!tyEqual(fnTy->a, argTy))
            throw TypeError("app",
                            "expected argument of type " + tyToString(fnTy->a) + ", found " +
                                tyToString(argTy),
                            t->b->loc);
        return fnTy->b;
    }
    case Term::Kind::If: {
        TyPtr guardTy = infer(ctx, t->a);
        if (guardTy->kind != Ty::Kind::RealVec || guardTy->dim != 1)
            throw TypeError("if", "guard must be R, found " + tyToString(guardTy), t->a->loc);
        TyPtr thnTy = infer(ctx, t->b);
        TyPtr elsTy = infer(ctx, t->c);
        if (!tyEqual(thnTy, elsTy))
            throw TypeError("if",
                            "branch types differ: " + tyToString(thnTy) + " vs " +
                                tyToString(elsTy),
                            t->loc);
        return thnTy;
    }
    case Term::Kind::Lam:
        return tyFun(t->ty, infer(ctx.extend(t->name, t->ty), t->a));
    case Term::Kind::Mu: {
        TyPtr bodyTy = infer(ctx.extend(t->name, t->ty), t->a);
        if (!tyEqual(bodyTy, t->ty))
            throw TypeError("mu",
                            "expected body of type " + tyToString(t->ty) + ", found " +
                                tyToString(bodyTy),
                            t->loc);
        return t->ty;
    }
    }
    throw std::logic_error("unreachable term kind");
}

TyPtr infer(const TermPtr& t) { return infer(Ctx{}, t); }

} // namespace paplang
