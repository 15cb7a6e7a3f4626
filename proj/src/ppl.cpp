#include "paplang/ppl.hpp"

#include "paplang/ad.hpp"
#include "paplang/consts.hpp"
#include "paplang/eval.hpp"
#include "paplang/typecheck.hpp"

namespace paplang {

namespace {

const ConstTable& tbl() { return ConstTable::defaults(); }

TermPtr tPair(TermPtr a, TermPtr b) {
    return mkApp(mkApp(mkConst(&tbl().get("pair")), std::move(a)), std::move(b));
}
TermPtr tFst(TermPtr a) { return mkApp(mkConst(&tbl().get("fst")), std::move(a)); }
TermPtr tSnd(TermPtr a) { return mkApp(mkConst(&tbl().get("snd")), std::move(a)); }
TermPtr tBin(const char* op, TermPtr a, TermPtr b) {
    return mkApp(mkApp(mkConst(&tbl().get(op)), std::move(a)), std::move(b));
}
TermPtr tNonneg(TermPtr a) { return mkApp(mkConst(&tbl().get("nonneg")), std::move(a)); }

// Trace encoding at capacity k: Trace_k = R x Slots_k, Slots_0 = R (dummy),
// Slots_j = R x Slots_{j-1}. The length tag counts remaining samples.
TyPtr slotsTy(int k) { return k == 0 ? tyReal() : tyProd(tyReal(), slotsTy(k - 1)); }
TyPtr traceTy(int k) { return tyProd(tyReal(), slotsTy(k)); }
TyPtr maybeTy(const TyPtr& t) { return tyProd(tyReal(), t); }
TyPtr resultTy(const TyPtr& t, int k) {
    return tyProd(maybeTy(t), tyProd(tyReal(), traceTy(k)));
}

// Nested pair of k reals; R for k <= 1 (k = 0 is a dummy argument).
TyPtr vecTy(int k) { return k <= 1 ? tyReal() : tyProd(tyReal(), vecTy(k - 1)); }

TermPtr zeroTerm(const TyPtr& ty) {
    switch (ty->kind) {
    case Ty::Kind::RealVec:
        if (ty->dim != 1)
            throw ElaborationError("only scalar and product value types are supported");
        return mkLit(0.0);
    case Ty::Kind::Prod:
        return tPair(zeroTerm(ty->a), zeroTerm(ty->b));
    case Ty::Kind::Fun:
        throw ElaborationError("function-valued probabilistic programs are not supported");
    }
    return nullptr;
}

// [s_0, ..., s_{k-1}] right-folded into Slots_k with a trailing dummy.
TermPtr buildSlots(const std::vector<TermPtr>& vals) {
    TermPtr out = mkLit(0.0);
    for (auto it = vals.rbegin(); it != vals.rend(); ++it) out = tPair(*it, out);
    return out;
}

TermPtr sndChain(TermPtr t, int n) {
    for (int i = 0; i < n; ++i) t = tSnd(std::move(t));
    return t;
}

struct Elaborator {
    int capacity;
    int fresh = 0;

    std::string gensym(const char* base) { return std::string(base) + "'" + std::to_string(fresh++); }

    // Returns a term of type Trace_k -> (Maybe tau x (R x Trace_k)) and the
    // value type tau through `valTy`.
    TermPtr elab(const ProbPtr& p, const Ctx& ctx, TyPtr& valTy) {
        const int k = capacity;
        switch (p->kind) {
        case ProbTerm::Kind::Return: {
            valTy = infer(ctx, p->expr);
            std::string tr = gensym("tr");
            TermPtr body = tPair(tPair(mkLit(1.0), p->expr), tPair(mkLit(1.0), mkVar(tr)));
            return mkLam(tr, traceTy(k), body);
        }
        case ProbTerm::Kind::Sample: {
            valTy = tyReal();
            std::string tr = gensym("tr");
            TermPtr len = tFst(mkVar(tr));
            TermPtr slots = tSnd(mkVar(tr));
            // head/tail degenerate to the dummy at capacity 0 (dead branch)
            TermPtr head = k == 0 ? slots : tFst(slots);
            TermPtr tailSlots;
            if (k == 0) {
                tailSlots = slots;
            } else {
                std::vector<TermPtr> shifted;
                for (int i = 1; i < k; ++i) shifted.push_back(tFst(sndChain(slots, i)));
                shifted.push_back(mkLit(0.0));
                tailSlots = buildSlots(shifted);
            }
            TermPtr taken = tPair(tPair(mkLit(1.0), head),
                                  tPair(mkLit(1.0),
                                        tPair(tBin("-", len, mkLit(1.0)), tailSlots)));
            TermPtr empty = tPair(tPair(mkLit(0.0), mkLit(0.0)), tPair(mkLit(0.0), mkVar(tr)));
            return mkLam(tr, traceTy(k), mkIf(tFst(mkVar(tr)), taken, empty));
        }
        case ProbTerm::Kind::Score: {
            valTy = tyReal(); // unit encoded as R
            TyPtr wTy = infer(ctx, p->expr);
            if (wTy->kind != Ty::Kind::RealVec || wTy->dim != 1)
                throw ElaborationError("score argument must have type R, found " +
                                       tyToString(wTy));
            std::string tr = gensym("tr");
            TermPtr body = tPair(tPair(mkLit(1.0), mkLit(0.0)),
                                 tPair(tNonneg(p->expr), mkVar(tr)));
            return mkLam(tr, traceTy(k), body);
        }
        case ProbTerm::Kind::Do: {
            TyPtr t1;
            TermPtr e1 = elab(p->first, ctx, t1);
            TyPtr sigma;
            TermPtr e2 = elab(p->rest, ctx.extend(p->var, t1), sigma);
            valTy = sigma;

            std::string tr = gensym("tr");
            std::string a = gensym("a");
            std::string b = gensym("b");
            TermPtr av = mkVar(a);
            TermPtr w = tFst(tSnd(av));
            TermPtr r = tSnd(tSnd(av));
            TermPtr mval = tSnd(tFst(av));

            TermPtr inner =
                mkLam(b, resultTy(sigma, k),
                      tPair(tFst(mkVar(b)),
                            tPair(tBin("*", w, tFst(tSnd(mkVar(b)))), tSnd(tSnd(mkVar(b))))));
            TermPtr thenBranch =
                mkApp(mkLam(p->var, t1, mkApp(inner, mkApp(e2, r))), mval);
            TermPtr elseBranch =
                tPair(tPair(mkLit(0.0), zeroTerm(sigma)), tPair(mkLit(0.0), mkVar(tr)));
            TermPtr body = mkApp(mkLam(a, resultTy(t1, k),
                                       mkIf(tFst(tFst(av)), thenBranch, elseBranch)),
                                 mkApp(e1, mkVar(tr)));
            return mkLam(tr, traceTy(k), body);
        }
        }
        throw std::logic_error("unreachable prob kind");
    }
};

TyPtr probValueTyIn(const ProbPtr& p, const Ctx& ctx) {
    switch (p->kind) {
    case ProbTerm::Kind::Return:
        return infer(ctx, p->expr);
    case ProbTerm::Kind::Sample:
        return tyReal();
    case ProbTerm::Kind::Score:
        return tyReal();
    case ProbTerm::Kind::Do: {
        TyPtr t1 = probValueTyIn(p->first, ctx);
        return probValueTyIn(p->rest, ctx.extend(p->var, t1));
    }
    }
    throw std::logic_error("unreachable prob kind");
}

} // namespace

TyPtr probValueTy(const ProbPtr& p) { return probValueTyIn(p, Ctx{}); }

TermPtr elaborate(const ProbPtr& p, int capacity) {
    Elaborator e{capacity};
    TyPtr valTy;
    return e.elab(p, Ctx{}, valTy);
}

TermPtr densityTerm(const ProbPtr& p, int k) {
    Elaborator el{k};
    TyPtr valTy;
    TermPtr e = el.elab(p, Ctx{}, valTy);

    // the input trace built from the k coordinates of v
    std::string v = el.gensym("v");
    std::vector<TermPtr> entries;
    for (int i = 0; i < k; ++i) {
        TermPtr sel = sndChain(mkVar(v), i);
        if (i < k - 1) sel = tFst(sel);
        entries.push_back(sel);
    }
    TermPtr traceVal = tPair(mkLit((double)k), buildSlots(entries));

    std::string a = el.gensym("a");
    TermPtr remLen = tFst(tSnd(tSnd(mkVar(a))));
    TermPtr w = tFst(tSnd(mkVar(a)));
    TermPtr body = mkApp(mkLam(a, resultTy(valTy, k), mkIf(remLen, mkLit(0.0), w)),
                         mkApp(e, traceVal));
    return mkLam(v, vecTy(k), body);
}

DensityResult traceDensity(const ProbPtr& p, const Trace& tr, long fuel) {
    const int k = (int)tr.size();
    TermPtr d = densityTerm(p, k);
    std::vector<double> x = tr.empty() ? std::vector<double>{0.0} : tr;

    DensityResult res;
    auto out = evalFlat(d, vecTy(k), x, fuel, &res.outcome);
    if (res.outcome.kind == Outcome::Kind::DomainError &&
        res.outcome.detail.rfind("nonneg", 0) == 0)
        res.outcome.detail = "negative score weight";
    if (out) res.density = (*out)[0];
    return res;
}

std::optional<std::vector<double>> densityGradient(const ProbPtr& p, const Trace& tr,
                                                   long fuel) {
    const int k = (int)tr.size();
    if (k == 0) return std::vector<double>{};
    TermPtr d = densityTerm(p, k);
    std::vector<double> grad(k, 0.0);
    for (int j = 0; j < k; ++j) {
        std::vector<double> dir(k, 0.0);
        dir[j] = 1.0;
        auto r = derivative(d, tr, dir, fuel);
        if (!r) return std::nullopt;
        grad[j] = r->tangent[0];
    }
    return grad;
}

} // namespace paplang
