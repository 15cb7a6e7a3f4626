#include "paplang/oracle.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include "paplang/ad.hpp"
#include "paplang/consts.hpp"
#include "paplang/eval.hpp"
#include "paplang/typecheck.hpp"

namespace paplang {

// ---------------------------------------------------------------------------
// Expressions
// ---------------------------------------------------------------------------

ExprPtr exLit(double v) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Lit;
    e->lit = v;
    return e;
}

ExprPtr exCoord(int i) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Coord;
    e->coord = i;
    return e;
}

ExprPtr exUnary(Expr::Op op, ExprPtr a) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Unary;
    e->op = op;
    e->a = std::move(a);
    return e;
}

namespace {

bool isLitVal(const ExprPtr& e, double v) {
    return e->kind == Expr::Kind::Lit && e->lit == v;
}

} // namespace

ExprPtr exBinary(Expr::Op op, ExprPtr a, ExprPtr b) {
    // light constant folding and unit/zero elimination
    using Op = Expr::Op;
    switch (op) {
    case Op::Add:
        if (isLitVal(a, 0.0)) return b;
        if (isLitVal(b, 0.0)) return a;
        break;
    case Op::Sub:
        if (isLitVal(b, 0.0)) return a;
        break;
    case Op::Mul:
        if (isLitVal(a, 0.0) || isLitVal(b, 0.0)) return exLit(0.0);
        if (isLitVal(a, 1.0)) return b;
        if (isLitVal(b, 1.0)) return a;
        break;
    case Op::Div:
        if (isLitVal(b, 1.0)) return a;
        break;
    default:
        break;
    }
    if (a->kind == Expr::Kind::Lit && b->kind == Expr::Kind::Lit) {
        switch (op) {
        case Op::Add: return exLit(a->lit + b->lit);
        case Op::Sub: return exLit(a->lit - b->lit);
        case Op::Mul: return exLit(a->lit * b->lit);
        default: break; // division kept symbolic to preserve the domain guard
        }
    }
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Binary;
    e->op = op;
    e->a = std::move(a);
    e->b = std::move(b);
    return e;
}

std::optional<double> exEval(const ExprPtr& e, const std::vector<double>& x) {
    using Op = Expr::Op;
    switch (e->kind) {
    case Expr::Kind::Lit:
        return e->lit;
    case Expr::Kind::Coord:
        if (e->coord < 0 || e->coord >= (int)x.size())
            throw std::invalid_argument("coordinate out of range");
        return x[e->coord];
    case Expr::Kind::Unary: {
        auto a = exEval(e->a, x);
        if (!a) return std::nullopt;
        double r;
        switch (e->op) {
        case Op::Neg: r = -*a; break;
        case Op::Sin: r = std::sin(*a); break;
        case Op::Cos: r = std::cos(*a); break;
        case Op::Exp: r = std::exp(*a); break;
        case Op::Log:
            if (*a <= 0.0) return std::nullopt;
            r = std::log(*a);
            break;
        case Op::Sqrt:
            if (*a <= 0.0) return std::nullopt;
            r = std::sqrt(*a);
            break;
        case Op::Nonneg:
            if (*a < 0.0) return std::nullopt;
            r = *a;
            break;
        default:
            throw std::logic_error("bad unary op");
        }
        if (!std::isfinite(r)) return std::nullopt;
        return r;
    }
    case Expr::Kind::Binary: {
        auto a = exEval(e->a, x);
        if (!a) return std::nullopt;
        auto b = exEval(e->b, x);
        if (!b) return std::nullopt;
        double r;
        switch (e->op) {
        case Op::Add: r = *a + *b; break;
        case Op::Sub: r = *a - *b; break;
        case Op::Mul: r = *a * *b; break;
        case Op::Div:
            if (*b == 0.0) return std::nullopt;
            r = *a / *b;
            break;
        default:
            throw std::logic_error("bad binary op");
        }
        if (!std::isfinite(r)) return std::nullopt;
        return r;
    }
    }
    return std::nullopt;
}

ExprPtr exDiff(const ExprPtr& e, int coord) {
    using Op = Expr::Op;
    switch (e->kind) {
    case Expr::Kind::Lit:
        return exLit(0.0);
    case Expr::Kind::Coord:
        return exLit(e->coord == coord ? 1.0 : 0.0);
    case Expr::Kind::Unary: {
        ExprPtr da = exDiff(e->a, coord);
        switch (e->op) {
        case Op::Neg: return exUnary(Op::Neg, da);
        case Op::Sin: return exBinary(Op::Mul, exUnary(Op::Cos, e->a), da);
        case Op::Cos:
            return exUnary(Op::Neg, exBinary(Op::Mul, exUnary(Op::Sin, e->a), da));
        case Op::Exp: return exBinary(Op::Mul, exUnary(Op::Exp, e->a), da);
        case Op::Log: return exBinary(Op::Div, da, e->a);
        case Op::Sqrt:
            return exBinary(Op::Div, da, exBinary(Op::Mul, exLit(2.0), exUnary(Op::Sqrt, e->a)));
        case Op::Nonneg: return da; // identity on its domain
        default: throw std::logic_error("bad unary op");
        }
    }
    case Expr::Kind::Binary: {
        ExprPtr da = exDiff(e->a, coord);
        ExprPtr db = exDiff(e->b, coord);
        switch (e->op) {
        case Op::Add: return exBinary(Op::Add, da, db);
        case Op::Sub: return exBinary(Op::Sub, da, db);
        case Op::Mul:
            return exBinary(Op::Add, exBinary(Op::Mul, da, e->b),
                            exBinary(Op::Mul, e->a, db));
        case Op::Div:
            return exBinary(Op::Div,
                            exBinary(Op::Sub, exBinary(Op::Mul, da, e->b),
                                     exBinary(Op::Mul, e->a, db)),
                            exBinary(Op::Mul, e->b, e->b));
        default: throw std::logic_error("bad binary op");
        }
    }
    }
    return nullptr;
}

std::string exToString(const ExprPtr& e) {
    using Op = Expr::Op;
    std::ostringstream os;
    switch (e->kind) {
    case Expr::Kind::Lit:
        os.precision(17);
        os << e->lit;
        break;
    case Expr::Kind::Coord:
        os << "x" << e->coord;
        break;
    case Expr::Kind::Unary: {
        static const std::map<Op, std::string> names = {
            {Op::Neg, "-"},   {Op::Sin, "sin"},   {Op::Cos, "cos"},
            {Op::Exp, "exp"}, {Op::Log, "log"},   {Op::Sqrt, "sqrt"},
            {Op::Nonneg, "nonneg"}};
        os << names.at(e->op) << "(" << exToString(e->a) << ")";
        break;
    }
    case Expr::Kind::Binary: {
        static const std::map<Op, std::string> names = {
            {Op::Add, " + "}, {Op::Sub, " - "}, {Op::Mul, " * "}, {Op::Div, " / "}};
        os << "(" << exToString(e->a) << names.at(e->op) << exToString(e->b) << ")";
        break;
    }
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Analytic sets
// ---------------------------------------------------------------------------

Tri contains(const AnalyticSet& s, const std::vector<double>& x) {
    bool member = true;
    for (const auto& g : s.strictGuards) {
        auto v = exEval(g, x);
        if (!v) return Tri::Undefined;
        if (!(*v > 0.0)) member = false;
    }
    for (const auto& g : s.nonstrictGuards) {
        auto v = exEval(g, x);
        if (!v) return Tri::Undefined;
        if (!(*v <= 0.0)) member = false;
    }
    return member ? Tri::True : Tri::False;
}

std::optional<std::vector<double>> pwEval(const PiecewiseRep& r, const std::vector<double>& x) {
    const Piece* active = nullptr;
    for (const auto& p : r.pieces) {
        if (contains(p.set, x) == Tri::True) {
            if (active) throw PwError("multiple pieces contain the same point");
            active = &p;
        }
    }
    if (!active) return std::nullopt;
    std::vector<double> out;
    out.reserve(active->fn.size());
    for (const auto& f : active->fn) {
        auto v = exEval(f, x);
        if (!v) return std::nullopt;
        out.push_back(*v);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Symbolic path enumeration
// ---------------------------------------------------------------------------

namespace {

struct SymVal;
using SymPtr = std::shared_ptr<const SymVal>;

struct SymEnvNode;
using SymEnv = std::shared_ptr<const SymEnvNode>;

struct SymVal {
    enum class Kind { Num, Pair, Closure, Rec, Prim };
    Kind kind = Kind::Num;
    std::vector<ExprPtr> xs;     // Num: one expr per scalar component
    SymPtr first, second;        // Pair
    std::string name;            // Closure param / Rec fname
    TermPtr body;
    SymEnv env;
    int depth = 0;               // Rec: remaining unrollings
    const Prim* prim = nullptr;  // Prim partial application
    std::vector<SymPtr> args;
};

struct SymEnvNode {
    std::string name;
    SymPtr val;
    SymEnv next;
};

SymEnv symExtend(SymEnv env, std::string name, SymPtr val) {
    auto n = std::make_shared<SymEnvNode>();
    n->name = std::move(name);
    n->val = std::move(val);
    n->next = std::move(env);
    return n;
}

SymPtr symLookup(const SymEnv& env, const std::string& name) {
    for (const SymEnvNode* n = env.get(); n; n = n->next.get())
        if (n->name == name) return n->val;
    throw std::logic_error("unbound variable in symbolic evaluation: " + name);
}

SymPtr symNum(std::vector<ExprPtr> xs) {
    auto v = std::make_shared<SymVal>();
    v->kind = SymVal::Kind::Num;
    v->xs = std::move(xs);
    return v;
}

SymPtr symScalar(ExprPtr e) { return symNum({std::move(e)}); }

SymPtr symPair(SymPtr a, SymPtr b) {
    auto v = std::make_shared<SymVal>();
    v->kind = SymVal::Kind::Pair;
    v->first = std::move(a);
    v->second = std::move(b);
    return v;
}

// Raised when a path still contains a mu after the unroll budget.
struct UnresolvedPath {};

struct PathCtx {
    std::vector<bool> script;                      // forced decisions (prefix)
    std::vector<bool> taken;                       // all decisions of this run
    std::vector<std::pair<ExprPtr, bool>> conds;   // (guard, took-then-branch)
};

ExprPtr scalarOf(const SymPtr& v, const char* who) {
    if (v->kind != SymVal::Kind::Num || v->xs.size() != 1)
        throw PwError(std::string(who) + ": expected a symbolic scalar");
    return v->xs[0];
}

SymPtr applyPrimSym(const Prim* p, const std::vector<SymPtr>& args) {
    using Op = Expr::Op;
    const std::string& n = p->name;
    if (n == "pair") return symPair(args[0], args[1]);
    if (n == "fst" || n == "snd") {
        if (args[0]->kind != SymVal::Kind::Pair)
            throw PwError(n + ": expected a symbolic pair");
        return n == "fst" ? args[0]->first : args[0]->second;
    }
    static const std::map<std::string, Op> binOps = {
        {"+", Op::Add}, {"-", Op::Sub}, {"*", Op::Mul}, {"/", Op::Div}};
    static const std::map<std::string, Op> unOps = {
        {"sin", Op::Sin}, {"cos", Op::Cos},   {"exp", Op::Exp},
        {"log", Op::Log}, {"sqrt", Op::Sqrt}, {"nonneg", Op::Nonneg}};
    if (auto it = binOps.find(n); it != binOps.end())
        return symScalar(exBinary(it->second, scalarOf(args[0], n.c_str()),
                                  scalarOf(args[1], n.c_str())));
    if (auto it = unOps.find(n); it != unOps.end())
        return symScalar(exUnary(it->second, scalarOf(args[0], n.c_str())));
    throw PwError("primitive '" + n + "' is not supported in symbolic evaluation");
}

class SymEvaluator {
public:
    SymEvaluator(int budget, long maxPaths) : budget_(budget), maxPaths_(maxPaths) {}

    SymPtr eval(const TermPtr& t, const SymEnv& env, PathCtx& ctx) {
        switch (t->kind) {
        case Term::Kind::Var:
            return symLookup(env, t->name);
        case Term::Kind::Const: {
            if (t->isLit) return symScalar(exLit(t->lit));
            const Prim* p = t->prim;
            if (p->name == "pi") return symScalar(exLit(M_PI));
            if (p->arity == 0) throw PwError("unsupported nullary constant " + p->name);
            auto v = std::make_shared<SymVal>();
            v->kind = SymVal::Kind::Prim;
            v->prim = p;
            return v;
        }
        case Term::Kind::App: {
            SymPtr f = eval(t->a, env, ctx);
            SymPtr a = eval(t->b, env, ctx);
            return apply(f, a, ctx);
        }
        case Term::Kind::If: {
            SymPtr g = eval(t->a, env, ctx);
            ExprPtr guard = scalarOf(g, "if-guard");
            bool takeThen;
            if (ctx.taken.size() < ctx.script.size()) {
                takeThen = ctx.script[ctx.taken.size()];
            } else {
                takeThen = true; // explore the then-branch first
            }
            ctx.taken.push_back(takeThen);
            ctx.conds.emplace_back(guard, takeThen);
            return takeThen ? eval(t->b, env, ctx) : eval(t->c, env, ctx);
        }
        case Term::Kind::Lam: {
            auto v = std::make_shared<SymVal>();
            v->kind = SymVal::Kind::Closure;
            v->name = t->name;
            v->body = t->a;
            v->env = env;
            return v;
        }
        case Term::Kind::Mu: {
            auto v = std::make_shared<SymVal>();
            v->kind = SymVal::Kind::Rec;
            v->name = t->name;
            v->body = t->a;
            v->env = env;
            v->depth = budget_;
            return v;
        }
        }
        throw std::logic_error("unreachable term kind");
    }

    SymPtr apply(const SymPtr& f, const SymPtr& a, PathCtx& ctx) {
        switch (f->kind) {
        case SymVal::Kind::Closure:
            return eval(f->body, symExtend(f->env, f->name, a), ctx);
        case SymVal::Kind::Rec: {
            if (f->depth <= 0) throw UnresolvedPath{};
            auto self = std::make_shared<SymVal>(*f);
            self->depth = f->depth - 1;
            SymPtr unfolded = eval(f->body, symExtend(f->env, f->name, self), ctx);
            return apply(unfolded, a, ctx);
        }
        case SymVal::Kind::Prim: {
            std::vector<SymPtr> args = f->args;
            args.push_back(a);
            if ((int)args.size() < f->prim->arity) {
                auto v = std::make_shared<SymVal>(*f);
                v->args = std::move(args);
                return v;
            }
            return applyPrimSym(f->prim, args);
        }
        default:
            throw PwError("applied a non-function symbolic value");
        }
    }

    long maxPaths() const { return maxPaths_; }

private:
    int budget_;
    long maxPaths_;
};

SymPtr symInput(const TyPtr& ty, int& next) {
    switch (ty->kind) {
    case Ty::Kind::RealVec: {
        std::vector<ExprPtr> xs;
        for (int i = 0; i < ty->dim; ++i) xs.push_back(exCoord(next++));
        return symNum(std::move(xs));
    }
    case Ty::Kind::Prod: {
        auto a = symInput(ty->a, next);
        auto b = symInput(ty->b, next);
        return symPair(a, b);
    }
    case Ty::Kind::Fun:
        throw NotFirstOrder("function-typed input");
    }
    return nullptr;
}

void flattenSym(const SymPtr& v, std::vector<ExprPtr>& out) {
    switch (v->kind) {
    case SymVal::Kind::Num:
        out.insert(out.end(), v->xs.begin(), v->xs.end());
        return;
    case SymVal::Kind::Pair:
        flattenSym(v->first, out);
        flattenSym(v->second, out);
        return;
    default:
        throw NotFirstOrder("function-typed result");
    }
}

AnalyticSet setFromConds(int dim, const std::vector<std::pair<ExprPtr, bool>>& conds) {
    AnalyticSet s;
    s.dim = dim;
    for (const auto& [g, takeThen] : conds) {
        if (takeThen)
            s.strictGuards.push_back(g);
        else
            s.nonstrictGuards.push_back(g);
    }
    return s;
}

} // namespace

PiecewiseRep extractRep(const TermPtr& t, int unrollBudget) {
    TyPtr ty = infer(t);
    if (ty->kind != Ty::Kind::Fun || !tyIsData(ty->a) || !tyIsData(ty->b))
        throw NotFirstOrder("extractRep requires a closed first-order function, got " +
                            tyToString(ty));
    PiecewiseRep rep;
    rep.inDim = tyFlatDim(ty->a);
    rep.outDim = tyFlatDim(ty->b);

    SymEvaluator ev(unrollBudget, 1 << 20);
    int next = 0;
    SymPtr input = symInput(ty->a, next);

    std::vector<bool> script;
    long paths = 0;
    for (;;) {
        if (++paths > ev.maxPaths()) throw PwError("path enumeration exploded");
        PathCtx ctx;
        ctx.script = script;
        bool unresolved = false;
        SymPtr result;
        try {
            SymPtr fn = ev.eval(t, nullptr, ctx);
            result = ev.apply(fn, input, ctx);
        } catch (const UnresolvedPath&) {
            unresolved = true;
        }
        if (unresolved) {
            rep.unresolved.push_back(setFromConds(rep.inDim, ctx.conds));
        } else {
            Piece p;
            p.set = setFromConds(rep.inDim, ctx.conds);
            flattenSym(result, p.fn);
            if ((int)p.fn.size() != rep.outDim)
                throw PwError("piece output dimension mismatch");
            rep.pieces.push_back(std::move(p));
        }
        // next decision string: flip the last then-branch to its else-branch
        script = ctx.taken;
        while (!script.empty() && !script.back()) script.pop_back();
        if (script.empty()) break;
        script.back() = false;
    }
    return rep;
}

namespace {

ExprPtr substCoords(const ExprPtr& e, const std::vector<ExprPtr>& repl) {
    switch (e->kind) {
    case Expr::Kind::Lit:
        return e;
    case Expr::Kind::Coord:
        if (e->coord < 0 || e->coord >= (int)repl.size())
            throw std::invalid_argument("coordinate out of range in substitution");
        return repl[e->coord];
    case Expr::Kind::Unary:
        return exUnary(e->op, substCoords(e->a, repl));
    case Expr::Kind::Binary:
        return exBinary(e->op, substCoords(e->a, repl), substCoords(e->b, repl));
    }
    return nullptr;
}

} // namespace

PiecewiseRep composeReps(const PiecewiseRep& rF, const PiecewiseRep& rG) {
    if (rF.outDim != rG.inDim)
        throw std::invalid_argument("composeReps: dimension mismatch");
    PiecewiseRep out;
    out.inDim = rF.inDim;
    out.outDim = rG.outDim;
    for (const auto& pf : rF.pieces) {
        for (const auto& pg : rG.pieces) {
            Piece p;
            p.set = pf.set;
            for (const auto& g : pg.set.strictGuards)
                p.set.strictGuards.push_back(substCoords(g, pf.fn));
            for (const auto& g : pg.set.nonstrictGuards)
                p.set.nonstrictGuards.push_back(substCoords(g, pf.fn));
            for (const auto& f : pg.fn) p.fn.push_back(substCoords(f, pf.fn));
            out.pieces.push_back(std::move(p));
        }
        // F-pieces mapping into an unresolved region of G stay unresolved
        for (const auto& ug : rG.unresolved) {
            AnalyticSet s = pf.set;
            for (const auto& g : ug.strictGuards)
                s.strictGuards.push_back(substCoords(g, pf.fn));
            for (const auto& g : ug.nonstrictGuards)
                s.nonstrictGuards.push_back(substCoords(g, pf.fn));
            out.unresolved.push_back(std::move(s));
        }
    }
    for (const auto& uf : rF.unresolved) out.unresolved.push_back(uf);
    return out;
}

IntensionalDeriv intensionalDeriv(PiecewiseRep rep) {
    IntensionalDeriv d;
    d.rep = std::move(rep);
    for (const auto& p : d.rep.pieces) {
        std::vector<std::vector<ExprPtr>> jac;
        for (const auto& f : p.fn) {
            std::vector<ExprPtr> row;
            for (int c = 0; c < d.rep.inDim; ++c) row.push_back(exDiff(f, c));
            jac.push_back(std::move(row));
        }
        d.pieceJacobians.push_back(std::move(jac));
    }
    auto addGuards = [&](const AnalyticSet& s) {
        for (const auto& lists : {s.strictGuards, s.nonstrictGuards}) {
            for (const auto& g : lists) {
                std::vector<ExprPtr> grad;
                for (int c = 0; c < d.rep.inDim; ++c) grad.push_back(exDiff(g, c));
                d.boundaryGuards.emplace_back(g, std::move(grad));
            }
        }
    };
    for (const auto& p : d.rep.pieces) addGuards(p.set);
    for (const auto& u : d.rep.unresolved) addGuards(u);
    return d;
}

IntensionalDeriv intensionalDeriv(const TermPtr& t, int unrollBudget) {
    return intensionalDeriv(extractRep(t, unrollBudget));
}

std::optional<std::vector<std::vector<double>>> intensionalJacobian(
    const IntensionalDeriv& d, const std::vector<double>& x) {
    const size_t n = d.rep.pieces.size();
    size_t active = n;
    for (size_t i = 0; i < n; ++i) {
        if (contains(d.rep.pieces[i].set, x) == Tri::True) {
            if (active != n) throw PwError("multiple pieces contain the same point");
            active = i;
        }
    }
    if (active == n) return std::nullopt;
    std::vector<std::vector<double>> out;
    for (const auto& row : d.pieceJacobians[active]) {
        std::vector<double> r;
        for (const auto& e : row) {
            auto v = exEval(e, x);
            if (!v) return std::nullopt;
            r.push_back(*v);
        }
        out.push_back(std::move(r));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Finite differences
// ---------------------------------------------------------------------------

double fdStep(double xi) { return kFdBaseStep * std::max(1.0, std::fabs(xi)); }

std::optional<std::vector<std::vector<double>>> finiteDiff(const TermPtr& t,
                                                           const std::vector<double>& x,
                                                           double h, long fuel) {
    TyPtr ty = infer(t);
    if (ty->kind != Ty::Kind::Fun || !tyIsData(ty->a) || !tyIsData(ty->b))
        throw std::invalid_argument("finiteDiff requires a first-order function");
    const int n = tyFlatDim(ty->a);
    const int m = tyFlatDim(ty->b);
    if ((int)x.size() != n) throw std::invalid_argument("finiteDiff: dimension mismatch");

    std::vector<std::vector<double>> jac(m, std::vector<double>(n, 0.0));
    for (int j = 0; j < n; ++j) {
        double hj = h > 0.0 ? h : fdStep(x[j]);
        std::vector<double> xp = x, xm = x;
        xp[j] += hj;
        xm[j] -= hj;
        auto fp = evalFlat(t, ty->a, xp, fuel);
        auto fm = evalFlat(t, ty->a, xm, fuel);
        if (!fp || !fm) return std::nullopt;
        for (int r = 0; r < m; ++r) jac[r][j] = ((*fp)[r] - (*fm)[r]) / (2.0 * hj);
    }
    return jac;
}

bool nearBoundary(const IntensionalDeriv& d, const std::vector<double>& x) {
    double scale = 1.0;
    for (double xi : x) scale = std::max(scale, std::fabs(xi));
    const double h = kFdBaseStep * scale;
    for (const auto& [g, grad] : d.boundaryGuards) {
        auto v = exEval(g, x);
        if (!v) continue; // guard undefined here; its boundary is elsewhere
        double gnorm = 0.0;
        bool gradDefined = true;
        for (const auto& ge : grad) {
            auto gv = exEval(ge, x);
            if (!gv) {
                gradDefined = false;
                break;
            }
            gnorm += *gv * *gv;
        }
        if (!gradDefined) continue;
        gnorm = std::sqrt(gnorm);
        // a locally constant guard (e.g. comparisons of integer-valued
        // bookkeeping like trace lengths) cannot be crossed by a step
        if (gnorm == 0.0) continue;
        // a stencil of width h straddles the crossing when |g| <~ h * |grad g|
        if (std::fabs(*v) <= h * (1.0 + gnorm)) return true;
    }
    return false;
}

AeReport aeCheck(const TermPtr& t, const Sampler& sampler, int count, double tol,
                 std::mt19937_64& rng, int unrollBudget, long fuel) {
    IntensionalDeriv d = intensionalDeriv(t, unrollBudget);
    TyPtr ty = infer(t);
    const int n = tyFlatDim(ty->a);

    AeReport rep;
    for (int s = 0; s < count; ++s) {
        std::vector<double> x = sampler(rng);
        if (nearBoundary(d, x)) {
            ++rep.boundary;
            continue;
        }
        auto fd = finiteDiff(t, x, 0.0, fuel);
        bool ok = fd.has_value();
        double worst = 0.0;
        if (ok) {
            for (int j = 0; j < n && ok; ++j) {
                std::vector<double> dir(n, 0.0);
                dir[j] = 1.0;
                auto ad = derivative(t, x, dir, fuel);
                if (!ad) {
                    ok = false;
                    break;
                }
                for (size_t r = 0; r < ad->tangent.size(); ++r) {
                    double err = std::fabs(ad->tangent[r] - (*fd)[r][j]);
                    worst = std::max(worst, err);
                }
            }
        }
        rep.worstAbsErr = std::max(rep.worstAbsErr, worst);
        if (ok && worst <= tol) {
            ++rep.passed;
        } else {
            ++rep.failed;
            rep.failures.push_back(x);
        }
    }
    return rep;
}

} // namespace paplang
