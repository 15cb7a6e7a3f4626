#include "paplang/eval.hpp"

#include <cmath>

namespace paplang {

namespace {

ValuePtr mkClosureV(std::string param, TermPtr body, Env env) {
    auto v = std::make_shared<Value>();
    v->kind = Value::Kind::Closure;
    v->name = std::move(param);
    v->body = std::move(body);
    v->env = std::move(env);
    return v;
}

ValuePtr mkRecV(std::string fname, TermPtr body, Env env, long depth) {
    auto v = std::make_shared<Value>();
    v->kind = Value::Kind::Rec;
    v->name = std::move(fname);
    v->body = std::move(body);
    v->env = std::move(env);
    v->depth = depth;
    return v;
}

ValuePtr mkPrimV(const Prim* p, std::vector<ValuePtr> args) {
    auto v = std::make_shared<Value>();
    v->kind = Value::Kind::Prim;
    v->prim = p;
    v->args = std::move(args);
    return v;
}

} // namespace

Outcome eval(const TermPtr& t, const Env& env, long fuel) {
    switch (t->kind) {
    case Term::Kind::Var: {
        ValuePtr v = envLookup(env, t->name);
        if (!v) throw std::runtime_error("unbound variable at runtime: " + t->name);
        return Outcome::halt(v);
    }
    case Term::Kind::Const:
        if (t->isLit) return Outcome::halt(mkReal(t->lit));
        if (t->prim->arity == 0) return t->prim->apply({});
        return Outcome::halt(mkPrimV(t->prim, {}));
    case Term::Kind::App: {
        // function before argument, strictly
        Outcome f = eval(t->a, env, fuel);
        if (!f.halted()) return f;
        Outcome a = eval(t->b, env, fuel);
        if (!a.halted()) return a;
        return applyValue(f.value, a.value, fuel);
    }
    case Term::Kind::If: {
        Outcome g = eval(t->a, env, fuel);
        if (!g.halted()) return g;
        if (g.value->kind != Value::Kind::Reals || g.value->xs.size() != 1)
            throw std::runtime_error("if-guard did not evaluate to a scalar");
        // guard exactly 0 takes the else branch
        return g.value->xs[0] > 0.0 ? eval(t->b, env, fuel) : eval(t->c, env, fuel);
    }
    case Term::Kind::Lam:
        return Outcome::halt(mkClosureV(t->name, t->a, env));
    case Term::Kind::Mu:
        // the fuel-th Kleene approximant of the fixpoint
        return Outcome::halt(mkRecV(t->name, t->a, env, fuel));
    }
    throw std::logic_error("unreachable term kind");
}

Outcome eval(const TermPtr& t, long fuel) { return eval(t, nullptr, fuel); }

Outcome applyValue(const ValuePtr& f, const ValuePtr& v, long fuel) {
    switch (f->kind) {
    case Value::Kind::Closure:
        return eval(f->body, envExtend(f->env, f->name, v), fuel);
    case Value::Kind::Rec: {
        if (f->depth <= 0) return Outcome::fuelExhausted();
        Env env = envExtend(f->env, f->name, mkRecV(f->name, f->body, f->env, f->depth - 1));
        Outcome unfolded = eval(f->body, env, fuel);
        if (!unfolded.halted()) return unfolded;
        return applyValue(unfolded.value, v, fuel);
    }
    case Value::Kind::Prim: {
        std::vector<ValuePtr> args = f->args;
        args.push_back(v);
        if ((int)args.size() < f->prim->arity)
            return Outcome::halt(mkPrimV(f->prim, std::move(args)));
        return f->prim->apply(args);
    }
    default:
        throw std::runtime_error("applied a non-function value");
    }
}

std::optional<std::vector<double>> evalFlat(const TermPtr& t, const TyPtr& argTy,
                                            const std::vector<double>& x, long fuel,
                                            Outcome* out) {
    Outcome f = eval(t, nullptr, fuel);
    if (f.halted()) {
        ValuePtr arg = unflattenValue(argTy, x);
        f = applyValue(f.value, arg, fuel);
    }
    if (out) *out = f;
    if (!f.halted()) return std::nullopt;
    return flattenValue(f.value);
}

} // namespace paplang
