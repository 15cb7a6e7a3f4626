#include "paplang/value.hpp"

#include <cstring>
#include <sstream>

namespace paplang {

Env envExtend(Env env, std::string name, ValuePtr val) {
    auto node = std::make_shared<EnvNode>();
    node->name = std::move(name);
    node->val = std::move(val);
    node->next = std::move(env);
    return node;
}

ValuePtr envLookup(const Env& env, const std::string& name) {
    for (const EnvNode* n = env.get(); n; n = n->next.get())
        if (n->name == name) return n->val;
    return nullptr;
}

ValuePtr mkReal(double x) { return mkReals({x}); }

ValuePtr mkReals(std::vector<double> xs) {
    auto v = std::make_shared<Value>();
    v->kind = Value::Kind::Reals;
    v->xs = std::move(xs);
    return v;
}

ValuePtr mkPairV(ValuePtr a, ValuePtr b) {
    auto v = std::make_shared<Value>();
    v->kind = Value::Kind::Pair;
    v->first = std::move(a);
    v->second = std::move(b);
    return v;
}

namespace {
bool bitsEqual(double a, double b) {
    return std::memcmp(&a, &b, sizeof(double)) == 0;
}
} // namespace

bool valueEqual(const ValuePtr& a, const ValuePtr& b) {
    if (a == b) return true;
    if (!a || !b || a->kind != b->kind) return false;
    switch (a->kind) {
    case Value::Kind::Reals:
        if (a->xs.size() != b->xs.size()) return false;
        for (size_t i = 0; i < a->xs.size(); ++i)
            if (!bitsEqual(a->xs[i], b->xs[i])) return false;
        return true;
    case Value::Kind::Pair:
        return valueEqual(a->first, b->first) && valueEqual(a->second, b->second);
    default:
        return false; // closures compare by identity only
    }
}

std::string valueToString(const ValuePtr& v) {
    std::ostringstream os;
    os.precision(17);
    switch (v->kind) {
    case Value::Kind::Reals:
        if (v->xs.size() == 1) {
            os << v->xs[0];
        } else {
            os << "[";
            for (size_t i = 0; i < v->xs.size(); ++i) os << (i ? ", " : "") << v->xs[i];
            os << "]";
        }
        break;
    case Value::Kind::Pair:
        os << "(" << valueToString(v->first) << ", " << valueToString(v->second) << ")";
        break;
    case Value::Kind::Closure:
        os << "<closure " << v->name << ">";
        break;
    case Value::Kind::Rec:
        os << "<rec " << v->name << " depth=" << v->depth << ">";
        break;
    case Value::Kind::Prim:
        os << "<prim>";
        break;
    }
    return os.str();
}

void flattenValue(const ValuePtr& v, std::vector<double>& out) {
    switch (v->kind) {
    case Value::Kind::Reals:
        out.insert(out.end(), v->xs.begin(), v->xs.end());
        return;
    case Value::Kind::Pair:
        flattenValue(v->first, out);
        flattenValue(v->second, out);
        return;
    default:
        throw std::invalid_argument("cannot flatten a function value");
    }
}

std::vector<double> flattenValue(const ValuePtr& v) {
    std::vector<double> out;
    flattenValue(v, out);
    return out;
}

namespace {

ValuePtr buildFrom(const TyPtr& ty, const std::vector<double>& xs, size_t& i) {
    switch (ty->kind) {
    case Ty::Kind::RealVec: {
        if (i + ty->dim > xs.size()) throw std::invalid_argument("too few coordinates");
        std::vector<double> v(xs.begin() + i, xs.begin() + i + ty->dim);
        i += ty->dim;
        return mkReals(std::move(v));
    }
    case Ty::Kind::Prod: {
        auto a = buildFrom(ty->a, xs, i);
        auto b = buildFrom(ty->b, xs, i);
        return mkPairV(a, b);
    }
    case Ty::Kind::Fun:
        throw std::invalid_argument("cannot build a function value from coordinates");
    }
    return nullptr;
}

ValuePtr buildDual(const TyPtr& ty, const std::vector<double>& p, const std::vector<double>& t,
                   size_t& i) {
    switch (ty->kind) {
    case Ty::Kind::RealVec: {
        if (i + ty->dim > p.size()) throw std::invalid_argument("too few coordinates");
        std::vector<double> pv(p.begin() + i, p.begin() + i + ty->dim);
        std::vector<double> tv(t.begin() + i, t.begin() + i + ty->dim);
        i += ty->dim;
        return mkPairV(mkReals(std::move(pv)), mkReals(std::move(tv)));
    }
    case Ty::Kind::Prod: {
        auto a = buildDual(ty->a, p, t, i);
        auto b = buildDual(ty->b, p, t, i);
        return mkPairV(a, b);
    }
    case Ty::Kind::Fun:
        throw std::invalid_argument("cannot build a dual value for a function type");
    }
    return nullptr;
}

void splitDualInto(const TyPtr& ty, const ValuePtr& v, std::vector<double>& p,
                   std::vector<double>& t) {
    switch (ty->kind) {
    case Ty::Kind::RealVec: {
        if (v->kind != Value::Kind::Pair || v->first->kind != Value::Kind::Reals ||
            v->second->kind != Value::Kind::Reals)
            throw std::invalid_argument("malformed dual value");
        p.insert(p.end(), v->first->xs.begin(), v->first->xs.end());
        t.insert(t.end(), v->second->xs.begin(), v->second->xs.end());
        return;
    }
    case Ty::Kind::Prod:
        if (v->kind != Value::Kind::Pair) throw std::invalid_argument("malformed dual value");
        splitDualInto(ty->a, v->first, p, t);
        splitDualInto(ty->b, v->second, p, t);
        return;
    case Ty::Kind::Fun:
        throw std::invalid_argument("cannot split a function-typed dual value");
    }
}

} // namespace

ValuePtr unflattenValue(const TyPtr& ty, const std::vector<double>& xs) {
    size_t i = 0;
    auto v = buildFrom(ty, xs, i);
    if (i != xs.size()) throw std::invalid_argument("too many coordinates");
    return v;
}

ValuePtr unflattenDual(const TyPtr& ty, const std::vector<double>& primal,
                       const std::vector<double>& tangent) {
    if (primal.size() != tangent.size())
        throw std::invalid_argument("primal/tangent dimension mismatch");
    size_t i = 0;
    auto v = buildDual(ty, primal, tangent, i);
    if (i != primal.size()) throw std::invalid_argument("too many coordinates");
    return v;
}

void splitDual(const TyPtr& ty, const ValuePtr& v, std::vector<double>& primal,
               std::vector<double>& tangent) {
    splitDualInto(ty, v, primal, tangent);
}

} // namespace paplang
