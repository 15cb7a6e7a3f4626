#include "paplang/consts.hpp"

#include <cmath>

namespace paplang {

const Prim* ConstTable::find(const std::string& name) const {
    auto it = prims_.find(name);
    return it == prims_.end() ? nullptr : &it->second;
}

const Prim& ConstTable::get(const std::string& name) const {
    const Prim* p = find(name);
    if (!p) throw std::runtime_error("unknown constant '" + name + "'");
    return *p;
}

void ConstTable::add(Prim p) {
    auto name = p.name;
    prims_[name] = std::move(p);
}

std::vector<std::string> ConstTable::names() const {
    std::vector<std::string> out;
    for (const auto& kv : prims_) out.push_back(kv.first);
    return out;
}

namespace {

double scalar(const ValuePtr& v, const char* who) {
    if (v->kind != Value::Kind::Reals || v->xs.size() != 1)
        throw std::runtime_error(std::string(who) + ": expected a scalar argument");
    return v->xs[0];
}

// dual scalar: (x, v) as Pair(Reals1, Reals1)
std::pair<double, double> dualScalar(const ValuePtr& v, const char* who) {
    if (v->kind != Value::Kind::Pair)
        throw std::runtime_error(std::string(who) + ": expected a dual argument");
    return {scalar(v->first, who), scalar(v->second, who)};
}

Outcome haltScalar(double y, const char* who) {
    if (!std::isfinite(y))
        return Outcome::domainError(std::string(who) + ": non-finite result");
    return Outcome::halt(mkReal(y));
}

Outcome haltDual(double y, double dy, const char* who) {
    if (!std::isfinite(y) || !std::isfinite(dy))
        return Outcome::domainError(std::string(who) + ": non-finite result");
    return Outcome::halt(mkPairV(mkReal(y), mkReal(dy)));
}

ConstTable buildDefaults() {
    ConstTable t;
    const TyPtr R = tyReal();
    const TyPtr D = tyProd(R, R);
    const TyPtr unTy = tyFun(R, R);
    const TyPtr binTy = tyFun(R, tyFun(R, R));
    const TyPtr dUnTy = tyFun(D, D);
    const TyPtr dBinTy = tyFun(D, tyFun(D, D));

    auto addBin = [&](const std::string& name, const std::string& dualName, auto fn,
                      auto dfn, auto domain) {
        t.add(Prim{name, 2, binTy, Prim::Poly::None,
                   [name, fn, domain](const std::vector<ValuePtr>& args) -> Outcome {
                       double x = scalar(args[0], name.c_str());
                       double y = scalar(args[1], name.c_str());
                       if (!domain(x, y))
                           return Outcome::domainError(name + ": argument outside domain");
                       return haltScalar(fn(x, y), name.c_str());
                   },
                   dualName});
        t.add(Prim{dualName, 2, dBinTy, Prim::Poly::None,
                   [dualName, fn, dfn, domain](const std::vector<ValuePtr>& args) -> Outcome {
                       auto [x, v] = dualScalar(args[0], dualName.c_str());
                       auto [y, w] = dualScalar(args[1], dualName.c_str());
                       if (!domain(x, y))
                           return Outcome::domainError(dualName + ": argument outside domain");
                       return haltDual(fn(x, y), dfn(x, v, y, w), dualName.c_str());
                   },
                   ""});
    };

    auto addUn = [&](const std::string& name, const std::string& dualName, auto fn, auto dfn,
                     auto domain) {
        t.add(Prim{name, 1, unTy, Prim::Poly::None,
                   [name, fn, domain](const std::vector<ValuePtr>& args) -> Outcome {
                       double x = scalar(args[0], name.c_str());
                       if (!domain(x))
                           return Outcome::domainError(name + ": argument outside domain");
                       return haltScalar(fn(x), name.c_str());
                   },
                   dualName});
        t.add(Prim{dualName, 1, dUnTy, Prim::Poly::None,
                   [dualName, fn, dfn, domain](const std::vector<ValuePtr>& args) -> Outcome {
                       auto [x, v] = dualScalar(args[0], dualName.c_str());
                       if (!domain(x))
                           return Outcome::domainError(dualName + ": argument outside domain");
                       return haltDual(fn(x), dfn(x, v), dualName.c_str());
                   },
                   ""});
    };

    auto anyBin = [](double, double) { return true; };
    auto anyUn = [](double) { return true; };

    addBin("+", "addD", [](double x, double y) { return x + y; },
           [](double, double v, double, double w) { return v + w; }, anyBin);
    addBin("-", "subD", [](double x, double y) { return x - y; },
           [](double, double v, double, double w) { return v - w; }, anyBin);
    addBin("*", "mulD", [](double x, double y) { return x * y; },
           [](double x, double v, double y, double w) { return v * y + x * w; }, anyBin);
    addBin("/", "divD", [](double x, double y) { return x / y; },
           [](double x, double v, double y, double w) { return (v * y - x * w) / (y * y); },
           [](double, double y) { return y != 0.0; });

    addUn("sin", "sinD", [](double x) { return std::sin(x); },
          [](double x, double v) { return v * std::cos(x); }, anyUn);
    addUn("cos", "cosD", [](double x) { return std::cos(x); },
          [](double x, double v) { return -v * std::sin(x); }, anyUn);
    addUn("exp", "expD", [](double x) { return std::exp(x); },
          [](double x, double v) { return v * std::exp(x); }, anyUn);
    // log and sqrt are analytic on the open half-line only
    addUn("log", "logD", [](double x) { return std::log(x); },
          [](double x, double v) { return v / x; }, [](double x) { return x > 0.0; });
    addUn("sqrt", "sqrtD", [](double x) { return std::sqrt(x); },
          [](double x, double v) { return v / (2.0 * std::sqrt(x)); },
          [](double x) { return x > 0.0; });
    // identity restricted to [0, inf); used for runtime score-weight checks
    addUn("nonneg", "nonnegD", [](double x) { return x; }, [](double, double v) { return v; },
          [](double x) { return x >= 0.0; });

    t.add(Prim{"pi", 0, R, Prim::Poly::None,
               [](const std::vector<ValuePtr>&) -> Outcome {
                   return Outcome::halt(mkReal(M_PI));
               },
               ""});

    t.add(Prim{"pair", 2, nullptr, Prim::Poly::Pair,
               [](const std::vector<ValuePtr>& args) -> Outcome {
                   return Outcome::halt(mkPairV(args[0], args[1]));
               },
               ""});
    t.add(Prim{"fst", 1, nullptr, Prim::Poly::Fst,
               [](const std::vector<ValuePtr>& args) -> Outcome {
                   if (args[0]->kind != Value::Kind::Pair)
                       throw std::runtime_error("fst: expected a pair");
                   return Outcome::halt(args[0]->first);
               },
               ""});
    t.add(Prim{"snd", 1, nullptr, Prim::Poly::Snd,
               [](const std::vector<ValuePtr>& args) -> Outcome {
                   if (args[0]->kind != Value::Kind::Pair)
                       throw std::runtime_error("snd: expected a pair");
                   return Outcome::halt(args[0]->second);
               },
               ""});

    return t;
}

} // namespace

const ConstTable& ConstTable::defaults() {
    static const ConstTable table = buildDefaults();
    return table;
}

} // namespace paplang
