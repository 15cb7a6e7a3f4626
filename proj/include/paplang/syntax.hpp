#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace paplang {

struct Prim;
class ConstTable;

// ---------------------------------------------------------------------------
// Types: R^k | t1 x t2 | t1 -> t2
// ---------------------------------------------------------------------------

struct Ty;
using TyPtr = std::shared_ptr<const Ty>;

struct Ty {
    enum class Kind { RealVec, Prod, Fun };
    Kind kind = Kind::RealVec;
    int dim = 1;      // RealVec only, dim >= 1
    TyPtr a, b;       // Prod: components; Fun: arg, result
};

TyPtr tyReal();
TyPtr tyRealVec(int k);
TyPtr tyProd(TyPtr a, TyPtr b);
TyPtr tyFun(TyPtr arg, TyPtr ret);
bool tyEqual(const TyPtr& a, const TyPtr& b);
std::string tyToString(const TyPtr& t);

// true if the type contains no function arrows
bool tyIsData(const TyPtr& t);
// number of scalar components of a data type
int tyFlatDim(const TyPtr& t);

// ---------------------------------------------------------------------------
// Terms
// ---------------------------------------------------------------------------

struct Loc {
    int line = 0;
    int col = 0;
};

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
    enum class Kind { Var, Const, App, If, Lam, Mu };
    Kind kind = Kind::Var;
    Loc loc;

    std::string name;            // Var name, Const name, Lam param, Mu fname
    const Prim* prim = nullptr;  // Const: resolved table entry (null for literals)
    bool isLit = false;          // Const: numeric literal
    double lit = 0.0;

    TyPtr ty;                    // Lam: param type; Mu: function type
    TermPtr a, b, c;             // App: fn/arg; If: guard/then/else; Lam, Mu: body in a
};

TermPtr mkVar(std::string name, Loc loc = {});
TermPtr mkLit(double v, Loc loc = {});
TermPtr mkConst(const Prim* p, Loc loc = {});
TermPtr mkApp(TermPtr fn, TermPtr arg, Loc loc = {});
TermPtr mkIf(TermPtr guard, TermPtr thn, TermPtr els, Loc loc = {});
TermPtr mkLam(std::string param, TyPtr paramTy, TermPtr body, Loc loc = {});
TermPtr mkMu(std::string fname, TyPtr fty, TermPtr body, Loc loc = {});

bool alphaEqual(const TermPtr& a, const TermPtr& b);
std::vector<std::string> freeVars(const TermPtr& t);

// ---------------------------------------------------------------------------
// Probabilistic surface syntax: return e | sample | score e | x <- t; s
// ---------------------------------------------------------------------------

struct ProbTerm;
using ProbPtr = std::shared_ptr<const ProbTerm>;

struct ProbTerm {
    enum class Kind { Return, Sample, Score, Do };
    Kind kind = Kind::Return;
    Loc loc;
    TermPtr expr;    // Return, Score
    std::string var; // Do binder
    ProbPtr first, rest;
};

ProbPtr mkReturn(TermPtr e, Loc loc = {});
ProbPtr mkSample(Loc loc = {});
ProbPtr mkScore(TermPtr e, Loc loc = {});
ProbPtr mkDo(std::string var, ProbPtr first, ProbPtr rest, Loc loc = {});

// A parsed .pap file: either a core term or a prob block.
struct Program {
    TermPtr term;   // null when probabilistic
    ProbPtr prob;   // null when deterministic
};

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

struct ParseError : std::runtime_error {
    Loc loc;
    ParseError(std::string msg, Loc l) : std::runtime_error(std::move(msg)), loc(l) {}
};

struct ScopeError : ParseError {
    std::string var;
    ScopeError(std::string v, Loc l)
        : ParseError("unbound variable '" + v + "'", l), var(std::move(v)) {}
};

// ---------------------------------------------------------------------------
// Parsing and printing
// ---------------------------------------------------------------------------

// Parses a single term (no let-bindings, no prob blocks).
TermPtr parseTerm(const std::string& text, const ConstTable& table);
TermPtr parseTerm(const std::string& text);

// Parses a whole .pap program: optional `let x = e;` bindings (inlined)
// followed by one top-level term or prob block.
Program parseProgram(const std::string& text, const ConstTable& table);
Program parseProgram(const std::string& text);
Program parseFile(const std::string& path, const ConstTable& table);
Program parseFile(const std::string& path);

// Parses a type in the surface syntax, e.g. "R -> R x R".
TyPtr parseTy(const std::string& text);

std::string pretty(const TermPtr& t);
std::string pretty(const ProbPtr& p);

} // namespace paplang
