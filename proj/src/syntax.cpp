#include "paplang/syntax.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "paplang/consts.hpp"

namespace paplang {

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

TyPtr tyReal() {
    static const TyPtr r = std::make_shared<Ty>(Ty{Ty::Kind::RealVec, 1, nullptr, nullptr});
    return r;
}

TyPtr tyRealVec(int k) {
    if (k < 1) throw std::invalid_argument("RealVec dimension must be >= 1");
    if (k == 1) return tyReal();
    return std::make_shared<Ty>(Ty{Ty::Kind::RealVec, k, nullptr, nullptr});
}

TyPtr tyProd(TyPtr a, TyPtr b) {
    return std::make_shared<Ty>(Ty{Ty::Kind::Prod, 1, std::move(a), std::move(b)});
}

TyPtr tyFun(TyPtr arg, TyPtr ret) {
    return std::make_shared<Ty>(Ty{Ty::Kind::Fun, 1, std::move(arg), std::move(ret)});
}

bool tyEqual(const TyPtr& a, const TyPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
    case Ty::Kind::RealVec: return a->dim == b->dim;
    default: return tyEqual(a->a, b->a) && tyEqual(a->b, b->b);
    }
}

namespace {

// precedence: 0 = arrow position, 1 = product operand
void tyPrint(std::ostream& os, const TyPtr& t, int prec) {
    switch (t->kind) {
    case Ty::Kind::RealVec:
        os << "R";
        if (t->dim != 1) os << "^" << t->dim;
        break;
    case Ty::Kind::Prod:
        if (prec > 1) os << "(";
        tyPrint(os, t->a, 2);
        os << " x ";
        tyPrint(os, t->b, 1);
        if (prec > 1) os << ")";
        break;
    case Ty::Kind::Fun:
        if (prec > 0) os << "(";
        tyPrint(os, t->a, 1);
        os << " -> ";
        tyPrint(os, t->b, 0);
        if (prec > 0) os << ")";
        break;
    }
}

} // namespace

std::string tyToString(const TyPtr& t) {
    std::ostringstream os;
    tyPrint(os, t, 0);
    return os.str();
}

bool tyIsData(const TyPtr& t) {
    switch (t->kind) {
    case Ty::Kind::RealVec: return true;
    case Ty::Kind::Prod: return tyIsData(t->a) && tyIsData(t->b);
    case Ty::Kind::Fun: return false;
    }
    return false;
}

int tyFlatDim(const TyPtr& t) {
    switch (t->kind) {
    case Ty::Kind::RealVec: return t->dim;
    case Ty::Kind::Prod: return tyFlatDim(t->a) + tyFlatDim(t->b);
    case Ty::Kind::Fun: throw std::invalid_argument("function type has no flat dimension");
    }
    return 0;
}

// ---------------------------------------------------------------------------
// Terms
// ---------------------------------------------------------------------------

TermPtr mkVar(std::string name, Loc loc) {
    auto t = std::make_shared<Term>();
    t->kind = Term::Kind::Var;
    t->name = std::move(name);
    t->loc = loc;
    return t;
}

TermPtr mkLit(double v, Loc loc) {
    auto t = std::make_shared<Term>();
    t->kind = Term::Kind::Const;
    t->isLit = true;
    t->lit = v;
    t->loc = loc;
    return t;
}

TermPtr mkConst(const Prim* p, Loc loc) {
    auto t = std::make_shared<Term>();
    t->kind = Term::Kind::Const;
    t->name = p->name;
    t->prim = p;
    t->loc = loc;
    return t;
}

TermPtr mkApp(TermPtr fn, TermPtr arg, Loc loc) {
    auto t = std::make_shared<Term>();
    t->kind = Term::Kind::App;
    t->a = std::move(fn);
    t->b = std::move(arg);
    t->loc = loc;
    return t;
}

TermPtr mkIf(TermPtr guard, TermPtr thn, TermPtr els, Loc loc) {
    auto t = std::make_shared<Term>();
    t->kind = Term::Kind::If;
    t->a = std::move(guard);
    t->b = std::move(thn);
    t->c = std::move(els);
    t->loc = loc;
    return t;
}

TermPtr mkLam(std::string param, TyPtr paramTy, TermPtr body, Loc loc) {
    auto t = std::make_shared<Term>();
    t->kind = Term::Kind::Lam;
    t->name = std::move(param);
    t->ty = std::move(paramTy);
    t->a = std::move(body);
    t->loc = loc;
    return t;
}

TermPtr mkMu(std::string fname, TyPtr fty, TermPtr body, Loc loc) {
    if (fty->kind != Ty::Kind::Fun)
        throw std::invalid_argument("mu binder must have a function type");
    auto t = std::make_shared<Term>();
    t->kind = Term::Kind::Mu;
    t->name = std::move(fname);
    t->ty = std::move(fty);
    t->a = std::move(body);
    t->loc = loc;
    return t;
}

namespace {

bool alphaEq(const TermPtr& a, const TermPtr& b,
             std::vector<std::pair<std::string, std::string>>& binds) {
    if (a->kind != b->kind) return false;
    switch (a->kind) {
    case Term::Kind::Var: {
        for (auto it = binds.rbegin(); it != binds.rend(); ++it) {
            bool la = it->first == a->name, lb = it->second == b->name;
            if (la || lb) return la && lb;
        }
        return a->name == b->name;
    }
    case Term::Kind::Const:
        if (a->isLit != b->isLit) return false;
        if (a->isLit) return a->lit == b->lit;
        return a->name == b->name;
    case Term::Kind::App:
        return alphaEq(a->a, b->a, binds) && alphaEq(a->b, b->b, binds);
    case Term::Kind::If:
        return alphaEq(a->a, b->a, binds) && alphaEq(a->b, b->b, binds) &&
               alphaEq(a->c, b->c, binds);
    case Term::Kind::Lam:
    case Term::Kind::Mu: {
        if (!tyEqual(a->ty, b->ty)) return false;
        binds.emplace_back(a->name, b->name);
        bool ok = alphaEq(a->a, b->a, binds);
        binds.pop_back();
        return ok;
    }
    }
    return false;
}

void collectFree(const TermPtr& t, std::set<std::string>& bound,
                 std::vector<std::string>& out, std::set<std::string>& seen) {
    switch (t->kind) {
    case Term::Kind::Var:
        if (!bound.count(t->name) && seen.insert(t->name).second) out.push_back(t->name);
        break;
    case Term::Kind::Const: break;
    case Term::Kind::App:
        collectFree(t->a, bound, out, seen);
        collectFree(t->b, bound, out, seen);
        break;
    case Term::Kind::If:
        collectFree(t->a, bound, out, seen);
        collectFree(t->b, bound, out, seen);
        collectFree(t->c, bound, out, seen);
        break;
    case Term::Kind::Lam:
    case Term::Kind::Mu: {
        bool wasBound = bound.count(t->name) > 0;
        bound.insert(t->name);
        collectFree(t->a, bound, out, seen);
        if (!wasBound) bound.erase(t->name);
        break;
    }
    }
}

} // namespace

bool alphaEqual(const TermPtr& a, const TermPtr& b) {
    std::vector<std::pair<std::string, std::string>> binds;
    return alphaEq(a, b, binds);
}

std::vector<std::string> freeVars(const TermPtr& t) {
    std::set<std::string> bound, seen;
    std::vector<std::string> out;
    collectFree(t, bound, out, seen);
    return out;
}

// ---------------------------------------------------------------------------
// ProbTerm constructors
// ---------------------------------------------------------------------------

ProbPtr mkReturn(TermPtr e, Loc loc) {
    auto p = std::make_shared<ProbTerm>();
    p->kind = ProbTerm::Kind::Return;
    p->expr = std::move(e);
    p->loc = loc;
    return p;
}

ProbPtr mkSample(Loc loc) {
    auto p = std::make_shared<ProbTerm>();
    p->kind = ProbTerm::Kind::Sample;
    p->loc = loc;
    return p;
}

ProbPtr mkScore(TermPtr e, Loc loc) {
    auto p = std::make_shared<ProbTerm>();
    p->kind = ProbTerm::Kind::Score;
    p->expr = std::move(e);
    p->loc = loc;
    return p;
}

ProbPtr mkDo(std::string var, ProbPtr first, ProbPtr rest, Loc loc) {
    auto p = std::make_shared<ProbTerm>();
    p->kind = ProbTerm::Kind::Do;
    p->var = std::move(var);
    p->first = std::move(first);
    p->rest = std::move(rest);
    p->loc = loc;
    return p;
}

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

namespace {

enum class Tok {
    Ident, Number, Lam, Mu, If, Let, Prob, Sample, Score, Return,
    LParen, RParen, LBrace, RBrace, Comma, Semi, Dot, Colon, Eq, Arrow, LeftArrow,
    Plus, Minus, Star, Slash, Gt, Caret, End
};

struct Token {
    Tok kind;
    std::string text;
    double num = 0.0;
    Loc loc;
};

class Lexer {
public:
    explicit Lexer(const std::string& src) : src_(src) { advance(); }

    const Token& peek() const { return tok_; }
    Token next() {
        Token t = tok_;
        advance();
        return t;
    }

private:
    void advance() {
        skipWs();
        tok_.loc = {line_, col_};
        if (pos_ >= src_.size()) {
            tok_.kind = Tok::End;
            tok_.text = "<end of input>";
            return;
        }
        char c = src_[pos_];
        if (std::isalpha((unsigned char)c) || c == '_') {
            size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum((unsigned char)src_[pos_]) || src_[pos_] == '_' ||
                    src_[pos_] == '\''))
                take();
            tok_.text = src_.substr(start, pos_ - start);
            static const std::map<std::string, Tok> kw = {
                {"lam", Tok::Lam},       {"mu", Tok::Mu},     {"if", Tok::If},
                {"let", Tok::Let},       {"prob", Tok::Prob}, {"sample", Tok::Sample},
                {"score", Tok::Score},   {"return", Tok::Return}};
            auto it = kw.find(tok_.text);
            tok_.kind = it == kw.end() ? Tok::Ident : it->second;
            return;
        }
        if (std::isdigit((unsigned char)c) ||
            (c == '.' && pos_ + 1 < src_.size() && std::isdigit((unsigned char)src_[pos_ + 1]))) {
            size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isdigit((unsigned char)src_[pos_]) || src_[pos_] == '.'))
                take();
            // exponent
            if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
                size_t save = pos_;
                take();
                if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) take();
                if (pos_ < src_.size() && std::isdigit((unsigned char)src_[pos_])) {
                    while (pos_ < src_.size() && std::isdigit((unsigned char)src_[pos_])) take();
                } else {
                    pos_ = save;
                }
            }
            tok_.text = src_.substr(start, pos_ - start);
            tok_.kind = Tok::Number;
            try {
                tok_.num = std::stod(tok_.text);
            } catch (const std::exception&) {
                throw ParseError("malformed numeric literal '" + tok_.text + "'", tok_.loc);
            }
            return;
        }
        auto two = src_.substr(pos_, 2);
        if (two == "->") {
            take(); take();
            tok_.kind = Tok::Arrow;
            tok_.text = "->";
            return;
        }
        if (two == "<-") {
            take(); take();
            tok_.kind = Tok::LeftArrow;
            tok_.text = "<-";
            return;
        }
        take();
        tok_.text = std::string(1, c);
        switch (c) {
        case '(': tok_.kind = Tok::LParen; return;
        case ')': tok_.kind = Tok::RParen; return;
        case '{': tok_.kind = Tok::LBrace; return;
        case '}': tok_.kind = Tok::RBrace; return;
        case ',': tok_.kind = Tok::Comma; return;
        case ';': tok_.kind = Tok::Semi; return;
        case '.': tok_.kind = Tok::Dot; return;
        case ':': tok_.kind = Tok::Colon; return;
        case '=': tok_.kind = Tok::Eq; return;
        case '+': tok_.kind = Tok::Plus; return;
        case '-': tok_.kind = Tok::Minus; return;
        case '*': tok_.kind = Tok::Star; return;
        case '/': tok_.kind = Tok::Slash; return;
        case '>': tok_.kind = Tok::Gt; return;
        case '^': tok_.kind = Tok::Caret; return;
        default:
            throw ParseError(std::string("unexpected character '") + c + "'", tok_.loc);
        }
    }

    void skipWs() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '#') {
                while (pos_ < src_.size() && src_[pos_] != '\n') take();
            } else if (std::isspace((unsigned char)c)) {
                take();
            } else {
                break;
            }
        }
    }

    void take() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    const std::string& src_;
    size_t pos_ = 0;
    int line_ = 1, col_ = 1;
    Token tok_;
};

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

class Parser {
public:
    Parser(const std::string& src, const ConstTable& table) : lex_(src), table_(table) {}

    TermPtr parseWholeTerm() {
        auto t = parseTermExpr();
        expect(Tok::End, "end of input");
        checkScope(t, {});
        return t;
    }

    Program parseWholeProgram() {
        std::vector<std::pair<std::string, TermPtr>> lets;
        while (lex_.peek().kind == Tok::Let) {
            lex_.next();
            Token name = expect(Tok::Ident, "binding name");
            expect(Tok::Eq, "'='");
            auto body = parseTermExpr();
            expect(Tok::Semi, "';'");
            checkScope(body, {});
            body = inlineLets(body, lets);
            lets.emplace_back(name.text, body);
            letNames_.insert(name.text);
        }
        Program prog;
        if (lex_.peek().kind == Tok::Prob) {
            prog.prob = parseProbBlock(lets);
        } else {
            auto t = parseTermExpr();
            checkScope(t, {});
            prog.term = inlineLets(t, lets);
        }
        expect(Tok::End, "end of input");
        return prog;
    }

    TyPtr parseWholeTy() {
        auto t = parseType();
        expect(Tok::End, "end of input");
        return t;
    }

private:
    Token expect(Tok k, const std::string& what) {
        if (lex_.peek().kind != k)
            throw ParseError("expected " + what + ", found '" + lex_.peek().text + "'",
                             lex_.peek().loc);
        return lex_.next();
    }

    // type := prodty ("->" type)?        (right associative)
    // prodty := atomty ("x" prodty)?
    // atomty := "R" ("^" INT)? | "(" type ")"
    TyPtr parseType() {
        auto lhs = parseProdTy();
        if (lex_.peek().kind == Tok::Arrow) {
            lex_.next();
            return tyFun(lhs, parseType());
        }
        return lhs;
    }

    TyPtr parseProdTy() {
        auto lhs = parseAtomTy();
        if (lex_.peek().kind == Tok::Ident && lex_.peek().text == "x") {
            lex_.next();
            return tyProd(lhs, parseProdTy());
        }
        return lhs;
    }

    TyPtr parseAtomTy() {
        Token t = lex_.next();
        if (t.kind == Tok::Ident && t.text == "R") {
            if (lex_.peek().kind == Tok::Caret) {
                lex_.next();
                Token n = expect(Tok::Number, "dimension");
                int k = (int)n.num;
                if (k < 1 || (double)k != n.num)
                    throw ParseError("vector dimension must be a positive integer", n.loc);
                return tyRealVec(k);
            }
            return tyReal();
        }
        if (t.kind == Tok::LParen) {
            auto inner = parseType();
            expect(Tok::RParen, "')'");
            return inner;
        }
        throw ParseError("expected a type, found '" + t.text + "'", t.loc);
    }

    // term := lam | mu | addexpr
    TermPtr parseTermExpr() {
        switch (lex_.peek().kind) {
        case Tok::Lam: {
            Token kw = lex_.next();
            Token name = expect(Tok::Ident, "parameter name");
            expect(Tok::Colon, "':'");
            auto ty = parseType();
            expect(Tok::Dot, "'.'");
            return mkLam(name.text, ty, parseTermExpr(), kw.loc);
        }
        case Tok::Mu: {
            Token kw = lex_.next();
            Token name = expect(Tok::Ident, "function name");
            expect(Tok::Colon, "':'");
            auto ty = parseType();
            if (ty->kind != Ty::Kind::Fun)
                throw ParseError("mu binder must have a function type, found " + tyToString(ty),
                                 kw.loc);
            expect(Tok::Dot, "'.'");
            return mkMu(name.text, ty, parseTermExpr(), kw.loc);
        }
        default:
            return parseAdd();
        }
    }

    TermPtr parseAdd() {
        auto lhs = parseMul();
        for (;;) {
            Tok k = lex_.peek().kind;
            if (k != Tok::Plus && k != Tok::Minus) return lhs;
            Token op = lex_.next();
            auto rhs = parseMul();
            lhs = binop(op.kind == Tok::Plus ? "+" : "-", lhs, rhs, op.loc);
        }
    }

    TermPtr parseMul() {
        auto lhs = parseUnary();
        for (;;) {
            Tok k = lex_.peek().kind;
            if (k != Tok::Star && k != Tok::Slash) return lhs;
            Token op = lex_.next();
            auto rhs = parseUnary();
            lhs = binop(op.kind == Tok::Star ? "*" : "/", lhs, rhs, op.loc);
        }
    }

    TermPtr parseUnary() {
        if (lex_.peek().kind == Tok::Minus) {
            Token op = lex_.next();
            // -e is sugar for 0 - e
            return binop("-", mkLit(0.0, op.loc), parseUnary(), op.loc);
        }
        return parseApp();
    }

    TermPtr parseApp() {
        auto fn = parseAtom();
        while (atomStart(lex_.peek().kind)) {
            auto arg = parseAtom();
            fn = mkApp(fn, arg, fn->loc);
        }
        return fn;
    }

    static bool atomStart(Tok k) {
        return k == Tok::Number || k == Tok::Ident || k == Tok::LParen || k == Tok::If;
    }

    TermPtr parseAtom() {
        Token t = lex_.peek();
        switch (t.kind) {
        case Tok::Number:
            lex_.next();
            return mkLit(t.num, t.loc);
        case Tok::Ident:
            lex_.next();
            return mkVar(t.text, t.loc); // resolved against the table in checkScope
        case Tok::If: {
            lex_.next();
            expect(Tok::LParen, "'('");
            auto guard = parseTermExpr();
            expect(Tok::Gt, "'>'");
            Token zero = expect(Tok::Number, "0");
            if (zero.num != 0.0) throw ParseError("guard comparison must be against 0", zero.loc);
            expect(Tok::RParen, "')'");
            auto thn = parseAtom();
            auto els = parseAtom();
            return mkIf(guard, thn, els, t.loc);
        }
        case Tok::LParen: {
            lex_.next();
            auto e1 = parseTermExpr();
            if (lex_.peek().kind == Tok::Comma) {
                lex_.next();
                auto e2 = parseTermExpr();
                expect(Tok::RParen, "')'");
                // (e1, e2) desugars to pair e1 e2 before any later phase
                auto pairC = mkConst(&table_.get("pair"), t.loc);
                return mkApp(mkApp(pairC, e1, t.loc), e2, t.loc);
            }
            expect(Tok::RParen, "')'");
            return e1;
        }
        default:
            throw ParseError("expected a term, found '" + t.text + "'", t.loc);
        }
    }

    TermPtr binop(const std::string& name, TermPtr a, TermPtr b, Loc loc) {
        auto c = mkConst(&table_.get(name), loc);
        return mkApp(mkApp(c, std::move(a), loc), std::move(b), loc);
    }

    // Resolves identifiers: binders shadow constants; unresolved names that
    // are in the table become Const nodes (rebuilt in-place by copy).
    void checkScope(TermPtr& t, std::vector<std::string> bound) { t = resolve(t, bound); }

    TermPtr resolve(const TermPtr& t, std::vector<std::string>& bound) {
        switch (t->kind) {
        case Term::Kind::Var: {
            for (auto it = bound.rbegin(); it != bound.rend(); ++it)
                if (*it == t->name) return t;
            if (letNames_.count(t->name)) return t;
            if (const Prim* p = table_.find(t->name)) return mkConst(p, t->loc);
            throw ScopeError(t->name, t->loc);
        }
        case Term::Kind::Const:
            return t;
        case Term::Kind::App: {
            auto fn = resolve(t->a, bound);
            auto arg = resolve(t->b, bound);
            return mkApp(fn, arg, t->loc);
        }
        case Term::Kind::If: {
            auto g = resolve(t->a, bound);
            auto thn = resolve(t->b, bound);
            auto els = resolve(t->c, bound);
            return mkIf(g, thn, els, t->loc);
        }
        case Term::Kind::Lam: {
            bound.push_back(t->name);
            auto body = resolve(t->a, bound);
            bound.pop_back();
            return mkLam(t->name, t->ty, body, t->loc);
        }
        case Term::Kind::Mu: {
            bound.push_back(t->name);
            auto body = resolve(t->a, bound);
            bound.pop_back();
            return mkMu(t->name, t->ty, body, t->loc);
        }
        }
        return t;
    }

    // Substitutes earlier (closed) let bindings for their names.
    TermPtr inlineLets(const TermPtr& t,
                       const std::vector<std::pair<std::string, TermPtr>>& lets) {
        switch (t->kind) {
        case Term::Kind::Var:
            for (auto it = lets.rbegin(); it != lets.rend(); ++it)
                if (it->first == t->name) return it->second;
            return t;
        case Term::Kind::Const:
            return t;
        case Term::Kind::App:
            return mkApp(inlineLets(t->a, lets), inlineLets(t->b, lets), t->loc);
        case Term::Kind::If:
            return mkIf(inlineLets(t->a, lets), inlineLets(t->b, lets),
                        inlineLets(t->c, lets), t->loc);
        case Term::Kind::Lam: {
            auto inner = dropBinding(lets, t->name);
            return mkLam(t->name, t->ty, inlineLets(t->a, inner), t->loc);
        }
        case Term::Kind::Mu: {
            auto inner = dropBinding(lets, t->name);
            return mkMu(t->name, t->ty, inlineLets(t->a, inner), t->loc);
        }
        }
        return t;
    }

    static std::vector<std::pair<std::string, TermPtr>> dropBinding(
        const std::vector<std::pair<std::string, TermPtr>>& lets, const std::string& name) {
        std::vector<std::pair<std::string, TermPtr>> out;
        for (const auto& kv : lets)
            if (kv.first != name) out.push_back(kv);
        return out;
    }

    // prob { x <- p; p; ...; p }
    ProbPtr parseProbBlock(const std::vector<std::pair<std::string, TermPtr>>& lets) {
        Token kw = expect(Tok::Prob, "'prob'");
        expect(Tok::LBrace, "'{'");
        std::vector<std::string> bound;
        auto p = parseProbSeq(lets, bound);
        expect(Tok::RBrace, "'}'");
        return p;
    }

    ProbPtr parseProbSeq(const std::vector<std::pair<std::string, TermPtr>>& lets,
                         std::vector<std::string>& bound) {
        Loc loc = lex_.peek().loc;
        std::string var;
        bool bind = false;
        if (lex_.peek().kind == Tok::Ident) {
            // prob statements only ever start with an identifier when binding
            Token name = lex_.next();
            expect(Tok::LeftArrow, "'<-'");
            var = name.text;
            bind = true;
        }
        auto first = parseProbAtom(lets, bound);
        if (lex_.peek().kind == Tok::Semi) {
            lex_.next();
            if (bind)
                bound.push_back(var);
            else
                var = "_";
            auto rest = parseProbSeq(lets, bound);
            if (bind) bound.pop_back();
            return mkDo(var, first, rest, loc);
        }
        if (bind)
            throw ParseError("a '<-' binding must be followed by ';' and a continuation", loc);
        return first;
    }

    ProbPtr parseProbAtom(const std::vector<std::pair<std::string, TermPtr>>& lets,
                          std::vector<std::string>& bound) {
        Token t = lex_.peek();
        switch (t.kind) {
        case Tok::Sample:
            lex_.next();
            return mkSample(t.loc);
        case Tok::Score: {
            lex_.next();
            auto e = parseAtom();
            checkScope(e, bound);
            return mkScore(inlineLets(e, lets), t.loc);
        }
        case Tok::Return: {
            lex_.next();
            auto e = parseAtom();
            checkScope(e, bound);
            return mkReturn(inlineLets(e, lets), t.loc);
        }
        default:
            throw ParseError("expected sample, score, or return, found '" + t.text + "'", t.loc);
        }
    }

    Lexer lex_;
    const ConstTable& table_;
    std::set<std::string> letNames_;
};

} // namespace

TermPtr parseTerm(const std::string& text, const ConstTable& table) {
    return Parser(text, table).parseWholeTerm();
}

TermPtr parseTerm(const std::string& text) { return parseTerm(text, ConstTable::defaults()); }

Program parseProgram(const std::string& text, const ConstTable& table) {
    return Parser(text, table).parseWholeProgram();
}

Program parseProgram(const std::string& text) {
    return parseProgram(text, ConstTable::defaults());
}

Program parseFile(const std::string& path, const ConstTable& table) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parseProgram(ss.str(), table);
}

Program parseFile(const std::string& path) { return parseFile(path, ConstTable::defaults()); }

TyPtr parseTy(const std::string& text) {
    return Parser(text, ConstTable::defaults()).parseWholeTy();
}

// ---------------------------------------------------------------------------
// Pretty printer
// ---------------------------------------------------------------------------

namespace {

// precedence levels: 0 term, 1 add, 2 mul, 3 unary/app operand, 4 atom
constexpr int kPrecTerm = 0, kPrecAdd = 1, kPrecMul = 2, kPrecApp = 3, kPrecAtom = 4;

bool isBinopConst(const TermPtr& t, std::string* name) {
    if (t->kind != Term::Kind::Const || t->isLit) return false;
    if (t->name == "+" || t->name == "-" || t->name == "*" || t->name == "/") {
        *name = t->name;
        return true;
    }
    return false;
}

bool isPairConst(const TermPtr& t) {
    return t->kind == Term::Kind::Const && !t->isLit && t->name == "pair";
}

void printLit(std::ostream& os, double v) {
    std::ostringstream ss;
    ss.precision(17);
    ss << v;
    os << ss.str();
}

void print(std::ostream& os, const TermPtr& t, int prec) {
    auto paren = [&](int need, auto body) {
        if (prec > need) os << "(";
        body();
        if (prec > need) os << ")";
    };
    switch (t->kind) {
    case Term::Kind::Var:
        os << t->name;
        return;
    case Term::Kind::Const:
        if (t->isLit) {
            if (t->lit < 0) {
                paren(kPrecMul, [&] { printLit(os, t->lit); });
            } else {
                printLit(os, t->lit);
            }
        } else {
            os << t->name;
        }
        return;
    case Term::Kind::App: {
        // infix sugar: ((op a) b)
        std::string op;
        if (t->a->kind == Term::Kind::App && isBinopConst(t->a->a, &op)) {
            int lvl = (op == "+" || op == "-") ? kPrecAdd : kPrecMul;
            paren(lvl, [&] {
                print(os, t->a->b, lvl);
                os << " " << op << " ";
                print(os, t->b, lvl + 1);
            });
            return;
        }
        // pair sugar: ((pair a) b)
        if (t->a->kind == Term::Kind::App && isPairConst(t->a->a)) {
            os << "(";
            print(os, t->a->b, kPrecTerm);
            os << ", ";
            print(os, t->b, kPrecTerm);
            os << ")";
            return;
        }
        paren(kPrecApp, [&] {
            print(os, t->a, kPrecApp);
            os << " ";
            print(os, t->b, kPrecAtom);
        });
        return;
    }
    case Term::Kind::If:
        // an if-expression is an atom in the grammar
        os << "if (";
        print(os, t->a, kPrecTerm);
        os << " > 0) ";
        print(os, t->b, kPrecAtom);
        os << " ";
        print(os, t->c, kPrecAtom);
        return;
    case Term::Kind::Lam:
        paren(kPrecTerm, [&] {
            os << "lam " << t->name << " : " << tyToString(t->ty) << ". ";
            print(os, t->a, kPrecTerm);
        });
        return;
    case Term::Kind::Mu:
        paren(kPrecTerm, [&] {
            os << "mu " << t->name << " : " << tyToString(t->ty) << ". ";
            print(os, t->a, kPrecTerm);
        });
        return;
    }
}

} // namespace

std::string pretty(const TermPtr& t) {
    std::ostringstream os;
    print(os, t, kPrecTerm);
    return os.str();
}

std::string pretty(const ProbPtr& p) {
    std::ostringstream os;
    std::function<void(const ProbPtr&)> go = [&](const ProbPtr& q) {
        switch (q->kind) {
        case ProbTerm::Kind::Return:
            os << "return (" << pretty(q->expr) << ")";
            return;
        case ProbTerm::Kind::Sample:
            os << "sample";
            return;
        case ProbTerm::Kind::Score:
            os << "score (" << pretty(q->expr) << ")";
            return;
        case ProbTerm::Kind::Do:
            if (q->var != "_") os << q->var << " <- ";
            go(q->first);
            os << "; ";
            go(q->rest);
            return;
        }
    };
    os << "prob { ";
    go(p);
    os << " }";
    return os.str();
}

} // namespace paplang
