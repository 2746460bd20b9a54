#include "mexcheck/lang.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <stdexcept>

using namespace std;

namespace mex {

namespace {

struct Token {
    string text;
    int line, col;
    bool newline = false;
    bool number = false;
    bool ident = false;
};

struct Lexer {
    vector<Token> toks;

    explicit Lexer(const string &text) {
        int line = 1, col = 1;
        size_t i = 0;
        auto push = [&](string t, bool nl, bool num, bool id) {
            toks.push_back({move(t), line, col, nl, num, id});
        };
        while (i < text.size()) {
            char c = text[i];
            if (c == '#') {
                while (i < text.size() && text[i] != '\n')
                    i++;
                continue;
            }
            if (c == '\n') {
                if (toks.empty() || !toks.back().newline)
                    push("\n", true, false, false);
                i++;
                line++;
                col = 1;
                continue;
            }
            if (isspace((unsigned char)c)) {
                i++;
                col++;
                continue;
            }
            if (isdigit((unsigned char)c)) {
                size_t j = i;
                while (j < text.size() && isdigit((unsigned char)text[j]))
                    j++;
                push(text.substr(i, j - i), false, true, false);
                col += (int)(j - i);
                i = j;
                continue;
            }
            if (isalpha((unsigned char)c) || c == '_') {
                size_t j = i;
                while (j < text.size() &&
                       (isalnum((unsigned char)text[j]) || text[j] == '_'))
                    j++;
                push(text.substr(i, j - i), false, false, true);
                col += (int)(j - i);
                i = j;
                continue;
            }
            static const char *two[] = {":=", "==", "!=", "<=", ">=",
                                        "&&", "||", ".."};
            string best;
            if (i + 2 < text.size() && text.compare(i, 3, "*:=") == 0)
                best = "*:=";
            if (best.empty())
                for (auto *t : two)
                    if (text.compare(i, 2, t) == 0) {
                        best = t;
                        break;
                    }
            if (best.empty())
                best = string(1, c);
            push(best, false, false, false);
            col += (int)best.size();
            i += best.size();
        }
        push("\n", true, false, false);
    }
};

struct Parser {
    vector<Token> toks;
    size_t pos = 0;
    set<string> reg_names, var_names;
    vector<string> bound; // scope stack of bound names

    const Token &cur() const { return toks[pos]; }

    [[noreturn]] void fail(const string &msg, const string &code) const {
        const Token &t = toks[min(pos, toks.size() - 1)];
        throw ParseError(msg, t.line, t.col, code);
    }

    bool at(const string &t) const { return !cur().newline && cur().text == t; }

    bool accept(const string &t) {
        if (at(t)) {
            pos++;
            return true;
        }
        return false;
    }

    void expect(const string &t) {
        if (!accept(t))
            fail("expected '" + t + "', got '" + cur().text + "'", "syntax");
    }

    void skip_newlines() {
        while (pos < toks.size() && cur().newline)
            pos++;
    }

    void end_stmt() {
        if (accept(";"))
            return;
        if (cur().newline) {
            pos++;
            return;
        }
        fail("expected end of statement, got '" + cur().text + "'", "syntax");
    }

    string ident(const string &what) {
        if (!cur().ident)
            fail("expected " + what, "syntax");
        return toks[pos++].text;
    }

    bool is_bound(const string &n) const {
        return find(bound.begin(), bound.end(), n) != bound.end();
    }

    ExprP mk(Ex k) {
        auto e = make_shared<Expr>();
        e->kind = k;
        e->line = cur().line;
        return e;
    }

    // ---- expressions -----------------------------------------------------

    ExprP parse_expr() { return parse_or(); }

    ExprP parse_or() {
        ExprP e = parse_and();
        while (at("||")) {
            pos++;
            auto n = mk(Ex::Or);
            n->args = {e, parse_and()};
            e = n;
        }
        return e;
    }

    ExprP parse_and() {
        ExprP e = parse_cmp();
        while (at("&&")) {
            pos++;
            auto n = mk(Ex::And);
            n->args = {e, parse_cmp()};
            e = n;
        }
        return e;
    }

    ExprP parse_cmp() {
        ExprP e = parse_add();
        static const pair<const char *, Ex> ops[] = {
            {"==", Ex::Eq}, {"!=", Ex::Ne}, {"<=", Ex::Le},
            {">=", Ex::Ge}, {"<", Ex::Lt},  {">", Ex::Gt}};
        for (auto &[t, k] : ops)
            if (at(t)) {
                pos++;
                auto n = mk(k);
                n->args = {e, parse_add()};
                return n;
            }
        return e;
    }

    ExprP parse_add() {
        ExprP e = parse_mul();
        while (at("+") || at("-")) {
            Ex k = at("+") ? Ex::Add : Ex::Sub;
            pos++;
            auto n = mk(k);
            n->args = {e, parse_mul()};
            e = n;
        }
        return e;
    }

    ExprP parse_mul() {
        ExprP e = parse_unary();
        while (at("*") || at("%")) {
            Ex k = at("*") ? Ex::Mul : Ex::Mod;
            pos++;
            auto n = mk(k);
            n->args = {e, parse_unary()};
            e = n;
        }
        return e;
    }

    ExprP parse_unary() {
        if (at("!")) {
            pos++;
            auto n = mk(Ex::Not);
            n->args = {parse_unary()};
            return n;
        }
        return parse_atom();
    }

    QRange parse_qrange(const string &var) {
        (void)var;
        QRange r = QRange::All;
        if (accept("!="))
            r = QRange::NotSelf;
        else if (accept("<"))
            r = QRange::Below;
        else if (accept(">"))
            r = QRange::Above;
        else
            return r;
        expect("i");
        return r;
    }

    ExprP parse_quant(Ex kind) {
        auto n = mk(kind);
        n->name = ident("quantifier variable");
        n->qrange = parse_qrange(n->name);
        expect(":");
        bound.push_back(n->name);
        n->args = {parse_expr()};
        bound.pop_back();
        return n;
    }

    ExprP parse_atom() {
        if (cur().number) {
            auto n = mk(Ex::Int);
            n->ival = stol(toks[pos++].text);
            return n;
        }
        if (accept("(")) {
            ExprP e = parse_expr();
            expect(")");
            return e;
        }
        if (!cur().ident)
            fail("expected expression, got '" + cur().text + "'", "syntax");
        string w = cur().text;
        if (w == "true" || w == "false") {
            pos++;
            auto n = mk(Ex::Int);
            n->ival = (w == "true");
            return n;
        }
        if (w == "all") {
            pos++;
            return parse_quant(Ex::QuantAll);
        }
        if (w == "exists") {
            pos++;
            return parse_quant(Ex::QuantExists);
        }
        if (w == "min" || w == "max") {
            pos++;
            if (w == "max" && at("all")) {
                pos++;
                return parse_quant(Ex::QuantMax);
            }
            auto n = mk(w == "min" ? Ex::MinV : Ex::MaxV);
            expect("(");
            n->args.push_back(parse_expr());
            while (accept(","))
                n->args.push_back(parse_expr());
            expect(")");
            return n;
        }
        if (w == "l3bit_f") {
            pos++;
            auto n = mk(Ex::L3Bit);
            expect("(");
            auto a1 = mk(Ex::Local);
            a1->name = ident("local array");
            expect(",");
            auto a2 = mk(Ex::Local);
            a2->name = ident("local array");
            expect(")");
            n->args = {a1, a2};
            for (auto &a : n->args)
                if (!var_names.count(a->name))
                    fail("l3bit_f argument '" + a->name +
                             "' is not a declared local",
                         "semantic");
            return n;
        }
        pos++;
        if (w == "i") {
            return mk(Ex::ThreadId);
        }
        if (w == "N") {
            return mk(Ex::NumThreads);
        }
        if (is_bound(w)) {
            auto n = mk(Ex::BoundVar);
            n->name = w;
            return n;
        }
        bool isreg = reg_names.count(w), isvar = var_names.count(w);
        if (!isreg && !isvar) {
            if (w == "j") // the other thread, when N = 2
                return mk(Ex::OtherId);
            fail("unknown identifier '" + w + "'", "semantic");
        }
        auto n = mk(isreg ? Ex::RegRead : Ex::Local);
        n->name = w;
        if (accept("[")) {
            n->index = parse_expr();
            expect("]");
        }
        return n;
    }

    // ---- statements ------------------------------------------------------

    vector<StmtP> parse_body(const set<string> &stop) {
        vector<StmtP> out;
        while (true) {
            skip_newlines();
            if (pos >= toks.size() - 1)
                break;
            if (stop.count(cur().text))
                break;
            out.push_back(parse_stmt());
        }
        return out;
    }

    StmtP mks(St k) {
        auto s = make_shared<Stmt>();
        s->kind = k;
        s->line = cur().line;
        return s;
    }

    StmtP parse_stmt() {
        string w = cur().text;
        if (w == "noncrit" || w == "crit") {
            pos++;
            auto s = mks(w == "crit" ? St::Crit : St::NonCrit);
            end_stmt();
            return s;
        }
        if (w == "await") {
            pos++;
            if (at("all")) {
                pos++;
                auto s = mks(St::AwaitAll);
                s->name = ident("quantifier variable");
                s->qrange = parse_qrange(s->name);
                expect(":");
                bound.push_back(s->name);
                s->cond = parse_expr();
                bound.pop_back();
                end_stmt();
                return s;
            }
            auto s = mks(St::Await);
            s->cond = parse_expr();
            end_stmt();
            return s;
        }
        if (w == "if") {
            pos++;
            auto s = mks(St::If);
            s->cond = parse_expr();
            end_stmt();
            s->body = parse_body({"else", "end"});
            if (accept("else")) {
                end_stmt();
                s->els = parse_body({"end"});
            }
            expect("end");
            end_stmt();
            return s;
        }
        if (w == "while") {
            pos++;
            auto s = mks(St::While);
            s->cond = parse_expr();
            end_stmt();
            s->body = parse_body({"end"});
            expect("end");
            end_stmt();
            return s;
        }
        if (w == "repeat") {
            pos++;
            auto s = mks(St::Repeat);
            end_stmt();
            s->body = parse_body({"until"});
            expect("until");
            s->cond = parse_expr();
            end_stmt();
            return s;
        }
        if (w == "for") {
            pos++;
            auto s = mks(St::For);
            s->name = ident("loop variable");
            expect("from");
            s->from = parse_expr();
            if (accept("to"))
                s->dir = Stmt::ForDir::Up;
            else if (accept("downto"))
                s->dir = Stmt::ForDir::Down;
            else if (accept("cyclicto"))
                s->dir = Stmt::ForDir::Cyclic;
            else
                fail("expected to/downto/cyclicto", "syntax");
            s->to = parse_expr();
            end_stmt();
            bound.push_back(s->name);
            s->body = parse_body({"end"});
            bound.pop_back();
            expect("end");
            end_stmt();
            return s;
        }
        if (w == "label") {
            pos++;
            auto s = mks(St::Label);
            s->name = ident("label name");
            end_stmt();
            return s;
        }
        if (w == "goto") {
            pos++;
            auto s = mks(St::Goto);
            s->name = ident("label name");
            end_stmt();
            return s;
        }
        // assignment
        if (!cur().ident)
            fail("expected statement, got '" + w + "'", "syntax");
        string lhs = ident("assignment target");
        if (!reg_names.count(lhs) && !var_names.count(lhs))
            fail("assignment to undeclared name '" + lhs + "'", "semantic");
        auto s = mks(St::Assign);
        s->name = lhs;
        if (accept("[")) {
            s->index = parse_expr();
            expect("]");
        }
        if (accept("*:=")) {
            if (!reg_names.count(lhs))
                fail("*:= requires a register target", "semantic");
            s->kind = St::GuardedAssign;
        } else {
            expect(":=");
        }
        s->value = parse_expr();
        end_stmt();
        return s;
    }

    // ---- declarations ----------------------------------------------------

    Program parse_program() {
        Program p;
        skip_newlines();
        while (pos < toks.size() - 1 && !at("thread")) {
            string w = cur().text;
            if (w == "name") {
                pos++;
                p.name = ident("program name");
                while (cur().ident || cur().number ||
                       (!cur().newline && cur().text == "-"))
                    p.name += toks[pos++].text;
                end_stmt();
            } else if (w == "threads") {
                pos++;
                if (!cur().number)
                    fail("expected thread count", "syntax");
                p.default_n = stoi(toks[pos++].text);
                p.has_default_n = true;
                end_stmt();
            } else if (w == "reg") {
                pos++;
                RegDecl d;
                d.line = cur().line;
                d.name = ident("register name");
                if (reg_names.count(d.name) || var_names.count(d.name))
                    fail("duplicate declaration '" + d.name + "'", "semantic");
                if (accept("[")) {
                    d.array = true;
                    d.size = parse_expr();
                    expect("]");
                }
                expect(":");
                if (accept("bool")) {
                    auto u = make_shared<Expr>();
                    u->kind = Ex::Int;
                    u->ival = 1;
                    d.domain = u;
                } else {
                    ExprP lo = parse_add();
                    if (!(lo->kind == Ex::Int && lo->ival == 0))
                        fail("domain must start at 0", "semantic");
                    expect("..");
                    d.domain = parse_add();
                }
                expect("=");
                if (accept("any"))
                    d.any = true;
                else if (accept("self"))
                    d.self_init = true;
                else
                    d.init = parse_add();
                reg_names.insert(d.name);
                p.regs.push_back(d);
                end_stmt();
            } else if (w == "var") {
                pos++;
                VarDecl d;
                d.line = cur().line;
                d.name = ident("variable name");
                if (reg_names.count(d.name) || var_names.count(d.name))
                    fail("duplicate declaration '" + d.name + "'", "semantic");
                if (accept("[")) {
                    d.array = true;
                    d.size = parse_expr();
                    expect("]");
                }
                var_names.insert(d.name);
                p.vars.push_back(d);
                end_stmt();
            } else {
                fail("expected declaration or 'thread:', got '" + w + "'",
                     "syntax");
            }
            skip_newlines();
        }
        expect("thread");
        expect(":");
        p.body = parse_body({});
        check_semantics(p);
        return p;
    }

    void check_semantics(const Program &p) {
        // labels and crit presence
        set<string> labels;
        bool has_crit = false;
        collect_labels(p.body, labels, has_crit);
        if (!has_crit)
            throw ParseError("no critical section", 1, 1, "semantic");
        check_gotos(p.body, labels);
    }

    void collect_labels(const vector<StmtP> &body, set<string> &labels,
                        bool &has_crit) {
        for (auto &s : body) {
            if (s->kind == St::Label)
                labels.insert(s->name);
            if (s->kind == St::Crit)
                has_crit = true;
            collect_labels(s->body, labels, has_crit);
            collect_labels(s->els, labels, has_crit);
        }
    }

    void check_gotos(const vector<StmtP> &body, const set<string> &labels) {
        for (auto &s : body) {
            if (s->kind == St::Goto && !labels.count(s->name))
                throw ParseError("goto to unknown label '" + s->name + "'",
                                 s->line, 1, "semantic");
            check_gotos(s->body, labels);
            check_gotos(s->els, labels);
        }
    }
};

} // namespace

Program parse(const string &text) {
    Lexer lex(text);
    Parser p;
    p.toks = move(lex.toks);
    return p.parse_program();
}

long eval_const(const Expr *e, int n) {
    switch (e->kind) {
    case Ex::Int: return e->ival;
    case Ex::NumThreads: return n;
    case Ex::Add: return eval_const(e->args[0].get(), n) + eval_const(e->args[1].get(), n);
    case Ex::Sub: return eval_const(e->args[0].get(), n) - eval_const(e->args[1].get(), n);
    case Ex::Mul: return eval_const(e->args[0].get(), n) * eval_const(e->args[1].get(), n);
    case Ex::Mod: return eval_const(e->args[0].get(), n) % eval_const(e->args[1].get(), n);
    default:
        throw invalid_argument("expression is not a constant");
    }
}

RegLayout instantiate_registers(const Program &p, int n) {
    RegLayout out;
    for (auto &d : p.regs) {
        int count = d.array ? (int)eval_const(d.size.get(), n) : 1;
        int domain = (int)eval_const(d.domain.get(), n) + 1;
        out.bases.emplace_back((int)out.flat.size(), count);
        for (int k = 0; k < count; k++) {
            RegInstance ri;
            ri.name = d.array ? d.name + "[" + to_string(k) + "]" : d.name;
            ri.domain = domain;
            ri.any = d.any;
            ri.init = d.self_init ? k
                      : d.init    ? (int)eval_const(d.init.get(), n)
                                  : 0;
            if (!ri.any && (ri.init < 0 || ri.init >= domain))
                throw ParseError("initial value out of domain for " + ri.name,
                                 d.line, 1, "semantic");
            out.flat.push_back(ri);
        }
    }
    return out;
}

int RegLayout::find_base(const Program &p, const string &name) const {
    for (size_t k = 0; k < p.regs.size(); k++)
        if (p.regs[k].name == name)
            return bases[k].first;
    return -1;
}

LocalLayout instantiate_locals(const Program &p, int n) {
    LocalLayout out;
    for (auto &d : p.vars) {
        int count = d.array ? (int)eval_const(d.size.get(), n) : 1;
        out.slots.push_back({d.name, {out.total, count}});
        out.total += count;
    }
    return out;
}

int LocalLayout::find(const string &name) const {
    for (auto &[n, bc] : slots)
        if (n == name)
            return bc.first;
    return -1;
}

int LocalLayout::count_of(const string &name) const {
    for (auto &[n, bc] : slots)
        if (n == name)
            return bc.second;
    return 0;
}

} // namespace mex
