#pragma once

#include <memory>
#include <string>
#include <vector>

namespace mex {

// ---------------------------------------------------------------------------
// expressions

enum class Ex : uint8_t {
    Int,       // ival
    ThreadId,  // i
    OtherId,   // j as "the other thread" (valid only at N = 2)
    NumThreads,// N
    BoundVar,  // quantifier / loop variable, by name
    Local,     // name [index]
    RegRead,   // name [index]
    Not,
    And,
    Or,
    Eq, Ne, Lt, Le, Gt, Ge,
    Add, Sub, Mul, Mod,
    MinV, MaxV,   // min(e1,...), max(e1,...)
    QuantAll,     // all v [range]: body
    QuantExists,  // exists v [range]: body
    QuantMax,     // max all v : body
    L3Bit,        // l3bit_f(ly, lz) over two local arrays
};

enum class QRange : uint8_t { All, NotSelf, Below, Above };

struct Expr;
using ExprP = std::shared_ptr<Expr>;

struct Expr {
    Ex kind;
    long ival = 0;
    std::string name;        // Local/RegRead/BoundVar base, quantifier var
    ExprP index;             // Local/RegRead subscript (null for scalars)
    std::vector<ExprP> args; // operands / quantifier body at args[0]
    QRange qrange = QRange::All;
    int line = 0;
};

// ---------------------------------------------------------------------------
// statements

enum class St : uint8_t {
    NonCrit,
    Crit,
    Assign,        // lhs := expr (register or local)
    GuardedAssign, // reg *:= expr (read, write only if different)
    Await,         // await expr (busy wait)
    AwaitAll,      // await all v [range] : expr  — sequential per-id awaits
    If,
    While,
    Repeat, // repeat body until cond
    For,    // for v from a {to|downto|cyclicto} b
    Label,
    Goto,
};

struct Stmt;
using StmtP = std::shared_ptr<Stmt>;

struct Stmt {
    St kind;
    int line = 0;
    std::string name; // lhs base / label name / bound variable
    ExprP index;      // lhs subscript
    ExprP value;      // rhs
    ExprP cond;
    std::vector<StmtP> body, els;
    ExprP from, to;
    enum class ForDir : uint8_t { Up, Down, Cyclic } dir = ForDir::Up;
    QRange qrange = QRange::All;
};

// ---------------------------------------------------------------------------
// declarations and programs

struct RegDecl {
    std::string name;
    bool array = false;
    ExprP size;   // usually N
    ExprP domain; // upper bound expr; values are 0..upper
    ExprP init;   // literal expr, or null when any/self
    bool any = false;
    bool self_init = false; // element k starts at value k
    int line = 0;
};

struct VarDecl {
    std::string name;
    bool array = false;
    ExprP size;
    int line = 0;
};

struct Program {
    std::string name;
    int default_n = 2;
    bool has_default_n = false;
    std::vector<RegDecl> regs;
    std::vector<VarDecl> vars;
    std::vector<StmtP> body;
};

struct ParseError : std::runtime_error {
    int line, col;
    std::string code;
    ParseError(const std::string &what, int line_, int col_,
               const std::string &code_)
        : std::runtime_error(what + " (line " + std::to_string(line_) +
                             ", col " + std::to_string(col_) + ", " + code_ +
                             ")"),
          line(line_), col(col_), code(code_) {}
};

Program parse(const std::string &text);

// concrete register/local layouts for a given thread count
struct RegInstance {
    std::string name; // display name incl. subscript
    int domain;       // values 0..domain-1
    int init;         // ignored when any
    bool any;
};

struct RegLayout {
    std::vector<RegInstance> flat;
    // declaration name -> (base flat id, count)
    std::vector<std::pair<int, int>> bases; // parallel to Program::regs
    int find_base(const Program &p, const std::string &name) const;
};

struct LocalLayout {
    std::vector<std::pair<std::string, std::pair<int, int>>> slots; // name -> (base, count)
    int total = 0;
    int find(const std::string &name) const;     // base slot, -1 if absent
    int count_of(const std::string &name) const;
};

RegLayout instantiate_registers(const Program &p, int n);
LocalLayout instantiate_locals(const Program &p, int n);

// evaluate a closed expression (only Int/NumThreads/arithmetic), e.g. domain
// bounds; throws on anything state-dependent
long eval_const(const Expr *e, int n);

} // namespace mex
