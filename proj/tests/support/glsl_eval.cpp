#include "glsl_eval.hpp"

#include <cctype>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>

namespace glsl_eval {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw EvalError(msg); }

// ---------------------------------------------------------------- types

struct TypeInfo {
    Base base;
    int n;
    int mat;
};

std::optional<TypeInfo> type_info(const std::string& name) {
    static const std::map<std::string, TypeInfo> table = {
        {"float", {Base::Float, 1, 0}}, {"vec2", {Base::Float, 2, 0}},  {"vec3", {Base::Float, 3, 0}},
        {"vec4", {Base::Float, 4, 0}},  {"int", {Base::Int, 1, 0}},     {"ivec2", {Base::Int, 2, 0}},
        {"ivec3", {Base::Int, 3, 0}},   {"ivec4", {Base::Int, 4, 0}},   {"uint", {Base::UInt, 1, 0}},
        {"uvec2", {Base::UInt, 2, 0}},  {"uvec3", {Base::UInt, 3, 0}},  {"uvec4", {Base::UInt, 4, 0}},
        {"bool", {Base::Bool, 1, 0}},   {"bvec2", {Base::Bool, 2, 0}},  {"bvec3", {Base::Bool, 3, 0}},
        {"bvec4", {Base::Bool, 4, 0}},  {"mat3", {Base::Float, 9, 3}},  {"mat4", {Base::Float, 16, 4}},
        {"void", {Base::Void, 0, 0}},
    };
    auto it = table.find(name);
    if (it == table.end()) return std::nullopt;
    return it->second;
}

bool is_type(const std::string& name) { return type_info(name).has_value(); }

Val zero_of(const TypeInfo& t) {
    Val v;
    v.base = t.base;
    v.n = t.n;
    v.mat = t.mat;
    return v;
}

bool matches(const Val& v, const std::string& type) {
    auto t = type_info(type);
    return t && v.base == t->base && v.n == t->n && v.mat == t->mat;
}

std::uint32_t as_u32(double x) { return static_cast<std::uint32_t>(static_cast<std::int64_t>(x)); }
double wrap_u32(std::uint64_t x) { return static_cast<double>(static_cast<std::uint32_t>(x)); }
double wrap_i32(std::int64_t x) { return static_cast<double>(static_cast<std::int32_t>(static_cast<std::uint32_t>(x))); }

// ---------------------------------------------------------------- lexer

enum class Tok { Ident, Float, Int, UInt, Punct, End };

struct Token {
    Tok kind;
    std::string text;
    double value = 0.0;
    int line = 0;
};

std::vector<Token> lex(const std::string& src) {
    std::vector<Token> out;
    std::size_t i = 0;
    int line = 1;
    static const char* puncts[] = {"<<=", ">>=", "++", "--", "<=", ">=", "==", "!=", "&&", "||", "^^", "+=", "-=",
                                   "*=",  "/=",  "%=", "&=", "|=", "^=", "<<", ">>"};
    while (i < src.size()) {
        const char ch = src[i];
        if (ch == '\n') {
            ++line;
            ++i;
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(ch))) {
            ++i;
            continue;
        }
        if (ch == '#') {  // preprocessor line
            while (i < src.size() && src[i] != '\n') ++i;
            continue;
        }
        if (ch == '/' && i + 1 < src.size() && src[i + 1] == '/') {
            while (i < src.size() && src[i] != '\n') ++i;
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
            std::size_t j = i;
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
            out.push_back({Tok::Ident, src.substr(i, j - i), 0.0, line});
            i = j;
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(ch)) ||
            (ch == '.' && i + 1 < src.size() && std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
            std::size_t j = i;
            if (ch == '0' && j + 1 < src.size() && (src[j + 1] == 'x' || src[j + 1] == 'X')) {
                j += 2;
                while (j < src.size() && std::isxdigit(static_cast<unsigned char>(src[j]))) ++j;
                const std::uint64_t v = std::stoull(src.substr(i + 2, j - i - 2), nullptr, 16);
                bool unsigned_suffix = j < src.size() && (src[j] == 'u' || src[j] == 'U');
                if (unsigned_suffix) ++j;
                if (v > 0xffffffffULL) fail("hex literal out of range");
                out.push_back({unsigned_suffix ? Tok::UInt : Tok::Int, src.substr(i, j - i), static_cast<double>(v), line});
                i = j;
                continue;
            }
            bool is_float = false;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            if (j < src.size() && src[j] == '.') {
                is_float = true;
                ++j;
                while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            }
            if (j < src.size() && (src[j] == 'e' || src[j] == 'E')) {
                is_float = true;
                ++j;
                if (j < src.size() && (src[j] == '+' || src[j] == '-')) ++j;
                if (j >= src.size() || !std::isdigit(static_cast<unsigned char>(src[j]))) fail("bad exponent");
                while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            }
            const std::string text = src.substr(i, j - i);
            if (is_float) {
                if (j < src.size() && (src[j] == 'f' || src[j] == 'F')) ++j;
                out.push_back({Tok::Float, text, std::strtod(text.c_str(), nullptr), line});
            } else {
                bool unsigned_suffix = j < src.size() && (src[j] == 'u' || src[j] == 'U');
                if (unsigned_suffix) ++j;
                out.push_back({unsigned_suffix ? Tok::UInt : Tok::Int, text, std::strtod(text.c_str(), nullptr), line});
            }
            i = j;
            continue;
        }
        bool matched = false;
        for (const char* p : puncts) {
            const std::size_t len = std::char_traits<char>::length(p);
            if (src.compare(i, len, p) == 0) {
                out.push_back({Tok::Punct, p, 0.0, line});
                i += len;
                matched = true;
                break;
            }
        }
        if (matched) continue;
        if (std::string("+-*/%<>=!&|^~?:;,.(){}[]").find(ch) != std::string::npos) {
            out.push_back({Tok::Punct, std::string(1, ch), 0.0, line});
            ++i;
            continue;
        }
        fail("unexpected character '" + std::string(1, ch) + "' on line " + std::to_string(line));
    }
    out.push_back({Tok::End, "", 0.0, line});
    return out;
}

// ---------------------------------------------------------------- AST

struct Expr {
    enum Kind { Literal, Var, Unary, Binary, Assign, Ternary, Call, Field, Index, PostIncDec, PreIncDec } kind;
    std::string op;  // operator, name, or field
    Val literal;
    std::vector<std::unique_ptr<Expr>> kids;
};
using ExprPtr = std::unique_ptr<Expr>;

struct Stmt {
    enum Kind { Decl, ExprStmt, If, For, Return, Discard, Block, Break, Continue } kind;
    std::string type;
    std::string name;
    ExprPtr expr;                             // initializer / expression / condition / return value
    ExprPtr step;                             // for-step
    std::vector<std::unique_ptr<Stmt>> body;  // block / if-then / for init (body[0]) + body
    std::unique_ptr<Stmt> other;              // else branch / for body
};
using StmtPtr = std::unique_ptr<Stmt>;

struct Function {
    std::string ret;
    std::string name;
    std::vector<std::pair<std::string, std::string>> params;  // (type, name)
    std::vector<StmtPtr> body;
};

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : t_(std::move(toks)) {}

    void parse(std::vector<Function>& functions, std::map<std::string, std::map<std::string, std::string>>& decls) {
        while (peek().kind != Tok::End) {
            if (peek_ident("precision")) {
                next();
                next_ident();
                next_ident();
                expect(";");
                continue;
            }
            std::string qualifier;
            if (peek_ident("in") || peek_ident("out") || peek_ident("uniform")) qualifier = next().text;
            std::string type = next_ident();
            if (!is_type(type)) fail("unknown type " + type + " on line " + std::to_string(prev_line()));
            std::string name = next_ident();
            if (!qualifier.empty()) {
                expect(";");
                if (decls[qualifier].count(name)) fail("duplicate global " + name);
                decls[qualifier][name] = type;
                continue;
            }
            Function f;
            f.ret = type;
            f.name = name;
            expect("(");
            if (!accept(")")) {
                do {
                    std::string ptype = next_ident();
                    if (!is_type(ptype)) fail("unknown parameter type " + ptype);
                    f.params.emplace_back(ptype, next_ident());
                } while (accept(","));
                expect(")");
            }
            expect("{");
            while (!accept("}")) f.body.push_back(statement());
            functions.push_back(std::move(f));
        }
    }

private:
    const Token& peek(std::size_t k = 0) const { return t_[std::min(pos_ + k, t_.size() - 1)]; }
    const Token& next() { return t_[pos_ < t_.size() - 1 ? pos_++ : pos_]; }
    int prev_line() const { return t_[pos_ ? pos_ - 1 : 0].line; }
    bool peek_punct(const char* p) const { return peek().kind == Tok::Punct && peek().text == p; }
    bool peek_ident(const char* p) const { return peek().kind == Tok::Ident && peek().text == p; }
    bool accept(const char* p) {
        if (!peek_punct(p)) return false;
        ++pos_;
        return true;
    }
    void expect(const char* p) {
        if (!accept(p)) fail(std::string("expected '") + p + "' near '" + peek().text + "' on line " + std::to_string(peek().line));
    }
    std::string next_ident() {
        if (peek().kind != Tok::Ident) fail("expected identifier near '" + peek().text + "' on line " + std::to_string(peek().line));
        return next().text;
    }

    StmtPtr statement() {
        auto s = std::make_unique<Stmt>();
        if (accept("{")) {
            s->kind = Stmt::Block;
            while (!accept("}")) s->body.push_back(statement());
            return s;
        }
        if (peek_ident("if")) {
            next();
            s->kind = Stmt::If;
            expect("(");
            s->expr = expression();
            expect(")");
            s->body.push_back(statement());
            if (peek_ident("else")) {
                next();
                s->other = statement();
            }
            return s;
        }
        if (peek_ident("for")) {
            next();
            s->kind = Stmt::For;
            expect("(");
            s->body.push_back(simple_statement());
            s->expr = expression();
            expect(";");
            s->step = expression();
            expect(")");
            s->other = statement();
            return s;
        }
        if (peek_ident("return")) {
            next();
            s->kind = Stmt::Return;
            if (!accept(";")) {
                s->expr = expression();
                expect(";");
            }
            return s;
        }
        if (peek_ident("discard")) {
            next();
            expect(";");
            s->kind = Stmt::Discard;
            return s;
        }
        if (peek_ident("break") || peek_ident("continue")) {
            s->kind = next().text == "break" ? Stmt::Break : Stmt::Continue;
            expect(";");
            return s;
        }
        return simple_statement();
    }

    // Declaration or expression statement, terminated by ';'.
    StmtPtr simple_statement() {
        auto s = std::make_unique<Stmt>();
        if (peek().kind == Tok::Ident && is_type(peek().text) && peek(1).kind == Tok::Ident) {
            s->kind = Stmt::Decl;
            s->type = next().text;
            s->name = next_ident();
            if (accept("=")) s->expr = assignment();
            expect(";");
            return s;
        }
        s->kind = Stmt::ExprStmt;
        s->expr = expression();
        expect(";");
        return s;
    }

    ExprPtr make(Expr::Kind kind, std::string op) {
        auto e = std::make_unique<Expr>();
        e->kind = kind;
        e->op = std::move(op);
        return e;
    }

    ExprPtr expression() {
        auto e = assignment();
        if (peek_punct(",")) fail("comma operator is not supported");
        return e;
    }

    ExprPtr assignment() {
        auto lhs = ternary();
        static const char* ops[] = {"=", "+=", "-=", "*=", "/=", "^=", "&=", "|=", "<<=", ">>="};
        for (const char* op : ops) {
            if (accept(op)) {
                auto e = make(Expr::Assign, op);
                e->kids.push_back(std::move(lhs));
                e->kids.push_back(assignment());
                return e;
            }
        }
        return lhs;
    }

    ExprPtr ternary() {
        auto cond = binary(0);
        if (!accept("?")) return cond;
        auto e = make(Expr::Ternary, "?");
        e->kids.push_back(std::move(cond));
        e->kids.push_back(assignment());
        expect(":");
        e->kids.push_back(assignment());
        return e;
    }

    ExprPtr binary(int level) {
        static const std::vector<std::vector<std::string>> levels = {
            {"||"}, {"^^"}, {"&&"}, {"|"}, {"^"}, {"&"}, {"==", "!="}, {"<", ">", "<=", ">="}, {"<<", ">>"},
            {"+", "-"}, {"*", "/", "%"}};
        if (level == static_cast<int>(levels.size())) return unary();
        auto lhs = binary(level + 1);
        while (true) {
            bool found = false;
            for (const auto& op : levels[level]) {
                if (peek_punct(op.c_str())) {
                    next();
                    auto e = make(Expr::Binary, op);
                    e->kids.push_back(std::move(lhs));
                    e->kids.push_back(binary(level + 1));
                    lhs = std::move(e);
                    found = true;
                    break;
                }
            }
            if (!found) return lhs;
        }
    }

    ExprPtr unary() {
        for (const char* op : {"-", "+", "!", "~"}) {
            if (accept(op)) {
                auto e = make(Expr::Unary, op);
                e->kids.push_back(unary());
                return e;
            }
        }
        for (const char* op : {"++", "--"}) {
            if (accept(op)) {
                auto e = make(Expr::PreIncDec, op);
                e->kids.push_back(unary());
                return e;
            }
        }
        return postfix();
    }

    ExprPtr postfix() {
        auto e = primary();
        while (true) {
            if (accept(".")) {
                auto f = make(Expr::Field, next_ident());
                f->kids.push_back(std::move(e));
                e = std::move(f);
            } else if (accept("[")) {
                auto ix = make(Expr::Index, "[]");
                ix->kids.push_back(std::move(e));
                ix->kids.push_back(expression());
                expect("]");
                e = std::move(ix);
            } else if (peek_punct("++") || peek_punct("--")) {
                auto p = make(Expr::PostIncDec, next().text);
                p->kids.push_back(std::move(e));
                e = std::move(p);
            } else {
                return e;
            }
        }
    }

    ExprPtr primary() {
        const Token& tok = peek();
        if (accept("(")) {
            auto e = expression();
            expect(")");
            return e;
        }
        if (tok.kind == Tok::Float || tok.kind == Tok::Int || tok.kind == Tok::UInt) {
            next();
            auto e = make(Expr::Literal, tok.text);
            e->literal.base = tok.kind == Tok::Float ? Base::Float : tok.kind == Tok::Int ? Base::Int : Base::UInt;
            e->literal.c[0] = tok.value;
            if (tok.kind == Tok::Int && tok.value > 2147483647.0) fail("int literal out of range");
            return e;
        }
        if (tok.kind == Tok::Ident) {
            const std::string name = next().text;
            if (name == "true" || name == "false") {
                auto e = make(Expr::Literal, name);
                e->literal.base = Base::Bool;
                e->literal.c[0] = name == "true" ? 1.0 : 0.0;
                return e;
            }
            if (accept("(")) {
                auto call = make(Expr::Call, name);
                if (!accept(")")) {
                    do {
                        call->kids.push_back(assignment());
                    } while (accept(","));
                    expect(")");
                }
                return call;
            }
            return make(Expr::Var, name);
        }
        fail("unexpected token '" + tok.text + "' on line " + std::to_string(tok.line));
    }

    std::vector<Token> t_;
    std::size_t pos_ = 0;
};

// ---------------------------------------------------------------- values

Val scalar_of(Base b, double x) {
    Val v;
    v.base = b;
    v.c[0] = x;
    return v;
}

int swizzle_index(char ch) {
    switch (ch) {
        case 'x': case 'r': case 's': return 0;
        case 'y': case 'g': case 't': return 1;
        case 'z': case 'b': case 'p': return 2;
        case 'w': case 'a': case 'q': return 3;
    }
    return -1;
}

double convert(double x, Base from, Base to) {
    if (from == to) return x;
    switch (to) {
        case Base::Float: return x;
        case Base::Bool: return x != 0.0 ? 1.0 : 0.0;
        case Base::Int:
            if (from == Base::Float) {
                if (!std::isfinite(x)) fail("float to int conversion of non-finite value");
                return wrap_i32(static_cast<std::int64_t>(std::trunc(x)));
            }
            return wrap_i32(static_cast<std::int64_t>(x));
        case Base::UInt:
            if (from == Base::Float) {
                if (!std::isfinite(x) || x < 0.0) fail("float to uint conversion of negative or non-finite value");
                return wrap_u32(static_cast<std::uint64_t>(std::trunc(x)));
            }
            return wrap_u32(static_cast<std::uint64_t>(static_cast<std::int64_t>(x)));
        case Base::Void: break;
    }
    fail("bad conversion");
}

Val construct(const TypeInfo& t, const std::vector<Val>& args) {
    Val out = zero_of(t);
    if (args.empty()) fail("constructor without arguments");
    if (t.mat) {
        if (args.size() == 1 && args[0].mat) {  // matrix from matrix: top-left block, identity fill
            const int src = args[0].mat;
            for (int col = 0; col < t.mat; ++col) {
                for (int row = 0; row < t.mat; ++row) {
                    out.c[col * t.mat + row] = (col < src && row < src) ? args[0].c[col * src + row] : (col == row ? 1.0 : 0.0);
                }
            }
            return out;
        }
        if (args.size() == 1 && args[0].n == 1) {
            for (int k = 0; k < t.mat; ++k) out.c[k * t.mat + k] = convert(args[0].c[0], args[0].base, Base::Float);
            return out;
        }
    }
    if (args.size() == 1 && args[0].n == 1 && !args[0].mat) {
        for (int k = 0; k < t.n; ++k) out.c[k] = convert(args[0].c[0], args[0].base, t.base);
        return out;
    }
    int k = 0;
    for (const auto& a : args) {
        if (a.mat) fail("matrix argument in vector constructor");
        for (int i = 0; i < a.n; ++i) {
            if (k >= t.n) {
                if (&a == &args.back() && i > 0) break;  // extra components of the last argument are dropped
                fail("too many constructor components");
            }
            out.c[k++] = convert(a.c[i], a.base, t.base);
        }
    }
    if (k < t.n) fail("too few constructor components");
    return out;
}

// Component-wise binary op with scalar broadcast; both operands share a base type.
Val zip(const Val& a, const Val& b, const std::string& what, const std::function<double(double, double)>& f) {
    if (a.base != b.base) fail("operand types differ in " + what + ": " + a.type_name() + " vs " + b.type_name());
    if (a.mat || b.mat) fail("matrix operand in component-wise " + what);
    if (a.n != b.n && a.n != 1 && b.n != 1) fail("vector sizes differ in " + what);
    Val out;
    out.base = a.base;
    out.n = std::max(a.n, b.n);
    for (int i = 0; i < out.n; ++i) out.c[i] = f(a.c[a.n == 1 ? 0 : i], b.c[b.n == 1 ? 0 : i]);
    return out;
}

Val arith(const std::string& op, const Val& a, const Val& b) {
    if (op == "*" && (a.mat || b.mat)) {
        if (a.mat && !b.mat) {
            if (b.n != a.mat || b.base != Base::Float) fail("matrix * vector size mismatch");
            Val out;
            out.n = a.mat;
            for (int row = 0; row < a.mat; ++row) {
                double s = 0.0;
                for (int col = 0; col < a.mat; ++col) s = s + a.c[col * a.mat + row] * b.c[col];
                out.c[row] = s;
            }
            return out;
        }
        if (a.mat && b.mat && a.mat == b.mat) {
            Val out = a;
            const int m = a.mat;
            for (int col = 0; col < m; ++col) {
                for (int row = 0; row < m; ++row) {
                    double s = 0.0;
                    for (int k = 0; k < m; ++k) s = s + a.c[k * m + row] * b.c[col * m + k];
                    out.c[col * m + row] = s;
                }
            }
            return out;
        }
        fail("unsupported matrix product");
    }
    const Base base = a.base;
    if (base == Base::Bool) fail("arithmetic on bool");
    if (op == "+") {
        return zip(a, b, op, [base](double x, double y) {
            return base == Base::Float ? x + y : base == Base::UInt ? wrap_u32(as_u32(x) + static_cast<std::uint64_t>(as_u32(y)))
                                                                    : wrap_i32(static_cast<std::int64_t>(x) + static_cast<std::int64_t>(y));
        });
    }
    if (op == "-") {
        return zip(a, b, op, [base](double x, double y) {
            return base == Base::Float ? x - y : base == Base::UInt ? wrap_u32(static_cast<std::uint64_t>(as_u32(x)) - as_u32(y))
                                                                    : wrap_i32(static_cast<std::int64_t>(x) - static_cast<std::int64_t>(y));
        });
    }
    if (op == "*") {
        return zip(a, b, op, [base](double x, double y) {
            return base == Base::Float ? x * y
                   : base == Base::UInt ? wrap_u32(static_cast<std::uint64_t>(as_u32(x)) * as_u32(y))
                                        : wrap_i32(static_cast<std::int64_t>(x) * static_cast<std::int64_t>(y));
        });
    }
    if (op == "/") {
        return zip(a, b, op, [base](double x, double y) {
            if (base == Base::Float) return x / y;
            if (y == 0.0) fail("integer division by zero");
            return base == Base::UInt ? wrap_u32(as_u32(x) / as_u32(y))
                                      : wrap_i32(static_cast<std::int64_t>(x) / static_cast<std::int64_t>(y));
        });
    }
    if (op == "%") {
        if (base == Base::Float) fail("% on float");
        return zip(a, b, op, [base](double x, double y) {
            if (y == 0.0) fail("integer modulo by zero");
            return base == Base::UInt ? wrap_u32(as_u32(x) % as_u32(y))
                                      : wrap_i32(static_cast<std::int64_t>(x) % static_cast<std::int64_t>(y));
        });
    }
    if (op == "&" || op == "|" || op == "^") {
        if (base == Base::Float) fail("bitwise op on float");
        return zip(a, b, op, [&op, base](double x, double y) {
            const std::uint32_t ux = as_u32(x), uy = as_u32(y);
            const std::uint32_t r = op == "&" ? (ux & uy) : op == "|" ? (ux | uy) : (ux ^ uy);
            return base == Base::UInt ? static_cast<double>(r) : wrap_i32(r);
        });
    }
    if (op == "<<" || op == ">>") {
        if (a.base == Base::Float || b.base == Base::Float || a.base == Base::Bool || b.base == Base::Bool) {
            fail("shift on non-integer");
        }
        if (b.n != 1 && b.n != a.n) fail("shift size mismatch");
        Val out = a;
        for (int i = 0; i < a.n; ++i) {
            const std::int64_t s = static_cast<std::int64_t>(b.c[b.n == 1 ? 0 : i]);
            if (s < 0 || s >= 32) fail("shift amount out of range");
            const std::uint32_t ux = as_u32(a.c[i]);
            if (a.base == Base::UInt) {
                out.c[i] = op == "<<" ? wrap_u32(static_cast<std::uint64_t>(ux) << s) : static_cast<double>(ux >> s);
            } else {
                const auto sx = static_cast<std::int32_t>(ux);
                out.c[i] = op == "<<" ? wrap_i32(static_cast<std::int64_t>(static_cast<std::uint32_t>(ux << s)))
                                      : static_cast<double>(sx >> s);
            }
        }
        return out;
    }
    fail("unknown operator " + op);
}

Val compare(const std::string& op, const Val& a, const Val& b) {
    if (!a.same_type(b)) fail("comparison of different types " + a.type_name() + " and " + b.type_name());
    if (op == "==" || op == "!=") {
        bool eq = true;
        for (int i = 0; i < a.n; ++i) eq = eq && a.c[i] == b.c[i];
        return scalar_of(Base::Bool, (op == "==") == eq ? 1.0 : 0.0);
    }
    if (a.n != 1 || a.base == Base::Bool) fail("relational operator needs scalar operands");
    const double x = a.c[0], y = b.c[0];
    bool r = op == "<" ? x < y : op == ">" ? x > y : op == "<=" ? x <= y : x >= y;
    return scalar_of(Base::Bool, r ? 1.0 : 0.0);
}

// ---------------------------------------------------------------- builtins

bool is_float_gen(const Val& v) { return v.base == Base::Float && !v.mat; }

Val map1(const Val& a, const std::function<double(double)>& f) {
    if (!is_float_gen(a)) fail("builtin expects a float vector");
    Val out = a;
    for (int i = 0; i < a.n; ++i) out.c[i] = f(a.c[i]);
    return out;
}

double dot_of(const Val& a, const Val& b) {
    if (!is_float_gen(a) || !a.same_type(b)) fail("dot/length operands must share a float vector type");
    double s = a.c[0] * b.c[0];
    for (int i = 1; i < a.n; ++i) s = s + a.c[i] * b.c[i];
    return s;
}

// genType f(genType, genType) with optional float scalars at positions in `scalar_ok`.
void check_gen(const std::string& name, const std::vector<Val>& args, std::size_t count, std::vector<std::size_t> scalar_ok,
               std::size_t ref = 0) {
    if (args.size() != count) fail(name + " expects " + std::to_string(count) + " arguments");
    for (std::size_t i = 0; i < count; ++i) {
        if (!is_float_gen(args[i])) fail(name + " expects float arguments");
        if (args[i].n == args[ref].n) continue;
        if (args[i].n == 1 && std::find(scalar_ok.begin(), scalar_ok.end(), i) != scalar_ok.end()) continue;
        fail(name + " argument sizes do not match");
    }
}

double at(const Val& v, int i) { return v.c[v.n == 1 ? 0 : i]; }

std::optional<Val> builtin(const std::string& name, const std::vector<Val>& a) {
    if (auto t = type_info(name); t && t->base != Base::Void) return construct(*t, a);
    auto unary = [&](double (*f)(double)) {
        if (a.size() != 1) fail(name + " expects one argument");
        return map1(a[0], f);
    };
    if (name == "sin") return unary([](double x) { return std::sin(x); });
    if (name == "cos") return unary([](double x) { return std::cos(x); });
    if (name == "abs") return unary([](double x) { return std::fabs(x); });
    if (name == "floor") return unary([](double x) { return std::floor(x); });
    if (name == "fract") return unary([](double x) { return x - std::floor(x); });
    if (name == "exp2") return unary([](double x) { return std::exp2(x); });
    if (name == "sqrt") return unary([](double x) { return std::sqrt(x); });
    if (name == "pow") {
        check_gen(name, a, 2, {});
        Val out = a[0];
        for (int i = 0; i < out.n; ++i) out.c[i] = std::pow(a[0].c[i], a[1].c[i]);
        return out;
    }
    if (name == "min" || name == "max") {
        check_gen(name, a, 2, {1});
        Val out = a[0];
        for (int i = 0; i < out.n; ++i) {
            const double x = a[0].c[i], y = at(a[1], i);
            out.c[i] = name == "min" ? (y < x ? y : x) : (x < y ? y : x);
        }
        return out;
    }
    if (name == "clamp") {
        check_gen(name, a, 3, {1, 2});
        if ((a[1].n == 1) != (a[2].n == 1) && a[0].n != 1) fail("clamp bounds must both be scalar or both vector");
        Val out = a[0];
        for (int i = 0; i < out.n; ++i) {
            const double lo = at(a[1], i), hi = at(a[2], i);
            const double m = a[0].c[i] < lo ? lo : a[0].c[i];
            out.c[i] = hi < m ? hi : m;
        }
        return out;
    }
    if (name == "mix") {
        check_gen(name, a, 3, {2});
        Val out = a[0];
        for (int i = 0; i < out.n; ++i) {
            const double t = at(a[2], i);
            out.c[i] = a[0].c[i] * (1.0 - t) + a[1].c[i] * t;
        }
        return out;
    }
    if (name == "step") {
        check_gen(name, a, 2, {0}, 1);
        Val out = a[1];
        for (int i = 0; i < out.n; ++i) out.c[i] = a[1].c[i] < at(a[0], i) ? 0.0 : 1.0;
        return out;
    }
    if (name == "dot") {
        if (a.size() != 2) fail("dot expects two arguments");
        return Val::f(dot_of(a[0], a[1]));
    }
    if (name == "length") {
        if (a.size() != 1) fail("length expects one argument");
        return Val::f(std::sqrt(dot_of(a[0], a[0])));
    }
    if (name == "distance") {
        if (a.size() != 2 || !a[0].same_type(a[1])) fail("distance operands must match");
        const Val d = arith("-", a[0], a[1]);
        return Val::f(std::sqrt(dot_of(d, d)));
    }
    if (name == "normalize") {
        if (a.size() != 1) fail("normalize expects one argument");
        const double len = std::sqrt(dot_of(a[0], a[0]));
        return map1(a[0], [len](double x) { return x / len; });
    }
    if (name == "cross") {
        if (a.size() != 2 || !matches(a[0], "vec3") || !matches(a[1], "vec3")) fail("cross expects two vec3");
        const auto& x = a[0].c;
        const auto& y = a[1].c;
        return Val::vec({x[1] * y[2] - y[1] * x[2], x[2] * y[0] - y[2] * x[0], x[0] * y[1] - y[0] * x[1]});
    }
    return std::nullopt;
}

// ---------------------------------------------------------------- interpreter

enum class Flow { Normal, Return, Discard, Break, Continue };

struct Frame {
    std::vector<std::map<std::string, std::pair<std::string, Val>>> scopes;  // name -> (type, value)
};

}  // namespace

Val Val::f(double x) { return scalar_of(Base::Float, x); }

Val Val::vec(std::initializer_list<double> xs) {
    Val v;
    v.n = static_cast<int>(xs.size());
    int i = 0;
    for (double x : xs) v.c[i++] = x;
    return v;
}

Val Val::mat_identity(int size) {
    Val v;
    v.mat = size;
    v.n = size * size;
    for (int k = 0; k < size; ++k) v.c[k * size + k] = 1.0;
    return v;
}

std::string Val::type_name() const {
    if (mat) return "mat" + std::to_string(mat);
    std::string prefix = base == Base::Float ? "" : base == Base::Int ? "i" : base == Base::UInt ? "u" : "b";
    if (n == 1) {
        return base == Base::Float ? "float" : base == Base::Int ? "int" : base == Base::UInt ? "uint" : "bool";
    }
    return prefix + "vec" + std::to_string(n);
}

struct Program::Impl {
    std::vector<Function> functions;
    std::map<std::string, std::map<std::string, std::string>> decls;

    struct Run {
        const Impl& prog;
        std::map<std::string, std::pair<std::string, Val>> globals;
        std::vector<Frame> frames;
        Val ret;
        int depth = 0;
        std::map<std::string, std::pair<std::string, Val>> main_top;

        std::pair<std::string, Val>* lookup(const std::string& name) {
            if (!frames.empty()) {
                auto& scopes = frames.back().scopes;
                for (auto it = scopes.rbegin(); it != scopes.rend(); ++it) {
                    if (auto f = it->find(name); f != it->end()) return &f->second;
                }
            }
            if (auto g = globals.find(name); g != globals.end()) return &g->second;
            return nullptr;
        }

        Val eval(const Expr& e) {
            switch (e.kind) {
                case Expr::Literal: return e.literal;
                case Expr::Var: {
                    auto* slot = lookup(e.op);
                    if (!slot) fail("undeclared identifier " + e.op);
                    return slot->second;
                }
                case Expr::Unary: {
                    Val v = eval(*e.kids[0]);
                    if (e.op == "+") return v;
                    if (e.op == "-") {
                        if (v.base == Base::Bool) fail("negation of bool");
                        for (int i = 0; i < v.n; ++i) {
                            v.c[i] = v.base == Base::Float ? -v.c[i]
                                     : v.base == Base::UInt ? wrap_u32(static_cast<std::uint64_t>(0) - as_u32(v.c[i]))
                                                            : wrap_i32(-static_cast<std::int64_t>(v.c[i]));
                        }
                        return v;
                    }
                    if (e.op == "!") {
                        if (!matches(v, "bool")) fail("! needs bool");
                        v.c[0] = v.c[0] != 0.0 ? 0.0 : 1.0;
                        return v;
                    }
                    if (v.base != Base::Int && v.base != Base::UInt) fail("~ needs an integer");
                    for (int i = 0; i < v.n; ++i) {
                        const std::uint32_t r = ~as_u32(v.c[i]);
                        v.c[i] = v.base == Base::UInt ? static_cast<double>(r) : wrap_i32(r);
                    }
                    return v;
                }
                case Expr::Binary: {
                    const std::string& op = e.op;
                    if (op == "&&" || op == "||" || op == "^^") {
                        Val a = eval(*e.kids[0]);
                        if (!matches(a, "bool")) fail(op + " needs bool operands");
                        if (op == "&&" && a.c[0] == 0.0) return a;
                        if (op == "||" && a.c[0] != 0.0) return a;
                        Val b = eval(*e.kids[1]);
                        if (!matches(b, "bool")) fail(op + " needs bool operands");
                        if (op == "^^") return scalar_of(Base::Bool, (a.c[0] != 0.0) != (b.c[0] != 0.0) ? 1.0 : 0.0);
                        return b;
                    }
                    Val a = eval(*e.kids[0]);
                    Val b = eval(*e.kids[1]);
                    if (op == "==" || op == "!=" || op == "<" || op == ">" || op == "<=" || op == ">=") return compare(op, a, b);
                    return arith(op, a, b);
                }
                case Expr::Assign: {
                    Val rhs = eval(*e.kids[1]);
                    if (e.op != "=") {
                        const std::string op = e.op.substr(0, e.op.size() - 1);
                        rhs = arith(op, eval(*e.kids[0]), rhs);
                    }
                    store(*e.kids[0], rhs);
                    return rhs;
                }
                case Expr::Ternary: {
                    Val c = eval(*e.kids[0]);
                    if (!matches(c, "bool")) fail("ternary condition must be bool");
                    Val x = eval(*e.kids[1]);
                    Val y = eval(*e.kids[2]);
                    if (!x.same_type(y)) fail("ternary branches differ in type");
                    return c.c[0] != 0.0 ? x : y;
                }
                case Expr::Call: {
                    std::vector<Val> args;
                    for (const auto& k : e.kids) args.push_back(eval(*k));
                    return call(e.op, args);
                }
                case Expr::Field: {
                    Val base = eval(*e.kids[0]);
                    return swizzle(base, e.op);
                }
                case Expr::Index: {
                    Val base = eval(*e.kids[0]);
                    Val ix = eval(*e.kids[1]);
                    if (ix.base != Base::Int && ix.base != Base::UInt) fail("index must be an integer");
                    const int i = static_cast<int>(ix.c[0]);
                    if (base.mat) {
                        if (i < 0 || i >= base.mat) fail("matrix index out of range");
                        Val col;
                        col.n = base.mat;
                        for (int r = 0; r < base.mat; ++r) col.c[r] = base.c[i * base.mat + r];
                        return col;
                    }
                    if (i < 0 || i >= base.n) fail("vector index out of range");
                    return scalar_of(base.base, base.c[i]);
                }
                case Expr::PostIncDec:
                case Expr::PreIncDec: {
                    Val old = eval(*e.kids[0]);
                    Val one = scalar_of(old.base, 1.0);
                    Val updated = arith(e.op == "++" ? "+" : "-", old, one);
                    store(*e.kids[0], updated);
                    return e.kind == Expr::PostIncDec ? old : updated;
                }
            }
            fail("bad expression");
        }

        Val swizzle(const Val& base, const std::string& field) {
            if (base.mat) fail("swizzle on matrix");
            if (field.size() > 4) fail("swizzle too long");
            Val out;
            out.base = base.base;
            out.n = static_cast<int>(field.size());
            for (std::size_t i = 0; i < field.size(); ++i) {
                const int k = swizzle_index(field[i]);
                if (k < 0 || k >= base.n) fail("invalid swizzle ." + field + " on " + base.type_name());
                out.c[i] = base.c[k];
            }
            return out;
        }

        void store(const Expr& target, const Val& value) {
            if (target.kind == Expr::Var) {
                auto* slot = lookup(target.op);
                if (!slot) fail("assignment to undeclared " + target.op);
                if (!matches(value, slot->first)) fail("cannot assign " + value.type_name() + " to " + slot->first + " " + target.op);
                slot->second = value;
                return;
            }
            if (target.kind == Expr::Field && target.kids[0]->kind == Expr::Var) {
                auto* slot = lookup(target.kids[0]->op);
                if (!slot) fail("assignment to undeclared " + target.kids[0]->op);
                const std::string& field = target.op;
                if (value.base != slot->second.base || value.n != static_cast<int>(field.size())) {
                    fail("swizzle assignment type mismatch");
                }
                for (std::size_t i = 0; i < field.size(); ++i) {
                    const int k = swizzle_index(field[i]);
                    if (k < 0 || k >= slot->second.n) fail("invalid swizzle assignment");
                    slot->second.c[k] = value.c[i];
                }
                return;
            }
            fail("unsupported assignment target");
        }

        Val call(const std::string& name, const std::vector<Val>& args) {
            const Function* chosen = nullptr;
            for (const auto& f : prog.functions) {
                if (f.name != name || f.params.size() != args.size()) continue;
                bool ok = true;
                for (std::size_t i = 0; i < args.size() && ok; ++i) ok = matches(args[i], f.params[i].first);
                if (ok) {
                    chosen = &f;
                    break;
                }
            }
            if (!chosen) {
                if (auto v = builtin(name, args)) return *v;
                std::string sig = name + "(";
                for (std::size_t i = 0; i < args.size(); ++i) sig += (i ? ", " : "") + args[i].type_name();
                fail("no matching function " + sig + ")");
            }
            if (++depth > 64) fail("call depth exceeded");
            Frame frame;
            frame.scopes.emplace_back();
            for (std::size_t i = 0; i < args.size(); ++i) frame.scopes.back()[chosen->params[i].second] = {chosen->params[i].first, args[i]};
            frames.push_back(std::move(frame));
            ret = Val{};
            ret.base = Base::Void;
            Flow flow = block(chosen->body, false);
            frames.pop_back();
            --depth;
            if (flow == Flow::Discard) throw flow;
            if (chosen->ret != "void") {
                if (flow != Flow::Return) fail("function " + name + " ended without return");
                if (!matches(ret, chosen->ret)) fail("function " + name + " returned " + ret.type_name());
            }
            return ret;
        }

        Flow block(const std::vector<StmtPtr>& stmts, bool new_scope = true) {
            if (new_scope) frames.back().scopes.emplace_back();
            Flow flow = Flow::Normal;
            for (const auto& s : stmts) {
                flow = exec(*s);
                if (flow != Flow::Normal) break;
            }
            if (new_scope) frames.back().scopes.pop_back();
            return flow;
        }

        Flow exec(const Stmt& s) {
            switch (s.kind) {
                case Stmt::Decl: {
                    auto t = type_info(s.type);
                    Val v = zero_of(*t);
                    if (s.expr) {
                        v = eval(*s.expr);
                        if (!matches(v, s.type)) fail("cannot initialize " + s.type + " " + s.name + " with " + v.type_name());
                    }
                    auto& scope = frames.back().scopes.back();
                    if (scope.count(s.name)) fail("redeclaration of " + s.name);
                    scope[s.name] = {s.type, v};
                    return Flow::Normal;
                }
                case Stmt::ExprStmt: eval(*s.expr); return Flow::Normal;
                case Stmt::If: {
                    Val c = eval(*s.expr);
                    if (!matches(c, "bool")) fail("if condition must be bool");
                    if (c.c[0] != 0.0) return exec_scoped(*s.body[0]);
                    if (s.other) return exec_scoped(*s.other);
                    return Flow::Normal;
                }
                case Stmt::For: {
                    frames.back().scopes.emplace_back();
                    exec(*s.body[0]);
                    Flow result = Flow::Normal;
                    for (int guard = 0;; ++guard) {
                        if (guard > 100000) fail("loop iteration limit exceeded");
                        Val c = eval(*s.expr);
                        if (!matches(c, "bool")) fail("for condition must be bool");
                        if (c.c[0] == 0.0) break;
                        Flow f = exec_scoped(*s.other);
                        if (f == Flow::Break) break;
                        if (f == Flow::Return || f == Flow::Discard) {
                            result = f;
                            break;
                        }
                        eval(*s.step);
                    }
                    frames.back().scopes.pop_back();
                    return result;
                }
                case Stmt::Return:
                    if (s.expr) ret = eval(*s.expr);
                    return Flow::Return;
                case Stmt::Discard: return Flow::Discard;
                case Stmt::Block: return block(s.body);
                case Stmt::Break: return Flow::Break;
                case Stmt::Continue: return Flow::Continue;
            }
            return Flow::Normal;
        }

        Flow exec_scoped(const Stmt& s) {
            if (s.kind == Stmt::Block) return block(s.body);
            frames.back().scopes.emplace_back();
            Flow f = exec(s);
            frames.back().scopes.pop_back();
            return f;
        }
    };
};

Program::Program(const std::string& source) : impl_(std::make_unique<Impl>()) {
    Parser parser(lex(source));
    parser.parse(impl_->functions, impl_->decls);
}

Program::~Program() = default;
Program::Program(Program&&) noexcept = default;
Program& Program::operator=(Program&&) noexcept = default;

const std::map<std::string, std::map<std::string, std::string>>& Program::declarations() const { return impl_->decls; }

ExecResult Program::run(const std::map<std::string, Val>& inputs) const {
    Impl::Run run{*impl_, {}, {}, {}, 0, {}};
    for (const auto& [qualifier, vars] : impl_->decls) {
        for (const auto& [name, type] : vars) {
            Val v = zero_of(*type_info(type));
            if (qualifier != "out") {
                auto it = inputs.find(name);
                if (it == inputs.end()) fail("no value supplied for " + qualifier + " " + name);
                if (!matches(it->second, type)) fail("value for " + name + " is " + it->second.type_name() + ", declared " + type);
                v = it->second;
            }
            run.globals[name] = {type, v};
        }
    }
    run.globals["gl_Position"] = {"vec4", zero_of(*type_info("vec4"))};
    const Function* main_fn = nullptr;
    for (const auto& f : impl_->functions) {
        if (f.name == "main" && f.params.empty()) main_fn = &f;
    }
    if (!main_fn) fail("no main()");
    ExecResult result;
    Frame frame;
    frame.scopes.emplace_back();
    run.frames.push_back(std::move(frame));
    Flow flow = Flow::Normal;
    try {
        flow = run.block(main_fn->body, false);
    } catch (Flow f) {
        flow = f;
    }
    result.discarded = flow == Flow::Discard;
    for (const auto& [name, slot] : run.frames.front().scopes.front()) result.main_locals[name] = slot.second;
    for (const auto& [name, slot] : run.globals) result.globals[name] = slot.second;
    return result;
}

}  // namespace glsl_eval
