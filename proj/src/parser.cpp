#include "optica/parser.hpp"

#include <cctype>
#include <charconv>

namespace optica {

namespace {

enum class Tok { Ident, Int, String, Compose, Fork, Gt, EqEq, Minus, LParen, RParen, Comma, DotNot, End };

const char *describe(Tok t) {
    switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Int: return "integer literal";
    case Tok::String: return "string literal";
    case Tok::Compose: return "'>>>'";
    case Tok::Fork: return "'***'";
    case Tok::Gt: return "'>'";
    case Tok::EqEq: return "'=='";
    case Tok::Minus: return "'-'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Comma: return "','";
    case Tok::DotNot: return "'.not'";
    case Tok::End: return "end of input";
    }
    return "?";
}

struct Token {
    Tok kind;
    std::string text;
    SourceSpan span;
};

std::vector<Token> lex(std::string_view s) {
    std::vector<Token> out;
    std::size_t i = 0;
    auto ident_char = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; };
    while (i < s.size()) {
        char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        std::size_t b = i;
        auto emit = [&](Tok k, std::size_t len) {
            out.push_back({k, std::string(s.substr(b, len)), {b, b + len}});
            i = b + len;
        };
        if (s.substr(i, 3) == ">>>")
            emit(Tok::Compose, 3);
        else if (s.substr(i, 3) == "***")
            emit(Tok::Fork, 3);
        else if (s.substr(i, 2) == "==")
            emit(Tok::EqEq, 2);
        else if (c == '>')
            emit(Tok::Gt, 1);
        else if (c == '-')
            emit(Tok::Minus, 1);
        else if (c == '(')
            emit(Tok::LParen, 1);
        else if (c == ')')
            emit(Tok::RParen, 1);
        else if (c == ',')
            emit(Tok::Comma, 1);
        else if (c == '.' && s.substr(i + 1, 3) == "not" && (i + 4 >= s.size() || !ident_char(s[i + 4])))
            emit(Tok::DotNot, 4);
        else if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j])))
                ++j;
            emit(Tok::Int, j - i);
        } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < s.size() && ident_char(s[j]))
                ++j;
            emit(Tok::Ident, j - i);
        } else if (c == '"') {
            std::string text;
            std::size_t j = i + 1;
            for (;; ++j) {
                if (j >= s.size())
                    throw ParseError("unterminated string literal", {b, s.size()});
                if (s[j] == '\\' && j + 1 < s.size()) {
                    text += s[++j];
                    continue;
                }
                if (s[j] == '"')
                    break;
                text += s[j];
            }
            out.push_back({Tok::String, text, {b, j + 1}});
            i = j + 1;
        } else {
            throw ParseError(std::string("unexpected character '") + c + "'", {b, b + 1});
        }
    }
    out.push_back({Tok::End, "", {s.size(), s.size()}});
    return out;
}

struct Parsed {
    OpticExpr expr;
    OpticKind kind;
};

class Parser {
  public:
    Parser(std::string_view text, const Schema &schema) : toks_(lex(text)), schema_(schema) {}

    QueryExpr query() {
        const Token &t = peek();
        QueryOp op;
        if (is_word(t, "get"))
            op = QueryOp::Get;
        else if (is_word(t, "preview"))
            op = QueryOp::Preview;
        else if (is_word(t, "getAll"))
            op = QueryOp::GetAll;
        else
            throw ParseError("expected get, preview or getAll", t.span);
        next();
        expect(Tok::LParen);
        Parsed p = optic();
        const Token &close = expect(Tok::RParen);
        expect(Tok::End);
        return {op, p.expr, {t.span.begin, close.span.end}};
    }

    OpticExpr whole_optic() {
        Parsed p = optic();
        expect(Tok::End);
        return p.expr;
    }

  private:
    const Token &peek() const { return toks_[pos_]; }
    const Token &next() { return toks_[pos_++]; }
    bool is_word(const Token &t, std::string_view w) const { return t.kind == Tok::Ident && t.text == w; }

    const Token &expect(Tok k) {
        const Token &t = peek();
        if (t.kind != k)
            throw ParseError(std::string("expected ") + describe(k) + ", found " + describe(t.kind), t.span);
        return next();
    }

    Parsed optic() {
        Parsed l = fork();
        if (peek().kind != Tok::Compose)
            return l;
        next();
        Parsed r = optic();
        OpticKind k = max_kind(l.kind, r.kind);
        return {optic::seq(k, auto_cast(l.expr, l.kind, k), auto_cast(r.expr, r.kind, k)), k};
    }

    Parsed fork() {
        Parsed l = compare();
        while (peek().kind == Tok::Fork) {
            next();
            Parsed r = compare();
            l = {optic::fork(l.expr, r.expr), OpticKind::Getter};
        }
        return l;
    }

    Parsed compare() {
        Parsed l = diff();
        Tok k = peek().kind;
        if (k != Tok::Gt && k != Tok::EqEq)
            return l;
        next();
        Parsed r = diff();
        auto e = k == Tok::Gt ? optic::gt(l.expr, r.expr) : optic::eq(l.expr, r.expr);
        if (peek().kind == Tok::Gt || peek().kind == Tok::EqEq)
            throw ParseError("comparisons do not associate; add parentheses", peek().span);
        return {e, OpticKind::Getter};
    }

    Parsed diff() {
        Parsed l = postfix();
        while (peek().kind == Tok::Minus) {
            next();
            Parsed r = postfix();
            l = {optic::sub(l.expr, r.expr), OpticKind::Getter};
        }
        return l;
    }

    Parsed postfix() {
        Parsed p = primary();
        while (peek().kind == Tok::DotNot) {
            SourceSpan s{p.expr.span().begin, next().span.end};
            p = {optic::not_(p.expr).with_span(s), OpticKind::Getter};
        }
        return p;
    }

    Value literal() {
        const Token &t = peek();
        if (t.kind == Tok::String) {
            next();
            return Value::string(t.text);
        }
        bool neg = false;
        if (t.kind == Tok::Minus) {
            neg = true;
            next();
        }
        const Token &n = peek();
        if (n.kind == Tok::Int) {
            next();
            std::int64_t v = 0;
            auto [ptr, ec] = std::from_chars(n.text.data(), n.text.data() + n.text.size(), v);
            if (ec != std::errc())
                throw ParseError("integer literal out of range", n.span);
            return Value::integer(neg ? -v : v);
        }
        if (!neg && (is_word(n, "true") || is_word(n, "false"))) {
            next();
            return Value::boolean(n.text == "true");
        }
        throw ParseError(std::string("expected a literal, found ") + describe(n.kind), n.span);
    }

    /// `name(` args `)` for the keyword forms.
    std::vector<Parsed> call_args(std::size_t n) {
        expect(Tok::LParen);
        std::vector<Parsed> args;
        for (std::size_t i = 0; i < n; ++i) {
            if (i)
                expect(Tok::Comma);
            args.push_back(optic());
        }
        last_close_ = expect(Tok::RParen).span.end;
        return args;
    }

    Parsed primary() {
        const Token &t = peek();
        SourceSpan span = t.span;
        auto finish = [&](OpticExpr e, OpticKind k) {
            return Parsed{e.with_span({span.begin, last_close_}), k};
        };
        if (t.kind == Tok::LParen) {
            next();
            Parsed p = optic();
            expect(Tok::RParen);
            return p;
        }
        if (t.kind != Tok::Ident)
            throw ParseError(std::string("expected an optic expression, found ") + describe(t.kind), t.span);
        next();
        last_close_ = t.span.end;
        const std::string &w = t.text;
        if (w == "id" || w == "id_gt")
            return finish(optic::id(OpticKind::Getter), OpticKind::Getter);
        if (w == "id_af")
            return finish(optic::id(OpticKind::Affine), OpticKind::Affine);
        if (w == "id_fl")
            return finish(optic::id(OpticKind::Fold), OpticKind::Fold);
        if (w == "like") {
            Value v = literal();
            last_close_ = toks_[pos_ - 1].span.end;
            return finish(optic::like(v), OpticKind::Getter);
        }
        if (w == "not") {
            auto a = call_args(1);
            return finish(optic::not_(a[0].expr), OpticKind::Getter);
        }
        if (w == "filtered") {
            auto a = call_args(1);
            return finish(optic::filtered(a[0].expr), OpticKind::Affine);
        }
        if (w == "nonEmpty") {
            auto a = call_args(1);
            return finish(optic::non_empty(as_fold(a[0])), OpticKind::Getter);
        }
        if (w == "to_af") {
            auto a = call_args(1);
            return finish(optic::to_af(a[0].expr), OpticKind::Affine);
        }
        if (w == "to_fl") {
            auto a = call_args(1);
            OpticExpr inner = a[0].kind == OpticKind::Getter ? optic::to_af(a[0].expr) : a[0].expr;
            return finish(optic::to_fl(inner), OpticKind::Fold);
        }
        if (w == "empty") {
            auto a = call_args(1);
            return finish(desugar_empty(as_fold(a[0])), OpticKind::Getter);
        }
        if (w == "all" || w == "any") {
            auto a = call_args(2);
            auto e = w == "all" ? desugar_all(as_fold(a[0]), a[1].expr) : desugar_any(as_fold(a[0]), a[1].expr);
            return finish(e, OpticKind::Getter);
        }
        if (w == "elem") {
            expect(Tok::LParen);
            Parsed fl = optic();
            expect(Tok::Comma);
            Value v = literal();
            last_close_ = expect(Tok::RParen).span.end;
            return finish(desugar_elem(as_fold(fl), v), OpticKind::Getter);
        }
        if (is_reserved_word(w))
            throw ParseError("unexpected keyword '" + w + "'", t.span);
        auto candidates = schema_.lookup(w);
        OpticKind k = candidates.empty() ? OpticKind::Getter : candidates.front()->kind;
        for (auto *c : candidates)
            if (c->kind != k)
                throw ParseError("identifier '" + w + "' names optics of different kinds", t.span);
        return finish(optic::prim(w), k);
    }

    OpticExpr as_fold(const Parsed &p) { return auto_cast(p.expr, p.kind, OpticKind::Fold); }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    std::size_t last_close_ = 0;
    const Schema &schema_;
};

enum Level { LCompose = 0, LFork = 1, LCompare = 2, LDiff = 3, LPrimary = 5 };

std::string print(const OpticExpr &e, int ctx) {
    auto wrap = [&](int level, std::string s) { return level < ctx ? "(" + s + ")" : s; };
    switch (e.op()) {
    case OpticOp::ToAf:
    case OpticOp::ToFl: return print(e.arg(0), ctx);
    case OpticOp::IdG: return "id";
    case OpticOp::IdA: return "id_af";
    case OpticOp::IdF: return "id_fl";
    case OpticOp::SeqG:
    case OpticOp::SeqA:
    case OpticOp::SeqF:
        return wrap(LCompose, print(e.arg(0), LFork) + " >>> " + print(e.arg(1), LCompose));
    case OpticOp::Fork: return wrap(LFork, print(e.arg(0), LFork) + " *** " + print(e.arg(1), LCompare));
    case OpticOp::Gt: return wrap(LCompare, print(e.arg(0), LDiff) + " > " + print(e.arg(1), LDiff));
    case OpticOp::Eq: return wrap(LCompare, print(e.arg(0), LDiff) + " == " + print(e.arg(1), LDiff));
    case OpticOp::Sub: return wrap(LDiff, print(e.arg(0), LDiff) + " - " + print(e.arg(1), LPrimary));
    case OpticOp::Like: return "like " + e.constant().to_literal();
    case OpticOp::Not: return "not(" + print(e.arg(0), LCompose) + ")";
    case OpticOp::Filtered: return "filtered(" + print(e.arg(0), LCompose) + ")";
    case OpticOp::NonEmpty: return "nonEmpty(" + print(e.arg(0), LCompose) + ")";
    case OpticOp::Prim: return e.name();
    }
    return "?";
}

} // namespace

OpticExpr parse_optic(std::string_view text, const Schema &schema) { return Parser(text, schema).whole_optic(); }

QueryExpr parse_query(std::string_view text, const Schema &schema) { return Parser(text, schema).query(); }

std::string print_optic(const OpticExpr &e) { return print(e, LCompose); }

std::string print_query(const QueryExpr &q) { return std::string(q.op == QueryOp::Get       ? "get"
                                                                  : q.op == QueryOp::Preview ? "preview"
                                                                                              : "getAll") +
                                                    "(" + print_optic(q.optic) + ")"; }

} // namespace optica
