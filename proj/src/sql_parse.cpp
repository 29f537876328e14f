#include "optica/sql.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>

namespace optica::sql {

namespace {

struct Tok {
    enum Kind { Word, Number, String, Punct, End } kind;
    std::string text;
    std::size_t pos;
};

std::vector<Tok> lex(std::string_view s) {
    std::vector<Tok> out;
    std::size_t i = 0;
    while (i < s.size()) {
        char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
        } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_'))
                ++j;
            out.push_back({Tok::Word, std::string(s.substr(i, j - i)), i});
            i = j;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j])))
                ++j;
            out.push_back({Tok::Number, std::string(s.substr(i, j - i)), i});
            i = j;
        } else if (c == '"' || c == '\'') {
            std::string text;
            std::size_t j = i + 1;
            for (;; ++j) {
                if (j >= s.size())
                    throw ExecError("unterminated SQL string literal");
                if (s[j] == c) {
                    if (j + 1 < s.size() && s[j + 1] == c) {
                        text += c;
                        ++j;
                        continue;
                    }
                    break;
                }
                text += s[j];
            }
            out.push_back({Tok::String, text, i});
            i = j + 1;
        } else if (std::string_view("().,*=>-;").find(c) != std::string_view::npos) {
            out.push_back({Tok::Punct, std::string(1, c), i});
            ++i;
        } else {
            throw ExecError(std::string("unexpected character '") + c + "' in SQL");
        }
    }
    out.push_back({Tok::End, "", s.size()});
    return out;
}

std::string upper(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::toupper(c); });
    return s;
}

class Parser {
  public:
    explicit Parser(std::string_view text) : toks_(lex(text)) {}

    Select statement() {
        Select s = select();
        accept_punct(";");
        if (peek().kind != Tok::End)
            fail("trailing input");
        return s;
    }

  private:
    const Tok &peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
    [[noreturn]] void fail(const std::string &msg) const {
        throw ExecError("SQL parse error at offset " + std::to_string(peek().pos) + ": " + msg);
    }
    bool is_kw(const Tok &t, const char *kw) const { return t.kind == Tok::Word && upper(t.text) == kw; }
    bool accept_kw(const char *kw) {
        if (!is_kw(peek(), kw))
            return false;
        ++pos_;
        return true;
    }
    void expect_kw(const char *kw) {
        if (!accept_kw(kw))
            fail(std::string("expected ") + kw);
    }
    bool accept_punct(const char *p) {
        if (peek().kind != Tok::Punct || peek().text != p)
            return false;
        ++pos_;
        return true;
    }
    void expect_punct(const char *p) {
        if (!accept_punct(p))
            fail(std::string("expected '") + p + "'");
    }
    std::string ident() {
        static const char *reserved[] = {"SELECT", "FROM", "WHERE", "INNER", "JOIN", "ON", "USING", "AND", "AS"};
        const Tok &t = peek();
        if (t.kind != Tok::Word)
            fail("expected identifier");
        for (auto *r : reserved)
            if (upper(t.text) == r)
                fail("expected identifier, found " + t.text);
        ++pos_;
        return t.text;
    }

    Select select() {
        expect_kw("SELECT");
        Select s;
        do
            s.items.push_back(expr());
        while (accept_punct(","));
        if (accept_kw("FROM")) {
            From f;
            f.table = ident();
            accept_kw("AS");
            f.alias = ident();
            while (accept_kw("INNER")) {
                expect_kw("JOIN");
                Join j;
                j.table = ident();
                accept_kw("AS");
                j.alias = ident();
                if (accept_kw("USING")) {
                    bool paren = accept_punct("(");
                    j.cond.using_column = ident();
                    if (paren)
                        expect_punct(")");
                } else {
                    expect_kw("ON");
                    Expr e = expr();
                    if (e.kind != Expr::Kind::Binary || e.name != "=")
                        fail("join condition must be an equality");
                    j.cond.left = e.kids[0];
                    j.cond.right = e.kids[1];
                }
                f.joins.push_back(std::move(j));
            }
            s.from = std::move(f);
        }
        if (accept_kw("WHERE")) {
            do
                s.where.push_back(comparison());
            while (accept_kw("AND"));
        }
        return s;
    }

    /// A full condition, including AND chains, as found inside parentheses.
    Expr expr() {
        Expr e = comparison();
        while (accept_kw("AND"))
            e = Expr::binary("AND", e, comparison());
        return e;
    }

    Expr comparison() {
        Expr l = difference();
        if (accept_punct("="))
            return Expr::binary("=", l, difference());
        if (accept_punct(">"))
            return Expr::binary(">", l, difference());
        return l;
    }

    Expr difference() {
        Expr l = postfix();
        while (accept_punct("-"))
            l = Expr::binary("-", l, postfix());
        return l;
    }

    Expr postfix() {
        Expr e = primary();
        if (accept_kw("IS")) {
            expect_kw("NOT");
            expect_kw("NULL");
            return Expr::is_not_null(e);
        }
        return e;
    }

    Expr primary() {
        const Tok &t = peek();
        if (accept_punct("(")) {
            if (peek().kind == Tok::Punct && peek().text == "-" && peek(1).kind == Tok::Number) {
                ++pos_;
                Expr n = number(true);
                expect_punct(")");
                return n;
            }
            Expr e = expr();
            expect_punct(")");
            return e;
        }
        if (t.kind == Tok::Number)
            return number(false);
        if (t.kind == Tok::String) {
            ++pos_;
            return Expr::lit(Value::string(t.text));
        }
        if (accept_kw("TRUE"))
            return Expr::lit(Value::boolean(true));
        if (accept_kw("FALSE"))
            return Expr::lit(Value::boolean(false));
        if (accept_kw("NOT")) {
            expect_punct("(");
            Expr e = expr();
            expect_punct(")");
            return Expr{Expr::Kind::Not, "", "", Value(), {e}, nullptr};
        }
        if (accept_kw("EXISTS")) {
            expect_punct("(");
            Select s = select();
            expect_punct(")");
            return Expr::exists(std::move(s));
        }
        std::string alias = ident();
        expect_punct(".");
        if (accept_punct("*"))
            return Expr::star(alias);
        return Expr::column(alias, ident());
    }

    Expr number(bool negative) {
        const Tok &t = peek();
        if (t.kind != Tok::Number)
            fail("expected a number");
        ++pos_;
        std::int64_t v = 0;
        std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        return Expr::lit(Value::integer(negative ? -v : v));
    }

    std::vector<Tok> toks_;
    std::size_t pos_ = 0;
};

class Matcher {
  public:
    std::optional<std::string> select(const Select &a, const Select &b) {
        auto saved_ab = ab_, saved_ba = ba_;
        auto result = select_in_scope(a, b);
        ab_ = std::move(saved_ab);
        ba_ = std::move(saved_ba);
        return result;
    }

  private:
    std::optional<std::string> select_in_scope(const Select &a, const Select &b) {
        if (a.from.has_value() != b.from.has_value())
            return "FROM present on one side only";
        if (a.from) {
            if (a.from->table != b.from->table)
                return "FROM table " + a.from->table + " vs " + b.from->table;
            if (auto m = bind(a.from->alias, b.from->alias))
                return m;
            if (a.from->joins.size() != b.from->joins.size())
                return "join count " + std::to_string(a.from->joins.size()) + " vs " +
                       std::to_string(b.from->joins.size());
            for (std::size_t i = 0; i < a.from->joins.size(); ++i) {
                auto &ja = a.from->joins[i];
                auto &jb = b.from->joins[i];
                if (ja.table != jb.table)
                    return "join table " + ja.table + " vs " + jb.table;
                if (auto m = bind(ja.alias, jb.alias))
                    return m;
                if (ja.cond.using_column != jb.cond.using_column)
                    return "join condition kinds differ on " + ja.table;
                if (!ja.cond.using_column) {
                    if (auto m = expr(ja.cond.left, jb.cond.left))
                        return m;
                    if (auto m = expr(ja.cond.right, jb.cond.right))
                        return m;
                }
            }
        }
        if (a.items.size() != b.items.size())
            return "select list length differs";
        for (std::size_t i = 0; i < a.items.size(); ++i)
            if (auto m = expr(a.items[i], b.items[i]))
                return m;
        auto ca = a.conjuncts(), cb = b.conjuncts();
        if (ca.size() != cb.size())
            return "WHERE has " + std::to_string(ca.size()) + " vs " + std::to_string(cb.size()) + " conjuncts";
        for (std::size_t i = 0; i < ca.size(); ++i)
            if (auto m = expr(ca[i], cb[i]))
                return m;
        return std::nullopt;
    }

    std::optional<std::string> bind(const std::string &a, const std::string &b) {
        if (ab_.count(a) || ba_.count(b))
            return "alias " + a + " or " + b + " bound twice";
        ab_[a] = b;
        ba_[b] = a;
        return std::nullopt;
    }

    std::optional<std::string> alias(const std::string &a, const std::string &b) const {
        auto it = ab_.find(a);
        if (it == ab_.end() || it->second != b)
            return "alias " + a + " does not correspond to " + b;
        return std::nullopt;
    }

    std::optional<std::string> expr(const Expr &a, const Expr &b) {
        if (a.kind != b.kind)
            return "expression shapes differ";
        switch (a.kind) {
        case Expr::Kind::Column:
            if (a.name != b.name)
                return "column " + a.name + " vs " + b.name;
            return alias(a.alias, b.alias);
        case Expr::Kind::Star: return alias(a.alias, b.alias);
        case Expr::Kind::Literal:
            if (a.literal != b.literal)
                return "literal " + a.literal.to_string() + " vs " + b.literal.to_string();
            return std::nullopt;
        case Expr::Kind::Exists: return select(*a.sub, *b.sub);
        case Expr::Kind::Binary:
            if (a.name != b.name)
                return "operator " + a.name + " vs " + b.name;
            [[fallthrough]];
        case Expr::Kind::Not:
        case Expr::Kind::IsNotNull:
            for (std::size_t i = 0; i < a.kids.size(); ++i)
                if (auto m = expr(a.kids[i], b.kids[i]))
                    return m;
            return std::nullopt;
        }
        return "unknown expression";
    }

    std::map<std::string, std::string> ab_, ba_;
};

} // namespace

Select parse_sql(std::string_view text) { return Parser(text).statement(); }

std::optional<std::string> alpha_mismatch(const Select &a, const Select &b) { return Matcher().select(a, b); }

} // namespace optica::sql
