#include "optica/sql.hpp"

namespace optica::sql {

namespace {

class Printer {
  public:
    explicit Printer(Quote q) : quote_(q == Quote::Double ? '"' : '\'') {}

    std::string statement(const Select &s) {
        std::string out = "SELECT ";
        for (std::size_t i = 0; i < s.items.size(); ++i)
            out += (i ? ", " : "") + expr(s.items[i]);
        if (s.from) {
            out += " FROM " + s.from->table + " AS " + s.from->alias;
            for (auto &j : s.from->joins) {
                out += " INNER JOIN " + j.table + " AS " + j.alias;
                if (j.cond.using_column)
                    out += " USING (" + *j.cond.using_column + ")";
                else
                    out += " ON " + expr(j.cond.left) + " = " + expr(j.cond.right);
            }
        }
        std::vector<const Expr *> conj;
        for (auto &w : s.where)
            conj.push_back(&w);
        if (s.correlation)
            conj.push_back(&*s.correlation);
        out += " WHERE ";
        if (s.where.empty())
            out += "True";
        bool several = conj.size() + (s.where.empty() ? 1 : 0) > 1;
        for (std::size_t i = 0; i < conj.size(); ++i) {
            if (i > 0 || s.where.empty())
                out += " AND ";
            out += several ? operand(*conj[i]) : expr(*conj[i]);
        }
        return out;
    }

  private:
    std::string literal(const Value &v) const {
        switch (v.tag()) {
        case Value::Tag::Bool: return v.as_bool() ? "True" : "False";
        case Value::Tag::Int: return v.as_int() < 0 ? "(" + v.to_string() + ")" : v.to_string();
        default: {
            std::string s(1, quote_);
            for (char c : v.as_string()) {
                if (c == quote_)
                    s += c;
                s += c;
            }
            return s + quote_;
        }
        }
    }

    /// Binary operands and multi-conjunct members get parentheses.
    std::string operand(const Expr &e) {
        if (e.kind == Expr::Kind::Binary || e.kind == Expr::Kind::IsNotNull)
            return "(" + expr(e) + ")";
        return expr(e);
    }

    std::string expr(const Expr &e) {
        switch (e.kind) {
        case Expr::Kind::Column: return e.alias + "." + e.name;
        case Expr::Kind::Star: return e.alias + ".*";
        case Expr::Kind::Literal: return literal(e.literal);
        case Expr::Kind::Not: return "NOT(" + expr(e.kids[0]) + ")";
        case Expr::Kind::Binary: return operand(e.kids[0]) + " " + e.name + " " + operand(e.kids[1]);
        case Expr::Kind::Exists: return "EXISTS(" + statement(*e.sub) + ")";
        case Expr::Kind::IsNotNull: return operand(e.kids[0]) + " IS NOT NULL";
        }
        return "?";
    }

    char quote_;
};

} // namespace

std::string print_sql(const Select &s, Quote quote) { return Printer(quote).statement(s) + ";"; }

} // namespace optica::sql
