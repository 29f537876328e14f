#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "optica/ast.hpp"
#include "optica/schema.hpp"
#include "optica/triplet.hpp"
#include "optica/value.hpp"

namespace optica::sql {

struct Select;

struct Expr {
    enum class Kind { Column, Star, Literal, Not, Binary, Exists, IsNotNull };
    Kind kind;
    std::string alias;  // Column, Star
    std::string name;   // Column: column name; Binary: operator (">", "=", "-", "AND")
    Value literal;
    std::vector<Expr> kids;
    std::shared_ptr<const Select> sub; // Exists

    static Expr column(std::string alias, std::string col);
    static Expr star(std::string alias);
    static Expr lit(Value v);
    /// Collapses NOT(NOT(x)) to x.
    static Expr negate(Expr e);
    static Expr binary(std::string op, Expr l, Expr r);
    static Expr exists(Select s);
    static Expr is_not_null(Expr e);
};

struct JoinCondition {
    /// USING (column) when set, otherwise ON left = right.
    std::optional<std::string> using_column;
    Expr left, right;
};

struct Join {
    std::string table;
    std::string alias;
    JoinCondition cond;
};

struct From {
    std::string table;
    std::string alias;
    std::vector<Join> joins;
};

struct Select {
    std::vector<Expr> items;
    std::optional<From> from;
    /// Restrictions; printed as `True` when empty.
    std::vector<Expr> where;
    /// Link between a nested query and its enclosing one.
    std::optional<Expr> correlation;

    /// Restrictions and correlation as one conjunct list, without literal `True`s.
    std::vector<Expr> conjuncts() const;
};

/// SQL for a checked getAll query over shredded tables. Throws SqlGenError.
Select gen_sql(const QueryExpr &q, const Schema &schema, const PkMap &pk);

enum class Quote { Double, Single };

std::string print_sql(const Select &s, Quote quote = Quote::Double);

struct ExecOptions {
    /// When set, `alias.*` yields the entity's single-valued fields in declaration order
    /// (the nested record's shape) rather than every table column.
    const Schema *schema = nullptr;
};

/// Bag-semantics evaluation of the generated subset. Throws ExecError.
std::vector<Row> exec_sql(const Select &s, const Database &db, ExecOptions opts = {});

/// Parses the generated subset (plus optional AS and unparenthesised USING), for golden comparison.
Select parse_sql(std::string_view text);

/// Empty when the statements are equal up to a consistent renaming of aliases; otherwise
/// a description of the first difference.
std::optional<std::string> alpha_mismatch(const Select &a, const Select &b);
inline bool alpha_equivalent(const Select &a, const Select &b) { return !alpha_mismatch(a, b); }

} // namespace optica::sql
