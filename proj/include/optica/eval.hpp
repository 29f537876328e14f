#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "optica/ast.hpp"

namespace optica {

struct ResultSet {
    Cardinality cardinality = Cardinality::Many;
    /// One: exactly one value; Option: zero or one; Many: any number.
    std::vector<Value> values;

    std::string to_string() const;
    friend bool operator==(const ResultSet &, const ResultSet &) = default;
};

/// Standard semantics over the uniform list encoding. `e` must be checked.
std::vector<Value> eval_optic(const OpticExpr &e, const Value &input);
ResultSet eval_query(const QueryExpr &q, const Value &input);

/// Brute-force derived combinators computed straight from the result lists of `fl` and `p`.
namespace oracle {
bool empty(const OpticExpr &fl, const Value &input);
bool all(const OpticExpr &fl, const OpticExpr &p, const Value &input);
bool any(const OpticExpr &fl, const OpticExpr &p, const Value &input);
bool elem(const OpticExpr &fl, const Value &a, const Value &input);
} // namespace oracle

} // namespace optica
