#pragma once

#include <string>
#include <string_view>

#include "optica/ast.hpp"

namespace optica {

/// Grammar, loosest binding first:
///   optic   := fork ('>>>' optic)?           right associative
///   fork    := compare ('***' compare)*
///   compare := diff (('>' | '==') diff)?
///   diff    := postfix ('-' postfix)*
///   postfix := primary ('.not')*
///   primary := ident | id | id_af | id_fl | like <lit> | not(e) | filtered(e) | nonEmpty(e)
///            | to_af(e) | to_fl(e) | empty(e) | all(e, e) | any(e, e) | elem(e, <lit>) | '(' optic ')'
/// The schema supplies primitive kinds so casts can be inserted; unknown names are left
/// for the type checker to report. Throws ParseError.
OpticExpr parse_optic(std::string_view text, const Schema &schema);

/// `get(...)`, `preview(...)` or `getAll(...)`.
QueryExpr parse_query(std::string_view text, const Schema &schema);

/// Surface syntax without cast nodes; parse_optic of the result rebuilds the casts.
std::string print_optic(const OpticExpr &e);
std::string print_query(const QueryExpr &q);

} // namespace optica
