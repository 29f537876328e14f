#pragma once

#include <string>

#include "optica/ast.hpp"

namespace optica::xquery {

/// Relative XQuery expression for a checked optic.
std::string xq_optic(const OpticExpr &e);

/// Absolute query rooted at the document's `<xml>` element.
std::string xq_query(const QueryExpr &q);

} // namespace optica::xquery
