#pragma once

#include "optica/schema.hpp"
#include "optica/value.hpp"

namespace optica {

/// Nested value to relational tables, one per non-root entity in declaration order.
/// Getter/affine entity fields become foreign keys holding the target's pk; fold children
/// carry their parent's pk in an extra column named like the parent's pk column.
/// Throws DataError on pk collisions and MissingPkError when a needed key is undeclared.
Database shred(const Value &v, const Schema &schema, const PkMap &pk);

/// Columns of an entity's table: its single-valued fields, then the parent key column if any.
std::vector<std::string> table_columns(const std::string &entity, const Schema &schema, const PkMap &pk);

/// The entity owning `entity` through a fold, if that owner is not the root.
const PrimOptic *fold_parent(const std::string &entity, const Schema &schema);

} // namespace optica
