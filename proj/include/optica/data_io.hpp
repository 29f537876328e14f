#pragma once

#include <string>
#include <string_view>

#include "optica/schema.hpp"
#include "optica/value.hpp"

namespace optica {

/// Reads an XML (element-per-optic under `<xml>`) or JSON document; the format is
/// detected from the first non-blank character. Throws DataError.
Value load_value(std::string_view text, const Schema &schema);
Value load_value_xml(std::string_view text, const Schema &schema);
Value load_value_json(std::string_view text, const Schema &schema);

/// Inverse of load_value_xml.
std::string print_xml(const Value &v, const Schema &schema);

/// Checks that a value conforms to the schema type; throws DataError.
void check_value(const Value &v, const ModelType &type, const Schema &schema);

} // namespace optica
