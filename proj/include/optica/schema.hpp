#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "optica/types.hpp"

namespace optica {

struct PrimOptic {
    std::string name;
    OpticKind kind = OpticKind::Getter;
    std::string whole;
    ModelType part;
    /// XML element name used for this optic.
    std::string element;

    OpticType type() const { return {kind, ModelType::entity(whole), part}; }
};

class Schema {
  public:
    /// Validates the declarations; throws SchemaError.
    Schema(std::string root, std::vector<std::string> entities, std::vector<PrimOptic> prims);

    ModelType root() const { return ModelType::entity(root_); }
    const std::string &root_entity() const { return root_; }
    const std::vector<std::string> &entities() const { return entities_; }
    const std::vector<PrimOptic> &prims() const { return prims_; }

    bool has_entity(const std::string &name) const;
    /// All prims with this name, whatever their whole.
    std::vector<const PrimOptic *> lookup(const std::string &name) const;
    const PrimOptic *find(const std::string &whole, const std::string &name) const;
    /// Prims of an entity in declaration order.
    std::vector<const PrimOptic *> fields(const std::string &entity) const;

    /// Root entity whose only field is a fold; its values are bare lists.
    bool root_is_collection() const;
    /// Base types, entities with only single-valued base fields, and products of those.
    bool is_flat(const ModelType &t) const;

  private:
    std::string root_;
    std::vector<std::string> entities_;
    std::vector<PrimOptic> prims_;
};

class PkMap {
  public:
    PkMap() = default;
    PkMap(std::initializer_list<std::pair<const std::string, std::string>> init) : map_(init) {}

    void set(const std::string &entity, const std::string &column) { map_[entity] = column; }
    bool contains(const std::string &entity) const { return map_.count(entity) != 0; }
    /// Throws MissingPkError.
    const std::string &at(const std::string &entity) const;
    const std::map<std::string, std::string> &entries() const { return map_; }

  private:
    std::map<std::string, std::string> map_;
};

struct SchemaFile {
    Schema schema;
    PkMap pk;
};

/// Line-oriented schema source:
///   root <Entity>
///   entity <Name>
///   optic <name> : <getter|affine|fold> <Whole> <Int|Bool|String|Entity> [as <element>]
///   pk <Entity> <column>
SchemaFile parse_schema_file(std::string_view text);
/// Every pk column must be a single-valued base field of its entity; throws SchemaError.
void check_pk(const Schema &schema, const PkMap &pk);
Schema load_schema(std::string_view text);

/// Words reserved by the query language; not usable as optic names.
bool is_reserved_word(std::string_view word);

} // namespace optica
