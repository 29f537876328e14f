#pragma once

#include <memory>
#include <string>
#include <utility>

namespace optica {

enum class BaseType { Int, Bool, String };

const char *to_string(BaseType t);

/// Model types: base types, entities, products, and (during inference only) type variables.
class ModelType {
  public:
    enum class Tag { Base, Entity, Pair, Var };

    ModelType() : ModelType(BaseType::Int) {}

    static ModelType base(BaseType t) { return ModelType(t); }
    static ModelType integer() { return ModelType(BaseType::Int); }
    static ModelType boolean() { return ModelType(BaseType::Bool); }
    static ModelType string() { return ModelType(BaseType::String); }
    static ModelType entity(std::string name);
    static ModelType pair(ModelType l, ModelType r);
    static ModelType var(int id);

    Tag tag() const { return tag_; }
    bool is_base() const { return tag_ == Tag::Base; }
    bool is_base(BaseType t) const { return tag_ == Tag::Base && base_ == t; }
    bool is_entity() const { return tag_ == Tag::Entity; }
    bool is_pair() const { return tag_ == Tag::Pair; }
    bool is_var() const { return tag_ == Tag::Var; }
    /// Base or entity; products are not singletons.
    bool is_singleton() const { return is_base() || is_entity(); }

    BaseType base_type() const { return base_; }
    const std::string &entity_name() const { return name_; }
    const ModelType &left() const { return pair_->first; }
    const ModelType &right() const { return pair_->second; }
    int var_id() const { return var_; }

    bool contains_var() const;
    std::string to_string() const;

    friend bool operator==(const ModelType &a, const ModelType &b);
    friend bool operator!=(const ModelType &a, const ModelType &b) { return !(a == b); }

  private:
    explicit ModelType(BaseType t) : tag_(Tag::Base), base_(t) {}

    Tag tag_;
    BaseType base_ = BaseType::Int;
    std::string name_;
    int var_ = 0;
    std::shared_ptr<const std::pair<ModelType, ModelType>> pair_;
};

/// Ordered Getter < Affine < Fold.
enum class OpticKind { Getter = 0, Affine = 1, Fold = 2 };

const char *to_string(OpticKind k);

inline OpticKind max_kind(OpticKind a, OpticKind b) { return a < b ? b : a; }

struct OpticType {
    OpticKind kind = OpticKind::Getter;
    ModelType whole;
    ModelType part;

    std::string to_string() const;
    friend bool operator==(const OpticType &, const OpticType &) = default;
};

enum class Cardinality { One, Option, Many };

struct QueryType {
    ModelType source;
    Cardinality cardinality = Cardinality::One;
    ModelType target;

    /// e.g. `Couples -> list (String, Int)`
    std::string to_string() const;
    friend bool operator==(const QueryType &, const QueryType &) = default;
};

} // namespace optica
