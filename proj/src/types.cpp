#include "optica/types.hpp"

#include "optica/error.hpp"

namespace optica {

const char *to_string(BaseType t) {
    switch (t) {
    case BaseType::Int: return "Int";
    case BaseType::Bool: return "Bool";
    case BaseType::String: return "String";
    }
    return "?";
}

const char *to_string(OpticKind k) {
    switch (k) {
    case OpticKind::Getter: return "getter";
    case OpticKind::Affine: return "affine";
    case OpticKind::Fold: return "fold";
    }
    return "?";
}

const char *to_string(SqlErrorKind kind) {
    switch (kind) {
    case SqlErrorKind::NotFlatPart: return "NotFlatPart";
    case SqlErrorKind::FoldOverBase: return "FoldOverBase";
    case SqlErrorKind::NoRootFold: return "NoRootFold";
    case SqlErrorKind::MissingPk: return "MissingPk";
    }
    return "?";
}

ModelType ModelType::entity(std::string name) {
    ModelType t;
    t.tag_ = Tag::Entity;
    t.name_ = std::move(name);
    return t;
}

ModelType ModelType::pair(ModelType l, ModelType r) {
    ModelType t;
    t.tag_ = Tag::Pair;
    t.pair_ = std::make_shared<const std::pair<ModelType, ModelType>>(std::move(l), std::move(r));
    return t;
}

ModelType ModelType::var(int id) {
    ModelType t;
    t.tag_ = Tag::Var;
    t.var_ = id;
    return t;
}

bool ModelType::contains_var() const {
    switch (tag_) {
    case Tag::Var: return true;
    case Tag::Pair: return left().contains_var() || right().contains_var();
    default: return false;
    }
}

std::string ModelType::to_string() const {
    switch (tag_) {
    case Tag::Base: return optica::to_string(base_);
    case Tag::Entity: return name_;
    case Tag::Pair: return "(" + left().to_string() + ", " + right().to_string() + ")";
    case Tag::Var: {
        std::string s = "'";
        int n = var_;
        s += static_cast<char>('a' + n % 26);
        if (n >= 26)
            s += std::to_string(n / 26);
        return s;
    }
    }
    return "?";
}

bool operator==(const ModelType &a, const ModelType &b) {
    if (a.tag_ != b.tag_)
        return false;
    switch (a.tag_) {
    case ModelType::Tag::Base: return a.base_ == b.base_;
    case ModelType::Tag::Entity: return a.name_ == b.name_;
    case ModelType::Tag::Var: return a.var_ == b.var_;
    case ModelType::Tag::Pair: return a.left() == b.left() && a.right() == b.right();
    }
    return false;
}

std::string OpticType::to_string() const {
    return std::string(optica::to_string(kind)) + " " + whole.to_string() + " " + part.to_string();
}

std::string QueryType::to_string() const {
    std::string s = source.to_string() + " -> ";
    if (cardinality == Cardinality::Option)
        s += "option ";
    else if (cardinality == Cardinality::Many)
        s += "list ";
    return s + target.to_string();
}

} // namespace optica
