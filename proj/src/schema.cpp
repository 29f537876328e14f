#include "optica/schema.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <set>
#include <sstream>

#include "optica/error.hpp"

namespace optica {

namespace {

const std::set<std::string, std::less<>> kReserved = {
    "id",    "id_gt",    "id_af", "id_fl", "like", "not", "filtered", "nonEmpty", "to_af", "to_fl",
    "empty", "all",      "any",   "elem",  "true", "false", "get",    "preview",  "getAll"};

bool is_identifier(std::string_view s) {
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_'))
        return false;
    return std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

std::string default_element(const std::string &name, OpticKind kind) {
    if (kind == OpticKind::Fold && name.size() > 1 && name.back() == 's')
        return name.substr(0, name.size() - 1);
    return name;
}

} // namespace

bool is_reserved_word(std::string_view word) { return kReserved.find(word) != kReserved.end(); }

Schema::Schema(std::string root, std::vector<std::string> entities, std::vector<PrimOptic> prims)
    : root_(std::move(root)), entities_(std::move(entities)), prims_(std::move(prims)) {
    std::set<std::string> seen;
    for (auto &e : entities_) {
        if (!is_identifier(e))
            throw SchemaError("invalid entity name '" + e + "'");
        if (e == "Int" || e == "Bool" || e == "String")
            throw SchemaError("entity name '" + e + "' clashes with a base type");
        if (!seen.insert(e).second)
            throw SchemaError("duplicate entity " + e);
    }
    if (!has_entity(root_))
        throw SchemaError("unknown entity " + root_ + " declared as root");

    std::set<std::pair<std::string, std::string>> names;
    for (auto &p : prims_) {
        if (!is_identifier(p.name) || is_reserved_word(p.name))
            throw SchemaError("invalid optic name '" + p.name + "'");
        if (!has_entity(p.whole))
            throw SchemaError("unknown entity " + p.whole + " in optic " + p.name);
        if (p.part.is_entity() && !has_entity(p.part.entity_name()))
            throw SchemaError("unknown entity " + p.part.entity_name() + " in optic " + p.name);
        if (!p.part.is_singleton())
            throw SchemaError("optic " + p.name + " must have a base or entity part");
        if (!names.insert({p.whole, p.name}).second)
            throw SchemaError("duplicate optic " + p.name + " on " + p.whole);
        if (p.element.empty())
            p.element = default_element(p.name, p.kind);
    }

    std::set<std::string> reached{root_};
    std::vector<std::string> todo{root_};
    while (!todo.empty()) {
        auto cur = todo.back();
        todo.pop_back();
        for (auto &p : prims_)
            if (p.whole == cur && p.part.is_entity() && reached.insert(p.part.entity_name()).second)
                todo.push_back(p.part.entity_name());
    }
    for (auto &e : entities_)
        if (!reached.count(e))
            throw SchemaError("entity " + e + " is not reachable from root " + root_);
}

bool Schema::has_entity(const std::string &name) const {
    return std::find(entities_.begin(), entities_.end(), name) != entities_.end();
}

std::vector<const PrimOptic *> Schema::lookup(const std::string &name) const {
    std::vector<const PrimOptic *> out;
    for (auto &p : prims_)
        if (p.name == name)
            out.push_back(&p);
    return out;
}

const PrimOptic *Schema::find(const std::string &whole, const std::string &name) const {
    for (auto &p : prims_)
        if (p.whole == whole && p.name == name)
            return &p;
    return nullptr;
}

std::vector<const PrimOptic *> Schema::fields(const std::string &entity) const {
    std::vector<const PrimOptic *> out;
    for (auto &p : prims_)
        if (p.whole == entity)
            out.push_back(&p);
    return out;
}

bool Schema::root_is_collection() const {
    auto f = fields(root_);
    return f.size() == 1 && f[0]->kind == OpticKind::Fold;
}

bool Schema::is_flat(const ModelType &t) const {
    switch (t.tag()) {
    case ModelType::Tag::Base: return true;
    case ModelType::Tag::Pair: return is_flat(t.left()) && is_flat(t.right());
    case ModelType::Tag::Var: return false;
    case ModelType::Tag::Entity:
        for (auto *p : fields(t.entity_name()))
            if (p->kind == OpticKind::Fold || !p->part.is_base())
                return false;
        return true;
    }
    return false;
}

const std::string &PkMap::at(const std::string &entity) const {
    auto it = map_.find(entity);
    if (it == map_.end())
        throw MissingPkError(entity);
    return it->second;
}

void check_pk(const Schema &schema, const PkMap &pk) {
    for (auto &[entity, col] : pk.entries()) {
        if (!schema.has_entity(entity))
            throw SchemaError("pk declared for unknown entity " + entity);
        auto *p = schema.find(entity, col);
        if (!p || p->kind != OpticKind::Getter || !p->part.is_base())
            throw SchemaError("pk column " + col + " of " + entity + " is not a getter field with a base type");
    }
}

namespace {

OpticKind parse_kind(const std::string &s, int line) {
    if (s == "getter")
        return OpticKind::Getter;
    if (s == "affine")
        return OpticKind::Affine;
    if (s == "fold")
        return OpticKind::Fold;
    throw SchemaError("line " + std::to_string(line) + ": unknown optic kind '" + s + "'");
}

ModelType parse_part(const std::string &s) {
    if (s == "Int")
        return ModelType::integer();
    if (s == "Bool")
        return ModelType::boolean();
    if (s == "String")
        return ModelType::string();
    return ModelType::entity(s);
}

} // namespace

SchemaFile parse_schema_file(std::string_view text) {
    std::optional<std::string> root;
    std::vector<std::string> entities;
    std::vector<PrimOptic> prims;
    std::vector<std::pair<std::string, std::string>> pks;

    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        std::istringstream ls(line);
        std::vector<std::string> w;
        for (std::string tok; ls >> tok;)
            w.push_back(tok);
        if (w.empty())
            continue;
        auto bad = [&] { return SchemaError("line " + std::to_string(lineno) + ": malformed declaration"); };
        if (w[0] == "root") {
            if (w.size() != 2)
                throw bad();
            if (root)
                throw SchemaError("line " + std::to_string(lineno) + ": root declared twice");
            root = w[1];
        } else if (w[0] == "entity") {
            if (w.size() != 2)
                throw bad();
            entities.push_back(w[1]);
        } else if (w[0] == "optic") {
            // optic name : kind Whole Part [as element]
            if ((w.size() != 6 && w.size() != 8) || w[2] != ":")
                throw bad();
            PrimOptic p{w[1], parse_kind(w[3], lineno), w[4], parse_part(w[5]), ""};
            if (w.size() == 8) {
                if (w[6] != "as" || !is_identifier(w[7]))
                    throw bad();
                p.element = w[7];
            }
            prims.push_back(std::move(p));
        } else if (w[0] == "pk") {
            if (w.size() != 3)
                throw bad();
            pks.emplace_back(w[1], w[2]);
        } else {
            throw SchemaError("line " + std::to_string(lineno) + ": unknown declaration '" + w[0] + "'");
        }
    }
    if (!root)
        throw SchemaError("missing root declaration");
    SchemaFile out{Schema(*root, std::move(entities), std::move(prims)), {}};
    for (auto &[e, c] : pks)
        out.pk.set(e, c);
    check_pk(out.schema, out.pk);
    return out;
}

Schema load_schema(std::string_view text) { return parse_schema_file(text).schema; }

} // namespace optica
