#include "optica/shred.hpp"

#include <map>

#include "optica/error.hpp"

namespace optica {

const PrimOptic *fold_parent(const std::string &entity, const Schema &schema) {
    const PrimOptic *found = nullptr;
    for (auto &p : schema.prims()) {
        if (p.kind != OpticKind::Fold || !p.part.is_entity() || p.part.entity_name() != entity ||
            p.whole == schema.root_entity())
            continue;
        if (found && found->whole != p.whole)
            throw SchemaError("entity " + entity + " is nested under both " + found->whole + " and " + p.whole);
        found = &p;
    }
    return found;
}

std::vector<std::string> table_columns(const std::string &entity, const Schema &schema, const PkMap &pk) {
    std::vector<std::string> cols;
    for (auto *p : schema.fields(entity))
        if (p->kind != OpticKind::Fold)
            cols.push_back(p->name);
    if (auto *parent = fold_parent(entity, schema)) {
        const auto &key = pk.at(parent->whole);
        for (auto &c : cols)
            if (c == key)
                throw SchemaError("parent key column " + key + " clashes with a field of " + entity);
        cols.push_back(key);
    }
    return cols;
}

namespace {

class Shredder {
  public:
    Shredder(const Schema &schema, const PkMap &pk) : schema_(schema), pk_(pk) {
        for (auto &e : schema.entities()) {
            if (e == schema.root_entity())
                continue;
            db_.tables.push_back({e, table_columns(e, schema, pk), {}});
            index_[e] = db_.tables.size() - 1;
        }
    }

    void root(const Value &v) {
        const auto &root = schema_.root_entity();
        if (schema_.root_is_collection()) {
            auto *p = schema_.fields(root).front();
            fold_children(*p, v.items(), std::nullopt);
            return;
        }
        for (auto *p : schema_.fields(root)) {
            const Value &f = field(v, *p);
            if (!p->part.is_entity())
                continue;
            if (p->kind == OpticKind::Getter)
                entity(f, p->part.entity_name(), std::nullopt);
            else
                fold_children(*p, f.items(), std::nullopt);
        }
    }

    Database take() { return std::move(db_); }

  private:
    const Value &field(const Value &record, const PrimOptic &p) const {
        const Value *f = record.field(p.name);
        if (!f)
            throw DataError("record " + record.entity() + " lacks field " + p.name);
        return *f;
    }

    void fold_children(const PrimOptic &p, const std::vector<Value> &items, const Cell &parent_key) {
        if (!p.part.is_entity())
            throw DataError("fold " + p.name + " over base values cannot be shredded into a table");
        for (auto &item : items)
            entity(item, p.part.entity_name(), parent_key);
    }

    Cell reference(const Value &v, const std::string &target) {
        pk_.at(target);
        return entity(v, target, std::nullopt);
    }

    /// Inserts the record's row and returns its pk value, if the entity has one.
    Cell entity(const Value &v, const std::string &name, const Cell &parent_key) {
        Row row;
        std::vector<const PrimOptic *> folds;
        for (auto *p : schema_.fields(name)) {
            const Value &f = field(v, *p);
            switch (p->kind) {
            case OpticKind::Getter:
                row.push_back(p->part.is_base() ? Cell(f) : reference(f, p->part.entity_name()));
                break;
            case OpticKind::Affine:
                if (f.items().empty())
                    row.push_back(std::nullopt);
                else if (p->part.is_base())
                    row.push_back(f.items().front());
                else
                    row.push_back(reference(f.items().front(), p->part.entity_name()));
                break;
            case OpticKind::Fold: folds.push_back(p); break;
            }
        }
        if (fold_parent(name, schema_))
            row.push_back(parent_key);

        RelTable &table = db_.tables[index_.at(name)];
        Cell key;
        if (pk_.contains(name)) {
            auto col = *table.column_index(pk_.at(name));
            key = row[col];
            auto &seen = keys_[name];
            auto it = seen.find(*key);
            if (it == seen.end()) {
                seen.emplace(*key, table.rows.size());
                table.rows.push_back(row);
            } else if (table.rows[it->second] != row) {
                throw DataError("primary key collision in table " + name + " for " + key->to_string());
            } else {
                return key;
            }
        } else {
            table.rows.push_back(row);
        }

        if (!folds.empty() && !key)
            throw MissingPkError(name);
        for (auto *p : folds)
            fold_children(*p, field(v, *p).items(), key);
        return key;
    }

    const Schema &schema_;
    const PkMap &pk_;
    Database db_;
    std::map<std::string, std::size_t> index_;
    std::map<std::string, std::map<Value, std::size_t>> keys_;
};

} // namespace

Database shred(const Value &v, const Schema &schema, const PkMap &pk) {
    Shredder s(schema, pk);
    s.root(v);
    return s.take();
}

} // namespace optica
