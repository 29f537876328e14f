#include "optica/sql.hpp"

namespace optica::sql {

namespace {

struct Binding {
    std::string alias;
    const RelTable *table;
    const Row *row;
};

/// Bindings visible to an expression; `outer` links to the enclosing statement's row.
struct Env {
    std::vector<Binding> local;
    const Env *outer = nullptr;

    const Binding *find(const std::string &alias) const {
        for (auto &b : local)
            if (b.alias == alias)
                return &b;
        return outer ? outer->find(alias) : nullptr;
    }
};

class Executor {
  public:
    Executor(const Database &db, ExecOptions opts) : db_(db), opts_(opts) {}

    std::vector<Row> run(const Select &s, const Env *outer) {
        std::vector<Row> out;
        for (auto &env : candidates(s, outer)) {
            if (!passes(s, env))
                continue;
            Row row;
            for (auto &item : s.items)
                project(item, env, row);
            out.push_back(std::move(row));
        }
        return out;
    }

    bool any(const Select &s, const Env *outer) {
        for (auto &env : candidates(s, outer))
            if (passes(s, env))
                return true;
        return false;
    }

  private:
    std::vector<Env> candidates(const Select &s, const Env *outer) {
        std::vector<Env> envs;
        if (!s.from) {
            envs.push_back(Env{{}, outer});
            return envs;
        }
        const RelTable &first = db_.at(s.from->table);
        for (auto &r : first.rows)
            envs.push_back(Env{{{s.from->alias, &first, &r}}, outer});
        for (auto &j : s.from->joins) {
            const RelTable &t = db_.at(j.table);
            std::string left_alias;
            if (j.cond.using_column) {
                left_alias = using_source(*j.cond.using_column, s, j);
                if (!t.column_index(*j.cond.using_column))
                    throw ExecError("USING column " + *j.cond.using_column + " not in " + j.table);
            }
            std::vector<Env> next;
            for (auto &env : envs)
                for (auto &r : t.rows) {
                    Env e = env;
                    e.local.push_back({j.alias, &t, &r});
                    std::optional<bool> ok;
                    if (j.cond.using_column)
                        ok = equal(cell(Expr::column(left_alias, *j.cond.using_column), e),
                                   cell(Expr::column(j.alias, *j.cond.using_column), e));
                    else
                        ok = equal(cell(j.cond.left, e), cell(j.cond.right, e));
                    if (ok.value_or(false))
                        next.push_back(std::move(e));
                }
            envs = std::move(next);
        }
        return envs;
    }

    /// The single table joined so far that has `col`.
    std::string using_source(const std::string &col, const Select &s, const Join &upto) {
        std::vector<std::pair<std::string, std::string>> left{{s.from->alias, s.from->table}};
        for (auto &j : s.from->joins) {
            if (&j == &upto)
                break;
            left.emplace_back(j.alias, j.table);
        }
        std::string found;
        for (auto &[alias, table] : left) {
            if (!db_.at(table).column_index(col))
                continue;
            if (!found.empty())
                throw ExecError("USING column " + col + " is ambiguous");
            found = alias;
        }
        if (found.empty())
            throw ExecError("USING column " + col + " not found on the left side of the join");
        return found;
    }

    bool passes(const Select &s, const Env &env) {
        for (auto &w : s.where)
            if (!truth(w, env))
                return false;
        return !s.correlation || truth(*s.correlation, env);
    }

    bool truth(const Expr &e, const Env &env) {
        Cell c = cell(e, env);
        if (!c)
            return false;
        if (c->tag() != Value::Tag::Bool)
            throw ExecError("condition is not boolean: " + c->to_string());
        return c->as_bool();
    }

    const Binding &binding(const std::string &alias, const Env &env) {
        const Binding *b = env.find(alias);
        if (!b)
            throw ExecError("unknown alias " + alias);
        return *b;
    }

    void project(const Expr &e, const Env &env, Row &row) {
        if (e.kind != Expr::Kind::Star) {
            row.push_back(cell(e, env));
            return;
        }
        const Binding &b = binding(e.alias, env);
        if (opts_.schema && opts_.schema->has_entity(b.table->name)) {
            for (auto *p : opts_.schema->fields(b.table->name))
                if (p->kind != OpticKind::Fold)
                    row.push_back((*b.row)[*b.table->column_index(p->name)]);
            return;
        }
        row.insert(row.end(), b.row->begin(), b.row->end());
    }

    static std::optional<bool> equal(const Cell &a, const Cell &b) {
        if (!a || !b)
            return std::nullopt;
        if (a->tag() != b->tag())
            throw ExecError("type mismatch comparing " + a->to_string() + " and " + b->to_string());
        return *a == *b;
    }

    Cell cell(const Expr &e, const Env &env) {
        switch (e.kind) {
        case Expr::Kind::Column: {
            const Binding &b = binding(e.alias, env);
            auto i = b.table->column_index(e.name);
            if (!i)
                throw ExecError("unknown column " + e.alias + "." + e.name);
            return (*b.row)[*i];
        }
        case Expr::Kind::Star: throw ExecError("* is only allowed in the select list");
        case Expr::Kind::Literal: return e.literal;
        case Expr::Kind::Not: {
            Cell c = cell(e.kids[0], env);
            if (!c)
                return std::nullopt;
            if (c->tag() != Value::Tag::Bool)
                throw ExecError("NOT applied to " + c->to_string());
            return Value::boolean(!c->as_bool());
        }
        case Expr::Kind::IsNotNull: return Value::boolean(cell(e.kids[0], env).has_value());
        case Expr::Kind::Exists: return Value::boolean(any(*e.sub, &env));
        case Expr::Kind::Binary: break;
        }
        if (e.name == "AND") {
            Cell l = cell(e.kids[0], env), r = cell(e.kids[1], env);
            if ((l && !l->as_bool()) || (r && !r->as_bool()))
                return Value::boolean(false);
            if (!l || !r)
                return std::nullopt;
            return Value::boolean(true);
        }
        Cell l = cell(e.kids[0], env), r = cell(e.kids[1], env);
        if (e.name == "=") {
            auto b = equal(l, r);
            return b ? Cell(Value::boolean(*b)) : std::nullopt;
        }
        if (!l || !r)
            return std::nullopt;
        if (l->tag() != Value::Tag::Int || r->tag() != Value::Tag::Int)
            throw ExecError("operator " + e.name + " needs integers, got " + l->to_string() + " and " + r->to_string());
        if (e.name == ">")
            return Value::boolean(l->as_int() > r->as_int());
        if (e.name == "-")
            return Value::integer(l->as_int() - r->as_int());
        throw ExecError("unsupported operator " + e.name);
    }

    const Database &db_;
    ExecOptions opts_;
};

} // namespace

std::vector<Row> exec_sql(const Select &s, const Database &db, ExecOptions opts) {
    return Executor(db, opts).run(s, nullptr);
}

} // namespace optica::sql
