#include "optica/sql.hpp"

#include <map>
#include <stdexcept>

#include "optica/shred.hpp"

namespace optica::sql {

Expr Expr::column(std::string alias, std::string col) {
    return Expr{Kind::Column, std::move(alias), std::move(col), Value(), {}, nullptr};
}
Expr Expr::star(std::string alias) { return Expr{Kind::Star, std::move(alias), "", Value(), {}, nullptr}; }
Expr Expr::lit(Value v) { return Expr{Kind::Literal, "", "", std::move(v), {}, nullptr}; }
Expr Expr::negate(Expr e) {
    if (e.kind == Kind::Not)
        return e.kids.front();
    return Expr{Kind::Not, "", "", Value(), {std::move(e)}, nullptr};
}
Expr Expr::binary(std::string op, Expr l, Expr r) {
    return Expr{Kind::Binary, "", std::move(op), Value(), {std::move(l), std::move(r)}, nullptr};
}
Expr Expr::exists(Select s) {
    return Expr{Kind::Exists, "", "", Value(), {}, std::make_shared<const Select>(std::move(s))};
}
Expr Expr::is_not_null(Expr e) { return Expr{Kind::IsNotNull, "", "", Value(), {std::move(e)}, nullptr}; }

std::vector<Expr> Select::conjuncts() const {
    std::vector<Expr> out;
    auto add = [&](const Expr &e) {
        if (e.kind == Expr::Kind::Binary && e.name == "AND") {
            for (auto &k : e.kids)
                out.push_back(k);
            return;
        }
        if (e.kind == Expr::Kind::Literal && e.literal.tag() == Value::Tag::Bool && e.literal.as_bool())
            return;
        out.push_back(e);
    };
    for (auto &w : where)
        add(w);
    if (correlation)
        add(*correlation);
    return out;
}

namespace {

TPath parent_of(const TPath &p) { return TPath(p.begin(), p.end() - 1); }

/// Leftmost element of the Seq/cast spine, skipping identities.
std::optional<OpticExpr> leftmost(const OpticExpr &e) {
    if (is_cast(e.op()))
        return leftmost(e.arg(0));
    if (is_seq(e.op())) {
        if (auto l = leftmost(e.arg(0)))
            return l;
        return leftmost(e.arg(1));
    }
    if (is_id(e.op()))
        return std::nullopt;
    return e;
}

class Generator {
  public:
    Generator(const Schema &schema, const PkMap &pk) : schema_(schema), pk_(pk) {}

    Select top(const Triplet &t) {
        RefinedTrie rho = fresh(t.trie, supply_);
        for (auto &[p, alias] : rho.entries())
            table_of_[alias] = p.back().part.entity_name();
        auto all = t.trie.depth_first();
        return statement(t, rho, {all.front()}, all, true);
    }

  private:
    const std::string &key(const std::string &entity) const {
        try {
            return pk_.at(entity);
        } catch (const MissingPkError &e) {
            throw SqlGenError(SqlErrorKind::MissingPk, e.what());
        }
    }

    /// `roots` are the paths introduced at this level whose parent is not; roots[0] is the local path.
    Select statement(const Triplet &t, const RefinedTrie &rho, const std::vector<TPath> &roots,
                     const std::vector<TPath> &introduced, bool is_top) {
        Select s;
        if (!is_top && !roots.empty())
            s.items.push_back(Expr::star(rho.alias(roots.front())));
        else
            for (auto &e : t.select)
                s.items.push_back(expr(e, rho));

        for (auto &e : t.select)
            if (e.kind == TExpr::Kind::Proj && e.optic.kind == OpticKind::Affine)
                s.where.push_back(Expr::is_not_null(Expr::column(rho.alias(e.path), e.optic.name)));
        for (auto &w : t.where)
            s.where.push_back(expr(w, rho));

        if (roots.empty())
            return s;

        const TPath &local = roots.front();
        From from{local.back().part.entity_name(), rho.alias(local), {}};
        std::vector<std::string> bound{from.alias};
        auto is_introduced = [&](const TPath &p) {
            for (auto &q : introduced)
                if (same_path(p, q))
                    return true;
            return false;
        };
        for (auto &p : introduced) {
            if (same_path(p, local))
                continue;
            TPath up = parent_of(p);
            Join j{p.back().part.entity_name(), rho.alias(p), edge(up, p, rho, !is_introduced(up), bound)};
            bound.push_back(j.alias);
            from.joins.push_back(std::move(j));
        }
        s.from = std::move(from);
        if (!is_top && local.size() > 1) {
            JoinCondition c = edge(parent_of(local), local, rho, true, {});
            s.correlation = Expr::binary("=", c.left, c.right);
        }
        return s;
    }

    /// Join condition between path `p` and its parent `up`.
    JoinCondition edge(const TPath &up, const TPath &p, const RefinedTrie &rho, bool outer_parent,
                       const std::vector<std::string> &bound) {
        const PrimOptic &step = p.back();
        const std::string &child = step.part.entity_name();
        if (step.kind == OpticKind::Fold) {
            const std::string &col = key(step.whole);
            if (!outer_parent && using_is_unambiguous(col, bound))
                return {col, Expr::column(rho.alias(up), col), Expr::column(rho.alias(p), col)};
            return {std::nullopt, Expr::column(rho.alias(up), col), Expr::column(rho.alias(p), col)};
        }
        return {std::nullopt, Expr::column(rho.alias(up), step.name), Expr::column(rho.alias(p), key(child))};
    }

    bool using_is_unambiguous(const std::string &col, const std::vector<std::string> &bound) const {
        int hits = 0;
        for (auto &alias : bound) {
            auto cols = table_columns(table_of_.at(alias), schema_, pk_);
            for (auto &c : cols)
                hits += c == col;
        }
        return hits == 1;
    }

    Expr expr(const TExpr &e, const RefinedTrie &rho) {
        switch (e.kind) {
        case TExpr::Kind::Like: return Expr::lit(e.constant);
        case TExpr::Kind::Not: return Expr::negate(expr(e.kids[0], rho));
        case TExpr::Kind::Gt: return Expr::binary(">", expr(e.kids[0], rho), expr(e.kids[1], rho));
        case TExpr::Kind::Eq: return Expr::binary("=", expr(e.kids[0], rho), expr(e.kids[1], rho));
        case TExpr::Kind::Sub: return Expr::binary("-", expr(e.kids[0], rho), expr(e.kids[1], rho));
        case TExpr::Kind::PathSel: return Expr::star(rho.alias(e.path));
        case TExpr::Kind::Proj:
            if (e.optic.kind == OpticKind::Fold)
                throw SqlGenError(SqlErrorKind::FoldOverBase,
                                  "fold " + e.optic.name + " selects base values, which SQL cannot hold in a column");
            if (e.path.empty())
                throw SqlGenError(SqlErrorKind::NoRootFold, "projection " + e.optic.name + " on the root entity");
            return Expr::column(rho.alias(e.path), e.optic.name);
        case TExpr::Kind::NonEmpty: return Expr::exists(nested(*e.inner, *e.scope, rho));
        }
        throw std::logic_error("unknown triplet expression");
    }

    Select nested(const Triplet &inner, const EntityTrie &scope, const RefinedTrie &outer) {
        RefinedTrie rho;
        for (auto &[p, alias] : outer.entries())
            if (scope.contains(p))
                rho.bind(p, alias);
        std::vector<TPath> introduced, roots;
        for (auto &p : inner.trie.depth_first()) {
            if (scope.contains(p))
                continue;
            rho.bind(p, supply_.next());
            table_of_[rho.alias(p)] = p.back().part.entity_name();
            if (scope.contains(parent_of(p)))
                roots.push_back(p);
            introduced.push_back(p);
        }
        return statement(inner, rho, roots, introduced, false);
    }

  private:
    const Schema &schema_;
    const PkMap &pk_;
    AliasSupply supply_;
    std::map<std::string, std::string> table_of_;
};

} // namespace

Select gen_sql(const QueryExpr &q, const Schema &schema, const PkMap &pk) {
    if (q.op != QueryOp::GetAll)
        throw SqlGenError(SqlErrorKind::NoRootFold, std::string(to_string(q.op)) + " queries have no SQL translation");
    auto first = leftmost(q.optic);
    if (!first || first->op() != OpticOp::Prim || first->prim().kind != OpticKind::Fold ||
        first->prim().whole != schema.root_entity())
        throw SqlGenError(SqlErrorKind::NoRootFold, "the query must start with a fold over the root entity");
    const ModelType &part = q.optic.type().part;
    if (!schema.is_flat(part))
        throw SqlGenError(SqlErrorKind::NotFlatPart, "result type " + part.to_string() + " is not flat");

    Triplet t = to_triplet(q.optic)(Triplet::initial());
    try {
        return Generator(schema, pk).top(t);
    } catch (const MissingPkError &e) {
        throw SqlGenError(SqlErrorKind::MissingPk, e.what());
    }
}

} // namespace optica::sql
