#include "optica/ast.hpp"

#include <map>

namespace optica {

namespace {

class Checker {
  public:
    explicit Checker(const Schema &schema) : schema_(schema) {}

    OpticExpr infer(const OpticExpr &e, const std::optional<ModelType> &hint) {
        OpticExpr::Node n = e.node();
        n.args.clear();
        auto ann = [&](OpticKind k, ModelType w, ModelType p) {
            n.type = OpticType{k, std::move(w), std::move(p)};
            return OpticExpr(std::move(n));
        };
        auto child = [&](std::size_t i, const std::optional<ModelType> &h) {
            n.args.push_back(infer(e.arg(i), h));
            return n.args.back().type();
        };

        switch (e.op()) {
        case OpticOp::IdG:
        case OpticOp::IdA:
        case OpticOp::IdF: {
            ModelType v = hint ? *hint : fresh();
            return ann(op_kind(e.op()), v, v);
        }
        case OpticOp::SeqG:
        case OpticOp::SeqA:
        case OpticOp::SeqF: {
            OpticKind k = op_kind(e.op());
            auto l = child(0, hint);
            require_kind(e.arg(0), l, k, "left operand of composition");
            auto r = child(1, resolve(l.part));
            require_kind(e.arg(1), r, k, "right operand of composition");
            if (!unify(l.part, r.whole))
                throw TypeError("whole/part mismatch in composition: " + resolve(l.part).to_string() +
                                    " does not match " + resolve(r.whole).to_string(),
                                e.span());
            return ann(k, l.whole, r.part);
        }
        case OpticOp::Fork: {
            auto l = child(0, hint);
            require_kind(e.arg(0), l, OpticKind::Getter, "operand of ***");
            auto r = child(1, hint ? hint : resolve(l.whole));
            require_kind(e.arg(1), r, OpticKind::Getter, "operand of ***");
            if (!unify(l.whole, r.whole))
                throw TypeError("*** operands have different wholes: " + resolve(l.whole).to_string() + " and " +
                                    resolve(r.whole).to_string(),
                                e.span());
            return ann(OpticKind::Getter, l.whole, ModelType::pair(l.part, r.part));
        }
        case OpticOp::Like: {
            ModelType t;
            switch (e.constant().tag()) {
            case Value::Tag::Int: t = ModelType::integer(); break;
            case Value::Tag::Bool: t = ModelType::boolean(); break;
            case Value::Tag::String: t = ModelType::string(); break;
            default: throw TypeError("like requires a base-type constant", e.span());
            }
            return ann(OpticKind::Getter, hint ? *hint : fresh(), t);
        }
        case OpticOp::Not: {
            auto a = child(0, hint);
            require_kind(e.arg(0), a, OpticKind::Getter, "operand of not");
            require_part(e.arg(0), a.part, ModelType::boolean(), "not");
            return ann(OpticKind::Getter, a.whole, ModelType::boolean());
        }
        case OpticOp::Gt:
        case OpticOp::Sub:
        case OpticOp::Eq: {
            const char *what = e.op() == OpticOp::Gt ? ">" : e.op() == OpticOp::Sub ? "-" : "==";
            auto l = child(0, hint);
            require_kind(e.arg(0), l, OpticKind::Getter, std::string("operand of ") + what);
            auto r = child(1, hint ? hint : resolve(l.whole));
            require_kind(e.arg(1), r, OpticKind::Getter, std::string("operand of ") + what);
            if (!unify(l.whole, r.whole))
                throw TypeError(std::string("operands of ") + what + " have different wholes: " +
                                    resolve(l.whole).to_string() + " and " + resolve(r.whole).to_string(),
                                e.span());
            if (e.op() == OpticOp::Eq) {
                if (!unify(l.part, r.part))
                    throw TypeError("== compares " + resolve(l.part).to_string() + " with " +
                                        resolve(r.part).to_string(),
                                    e.span());
                eq_parts_.emplace_back(l.part, e.span());
                return ann(OpticKind::Getter, l.whole, ModelType::boolean());
            }
            require_part(e.arg(0), l.part, ModelType::integer(), what);
            require_part(e.arg(1), r.part, ModelType::integer(), what);
            return ann(OpticKind::Getter, l.whole,
                       e.op() == OpticOp::Gt ? ModelType::boolean() : ModelType::integer());
        }
        case OpticOp::Filtered: {
            auto p = child(0, hint);
            require_kind(e.arg(0), p, OpticKind::Getter, "filtered predicate");
            if (!unify(p.part, ModelType::boolean()))
                throw TypeError("filtered predicate must select Bool, not " + resolve(p.part).to_string(),
                                e.arg(0).span());
            return ann(OpticKind::Affine, p.whole, p.whole);
        }
        case OpticOp::NonEmpty: {
            auto f = child(0, hint);
            require_kind(e.arg(0), f, OpticKind::Fold, "operand of nonEmpty");
            return ann(OpticKind::Getter, f.whole, ModelType::boolean());
        }
        case OpticOp::ToAf: {
            auto g = child(0, hint);
            require_kind(e.arg(0), g, OpticKind::Getter, "operand of to_af");
            return ann(OpticKind::Affine, g.whole, g.part);
        }
        case OpticOp::ToFl: {
            auto a = child(0, hint);
            require_kind(e.arg(0), a, OpticKind::Affine, "operand of to_fl");
            return ann(OpticKind::Fold, a.whole, a.part);
        }
        case OpticOp::Prim: {
            auto candidates = schema_.lookup(e.name());
            if (candidates.empty())
                throw TypeError("unresolved identifier '" + e.name() + "'", e.span());
            const PrimOptic *chosen = candidates.size() == 1 ? candidates.front() : nullptr;
            if (!chosen && hint && resolve(*hint).is_entity())
                chosen = schema_.find(resolve(*hint).entity_name(), e.name());
            if (!chosen)
                throw TypeError("ambiguous identifier '" + e.name() + "'", e.span());
            n.prim = std::make_shared<const PrimOptic>(*chosen);
            return ann(chosen->kind, ModelType::entity(chosen->whole), chosen->part);
        }
        }
        throw TypeError("unknown node", e.span());
    }

    /// Applies the final substitution to every annotation and checks deferred constraints.
    OpticExpr finish(const OpticExpr &e) {
        for (auto &[t, span] : eq_parts_) {
            ModelType r = resolve(t);
            if (!r.is_base() && !r.is_var())
                throw TypeError("== requires base-type operands, not " + r.to_string(), span);
        }
        return apply(e);
    }

    ModelType resolve(const ModelType &t) const {
        switch (t.tag()) {
        case ModelType::Tag::Var: {
            auto it = subst_.find(t.var_id());
            return it == subst_.end() ? t : resolve(it->second);
        }
        case ModelType::Tag::Pair: return ModelType::pair(resolve(t.left()), resolve(t.right()));
        default: return t;
        }
    }

  private:
    OpticExpr apply(const OpticExpr &e) {
        OpticExpr::Node n = e.node();
        for (auto &a : n.args)
            a = apply(a);
        n.type->whole = canonical(resolve(n.type->whole));
        n.type->part = canonical(resolve(n.type->part));
        return OpticExpr(std::move(n));
    }

    /// Renumbers leftover variables in order of appearance, so annotations are reproducible.
    ModelType canonical(const ModelType &t) {
        switch (t.tag()) {
        case ModelType::Tag::Var: {
            auto [it, inserted] = rename_.emplace(t.var_id(), static_cast<int>(rename_.size()));
            return ModelType::var(it->second);
        }
        case ModelType::Tag::Pair: return ModelType::pair(canonical(t.left()), canonical(t.right()));
        default: return t;
        }
    }

    ModelType fresh() { return ModelType::var(next_var_++); }

    bool occurs(int v, const ModelType &t) const {
        ModelType r = resolve(t);
        if (r.is_var())
            return r.var_id() == v;
        if (r.is_pair())
            return occurs(v, r.left()) || occurs(v, r.right());
        return false;
    }

    bool unify(const ModelType &a0, const ModelType &b0) {
        ModelType a = resolve(a0), b = resolve(b0);
        if (a.is_var() && b.is_var() && a.var_id() == b.var_id())
            return true;
        if (a.is_var()) {
            if (occurs(a.var_id(), b))
                return false;
            subst_[a.var_id()] = b;
            return true;
        }
        if (b.is_var())
            return unify(b, a);
        if (a.is_pair() && b.is_pair())
            return unify(a.left(), b.left()) && unify(a.right(), b.right());
        return a == b;
    }

    void require_kind(const OpticExpr &e, const OpticType &t, OpticKind k, const std::string &what) {
        if (t.kind != k)
            throw TypeError(what + " must be a " + to_string(k) + ", found a " + to_string(t.kind), e.span());
    }

    void require_part(const OpticExpr &e, const ModelType &part, const ModelType &want, const char *what) {
        if (!unify(part, want))
            throw TypeError(std::string("operand of ") + what + " must select " + want.to_string() + ", not " +
                                resolve(part).to_string(),
                            e.span());
    }

    const Schema &schema_;
    std::map<int, ModelType> subst_;
    std::map<int, int> rename_;
    std::vector<std::pair<ModelType, SourceSpan>> eq_parts_;
    int next_var_ = 0;
};

} // namespace

OpticExpr check_optic(const OpticExpr &e, const Schema &schema) {
    Checker c(schema);
    OpticExpr out = c.infer(e, std::nullopt);
    return c.finish(out);
}

OpticType typecheck(const OpticExpr &e, const Schema &schema) { return check_optic(e, schema).type(); }

CheckedQuery check_query(const QueryExpr &q, const Schema &schema) {
    OpticExpr e = check_optic(q.optic, schema);
    OpticKind want = q.op == QueryOp::Get       ? OpticKind::Getter
                     : q.op == QueryOp::Preview ? OpticKind::Affine
                                                : OpticKind::Fold;
    // Lower kinds are cast on demand, as inside optics.
    if (e.type().kind < want)
        e = check_optic(auto_cast(e, e.type().kind, want), schema);
    const OpticType &t = e.type();
    if (t.kind != want)
        throw TypeError(std::string(to_string(q.op)) + " requires a " + to_string(want) + ", found a " +
                            to_string(t.kind),
                        q.span);
    Cardinality c = q.op == QueryOp::Get       ? Cardinality::One
                    : q.op == QueryOp::Preview ? Cardinality::Option
                                               : Cardinality::Many;
    return {QueryExpr{q.op, e, q.span}, QueryType{t.whole, c, t.part}};
}

QueryType typecheck_query(const QueryExpr &q, const Schema &schema) { return check_query(q, schema).type; }

} // namespace optica
