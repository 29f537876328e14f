#include "optica/ast.hpp"

#include <stdexcept>

namespace optica {

const char *to_string(OpticOp op) {
    switch (op) {
    case OpticOp::IdG: return "IdG";
    case OpticOp::IdA: return "IdA";
    case OpticOp::IdF: return "IdF";
    case OpticOp::SeqG: return "SeqG";
    case OpticOp::SeqA: return "SeqA";
    case OpticOp::SeqF: return "SeqF";
    case OpticOp::Fork: return "Fork";
    case OpticOp::Like: return "Like";
    case OpticOp::Not: return "Not";
    case OpticOp::Gt: return "Gt";
    case OpticOp::Eq: return "Eq";
    case OpticOp::Sub: return "Sub";
    case OpticOp::Filtered: return "Filtered";
    case OpticOp::NonEmpty: return "NonEmpty";
    case OpticOp::ToAf: return "ToAf";
    case OpticOp::ToFl: return "ToFl";
    case OpticOp::Prim: return "Prim";
    }
    return "?";
}

const char *to_string(QueryOp op) {
    switch (op) {
    case QueryOp::Get: return "Get";
    case QueryOp::Preview: return "Preview";
    case QueryOp::GetAll: return "GetAll";
    }
    return "?";
}

const OpticType &OpticExpr::type() const {
    if (!node_->type)
        throw std::logic_error("optic expression has not been type checked");
    return *node_->type;
}

const PrimOptic &OpticExpr::prim() const {
    if (!node_->prim)
        throw std::logic_error("primitive optic has not been resolved");
    return *node_->prim;
}

OpticExpr OpticExpr::with_span(SourceSpan s) const {
    Node n = *node_;
    n.span = s;
    return OpticExpr(std::move(n));
}

namespace {

OpticExpr make(OpticOp op, std::vector<OpticExpr> args = {}) {
    return OpticExpr(OpticExpr::Node{op, std::move(args), Value(), {}, {}, std::nullopt, nullptr});
}

SourceSpan cover(const OpticExpr &a, const OpticExpr &b) { return {a.span().begin, b.span().end}; }

} // namespace

namespace optic {
OpticExpr id(OpticKind k) { return make(id_op(k)); }
OpticExpr seq(OpticKind k, OpticExpr l, OpticExpr r) {
    auto s = cover(l, r);
    return make(seq_op(k), {std::move(l), std::move(r)}).with_span(s);
}
OpticExpr fork(OpticExpr l, OpticExpr r) {
    auto s = cover(l, r);
    return make(OpticOp::Fork, {std::move(l), std::move(r)}).with_span(s);
}
OpticExpr like(Value c) {
    return OpticExpr(OpticExpr::Node{OpticOp::Like, {}, std::move(c), {}, {}, std::nullopt, nullptr});
}
OpticExpr not_(OpticExpr e) {
    auto s = e.span();
    return make(OpticOp::Not, {std::move(e)}).with_span(s);
}
OpticExpr gt(OpticExpr l, OpticExpr r) {
    auto s = cover(l, r);
    return make(OpticOp::Gt, {std::move(l), std::move(r)}).with_span(s);
}
OpticExpr eq(OpticExpr l, OpticExpr r) {
    auto s = cover(l, r);
    return make(OpticOp::Eq, {std::move(l), std::move(r)}).with_span(s);
}
OpticExpr sub(OpticExpr l, OpticExpr r) {
    auto s = cover(l, r);
    return make(OpticOp::Sub, {std::move(l), std::move(r)}).with_span(s);
}
OpticExpr filtered(OpticExpr p) {
    auto s = p.span();
    return make(OpticOp::Filtered, {std::move(p)}).with_span(s);
}
OpticExpr non_empty(OpticExpr f) {
    auto s = f.span();
    return make(OpticOp::NonEmpty, {std::move(f)}).with_span(s);
}
OpticExpr to_af(OpticExpr g) {
    auto s = g.span();
    return make(OpticOp::ToAf, {std::move(g)}).with_span(s);
}
OpticExpr to_fl(OpticExpr a) {
    auto s = a.span();
    return make(OpticOp::ToFl, {std::move(a)}).with_span(s);
}
OpticExpr prim(std::string name) {
    return OpticExpr(OpticExpr::Node{OpticOp::Prim, {}, Value(), std::move(name), {}, std::nullopt, nullptr});
}
} // namespace optic

OpticOp id_op(OpticKind k) {
    switch (k) {
    case OpticKind::Getter: return OpticOp::IdG;
    case OpticKind::Affine: return OpticOp::IdA;
    case OpticKind::Fold: return OpticOp::IdF;
    }
    return OpticOp::IdG;
}

OpticOp seq_op(OpticKind k) {
    switch (k) {
    case OpticKind::Getter: return OpticOp::SeqG;
    case OpticKind::Affine: return OpticOp::SeqA;
    case OpticKind::Fold: return OpticOp::SeqF;
    }
    return OpticOp::SeqG;
}

bool is_id(OpticOp op) { return op == OpticOp::IdG || op == OpticOp::IdA || op == OpticOp::IdF; }
bool is_seq(OpticOp op) { return op == OpticOp::SeqG || op == OpticOp::SeqA || op == OpticOp::SeqF; }
bool is_cast(OpticOp op) { return op == OpticOp::ToAf || op == OpticOp::ToFl; }

OpticKind op_kind(OpticOp op) {
    switch (op) {
    case OpticOp::IdA:
    case OpticOp::SeqA:
    case OpticOp::ToAf:
    case OpticOp::Filtered: return OpticKind::Affine;
    case OpticOp::IdF:
    case OpticOp::SeqF:
    case OpticOp::ToFl: return OpticKind::Fold;
    default: return OpticKind::Getter;
    }
}

bool same_structure(const OpticExpr &a, const OpticExpr &b) {
    if (a.op() != b.op() || a.arity() != b.arity())
        return false;
    if (a.op() == OpticOp::Like && a.constant() != b.constant())
        return false;
    if (a.op() == OpticOp::Prim && a.name() != b.name())
        return false;
    for (std::size_t i = 0; i < a.arity(); ++i)
        if (!same_structure(a.arg(i), b.arg(i)))
            return false;
    return true;
}

namespace {
const OpticExpr &strip(const OpticExpr &e) { return is_cast(e.op()) ? strip(e.arg(0)) : e; }
} // namespace

bool same_modulo_casts(const OpticExpr &x, const OpticExpr &y) {
    const OpticExpr &a = strip(x);
    const OpticExpr &b = strip(y);
    bool ops_match = a.op() == b.op() || (is_seq(a.op()) && is_seq(b.op())) || (is_id(a.op()) && is_id(b.op()));
    if (!ops_match || a.arity() != b.arity())
        return false;
    if (a.op() == OpticOp::Like && a.constant() != b.constant())
        return false;
    if (a.op() == OpticOp::Prim && a.name() != b.name())
        return false;
    for (std::size_t i = 0; i < a.arity(); ++i)
        if (!same_modulo_casts(a.arg(i), b.arg(i)))
            return false;
    return true;
}

std::string dump(const OpticExpr &e, bool with_types) {
    std::string s;
    if (e.op() == OpticOp::Prim)
        s = e.name();
    else if (e.op() == OpticOp::Like)
        s = "(Like " + e.constant().to_literal() + ")";
    else if (e.arity() == 0)
        s = to_string(e.op());
    else {
        s = "(";
        s += to_string(e.op());
        for (auto &a : e.args())
            s += " " + dump(a, with_types);
        s += ")";
    }
    if (with_types && e.checked())
        s += " : " + e.type().to_string();
    if (with_types && e.checked() && e.arity() > 0)
        s = "[" + s + "]";
    return s;
}

std::string dump(const QueryExpr &q, bool with_types) {
    return std::string("(") + to_string(q.op) + " " + dump(q.optic, with_types) + ")";
}

bool same_structure(const QueryExpr &a, const QueryExpr &b) {
    return a.op == b.op && same_structure(a.optic, b.optic);
}

std::size_t node_count(const OpticExpr &e) {
    std::size_t n = 1;
    for (auto &a : e.args())
        n += node_count(a);
    return n;
}

std::size_t depth(const OpticExpr &e) {
    std::size_t d = 0;
    for (auto &a : e.args())
        d = std::max(d, depth(a));
    return d + 1;
}

OpticExpr auto_cast(const OpticExpr &e, OpticKind from, OpticKind to) {
    if (to < from)
        throw TypeError(std::string("cannot cast a ") + to_string(from) + " down to a " + to_string(to), e.span());
    OpticExpr out = e;
    if (from == OpticKind::Getter && to != OpticKind::Getter)
        out = optic::to_af(out);
    if (from != OpticKind::Fold && to == OpticKind::Fold)
        out = optic::to_fl(out);
    return out;
}

OpticExpr desugar_empty(const OpticExpr &fl) { return optic::not_(optic::non_empty(fl)).with_span(fl.span()); }

OpticExpr desugar_all(const OpticExpr &fl, const OpticExpr &p) {
    auto s = cover(fl, p);
    auto keep = optic::to_fl(optic::filtered(optic::not_(p)));
    return desugar_empty(optic::seq(OpticKind::Fold, fl, keep)).with_span(s);
}

OpticExpr desugar_any(const OpticExpr &fl, const OpticExpr &p) {
    return optic::not_(desugar_all(fl, optic::not_(p))).with_span(cover(fl, p));
}

OpticExpr desugar_elem(const OpticExpr &fl, const Value &a) {
    return desugar_any(fl, optic::eq(optic::id(OpticKind::Getter), optic::like(a))).with_span(fl.span());
}

} // namespace optica
