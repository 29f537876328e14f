#include "optica/eval.hpp"

#include <stdexcept>

namespace optica {

namespace {

[[noreturn]] void confused(const OpticExpr &e, const std::string &what) {
    throw DataError(std::string("evaluation of ") + to_string(e.op()) + ": " + what);
}

const Value &single(const OpticExpr &e, const std::vector<Value> &r) {
    if (r.size() != 1)
        confused(e, "getter produced " + std::to_string(r.size()) + " results");
    return r.front();
}

std::vector<Value> prim(const OpticExpr &e, const Value &v) {
    const PrimOptic &p = e.prim();
    if (v.tag() == Value::Tag::List) {
        // Collection roots are stored as the bare list of their only fold.
        if (p.kind != OpticKind::Fold)
            confused(e, "list input for non-fold primitive " + p.name);
        return v.items();
    }
    if (v.tag() != Value::Tag::Record)
        confused(e, "primitive " + p.name + " applied to " + v.to_string());
    const Value *f = v.field(p.name);
    if (!f)
        confused(e, "record " + v.entity() + " has no field " + p.name);
    if (p.kind == OpticKind::Getter)
        return {*f};
    return f->items();
}

std::vector<Value> eval(const OpticExpr &e, const Value &v) {
    switch (e.op()) {
    case OpticOp::IdG:
    case OpticOp::IdA:
    case OpticOp::IdF: return {v};
    case OpticOp::SeqG:
    case OpticOp::SeqA:
    case OpticOp::SeqF: {
        std::vector<Value> out;
        for (auto &mid : eval(e.arg(0), v))
            for (auto &r : eval(e.arg(1), mid))
                out.push_back(r);
        return out;
    }
    case OpticOp::Fork:
        return {Value::pair(single(e, eval(e.arg(0), v)), single(e, eval(e.arg(1), v)))};
    case OpticOp::Like: return {e.constant()};
    case OpticOp::Not: return {Value::boolean(!single(e, eval(e.arg(0), v)).as_bool())};
    case OpticOp::Gt:
    case OpticOp::Sub:
    case OpticOp::Eq: {
        const Value l = single(e, eval(e.arg(0), v));
        const Value r = single(e, eval(e.arg(1), v));
        if (e.op() == OpticOp::Eq)
            return {Value::boolean(l == r)};
        if (e.op() == OpticOp::Gt)
            return {Value::boolean(l.as_int() > r.as_int())};
        return {Value::integer(l.as_int() - r.as_int())};
    }
    case OpticOp::Filtered:
        if (single(e, eval(e.arg(0), v)).as_bool())
            return {v};
        return {};
    case OpticOp::NonEmpty: return {Value::boolean(!eval(e.arg(0), v).empty())};
    case OpticOp::ToAf:
    case OpticOp::ToFl: return eval(e.arg(0), v);
    case OpticOp::Prim: return prim(e, v);
    }
    confused(e, "unknown node");
}

std::vector<Value> checked_eval(const OpticExpr &e, const Value &v) {
    auto r = eval(e, v);
    OpticKind k = e.type().kind;
    if ((k == OpticKind::Getter && r.size() != 1) || (k == OpticKind::Affine && r.size() > 1))
        confused(e, std::string(to_string(k)) + " produced " + std::to_string(r.size()) + " results");
    return r;
}

} // namespace

std::vector<Value> eval_optic(const OpticExpr &e, const Value &input) { return checked_eval(e, input); }

ResultSet eval_query(const QueryExpr &q, const Value &input) {
    Cardinality c = q.op == QueryOp::Get       ? Cardinality::One
                    : q.op == QueryOp::Preview ? Cardinality::Option
                                               : Cardinality::Many;
    return {c, eval_optic(q.optic, input)};
}

std::string ResultSet::to_string() const {
    switch (cardinality) {
    case Cardinality::One: return values.empty() ? "?" : values.front().to_string();
    case Cardinality::Option: return values.empty() ? "None" : "Some(" + values.front().to_string() + ")";
    case Cardinality::Many: return optica::to_string(values);
    }
    return "?";
}

namespace oracle {

namespace {
bool holds(const OpticExpr &p, const Value &v) {
    auto r = eval_optic(p, v);
    return r.size() == 1 && r.front().as_bool();
}
} // namespace

bool empty(const OpticExpr &fl, const Value &input) { return eval_optic(fl, input).empty(); }

bool all(const OpticExpr &fl, const OpticExpr &p, const Value &input) {
    for (auto &x : eval_optic(fl, input))
        if (!holds(p, x))
            return false;
    return true;
}

bool any(const OpticExpr &fl, const OpticExpr &p, const Value &input) {
    for (auto &x : eval_optic(fl, input))
        if (holds(p, x))
            return true;
    return false;
}

bool elem(const OpticExpr &fl, const Value &a, const Value &input) {
    for (auto &x : eval_optic(fl, input))
        if (x == a)
            return true;
    return false;
}

} // namespace oracle

} // namespace optica
