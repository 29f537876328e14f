#include "optica/compr.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "optica/shred.hpp"

namespace optica::compr {

namespace term {
namespace {
Term make(TermOp op, std::string name, std::vector<Term> kids) {
    return Term(Term::Node{op, std::move(name), {}, Value(), std::move(kids)});
}
} // namespace

Term var(std::string name) { return make(TermOp::Var, std::move(name), {}); }
Term lam(std::string param, Term body) { return make(TermOp::Lam, std::move(param), {std::move(body)}); }
Term app(Term fun, Term arg) { return make(TermOp::App, "", {std::move(fun), std::move(arg)}); }
Term record(std::vector<std::string> labels, std::vector<Term> values) {
    return Term(Term::Node{TermOp::Record, "", std::move(labels), Value(), std::move(values)});
}
Term field(Term e, std::string label) { return make(TermOp::Field, std::move(label), {std::move(e)}); }
Term constant(Value v) { return Term(Term::Node{TermOp::Const, "", {}, std::move(v), {}}); }
Term prim(std::string op, std::vector<Term> args) { return make(TermOp::Prim, std::move(op), std::move(args)); }
Term for_(std::string binder, Term source, Term body) {
    return make(TermOp::For, std::move(binder), {std::move(source), std::move(body)});
}
Term if_(Term test, Term body) { return make(TermOp::If, "", {std::move(test), std::move(body)}); }
Term yield(Term e) { return make(TermOp::Yield, "", {std::move(e)}); }
Term exists(Term e) { return make(TermOp::Exists, "", {std::move(e)}); }
Term table(std::string name) { return make(TermOp::Table, std::move(name), {}); }
Term empty() { return make(TermOp::Empty, "", {}); }
} // namespace term

using namespace term;

namespace {

std::string initial(const std::string &entity) {
    return std::string(1, static_cast<char>(std::tolower(static_cast<unsigned char>(entity.at(0)))));
}

const char *prim_symbol(OpticOp op) {
    switch (op) {
    case OpticOp::Gt: return ">";
    case OpticOp::Eq: return "=";
    case OpticOp::Sub: return "-";
    default: return "?";
    }
}

class Compiler {
  public:
    explicit Compiler(const Schema &schema) : schema_(schema) {}

    Term optic(const OpticExpr &e) {
        auto a = var("a");
        switch (e.op()) {
        case OpticOp::IdG: return lam("a", a);
        case OpticOp::IdA:
        case OpticOp::IdF: return lam("a", yield(a));
        case OpticOp::SeqG: return lam("a", app(optic(e.arg(1)), app(optic(e.arg(0)), a)));
        case OpticOp::SeqA:
        case OpticOp::SeqF:
            return lam("a", for_("b", app(optic(e.arg(0)), a),
                                 for_("c", app(optic(e.arg(1)), var("b")), yield(var("c")))));
        case OpticOp::Fork:
            return lam("a", record({"_1", "_2"}, {app(optic(e.arg(0)), a), app(optic(e.arg(1)), a)}));
        case OpticOp::Like: return lam("a", constant(e.constant()));
        case OpticOp::Not: return lam("a", prim("not", {app(optic(e.arg(0)), a)}));
        case OpticOp::Gt:
        case OpticOp::Eq:
        case OpticOp::Sub:
            return lam("a", prim(prim_symbol(e.op()), {app(optic(e.arg(0)), a), app(optic(e.arg(1)), a)}));
        case OpticOp::Filtered: return lam("a", if_(app(optic(e.arg(0)), a), yield(a)));
        case OpticOp::NonEmpty: return lam("a", exists(app(optic(e.arg(0)), a)));
        case OpticOp::ToAf: return lam("a", yield(app(optic(e.arg(0)), a)));
        case OpticOp::ToFl: return optic(e.arg(0));
        case OpticOp::Prim: return primitive(e.prim());
        }
        throw std::logic_error("unknown optic node");
    }

  private:
    Term primitive(const PrimOptic &p) {
        if (p.kind == OpticKind::Fold && p.whole == schema_.root_entity() && schema_.root_is_collection()) {
            // The collection root is the bag itself.
            std::string xs = p.part.tag() == ModelType::Tag::Entity ? initial(p.part.entity_name()) + "s" : "xs";
            return lam(xs, var(xs));
        }
        std::string x = initial(p.whole);
        return lam(x, field(var(x), p.name));
    }

    const Schema &schema_;
};

class Adapter {
  public:
    Adapter(const Schema &schema, const PkMap &pk) : schema_(schema), pk_(pk) {}

    Term root() {
        const std::string &r = schema_.root_entity();
        if (schema_.root_is_collection()) {
            const PrimOptic *f = schema_.fields(r).front();
            return children(*f, std::nullopt);
        }
        std::vector<std::string> labels;
        std::vector<Term> values;
        for (const PrimOptic *f : schema_.fields(r)) {
            if (f->kind != OpticKind::Fold)
                throw SchemaError("adapter: root field " + f->name + " has no table");
            labels.push_back(f->name);
            values.push_back(children(*f, std::nullopt));
        }
        return record(std::move(labels), std::move(values));
    }

  private:
    struct Generator {
        std::string binder;
        std::string table;
        Term guard;
    };

    std::string fresh(const std::string &entity) {
        std::string base = initial(entity);
        int &n = used_[base];
        return n++ == 0 ? base : base + std::to_string(n - 1);
    }

    /// The bag behind fold `f`, for an owner bound to `owner` (none at the root).
    Term children(const PrimOptic &f, std::optional<std::string> owner) {
        if (f.part.tag() != ModelType::Tag::Entity)
            throw SchemaError("adapter: fold " + f.name + " over a base type has no table");
        const std::string &child = f.part.entity_name();
        std::string y = fresh(child);
        std::vector<Generator> gens;
        Term body = yield(entity_record(child, y, gens));
        for (auto it = gens.rbegin(); it != gens.rend(); ++it)
            body = for_(it->binder, table(it->table), if_(it->guard, body));
        if (owner) {
            const std::string &key = pk_.at(f.whole);
            body = if_(prim("=", {field(var(*owner), key), field(var(y), key)}), body);
        }
        return for_(y, table(child), body);
    }

    Term entity_record(const std::string &entity, const std::string &x, std::vector<Generator> &gens) {
        std::vector<std::string> labels;
        std::vector<Term> values;
        for (const PrimOptic *f : schema_.fields(entity)) {
            labels.push_back(f->name);
            if (f->kind == OpticKind::Fold) {
                values.push_back(children(*f, x));
            } else if (f->kind == OpticKind::Affine) {
                throw SchemaError("adapter: affine field " + entity + "." + f->name + " is not supported");
            } else if (f->part.tag() != ModelType::Tag::Entity) {
                values.push_back(field(var(x), f->name));
            } else {
                const std::string &target = f->part.entity_name();
                std::string y = fresh(target);
                gens.push_back({y, target, prim("=", {field(var(x), f->name), field(var(y), pk_.at(target))})});
                values.push_back(entity_record(target, y, gens));
            }
        }
        return record(std::move(labels), std::move(values));
    }

    const Schema &schema_;
    const PkMap &pk_;
    std::map<std::string, int> used_;
};

void collect_free(const Term &e, std::vector<std::string> &bound, std::set<std::string> &out) {
    switch (e.op()) {
    case TermOp::Var:
        if (std::find(bound.begin(), bound.end(), e.name()) == bound.end())
            out.insert(e.name());
        return;
    case TermOp::Lam:
        bound.push_back(e.name());
        collect_free(e.kid(0), bound, out);
        bound.pop_back();
        return;
    case TermOp::For:
        collect_free(e.kid(0), bound, out);
        bound.push_back(e.name());
        collect_free(e.kid(1), bound, out);
        bound.pop_back();
        return;
    default:
        for (const Term &k : e.kids())
            collect_free(k, bound, out);
    }
}

void conjuncts(const Term &e, std::vector<Term> &out) {
    if (e.op() == TermOp::Prim && e.name() == "and") {
        for (const Term &k : e.kids())
            conjuncts(k, out);
    } else {
        out.push_back(e);
    }
}

std::string canon(const Term &e, std::vector<std::string> &bound) {
    auto index = [&](const std::string &x) -> std::string {
        for (std::size_t i = bound.size(); i-- > 0;)
            if (bound[i] == x)
                return "#" + std::to_string(bound.size() - 1 - i);
        return "free:" + x;
    };
    auto under = [&](const std::string &x, const Term &body) {
        bound.push_back(x);
        std::string s = canon(body, bound);
        bound.pop_back();
        return s;
    };
    switch (e.op()) {
    case TermOp::Var: return index(e.name());
    case TermOp::Lam: return "(lam " + under(e.name(), e.kid(0)) + ")";
    case TermOp::For: return "(for " + canon(e.kid(0), bound) + " " + under(e.name(), e.kid(1)) + ")";
    case TermOp::Const: return "(const " + e.constant().to_literal() + ")";
    case TermOp::Table: return "(table " + e.name() + ")";
    case TermOp::Empty: return "(empty)";
    case TermOp::Record: {
        std::string s = "(record";
        for (std::size_t i = 0; i < e.kids().size(); ++i)
            s += " " + e.labels()[i] + "=" + canon(e.kid(i), bound);
        return s + ")";
    }
    case TermOp::Prim:
        if (e.name() == "and") {
            std::vector<Term> cs;
            conjuncts(e, cs);
            std::vector<std::string> parts;
            for (const Term &c : cs)
                parts.push_back(canon(c, bound));
            std::sort(parts.begin(), parts.end());
            std::string s = "(and";
            for (auto &p : parts)
                s += " " + p;
            return s + ")";
        }
        [[fallthrough]];
    default: {
        static const char *names[] = {"var", "lam", "app", "record", "field", "const", "prim",
                                      "for", "if",  "yield", "exists", "table", "empty"};
        std::string s = std::string("(") + names[static_cast<int>(e.op())];
        if (!e.name().empty())
            s += " " + e.name();
        for (const Term &k : e.kids())
            s += " " + canon(k, bound);
        return s + ")";
    }
    }
}

bool atomic(const Term &e) {
    switch (e.op()) {
    case TermOp::Var:
    case TermOp::Const:
    case TermOp::Table:
    case TermOp::Empty:
    case TermOp::Record:
    case TermOp::Field: return true;
    default: return false;
    }
}

bool layout(const Term &e) {
    switch (e.op()) {
    case TermOp::For:
    case TermOp::If:
    case TermOp::Exists: return true;
    case TermOp::Var:
    case TermOp::Const:
    case TermOp::Table:
    case TermOp::Empty: return false;
    default: return std::any_of(e.kids().begin(), e.kids().end(), layout);
    }
}

class Printer {
  public:
    std::string print(const Term &e, int indent) {
        std::string pad(indent, ' ');
        switch (e.op()) {
        case TermOp::Var:
        case TermOp::Table: return e.op() == TermOp::Table ? "%" + e.name() : e.name();
        case TermOp::Const:
            if (e.constant().tag() == Value::Tag::String)
                return "'" + e.constant().as_string() + "'";
            if (e.constant().tag() == Value::Tag::Bool)
                return e.constant().as_bool() ? "true" : "false";
            return e.constant().to_string();
        case TermOp::Empty: return "[]";
        case TermOp::Lam:
            if (layout(e.kid(0)))
                return "fun(" + e.name() + ") ->\n" + pad + "  " + print(e.kid(0), indent + 2);
            return "fun(" + e.name() + ") -> " + print(e.kid(0), indent);
        case TermOp::App: return operand(e.kid(0), indent) + " " + operand(e.kid(1), indent);
        case TermOp::Record: {
            std::string s = "{";
            for (std::size_t i = 0; i < e.kids().size(); ++i)
                s += (i ? ", " : "") + e.labels()[i] + " = " + print(e.kid(i), indent + 2);
            return s + "}";
        }
        case TermOp::Field: return operand(e.kid(0), indent) + "." + e.name();
        case TermOp::Prim:
            if (e.name() == "not")
                return "not " + operand(e.kid(0), indent);
            return operand(e.kid(0), indent) + " " + (e.name() == "and" ? "&&" : e.name()) + " " +
                   operand(e.kid(1), indent);
        case TermOp::For:
            return "for " + e.name() + " in " + operand(e.kid(0), indent) + " do\n" + pad + print(e.kid(1), indent);
        case TermOp::If:
            return "if " + print(e.kid(0), indent) + " then\n" + pad + print(e.kid(1), indent);
        case TermOp::Yield: return "yield " + operand(e.kid(0), indent);
        case TermOp::Exists:
            return "exists (\n" + pad + "  " + print(e.kid(0), indent + 2) + "\n" + pad + ")";
        }
        return "?";
    }

  private:
    std::string operand(const Term &e, int indent) {
        if (atomic(e) || e.op() == TermOp::Exists)
            return print(e, indent);
        return "(" + print(e, indent + 1) + ")";
    }
};

} // namespace

Term compr_optic(const OpticExpr &e, const Schema &schema) { return Compiler(schema).optic(e); }

Term compr_query(const QueryExpr &q, const Schema &schema) { return compr_optic(q.optic, schema); }

Term build_nested_adapter(const Schema &schema, const PkMap &pk) { return Adapter(schema, pk).root(); }

std::vector<std::string> free_vars(const Term &e) {
    std::vector<std::string> bound;
    std::set<std::string> out;
    collect_free(e, bound, out);
    return {out.begin(), out.end()};
}

std::string canonical(const Term &e) {
    std::vector<std::string> bound;
    return canon(e, bound);
}

bool alpha_equivalent(const Term &a, const Term &b) { return canonical(a) == canonical(b); }

std::string print_compr(const Term &e) { return Printer().print(e, 0); }

} // namespace optica::compr
