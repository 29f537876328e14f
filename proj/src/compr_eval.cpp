#include <algorithm>

#include "optica/compr.hpp"
#include "optica/error.hpp"

namespace optica::compr {

namespace {

struct Env {
    std::string name;
    CValue value;
    std::shared_ptr<const Env> next;
};
using EnvPtr = std::shared_ptr<const Env>;

} // namespace

struct CValue::Closure {
    std::string param;
    Term body;
    EnvPtr env;
};

CValue CValue::of(Value v) {
    CValue c;
    c.base = std::move(v);
    return c;
}

CValue CValue::record(std::vector<std::string> labels, std::vector<CValue> values) {
    CValue c;
    c.kind = Kind::Record;
    c.labels = std::move(labels);
    c.items = std::move(values);
    return c;
}

CValue CValue::bag(std::vector<CValue> items) {
    CValue c;
    c.kind = Kind::Bag;
    c.items = std::move(items);
    return c;
}

bool operator==(const CValue &a, const CValue &b) {
    if (a.kind != b.kind)
        return false;
    switch (a.kind) {
    case CValue::Kind::Base: return a.base == b.base;
    case CValue::Kind::Record: return a.labels == b.labels && a.items == b.items;
    case CValue::Kind::Bag: return a.items == b.items;
    case CValue::Kind::Closure: return a.closure == b.closure;
    }
    return false;
}

std::string CValue::to_string() const {
    switch (kind) {
    case Kind::Base: return base.to_string();
    case Kind::Record: {
        std::string s = "{";
        for (std::size_t i = 0; i < items.size(); ++i)
            s += (i ? ", " : "") + labels[i] + " = " + items[i].to_string();
        return s + "}";
    }
    case Kind::Bag: {
        std::string s = "[";
        for (std::size_t i = 0; i < items.size(); ++i)
            s += (i ? "," : "") + items[i].to_string();
        return s + "]";
    }
    case Kind::Closure: return "<fun>";
    }
    return "?";
}

CValue from_value(const Value &v) {
    switch (v.tag()) {
    case Value::Tag::Pair: return CValue::record({"_1", "_2"}, {from_value(v.first()), from_value(v.second())});
    case Value::Tag::Record: {
        std::vector<std::string> labels;
        std::vector<CValue> values;
        for (auto &[name, fv] : v.fields()) {
            labels.push_back(name);
            values.push_back(from_value(fv));
        }
        return CValue::record(std::move(labels), std::move(values));
    }
    case Value::Tag::List: {
        std::vector<CValue> items;
        for (const Value &i : v.items())
            items.push_back(from_value(i));
        return CValue::bag(std::move(items));
    }
    default: return CValue::of(v);
    }
}

Tables from_database(const Database &db) {
    Tables out;
    for (const RelTable &t : db.tables) {
        std::vector<CValue> rows;
        for (const Row &r : t.rows) {
            std::vector<CValue> cells;
            for (std::size_t i = 0; i < r.size(); ++i) {
                if (!r[i])
                    throw ExecError("NULL in " + t.name + "." + t.columns[i] + " has no comprehension value");
                cells.push_back(CValue::of(*r[i]));
            }
            rows.push_back(CValue::record(t.columns, std::move(cells)));
        }
        out[t.name] = CValue::bag(std::move(rows));
    }
    return out;
}

namespace {

class Interpreter {
  public:
    explicit Interpreter(const Tables &tables) : tables_(tables) {}

    CValue eval(const Term &e, const EnvPtr &env) {
        switch (e.op()) {
        case TermOp::Var:
            for (const Env *p = env.get(); p; p = p->next.get())
                if (p->name == e.name())
                    return p->value;
            throw ExecError("unbound variable " + e.name());
        case TermOp::Lam: {
            CValue c;
            c.kind = CValue::Kind::Closure;
            c.closure = std::make_shared<const CValue::Closure>(CValue::Closure{e.name(), e.kid(0), env});
            return c;
        }
        case TermOp::App: {
            CValue f = eval(e.kid(0), env);
            if (f.kind != CValue::Kind::Closure)
                throw ExecError("application of a non-function " + f.to_string());
            CValue a = eval(e.kid(1), env);
            return eval(f.closure->body, bind(f.closure->param, std::move(a), f.closure->env));
        }
        case TermOp::Record: {
            std::vector<CValue> values;
            for (const Term &k : e.kids())
                values.push_back(eval(k, env));
            return CValue::record(e.labels(), std::move(values));
        }
        case TermOp::Field: {
            CValue r = eval(e.kid(0), env);
            if (r.kind == CValue::Kind::Record)
                for (std::size_t i = 0; i < r.labels.size(); ++i)
                    if (r.labels[i] == e.name())
                        return r.items[i];
            throw ExecError("no field " + e.name() + " in " + r.to_string());
        }
        case TermOp::Const: return CValue::of(e.constant());
        case TermOp::Prim: return prim(e, env);
        case TermOp::For: {
            std::vector<CValue> out;
            for (const CValue &item : bag(e.kid(0), env)) {
                CValue b = eval(e.kid(1), bind(e.name(), item, env));
                if (b.kind != CValue::Kind::Bag)
                    throw ExecError("for body is not a bag");
                out.insert(out.end(), b.items.begin(), b.items.end());
            }
            return CValue::bag(std::move(out));
        }
        case TermOp::If:
            if (truth(e.kid(0), env))
                return eval(e.kid(1), env);
            return CValue::bag({});
        case TermOp::Yield: return CValue::bag({eval(e.kid(0), env)});
        case TermOp::Exists: return CValue::of(Value::boolean(!bag(e.kid(0), env).empty()));
        case TermOp::Table: {
            auto it = tables_.find(e.name());
            if (it == tables_.end())
                throw ExecError("unknown table " + e.name());
            return it->second;
        }
        case TermOp::Empty: return CValue::bag({});
        }
        throw ExecError("unknown term");
    }

  private:
    static EnvPtr bind(const std::string &name, CValue v, const EnvPtr &env) {
        return std::make_shared<const Env>(Env{name, std::move(v), env});
    }

    std::vector<CValue> bag(const Term &e, const EnvPtr &env) {
        CValue v = eval(e, env);
        if (v.kind != CValue::Kind::Bag)
            throw ExecError("expected a bag, got " + v.to_string());
        return v.items;
    }

    bool truth(const Term &e, const EnvPtr &env) {
        CValue v = eval(e, env);
        if (v.kind != CValue::Kind::Base || v.base.tag() != Value::Tag::Bool)
            throw ExecError("expected a boolean, got " + v.to_string());
        return v.base.as_bool();
    }

    std::int64_t integer(const Term &e, const EnvPtr &env) {
        CValue v = eval(e, env);
        if (v.kind != CValue::Kind::Base || v.base.tag() != Value::Tag::Int)
            throw ExecError("expected an integer, got " + v.to_string());
        return v.base.as_int();
    }

    CValue prim(const Term &e, const EnvPtr &env) {
        const std::string &op = e.name();
        if (op == "not")
            return CValue::of(Value::boolean(!truth(e.kid(0), env)));
        if (op == "and")
            return CValue::of(Value::boolean(truth(e.kid(0), env) && truth(e.kid(1), env)));
        if (op == "=")
            return CValue::of(Value::boolean(eval(e.kid(0), env) == eval(e.kid(1), env)));
        if (op == ">")
            return CValue::of(Value::boolean(integer(e.kid(0), env) > integer(e.kid(1), env)));
        if (op == "-")
            return CValue::of(Value::integer(integer(e.kid(0), env) - integer(e.kid(1), env)));
        throw ExecError("unknown operator " + op);
    }

    const Tables &tables_;
};

} // namespace

CValue interpret(const Term &e, const Tables &tables) { return Interpreter(tables).eval(e, nullptr); }

} // namespace optica::compr
