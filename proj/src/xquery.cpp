#include "optica/xquery.hpp"

#include <memory>
#include <vector>

namespace optica::xquery {

namespace {

struct Node;
using XQ = std::shared_ptr<const Node>;

/// Small XQuery syntax tree; printing decides where brackets and slashes go.
struct Node {
    enum Kind { Self, Element, Literal, Path, Filter, Call, Binary, Tuple } kind;
    std::string text; // element name, literal text, function name or operator
    std::vector<XQ> kids;
};

XQ mk(Node::Kind k, std::string text, std::vector<XQ> kids = {}) {
    return std::make_shared<const Node>(Node{k, std::move(text), std::move(kids)});
}

std::string literal(const Value &v) {
    switch (v.tag()) {
    case Value::Tag::Bool: return v.as_bool() ? "true()" : "false()";
    case Value::Tag::Int: return v.as_int() < 0 ? "(" + v.to_string() + ")" : v.to_string();
    default: {
        std::string s = "\"";
        for (char c : v.as_string())
            s += c == '"' ? std::string("\"\"") : std::string(1, c);
        return s + "\"";
    }
    }
}

bool boolean_valued(const XQ &x) {
    if (x->kind == Node::Call)
        return true;
    if (x->kind == Node::Binary)
        return x->text != "-";
    return x->kind == Node::Literal && (x->text == "true()" || x->text == "false()");
}

XQ path(XQ l, XQ r) {
    std::vector<XQ> steps;
    for (auto &x : {l, r}) {
        if (x->kind == Node::Path)
            steps.insert(steps.end(), x->kids.begin(), x->kids.end());
        else
            steps.push_back(x);
    }
    return mk(Node::Path, "", std::move(steps));
}

XQ build(const OpticExpr &e) {
    switch (e.op()) {
    case OpticOp::IdG:
    case OpticOp::IdA:
    case OpticOp::IdF: return mk(Node::Self, ".");
    case OpticOp::SeqG:
    case OpticOp::SeqA:
    case OpticOp::SeqF: return path(build(e.arg(0)), build(e.arg(1)));
    case OpticOp::Fork: return mk(Node::Tuple, "", {build(e.arg(0)), build(e.arg(1))});
    case OpticOp::Like: return mk(Node::Literal, literal(e.constant()));
    case OpticOp::Not: {
        XQ inner = build(e.arg(0));
        // not(not(b)) collapses only when b already denotes a boolean, not a node sequence.
        if (inner->kind == Node::Call && inner->text == "not" && boolean_valued(inner->kids[0]))
            return inner->kids[0];
        return mk(Node::Call, "not", {inner});
    }
    case OpticOp::Gt: return mk(Node::Binary, ">", {build(e.arg(0)), build(e.arg(1))});
    case OpticOp::Eq: return mk(Node::Binary, "=", {build(e.arg(0)), build(e.arg(1))});
    case OpticOp::Sub: return mk(Node::Binary, "-", {build(e.arg(0)), build(e.arg(1))});
    case OpticOp::Filtered: return mk(Node::Filter, "", {build(e.arg(0))});
    case OpticOp::NonEmpty: return mk(Node::Call, "exists", {build(e.arg(0))});
    case OpticOp::ToAf:
    case OpticOp::ToFl: return build(e.arg(0));
    case OpticOp::Prim: return mk(Node::Element, e.prim().element);
    }
    return mk(Node::Self, ".");
}

std::string print(const XQ &x);

/// A step inside a path or an operand of a binary operator.
std::string operand(const XQ &x) { return x->kind == Node::Binary ? "(" + print(x) + ")" : print(x); }

std::string print(const XQ &x) {
    switch (x->kind) {
    case Node::Self:
    case Node::Element:
    case Node::Literal: return x->text;
    case Node::Filter: return ".[" + print(x->kids[0]) + "]";
    case Node::Call: return x->text + "(" + print(x->kids[0]) + ")";
    case Node::Binary: return operand(x->kids[0]) + " " + x->text + " " + operand(x->kids[1]);
    case Node::Tuple:
        return "<tuple><one>{" + print(x->kids[0]) + "}</one><two>{" + print(x->kids[1]) + "}</two></tuple>";
    case Node::Path: {
        std::string s;
        for (std::size_t i = 0; i < x->kids.size(); ++i) {
            const XQ &step = x->kids[i];
            if (i > 0 && step->kind == Node::Filter) {
                s += "[" + print(step->kids[0]) + "]";
                continue;
            }
            if (i > 0)
                s += "/";
            s += operand(step);
        }
        return s;
    }
    }
    return ".";
}

} // namespace

std::string xq_optic(const OpticExpr &e) { return print(build(e)); }

std::string xq_query(const QueryExpr &q) {
    XQ body = build(q.optic);
    return "/xml/" + (body->kind == Node::Binary ? "(" + print(body) + ")" : print(body));
}

} // namespace optica::xquery
