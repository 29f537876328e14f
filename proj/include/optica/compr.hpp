#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "optica/ast.hpp"
#include "optica/schema.hpp"
#include "optica/value.hpp"

namespace optica::compr {

enum class TermOp { Var, Lam, App, Record, Field, Const, Prim, For, If, Yield, Exists, Table, Empty };

/// Immutable comprehension term. Option results are bags of size at most one.
class Term {
  public:
    struct Node {
        TermOp op;
        /// Var and Table: the name; Lam and For: the binder; Field: the label; Prim: the operator.
        std::string name;
        /// Record labels, parallel to `kids`.
        std::vector<std::string> labels;
        Value constant;
        std::vector<Term> kids;
    };

    explicit Term(Node n) : node_(std::make_shared<const Node>(std::move(n))) {}

    TermOp op() const { return node_->op; }
    const std::string &name() const { return node_->name; }
    const std::vector<std::string> &labels() const { return node_->labels; }
    const Value &constant() const { return node_->constant; }
    const std::vector<Term> &kids() const { return node_->kids; }
    const Term &kid(std::size_t i) const { return node_->kids.at(i); }
    bool same_node(const Term &o) const { return node_ == o.node_; }

  private:
    std::shared_ptr<const Node> node_;
};

/// Term constructors. Prim operators: "not", ">", "=", "-", "and".
namespace term {
Term var(std::string name);
Term lam(std::string param, Term body);
Term app(Term fun, Term arg);
Term record(std::vector<std::string> labels, std::vector<Term> values);
Term field(Term e, std::string label);
Term constant(Value v);
Term prim(std::string op, std::vector<Term> args);
Term for_(std::string binder, Term source, Term body);
Term if_(Term test, Term body);
Term yield(Term e);
Term exists(Term e);
Term table(std::string name);
Term empty();
} // namespace term

/// Function-valued term for a checked optic over the nested model.
Term compr_optic(const OpticExpr &e, const Schema &schema);
Term compr_query(const QueryExpr &q, const Schema &schema);

/// Closed term rebuilding the nested root value from the flat tables produced by `shred`.
/// Throws MissingPkError for undeclared keys and SchemaError for affine fields.
Term build_nested_adapter(const Schema &schema, const PkMap &pk);

enum class Strategy { Innermost, Outermost };

struct NormalizeOptions {
    Strategy strategy = Strategy::Innermost;
    std::size_t max_steps = 100000;
    /// Verify after every rewrite that no variable became free.
    bool check_scope = false;
};

/// Rewrites to normal form; throws NormalizeError when the step budget runs out.
Term normalize(const Term &e, NormalizeOptions opts = {});

std::vector<std::string> free_vars(const Term &e);

/// Equality up to renaming of bound variables and reordering of `and` conjuncts.
bool alpha_equivalent(const Term &a, const Term &b);
/// Canonical text used by `alpha_equivalent`.
std::string canonical(const Term &e);

/// Multi-line rendering in for/if/yield notation.
std::string print_compr(const Term &e);

/// Runtime value of the reference interpreter.
struct CValue {
    enum class Kind { Base, Record, Bag, Closure };
    struct Closure;

    Kind kind = Kind::Base;
    Value base;
    std::vector<std::string> labels;
    /// Record values (parallel to labels) or bag items.
    std::vector<CValue> items;
    std::shared_ptr<const Closure> closure;

    static CValue of(Value v);
    static CValue record(std::vector<std::string> labels, std::vector<CValue> values);
    static CValue bag(std::vector<CValue> items);

    std::string to_string() const;
    friend bool operator==(const CValue &a, const CValue &b);
};

/// Nested data as a comprehension value: entity records by field name, pairs as `{_1, _2}`.
CValue from_value(const Value &v);

using Tables = std::map<std::string, CValue>;
/// Each relational table as a bag of records keyed by column name; NULL cells are rejected.
Tables from_database(const Database &db);

/// Reference bag interpreter. Throws ExecError on stuck terms.
CValue interpret(const Term &e, const Tables &tables = {});

} // namespace optica::compr
