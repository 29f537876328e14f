#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "optica/error.hpp"
#include "optica/schema.hpp"
#include "optica/types.hpp"
#include "optica/value.hpp"

namespace optica {

enum class OpticOp {
    IdG, IdA, IdF,
    SeqG, SeqA, SeqF,
    Fork,
    Like, Not, Gt, Eq, Sub,
    Filtered, NonEmpty,
    ToAf, ToFl,
    Prim,
};

const char *to_string(OpticOp op);

/// Immutable optic expression tree. Checked trees carry a type on every node and the
/// resolved schema entry on every Prim.
class OpticExpr {
  public:
    struct Node {
        OpticOp op;
        std::vector<OpticExpr> args;
        Value constant;
        std::string name;
        SourceSpan span;
        std::optional<OpticType> type;
        std::shared_ptr<const PrimOptic> prim;
    };

    explicit OpticExpr(Node n) : node_(std::make_shared<const Node>(std::move(n))) {}

    OpticOp op() const { return node_->op; }
    std::size_t arity() const { return node_->args.size(); }
    const OpticExpr &arg(std::size_t i) const { return node_->args.at(i); }
    const std::vector<OpticExpr> &args() const { return node_->args; }
    const Value &constant() const { return node_->constant; }
    const std::string &name() const { return node_->name; }
    SourceSpan span() const { return node_->span; }
    bool checked() const { return node_->type.has_value(); }
    /// Throws std::logic_error on unchecked trees.
    const OpticType &type() const;
    const PrimOptic &prim() const;
    const Node &node() const { return *node_; }

    OpticExpr with_span(SourceSpan s) const;

  private:
    std::shared_ptr<const Node> node_;
};

/// Structural equality ignoring spans and annotations.
bool same_structure(const OpticExpr &a, const OpticExpr &b);
/// Structural equality that ignores cast nodes and the kind tags of Seq and Id.
bool same_modulo_casts(const OpticExpr &a, const OpticExpr &b);

/// S-expression dump, e.g. `(SeqF couples (ToFl (Filtered ...)))`.
std::string dump(const OpticExpr &e, bool with_types = false);

std::size_t node_count(const OpticExpr &e);
std::size_t depth(const OpticExpr &e);

namespace optic {
OpticExpr id(OpticKind k);
OpticExpr seq(OpticKind k, OpticExpr l, OpticExpr r);
OpticExpr fork(OpticExpr l, OpticExpr r);
OpticExpr like(Value c);
OpticExpr not_(OpticExpr e);
OpticExpr gt(OpticExpr l, OpticExpr r);
OpticExpr eq(OpticExpr l, OpticExpr r);
OpticExpr sub(OpticExpr l, OpticExpr r);
OpticExpr filtered(OpticExpr p);
OpticExpr non_empty(OpticExpr f);
OpticExpr to_af(OpticExpr g);
OpticExpr to_fl(OpticExpr a);
OpticExpr prim(std::string name);
} // namespace optic

OpticOp id_op(OpticKind k);
OpticOp seq_op(OpticKind k);
bool is_id(OpticOp op);
bool is_seq(OpticOp op);
bool is_cast(OpticOp op);
/// Kind tag of an Id/Seq op.
OpticKind op_kind(OpticOp op);

/// Wraps `e`, of kind `from`, in the casts needed to reach `to`; throws TypeError when `to < from`.
OpticExpr auto_cast(const OpticExpr &e, OpticKind from, OpticKind to);

/// Derived combinators, expanded into core nodes. `fl` must be a fold and `p` a boolean getter.
OpticExpr desugar_empty(const OpticExpr &fl);
OpticExpr desugar_all(const OpticExpr &fl, const OpticExpr &p);
OpticExpr desugar_any(const OpticExpr &fl, const OpticExpr &p);
OpticExpr desugar_elem(const OpticExpr &fl, const Value &a);

enum class QueryOp { Get, Preview, GetAll };

const char *to_string(QueryOp op);

struct QueryExpr {
    QueryOp op = QueryOp::GetAll;
    OpticExpr optic;
    SourceSpan span;
};

std::string dump(const QueryExpr &q, bool with_types = false);
bool same_structure(const QueryExpr &a, const QueryExpr &b);

/// Type inference; returns the tree annotated with types. Throws TypeError.
OpticExpr check_optic(const OpticExpr &e, const Schema &schema);
OpticType typecheck(const OpticExpr &e, const Schema &schema);

struct CheckedQuery {
    QueryExpr query;
    QueryType type;
};

CheckedQuery check_query(const QueryExpr &q, const Schema &schema);
QueryType typecheck_query(const QueryExpr &q, const Schema &schema);

} // namespace optica
