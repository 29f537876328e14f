#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "optica/ast.hpp"
#include "optica/compr.hpp"
#include "optica/schema.hpp"
#include "optica/value.hpp"

namespace optica::testing {

std::string read_file(const std::string &path);
/// Path of a file under tests/data or tests/golden.
std::string data_path(const std::string &name);
std::string golden_path(const std::string &name);
/// Collapses runs of whitespace to one space and trims.
std::string squash(const std::string &s);
/// `squash`, then drops boundary whitespace between constructor tags, which XQuery strips by default.
std::string squash_xquery(const std::string &s);

struct Fixture {
    SchemaFile couples;
    SchemaFile org;
    /// Org with an extra `skills : fold Employee String`.
    SchemaFile org_skills;
    Value couples_data;
    Value org_data;

    static const Fixture &get();
};

extern const char *const differences_text;
extern const char *const expertise_text;

/// Parsed and checked.
QueryExpr checked_query(const std::string &text, const Schema &schema);

using Rng = std::mt19937_64;

struct Generated {
    OpticExpr optic;
    OpticKind kind;
    ModelType part;
};

/// Type-directed generator of well-typed optics; results are checked.
class OpticGen {
  public:
    OpticGen(const Schema &schema, Rng &rng);

    Generated of_kind(OpticKind k, const ModelType &whole, int depth);
    Generated getter(const ModelType &whole, int depth);
    Generated getter_to(const ModelType &whole, const ModelType &part, int depth);
    Generated affine(const ModelType &whole, int depth);
    Generated fold(const ModelType &whole, int depth);
    /// A boolean getter.
    Generated predicate(const ModelType &whole, int depth);
    /// getAll query led by a root fold primitive.
    QueryExpr rooted_query(int depth);
    QueryExpr query(int depth);

  private:
    Generated finish(OpticExpr e);
    Generated raw_getter(const ModelType &w, int d);
    Generated raw_getter_to(const ModelType &w, const ModelType &t, int d);
    Generated raw_affine(const ModelType &w, int d);
    Generated raw_fold(const ModelType &w, int d);
    Generated seq(OpticKind k, const Generated &a, const Generated &b);
    Generated like(const ModelType &t);
    std::vector<const PrimOptic *> prims(const ModelType &w, OpticKind kind, std::optional<ModelType> part = {});
    bool chance(double p);
    /// Picks a choice id by relative weight.
    int weighted(const std::vector<std::pair<int, int>> &choices);
    template <class T> const T &pick(const std::vector<T> &v) {
        return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng_)];
    }

    const Schema &schema_;
    Rng &rng_;
};

/// Depth of the tree without cast nodes, which the parser inserts implicitly.
std::size_t surface_depth(const OpticExpr &e);

/// Random nested data for the couples and org schemas (org also covers org_skills).
Value random_couples(Rng &rng, int max_couples = 5);
Value random_org(Rng &rng, int max_each = 5, bool skills = false);
/// Random instance for whichever of the test schemas `schema` is.
Value random_instance(const Schema &schema, Rng &rng);

/// Every value of `type` reachable inside `root`, including `root` itself.
std::vector<Value> values_of(const ModelType &type, const Value &root, const Schema &schema);

/// Multiset equality on flattened tuples.
bool same_multiset(std::vector<std::vector<Value>> a, std::vector<std::vector<Value>> b);
std::vector<std::vector<Value>> flattened(const std::vector<Value> &values);
std::vector<std::vector<Value>> flattened(const std::vector<Row> &rows);

/// The hand-written comprehension for expertise over the flat tables.
compr::Term expertise_tlinq();

} // namespace optica::testing
