#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "optica/ast.hpp"

namespace optica::sql {

/// Sequence of entity-valued primitive optics starting at the root; empty is the root itself.
using TPath = std::vector<PrimOptic>;

bool same_path(const TPath &a, const TPath &b);
bool is_prefix(const TPath &prefix, const TPath &p);
std::string to_string(const TPath &p);

/// Prefix-closed set of paths, kept in insertion order. The root path is implicit.
class EntityTrie {
  public:
    /// Inserts `p` and any missing prefix of it.
    void insert(const TPath &p);
    bool contains(const TPath &p) const;
    bool empty() const { return paths_.empty(); }
    const std::vector<TPath> &paths() const { return paths_; }
    /// Paths in depth-first order, siblings by insertion.
    std::vector<TPath> depth_first() const;
    bool prefix_closed() const;
    /// Left paths in order, then the right's new paths in order.
    friend EntityTrie merge(const EntityTrie &a, const EntityTrie &b);

  private:
    std::vector<TPath> paths_;
};

struct Triplet;

struct TExpr {
    enum class Kind { Like, Not, Gt, Eq, Sub, PathSel, Proj, NonEmpty };
    Kind kind;
    Value constant;              // Like
    std::vector<TExpr> kids;     // Not, Gt, Eq, Sub
    TPath path;                  // PathSel, Proj
    PrimOptic optic;             // Proj: base-valued optic applied to `path`
    std::shared_ptr<const Triplet> inner; // NonEmpty: snapshot of the nested query
    std::shared_ptr<const EntityTrie> scope; // NonEmpty: the trie shared with the enclosing query

    static TExpr like(Value v);
    static TExpr unary_not(TExpr e);
    static TExpr binary(Kind k, TExpr l, TExpr r);
    static TExpr path_sel(TPath p);
    static TExpr proj(TPath p, PrimOptic optic);
    static TExpr non_empty(Triplet inner, EntityTrie scope);

    std::string to_string() const;
};

struct Triplet {
    std::vector<TExpr> select;
    EntityTrie trie;
    /// A set: insertion ordered, no structural duplicates.
    std::vector<TExpr> where;

    /// Selection focused on the root, empty trie, no restrictions.
    static Triplet initial();
    void restrict(const TExpr &e);
    std::string to_string() const;
};

using TripletFn = std::function<Triplet(const Triplet &)>;

/// Non-standard semantics of a checked optic as an endofunction on triplets.
TripletFn to_triplet(const OpticExpr &e);

/// Called after each node's translation is applied, innermost first.
using TripletObserver = std::function<void(const OpticExpr &node, const Triplet &in, const Triplet &out)>;
Triplet apply_traced(const OpticExpr &e, const Triplet &t, const TripletObserver &observe);

/// Alias assignment for trie paths.
class RefinedTrie {
  public:
    void bind(const TPath &p, std::string alias);
    bool contains(const TPath &p) const;
    const std::string &alias(const TPath &p) const;
    const std::vector<std::pair<TPath, std::string>> &entries() const { return entries_; }
    /// Keeps the left alias when both sides name the same path.
    friend RefinedTrie merge_left(const RefinedTrie &a, const RefinedTrie &b);

  private:
    std::vector<std::pair<TPath, std::string>> entries_;
};

/// Hands out t0, t1, ... in request order.
class AliasSupply {
  public:
    std::string next() { return "t" + std::to_string(n_++); }

  private:
    int n_ = 0;
};

/// Aliases for every path in depth-first insertion order. Throws on an empty trie.
RefinedTrie fresh(const EntityTrie &trie, AliasSupply &supply);
RefinedTrie fresh(const EntityTrie &trie);

} // namespace optica::sql
