#include "optica/triplet.hpp"

#include <stdexcept>

namespace optica::sql {

namespace {
bool same_step(const PrimOptic &a, const PrimOptic &b) { return a.whole == b.whole && a.name == b.name; }
} // namespace

bool same_path(const TPath &a, const TPath &b) {
    if (a.size() != b.size())
        return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!same_step(a[i], b[i]))
            return false;
    return true;
}

bool is_prefix(const TPath &prefix, const TPath &p) {
    if (prefix.size() > p.size())
        return false;
    for (std::size_t i = 0; i < prefix.size(); ++i)
        if (!same_step(prefix[i], p[i]))
            return false;
    return true;
}

std::string to_string(const TPath &p) {
    std::string s = "(";
    for (std::size_t i = 0; i < p.size(); ++i)
        s += (i ? "," : "") + p[i].name;
    return s + ")";
}

void EntityTrie::insert(const TPath &p) {
    for (std::size_t n = 1; n <= p.size(); ++n) {
        TPath prefix(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(n));
        if (!contains(prefix))
            paths_.push_back(std::move(prefix));
    }
}

bool EntityTrie::contains(const TPath &p) const {
    if (p.empty())
        return true;
    for (auto &q : paths_)
        if (same_path(p, q))
            return true;
    return false;
}

std::vector<TPath> EntityTrie::depth_first() const {
    std::vector<TPath> out;
    std::function<void(const TPath &)> visit = [&](const TPath &parent) {
        for (auto &p : paths_)
            if (p.size() == parent.size() + 1 && is_prefix(parent, p)) {
                out.push_back(p);
                visit(p);
            }
    };
    visit({});
    return out;
}

bool EntityTrie::prefix_closed() const {
    for (auto &p : paths_) {
        TPath parent(p.begin(), p.end() - 1);
        if (!contains(parent))
            return false;
    }
    return true;
}

EntityTrie merge(const EntityTrie &a, const EntityTrie &b) {
    EntityTrie out = a;
    for (auto &p : b.paths_)
        out.insert(p);
    return out;
}

TExpr TExpr::like(Value v) {
    TExpr e{Kind::Like, std::move(v), {}, {}, {}, nullptr, nullptr};
    return e;
}

TExpr TExpr::unary_not(TExpr x) { return TExpr{Kind::Not, Value(), {std::move(x)}, {}, {}, nullptr, nullptr}; }

TExpr TExpr::binary(Kind k, TExpr l, TExpr r) {
    return TExpr{k, Value(), {std::move(l), std::move(r)}, {}, {}, nullptr, nullptr};
}

TExpr TExpr::path_sel(TPath p) { return TExpr{Kind::PathSel, Value(), {}, std::move(p), {}, nullptr, nullptr}; }

TExpr TExpr::proj(TPath p, PrimOptic optic) {
    return TExpr{Kind::Proj, Value(), {}, std::move(p), std::move(optic), nullptr, nullptr};
}

TExpr TExpr::non_empty(Triplet inner, EntityTrie scope) {
    return TExpr{Kind::NonEmpty, Value(), {}, {}, {}, std::make_shared<const Triplet>(std::move(inner)),
                 std::make_shared<const EntityTrie>(std::move(scope))};
}

std::string TExpr::to_string() const {
    switch (kind) {
    case Kind::Like: return "like " + constant.to_literal();
    case Kind::Not: return "not(" + kids[0].to_string() + ")";
    case Kind::Gt: return "(" + kids[0].to_string() + " > " + kids[1].to_string() + ")";
    case Kind::Eq: return "(" + kids[0].to_string() + " == " + kids[1].to_string() + ")";
    case Kind::Sub: return "(" + kids[0].to_string() + " - " + kids[1].to_string() + ")";
    case Kind::PathSel: return sql::to_string(path);
    case Kind::Proj: return sql::to_string(path) + "." + optic.name;
    case Kind::NonEmpty: return "nonEmpty" + inner->to_string();
    }
    return "?";
}

Triplet Triplet::initial() { return Triplet{{TExpr::path_sel({})}, {}, {}}; }

void Triplet::restrict(const TExpr &e) {
    auto key = e.to_string();
    for (auto &w : where)
        if (w.to_string() == key)
            return;
    where.push_back(e);
}

std::string Triplet::to_string() const {
    std::string s = "([";
    for (std::size_t i = 0; i < select.size(); ++i)
        s += (i ? ", " : "") + select[i].to_string();
    s += "], {";
    auto paths = trie.paths();
    for (std::size_t i = 0; i < paths.size(); ++i)
        s += (i ? ", " : "") + sql::to_string(paths[i]);
    s += "}, {";
    for (std::size_t i = 0; i < where.size(); ++i)
        s += (i ? ", " : "") + where[i].to_string();
    return s + "})";
}

namespace {

const TExpr &single_selection(const OpticExpr &e, const Triplet &t) {
    if (t.select.size() != 1)
        throw std::logic_error(std::string("triplet for ") + to_string(e.op()) + " has " +
                               std::to_string(t.select.size()) + " selections, expected one");
    return t.select.front();
}

Triplet union_of(std::vector<TExpr> select, const Triplet &a, const Triplet &b) {
    Triplet out{std::move(select), merge(a.trie, b.trie), a.where};
    for (auto &w : b.where)
        out.restrict(w);
    return out;
}

class Translator {
  public:
    explicit Translator(const TripletObserver *observe) : observe_(observe) {}

    Triplet apply(const OpticExpr &e, const Triplet &t) {
        Triplet out = step(e, t);
        if (observe_)
            (*observe_)(e, t, out);
        return out;
    }

  private:
    Triplet step(const OpticExpr &e, const Triplet &t) {
        switch (e.op()) {
        case OpticOp::IdG:
        case OpticOp::IdA:
        case OpticOp::IdF:
        case OpticOp::ToAf:
        case OpticOp::ToFl: return is_cast(e.op()) ? apply(e.arg(0), t) : t;
        case OpticOp::SeqG:
        case OpticOp::SeqA:
        case OpticOp::SeqF: return apply(e.arg(1), apply(e.arg(0), t));
        case OpticOp::Fork: {
            Triplet l = apply(e.arg(0), t);
            Triplet r = apply(e.arg(1), t);
            std::vector<TExpr> sel = l.select;
            sel.insert(sel.end(), r.select.begin(), r.select.end());
            return union_of(std::move(sel), l, r);
        }
        case OpticOp::Like: return Triplet{{TExpr::like(e.constant())}, t.trie, t.where};
        case OpticOp::Not: {
            Triplet g = apply(e.arg(0), t);
            TExpr s = TExpr::unary_not(single_selection(e, g));
            return Triplet{{std::move(s)}, g.trie, g.where};
        }
        case OpticOp::Gt:
        case OpticOp::Eq:
        case OpticOp::Sub: {
            Triplet l = apply(e.arg(0), t);
            Triplet r = apply(e.arg(1), t);
            auto k = e.op() == OpticOp::Gt ? TExpr::Kind::Gt : e.op() == OpticOp::Eq ? TExpr::Kind::Eq : TExpr::Kind::Sub;
            return union_of({TExpr::binary(k, single_selection(e, l), single_selection(e, r))}, l, r);
        }
        case OpticOp::Filtered: {
            Triplet p = apply(e.arg(0), Triplet{t.select, t.trie, {}});
            const TExpr &cond = single_selection(e, p);
            if (!p.where.empty())
                throw std::logic_error("filtered predicate produced restrictions");
            Triplet out{t.select, p.trie, t.where};
            out.restrict(cond);
            return out;
        }
        case OpticOp::NonEmpty: {
            Triplet inner = apply(e.arg(0), Triplet{t.select, t.trie, {}});
            return Triplet{{TExpr::non_empty(std::move(inner), t.trie)}, t.trie, t.where};
        }
        case OpticOp::Prim: {
            const PrimOptic &p = e.prim();
            const TExpr &focus = single_selection(e, t);
            if (focus.kind != TExpr::Kind::PathSel)
                throw std::logic_error("primitive " + p.name + " applied to a non-entity selection");
            if (!p.part.is_entity())
                return Triplet{{TExpr::proj(focus.path, p)}, t.trie, t.where};
            TPath ext = focus.path;
            ext.push_back(p);
            Triplet out{{TExpr::path_sel(ext)}, t.trie, t.where};
            out.trie.insert(ext);
            return out;
        }
        }
        throw std::logic_error("unknown optic node");
    }

    const TripletObserver *observe_;
};

} // namespace

TripletFn to_triplet(const OpticExpr &e) {
    return [e](const Triplet &t) { return Translator(nullptr).apply(e, t); };
}

Triplet apply_traced(const OpticExpr &e, const Triplet &t, const TripletObserver &observe) {
    return Translator(&observe).apply(e, t);
}

void RefinedTrie::bind(const TPath &p, std::string alias) {
    for (auto &[q, a] : entries_)
        if (same_path(p, q)) {
            a = std::move(alias);
            return;
        }
    entries_.emplace_back(p, std::move(alias));
}

bool RefinedTrie::contains(const TPath &p) const {
    for (auto &[q, a] : entries_)
        if (same_path(p, q))
            return true;
    return false;
}

const std::string &RefinedTrie::alias(const TPath &p) const {
    for (auto &[q, a] : entries_)
        if (same_path(p, q))
            return a;
    throw std::logic_error("no alias for path " + to_string(p));
}

RefinedTrie merge_left(const RefinedTrie &a, const RefinedTrie &b) {
    RefinedTrie out = a;
    for (auto &[p, alias] : b.entries_)
        if (!out.contains(p))
            out.entries_.emplace_back(p, alias);
    return out;
}

RefinedTrie fresh(const EntityTrie &trie, AliasSupply &supply) {
    if (trie.empty())
        throw std::invalid_argument("cannot assign aliases to an empty trie");
    RefinedTrie out;
    for (auto &p : trie.depth_first())
        out.bind(p, supply.next());
    return out;
}

RefinedTrie fresh(const EntityTrie &trie) {
    AliasSupply s;
    return fresh(trie, s);
}

} // namespace optica::sql
