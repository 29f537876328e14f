#include <algorithm>
#include <cctype>
#include <set>

#include "optica/compr.hpp"

namespace optica::compr {

using namespace term;

namespace {

Term rebuild(const Term &e, std::vector<Term> kids) {
    Term::Node n{e.op(), e.name(), e.labels(), e.constant(), std::move(kids)};
    return Term(std::move(n));
}

bool is_bool(const Term &e, bool b) {
    return e.op() == TermOp::Const && e.constant().tag() == Value::Tag::Bool && e.constant().as_bool() == b;
}

bool is_empty_record(const Term &e) { return e.op() == TermOp::Record && e.kids().empty(); }

class Normalizer {
  public:
    explicit Normalizer(NormalizeOptions opts) : opts_(opts) {}

    Term run(const Term &e) { return opts_.strategy == Strategy::Innermost ? inner(e) : outer(e); }

  private:
    Term inner(const Term &e) {
        Term t = map_kids(e, [this](const Term &k) { return inner(k); });
        if (auto r = fire(t))
            return inner(*r);
        return t;
    }

    Term outer(Term t) {
        for (;;) {
            while (auto r = fire(t))
                t = *r;
            bool changed = false;
            Term n = map_kids(t, [&](const Term &k) {
                Term nk = outer(k);
                changed |= !nk.same_node(k);
                return nk;
            });
            if (!changed)
                return t;
            t = n;
            if (auto r = fire(t))
                t = *r;
            else
                return t;
        }
    }

    template <class F> Term map_kids(const Term &e, F f) {
        if (e.kids().empty())
            return e;
        std::vector<Term> kids;
        bool changed = false;
        for (const Term &k : e.kids()) {
            kids.push_back(f(k));
            changed |= !kids.back().same_node(k);
        }
        return changed ? rebuild(e, std::move(kids)) : e;
    }

    std::optional<Term> fire(const Term &t) {
        auto r = rewrite(t);
        if (!r)
            return r;
        if (++steps_ > opts_.max_steps)
            throw NormalizeError("normalization exceeded " + std::to_string(opts_.max_steps) + " rewrite steps");
        if (opts_.check_scope) {
            auto before = free_vars(t);
            for (const std::string &x : free_vars(*r))
                if (!std::binary_search(before.begin(), before.end(), x))
                    throw NormalizeError("rewrite of " + canonical(t) + " freed variable " + x);
        }
        return r;
    }

    std::optional<Term> rewrite(const Term &t) {
        switch (t.op()) {
        case TermOp::App:
            if (t.kid(0).op() == TermOp::Lam)
                return subst(t.kid(0).kid(0), t.kid(0).name(), t.kid(1));
            break;
        case TermOp::Field:
            if (t.kid(0).op() == TermOp::Record) {
                const Term &r = t.kid(0);
                for (std::size_t i = 0; i < r.labels().size(); ++i)
                    if (r.labels()[i] == t.name())
                        return r.kid(i);
            }
            break;
        case TermOp::For: {
            const Term &src = t.kid(0);
            const Term &body = t.kid(1);
            if (src.op() == TermOp::Empty || body.op() == TermOp::Empty)
                return empty();
            if (src.op() == TermOp::Yield)
                return subst(body, t.name(), src.kid(0));
            if (src.op() == TermOp::If)
                return if_(src.kid(0), for_(t.name(), src.kid(1), body));
            if (src.op() == TermOp::For) {
                // for x in (for y in L do M) do N  =>  for y in L do for x in M do N
                std::string y = src.name();
                Term m = src.kid(1);
                auto fv = free_vars(body);
                if (y != t.name() && std::binary_search(fv.begin(), fv.end(), y)) {
                    std::string z = fresh(y, {m, body});
                    m = subst(m, y, var(z));
                    y = z;
                }
                return for_(y, src.kid(0), for_(t.name(), m, body));
            }
            break;
        }
        case TermOp::If:
            if (is_bool(t.kid(0), true))
                return t.kid(1);
            if (is_bool(t.kid(0), false) || t.kid(1).op() == TermOp::Empty)
                return empty();
            if (t.kid(1).op() == TermOp::If)
                return if_(prim("and", {t.kid(0), t.kid(1).kid(0)}), t.kid(1).kid(1));
            break;
        case TermOp::Prim:
            if (t.name() == "not") {
                const Term &a = t.kid(0);
                if (a.op() == TermOp::Prim && a.name() == "not")
                    return a.kid(0);
                if (a.op() == TermOp::Const && a.constant().tag() == Value::Tag::Bool)
                    return constant(Value::boolean(!a.constant().as_bool()));
            }
            break;
        case TermOp::Exists:
            if (t.kid(0).op() == TermOp::Empty)
                return constant(Value::boolean(false));
            if (auto e = erase(t.kid(0)))
                return exists(*e);
            break;
        default: break;
        }
        return std::nullopt;
    }

    /// Only emptiness is observable under `exists`, so tail yields drop their payload.
    std::optional<Term> erase(const Term &e) {
        switch (e.op()) {
        case TermOp::For:
            if (auto b = erase(e.kid(1)))
                return for_(e.name(), e.kid(0), *b);
            return std::nullopt;
        case TermOp::If:
            if (auto b = erase(e.kid(1)))
                return if_(e.kid(0), *b);
            return std::nullopt;
        case TermOp::Yield:
            if (is_empty_record(e.kid(0)))
                return std::nullopt;
            return yield(record({}, {}));
        default: return std::nullopt;
        }
    }

    std::string fresh(const std::string &base, std::vector<Term> avoid_in) {
        std::set<std::string> avoid;
        for (const Term &t : avoid_in)
            for (auto &x : free_vars(t))
                avoid.insert(x);
        std::string stem = base;
        while (stem.size() > 1 && std::isdigit(static_cast<unsigned char>(stem.back())))
            stem.pop_back();
        for (;;) {
            std::string name = stem + std::to_string(++counter_);
            if (!avoid.count(name))
                return name;
        }
    }

    Term subst(const Term &e, const std::string &x, const Term &v) {
        auto fv = free_vars(v);
        return subst(e, x, v, fv);
    }

    Term subst(const Term &e, const std::string &x, const Term &v, const std::vector<std::string> &fv) {
        switch (e.op()) {
        case TermOp::Var: return e.name() == x ? v : e;
        case TermOp::Lam: {
            if (e.name() == x)
                return e;
            auto [name, body] = binder(e.name(), e.kid(0), x, v, fv);
            return lam(name, subst(body, x, v, fv));
        }
        case TermOp::For: {
            Term src = subst(e.kid(0), x, v, fv);
            if (e.name() == x)
                return for_(e.name(), src, e.kid(1));
            auto [name, body] = binder(e.name(), e.kid(1), x, v, fv);
            return for_(name, src, subst(body, x, v, fv));
        }
        default:
            return map_kids(e, [&](const Term &k) { return subst(k, x, v, fv); });
        }
    }

    /// Renames binder `y` of `body` when substituting `v` for `x` would capture it.
    std::pair<std::string, Term> binder(const std::string &y, const Term &body, const std::string &x, const Term &v,
                                        const std::vector<std::string> &fv) {
        if (!std::binary_search(fv.begin(), fv.end(), y))
            return {y, body};
        std::string z = fresh(y, {body, v, var(x)});
        return {z, subst(body, y, var(z))};
    }

    NormalizeOptions opts_;
    std::size_t steps_ = 0;
    int counter_ = 0;
};

} // namespace

Term normalize(const Term &e, NormalizeOptions opts) { return Normalizer(opts).run(e); }

} // namespace optica::compr
