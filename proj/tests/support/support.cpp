#include "support.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "optica/data_io.hpp"
#include "optica/parser.hpp"

namespace optica::testing {

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string data_path(const std::string &name) { return std::string(OPTICA_TEST_DIR) + "/data/" + name; }
std::string golden_path(const std::string &name) { return std::string(OPTICA_TEST_DIR) + "/golden/" + name; }

std::string squash(const std::string &s) {
    std::string out;
    bool space = false;
    for (char c : s) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            space = !out.empty();
            continue;
        }
        if (space)
            out += ' ';
        space = false;
        out += c;
    }
    return out;
}

std::string squash_xquery(const std::string &s) {
    std::string q = squash(s);
    std::string out;
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (q[i] == ' ' && i > 0 && i + 1 < q.size() && (q[i - 1] == '>' || q[i - 1] == '}') && q[i + 1] == '<')
            continue;
        out += q[i];
    }
    return out;
}

const Fixture &Fixture::get() {
    static const Fixture f = [] {
        auto couples = parse_schema_file(read_file(data_path("couples.schema")));
        auto org = parse_schema_file(read_file(data_path("org.schema")));
        auto skills = parse_schema_file(read_file(data_path("org_skills.schema")));
        Value cv = load_value(read_file(data_path("couples.xml")), couples.schema);
        Value ov = load_value(read_file(data_path("org.xml")), org.schema);
        return Fixture{couples, org, skills, cv, ov};
    }();
    return f;
}

const char *const differences_text =
    "getAll(couples >>> filtered((fst >>> age) > (snd >>> age)) >>> (fst >>> name) *** ((fst >>> age) - (snd >>> age)))";
const char *const expertise_text =
    R"(getAll(departments >>> filtered(all(employees, elem(tasks >>> tsk, "abstract"))) >>> dpt))";

QueryExpr checked_query(const std::string &text, const Schema &schema) {
    return check_query(parse_query(text, schema), schema).query;
}

namespace {

const std::vector<std::string> person_names = {"Alex", "Bert", "Cora", "Drew", "Eric", "Fred", "Gina", "Hugo"};
const std::vector<std::string> dpt_names = {"Product", "Quality", "Research", "Sales", "Legal", "Ops"};
const std::vector<std::string> emp_names = {"Alex", "Bert", "Cora", "Drew", "Edna", "Fred", "Gary", "Hazel",
                                            "Ivy",  "Jack", "Kim",  "Leo",  "Mia",  "Ned",  "Olga", "Pat"};
const std::vector<std::string> task_names = {"abstract", "build", "call", "design"};
const std::vector<std::string> skill_names = {"sql", "xml", "scala"};

std::vector<std::string> string_pool() {
    std::vector<std::string> pool = {"abstract", "build", "Alex", "Cora", "Quality", "Research", "zzz"};
    return pool;
}

std::vector<std::string> sample(const std::vector<std::string> &pool, std::size_t n, Rng &rng) {
    std::vector<std::string> copy = pool;
    std::shuffle(copy.begin(), copy.end(), rng);
    copy.resize(std::min(n, copy.size()));
    return copy;
}

int uniform(Rng &rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

} // namespace

OpticGen::OpticGen(const Schema &schema, Rng &rng) : schema_(schema), rng_(rng) {}

bool OpticGen::chance(double p) { return std::bernoulli_distribution(p)(rng_); }

std::vector<const PrimOptic *> OpticGen::prims(const ModelType &w, OpticKind kind, std::optional<ModelType> part) {
    std::vector<const PrimOptic *> out;
    if (!w.is_entity())
        return out;
    for (const PrimOptic *p : schema_.fields(w.entity_name()))
        if (p->kind == kind && (!part || p->part == *part))
            out.push_back(p);
    return out;
}

Generated OpticGen::finish(OpticExpr e) {
    OpticExpr c = check_optic(e, schema_);
    return {c, c.type().kind, c.type().part};
}

Generated OpticGen::seq(OpticKind k, const Generated &a, const Generated &b) {
    return {optic::seq(k, auto_cast(a.optic, a.kind, k), auto_cast(b.optic, b.kind, k)), k, b.part};
}

Generated OpticGen::like(const ModelType &t) {
    Value v;
    switch (t.base_type()) {
    case BaseType::Int: v = Value::integer(uniform(rng_, -2, 70)); break;
    case BaseType::Bool: v = Value::boolean(chance(0.5)); break;
    default: v = Value::string(pick(string_pool())); break;
    }
    return {optic::like(v), OpticKind::Getter, t};
}

int OpticGen::weighted(const std::vector<std::pair<int, int>> &choices) {
    int total = 0;
    for (auto &c : choices)
        total += c.second;
    int r = uniform(rng_, 1, total);
    for (auto &c : choices) {
        if (r <= c.second)
            return c.first;
        r -= c.second;
    }
    return choices.back().first;
}

Generated OpticGen::raw_getter_to(const ModelType &w, const ModelType &t, int d) {
    // Getter paths end at base fields, so they stay available at depth 0.
    std::vector<std::pair<int, int>> choices = {{0, 1}, {1, 6}, {2, 1}, {3, 6}};
    if (d > 0) {
        if (t.is_base(BaseType::Int))
            choices.push_back({4, 2});
        if (t.is_base(BaseType::Bool))
            choices.insert(choices.end(), {{5, 2}, {6, 5}, {7, 5}, {8, 5}});
    }
    for (;;) {
        switch (weighted(choices)) {
        case 0: return like(t);
        case 1: {
            auto ps = prims(w, OpticKind::Getter, t);
            if (ps.empty())
                break;
            return {optic::prim(pick(ps)->name), OpticKind::Getter, t};
        }
        case 2:
            if (w != t)
                break;
            return {optic::id(OpticKind::Getter), OpticKind::Getter, t};
        case 3: {
            std::vector<const PrimOptic *> ps;
            for (const PrimOptic *p : prims(w, OpticKind::Getter))
                if (p->part.is_entity())
                    ps.push_back(p);
            if (ps.empty())
                break;
            const PrimOptic *p = pick(ps);
            Generated head{optic::prim(p->name), OpticKind::Getter, p->part};
            return seq(OpticKind::Getter, head, raw_getter_to(p->part, t, d - 1));
        }
        case 4: {
            auto a = raw_getter_to(w, t, d - 1), b = raw_getter_to(w, t, d - 1);
            return {optic::sub(a.optic, b.optic), OpticKind::Getter, t};
        }
        case 5: return {optic::not_(raw_getter_to(w, t, d - 1).optic), OpticKind::Getter, t};
        case 6: {
            auto a = raw_getter_to(w, ModelType::integer(), d - 1), b = raw_getter_to(w, ModelType::integer(), d - 1);
            return {optic::gt(a.optic, b.optic), OpticKind::Getter, t};
        }
        case 7: {
            ModelType bt = pick(std::vector<ModelType>{ModelType::integer(), ModelType::string(), ModelType::string()});
            auto a = raw_getter_to(w, bt, d - 1), b = raw_getter_to(w, bt, d - 1);
            return {optic::eq(a.optic, b.optic), OpticKind::Getter, t};
        }
        case 8: {
            auto f = raw_fold(w, d - 1);
            return {optic::non_empty(auto_cast(f.optic, f.kind, OpticKind::Fold)), OpticKind::Getter, t};
        }
        }
    }
}

Generated OpticGen::raw_getter(const ModelType &w, int d) {
    std::vector<std::pair<int, int>> choices = {{0, 1}, {1, 5}, {2, 3}};
    if (d > 0)
        choices.insert(choices.end(), {{3, 3}, {4, 4}, {5, 2}});
    for (;;) {
        switch (weighted(choices)) {
        case 0: return {optic::id(OpticKind::Getter), OpticKind::Getter, w};
        case 1: {
            auto ps = prims(w, OpticKind::Getter);
            if (ps.empty())
                break;
            const PrimOptic *p = pick(ps);
            return {optic::prim(p->name), OpticKind::Getter, p->part};
        }
        case 2:
        case 3: {
            ModelType t = pick(std::vector<ModelType>{ModelType::integer(), ModelType::string(), ModelType::boolean()});
            return raw_getter_to(w, t, d);
        }
        case 4: {
            auto a = raw_getter(w, d - 1);
            if (!a.part.is_entity())
                break;
            return seq(OpticKind::Getter, a, raw_getter(a.part, d - 1));
        }
        case 5: {
            auto a = raw_getter(w, d - 1), b = raw_getter(w, d - 1);
            return {optic::fork(a.optic, b.optic), OpticKind::Getter, ModelType::pair(a.part, b.part)};
        }
        }
    }
}

Generated OpticGen::raw_affine(const ModelType &w, int d) {
    std::vector<std::pair<int, int>> choices = {{0, 1}, {1, 6}};
    if (d > 0)
        choices.insert(choices.end(), {{2, 6}, {3, 8}, {4, 5}});
    for (;;) {
        switch (weighted(choices)) {
        case 0: return {optic::id(OpticKind::Affine), OpticKind::Affine, w};
        case 1: {
            auto ps = prims(w, OpticKind::Affine);
            if (ps.empty()) {
                auto g = raw_getter(w, 0);
                return {optic::to_af(g.optic), OpticKind::Affine, g.part};
            }
            const PrimOptic *p = pick(ps);
            return {optic::prim(p->name), OpticKind::Affine, p->part};
        }
        case 2: {
            auto g = raw_getter(w, d - 1);
            return {optic::to_af(g.optic), OpticKind::Affine, g.part};
        }
        case 3: return {optic::filtered(raw_getter_to(w, ModelType::boolean(), d - 1).optic), OpticKind::Affine, w};
        case 4: {
            auto a = raw_affine(w, d - 1);
            if (!a.part.is_entity() && !chance(0.2))
                break;
            return seq(OpticKind::Affine, a, raw_affine(a.part, d - 1));
        }
        }
    }
}

Generated OpticGen::raw_fold(const ModelType &w, int d) {
    std::vector<std::pair<int, int>> choices = {{0, 1}, {1, 10}, {2, prims(w, OpticKind::Fold).empty() ? 10 : 3}};
    if (d > 0)
        choices.push_back({3, 10});
    for (;;) {
        switch (weighted(choices)) {
        case 0: return {optic::id(OpticKind::Fold), OpticKind::Fold, w};
        case 1: {
            auto ps = prims(w, OpticKind::Fold);
            if (ps.empty())
                break;
            const PrimOptic *p = pick(ps);
            return {optic::prim(p->name), OpticKind::Fold, p->part};
        }
        case 2: {
            auto a = raw_affine(w, d > 0 ? d - 1 : 0);
            return {optic::to_fl(a.optic), OpticKind::Fold, a.part};
        }
        default: {
            auto a = raw_fold(w, d - 1);
            if (!a.part.is_entity() && !chance(0.2))
                break;
            return seq(OpticKind::Fold, a, raw_fold(a.part, d - 1));
        }
        }
    }
}

Generated OpticGen::getter(const ModelType &whole, int depth) { return finish(raw_getter(whole, depth).optic); }
Generated OpticGen::getter_to(const ModelType &whole, const ModelType &part, int depth) {
    return finish(raw_getter_to(whole, part, depth).optic);
}
Generated OpticGen::affine(const ModelType &whole, int depth) { return finish(raw_affine(whole, depth).optic); }
Generated OpticGen::fold(const ModelType &whole, int depth) { return finish(raw_fold(whole, depth).optic); }
Generated OpticGen::predicate(const ModelType &whole, int depth) {
    return getter_to(whole, ModelType::boolean(), depth);
}

Generated OpticGen::of_kind(OpticKind k, const ModelType &whole, int depth) {
    switch (k) {
    case OpticKind::Getter: return getter(whole, depth);
    case OpticKind::Affine: return affine(whole, depth);
    default: return fold(whole, depth);
    }
}

QueryExpr OpticGen::rooted_query(int depth) {
    auto ps = prims(schema_.root(), OpticKind::Fold);
    const PrimOptic *p = pick(ps);
    Generated head{optic::prim(p->name), OpticKind::Fold, p->part};
    OpticExpr e = head.optic;
    Generated g = head;
    if (depth > 0 && chance(0.9))
        g = seq(OpticKind::Fold, head, raw_fold(p->part, depth - 1));
    if (!schema_.is_flat(g.part) && g.part.is_entity() && chance(0.8))
        g = seq(OpticKind::Fold, g, raw_getter(g.part, 1));
    e = g.optic;
    return check_query(QueryExpr{QueryOp::GetAll, e, {}}, schema_).query;
}

QueryExpr OpticGen::query(int depth) {
    int c = uniform(rng_, 0, 2);
    QueryOp op = c == 0 ? QueryOp::Get : c == 1 ? QueryOp::Preview : QueryOp::GetAll;
    OpticKind k = c == 0 ? OpticKind::Getter : c == 1 ? OpticKind::Affine : OpticKind::Fold;
    OpticExpr e = k == OpticKind::Getter  ? raw_getter(schema_.root(), depth).optic
                  : k == OpticKind::Affine ? raw_affine(schema_.root(), depth).optic
                                           : raw_fold(schema_.root(), depth).optic;
    return check_query(QueryExpr{op, e, {}}, schema_).query;
}

std::size_t surface_depth(const OpticExpr &e) {
    if (is_cast(e.op()))
        return surface_depth(e.arg(0));
    std::size_t d = 0;
    for (const OpticExpr &a : e.args())
        d = std::max(d, surface_depth(a));
    return d + 1;
}

Value random_couples(Rng &rng, int max_couples) {
    auto names = sample(person_names, uniform(rng, 0, 6), rng);
    std::vector<Value> people;
    for (auto &n : names)
        people.push_back(Value::record("Person", {{"name", Value::string(n)}, {"age", Value::integer(uniform(rng, 15, 70))}}));
    std::vector<Value> couples;
    int n = people.empty() ? 0 : uniform(rng, 0, max_couples);
    for (int i = 0; i < n; ++i) {
        const Value &a = people[uniform(rng, 0, static_cast<int>(people.size()) - 1)];
        const Value &b = people[uniform(rng, 0, static_cast<int>(people.size()) - 1)];
        couples.push_back(Value::record("Couple", {{"fst", a}, {"snd", b}}));
    }
    return Value::list(std::move(couples));
}

Value random_org(Rng &rng, int max_each, bool skills) {
    auto dpts = sample(dpt_names, uniform(rng, 0, max_each), rng);
    std::vector<std::string> emps = emp_names;
    std::shuffle(emps.begin(), emps.end(), rng);
    std::size_t next_emp = 0;
    std::vector<Value> departments;
    for (auto &d : dpts) {
        std::vector<Value> employees;
        int ne = uniform(rng, 0, max_each);
        for (int i = 0; i < ne && next_emp < emps.size(); ++i) {
            std::vector<Value> tasks;
            int nt = uniform(rng, 0, max_each);
            for (int j = 0; j < nt; ++j)
                tasks.push_back(Value::record("Task", {{"tsk", Value::string(task_names[uniform(rng, 0, 3)])}}));
            std::vector<Value::Field> fields = {{"emp", Value::string(emps[next_emp++])},
                                                {"tasks", Value::list(std::move(tasks))}};
            if (skills) {
                std::vector<Value> ss;
                for (auto &s : sample(skill_names, uniform(rng, 0, 2), rng))
                    ss.push_back(Value::string(s));
                fields.push_back({"skills", Value::list(std::move(ss))});
            }
            employees.push_back(Value::record("Employee", std::move(fields)));
        }
        departments.push_back(
            Value::record("Department", {{"dpt", Value::string(d)}, {"employees", Value::list(std::move(employees))}}));
    }
    return Value::list(std::move(departments));
}

Value random_instance(const Schema &schema, Rng &rng) {
    if (schema.root_entity() == "Couples")
        return random_couples(rng);
    return random_org(rng, 5, schema.find("Employee", "skills") != nullptr);
}

namespace {
void collect(const ModelType &type, const Value &v, const ModelType &vt, const Schema &schema,
             std::vector<Value> &out) {
    if (vt == type)
        out.push_back(v);
    if (!vt.is_entity())
        return;
    if (v.tag() == Value::Tag::List) {
        // Collection root.
        const PrimOptic *p = schema.fields(vt.entity_name()).front();
        for (const Value &i : v.items())
            collect(type, i, p->part, schema, out);
        return;
    }
    for (const PrimOptic *p : schema.fields(vt.entity_name())) {
        const Value *f = v.field(p->name);
        if (!f)
            continue;
        if (p->kind == OpticKind::Getter)
            collect(type, *f, p->part, schema, out);
        else
            for (const Value &i : f->items())
                collect(type, i, p->part, schema, out);
    }
}
} // namespace

std::vector<Value> values_of(const ModelType &type, const Value &root, const Schema &schema) {
    std::vector<Value> out;
    collect(type, root, schema.root(), schema, out);
    return out;
}

std::vector<std::vector<Value>> flattened(const std::vector<Value> &values) {
    std::vector<std::vector<Value>> out;
    for (const Value &v : values)
        out.push_back(flatten_tuple(v));
    return out;
}

std::vector<std::vector<Value>> flattened(const std::vector<Row> &rows) {
    std::vector<std::vector<Value>> out;
    for (const Row &r : rows) {
        std::vector<Value> row;
        for (const Cell &c : r)
            row.push_back(c ? *c : Value::list({}));
        out.push_back(std::move(row));
    }
    return out;
}

bool same_multiset(std::vector<std::vector<Value>> a, std::vector<std::vector<Value>> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return a == b;
}

compr::Term expertise_tlinq() {
    using namespace compr::term;
    auto f = [](const char *x, const char *l) { return field(var(x), l); };
    auto eq = [](compr::Term a, compr::Term b) { return prim("=", {std::move(a), std::move(b)}); };
    auto tasks = for_("t", table("Task"),
                      if_(prim("and", {eq(f("e", "emp"), f("t", "emp")), eq(f("t", "tsk"), constant(Value::string("abstract")))}),
                          yield(f("t", "tsk"))));
    auto employees = for_("e", table("Employee"),
                          if_(prim("and", {eq(f("d", "dpt"), f("e", "dpt")), prim("not", {exists(tasks)})}),
                              yield(f("e", "emp"))));
    return for_("d", table("Department"), if_(prim("not", {exists(employees)}), yield(f("d", "dpt"))));
}

} // namespace optica::testing
