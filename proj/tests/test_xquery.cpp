#include <catch_amalgamated.hpp>

#include "optica/parser.hpp"
#include "optica/xquery.hpp"
#include "support.hpp"

using namespace optica;
using namespace optica::testing;
using optica::xquery::xq_optic;
using optica::xquery::xq_query;

namespace {

const Schema &couples() { return Fixture::get().couples.schema; }
const Schema &org() { return Fixture::get().org.schema; }

std::string xq(const std::string &optic, const Schema &s) { return xq_optic(check_optic(parse_optic(optic, s), s)); }

OpticExpr strip_casts(OpticExpr e) {
    while (is_cast(e.op()))
        e = e.arg(0);
    return e;
}

/// Leftmost step of a path-shaped optic.
OpticExpr leading(OpticExpr e) {
    e = strip_casts(e);
    while (is_seq(e.op()))
        e = strip_casts(e.arg(0));
    return e;
}

bool binary(const OpticExpr &e) {
    OpticExpr x = strip_casts(e);
    // not(not(p)) over a comparison collapses back to the comparison
    while (x.op() == OpticOp::Not && strip_casts(x.arg(0)).op() == OpticOp::Not && binary(strip_casts(x.arg(0)).arg(0)))
        x = strip_casts(strip_casts(x.arg(0)).arg(0));
    OpticOp op = x.op();
    return op == OpticOp::Gt || op == OpticOp::Eq || op == OpticOp::Sub;
}

/// Expected text of Seq(a, b) from the texts of a and b.
std::string glue(const OpticExpr &a, const OpticExpr &b) {
    std::string l = xq_optic(a), r = xq_optic(b);
    if (binary(a))
        l = "(" + l + ")";
    if (binary(b))
        r = "(" + r + ")";
    if (leading(b).op() == OpticOp::Filtered)
        return l + r.substr(1);
    return l + "/" + r;
}

} // namespace

TEST_CASE("reference queries match the goldens", "[xquery]") {
    std::string d = xq_query(checked_query(differences_text, couples()));
    std::string e = xq_query(checked_query(expertise_text, org()));
    CHECK(squash_xquery(d) == squash_xquery(read_file(golden_path("differences.xq"))));
    CHECK(squash_xquery(e) == squash_xquery(read_file(golden_path("expertise.xq"))));
    CHECK(e == R"(/xml/department[not(exists(employee[not(exists(task/tsk[. = "abstract"]))]))]/dpt)");
}

TEST_CASE("clause by clause", "[xquery]") {
    CHECK(xq("id", couples()) == ".");
    CHECK(xq("couples", couples()) == "couple");
    CHECK(xq("fst >>> name", couples()) == "fst/name");
    CHECK(xq("name *** age", couples()) == "<tuple><one>{name}</one><two>{age}</two></tuple>");
    CHECK(xq("like 3", couples()) == "3");
    CHECK(xq("like -3", couples()) == "(-3)");
    CHECK(xq("like true", couples()) == "true()");
    CHECK(xq(R"(like "a\"b")", couples()) == R"("a""b")");
    CHECK(xq("(age > like 3).not", couples()) == "not(age > 3)");
    CHECK(xq("name == like \"x\"", couples()) == "name = \"x\"");
    CHECK(xq("age - age - age", couples()) == "(age - age) - age");
    CHECK(xq("filtered(age > like 3)", couples()) == ".[age > 3]");
    CHECK(xq("fst >>> filtered(age > like 3)", couples()) == "fst[age > 3]");
    CHECK(xq("nonEmpty(employees)", org()) == "exists(employee)");
    CHECK(xq("fst >>> (age - age)", couples()) == "fst/(age - age)");
    CHECK(xq_query(checked_query("getAll(couples)", couples())) == "/xml/couple");
    CHECK(xq_query(checked_query("get(like 1 - like 2)", couples())) == "/xml/(1 - 2)");
}

TEST_CASE("double negation", "[xquery]") {
    // A boolean argument loses both nots; a node sequence keeps them, since not(not(s)) tests emptiness.
    CHECK(xq("((age > like 3).not).not", couples()) == "age > 3");
    CHECK(xq("nonEmpty(couples).not.not", couples()) == "exists(couple)");
    Schema s = load_schema("root R\nentity R\noptic flag : getter R Bool\n");
    CHECK(xq("flag.not.not", s) == "not(not(flag))");
}

TEST_CASE("sequencing is compositional", "[xquery][property]") {
    const auto &f = Fixture::get();
    Rng rng(41);
    int checked = 0;
    for (int i = 0; i < 600; ++i) {
        const Schema &s = i % 2 ? f.org.schema : f.couples.schema;
        OpticGen gen(s, rng);
        Generated a = gen.of_kind(OpticKind::Fold, s.root(), 3);
        if (!a.part.is_entity())
            continue;
        Generated b = gen.of_kind(static_cast<OpticKind>(i % 3), a.part, 3);
        OpticExpr seq = optic::seq(OpticKind::Fold, a.optic, auto_cast(b.optic, b.kind, OpticKind::Fold));
        INFO(dump(seq));
        CHECK(xq_optic(check_optic(seq, s)) == glue(a.optic, b.optic));
        ++checked;
    }
    CHECK(checked > 100);
}

TEST_CASE("every checked query translates", "[xquery][property]") {
    const auto &f = Fixture::get();
    Rng rng(42);
    for (int i = 0; i < 500; ++i) {
        const Schema &s = i % 2 ? f.org.schema : f.couples.schema;
        OpticGen gen(s, rng);
        QueryExpr q = gen.query(4);
        std::string text = xq_query(q);
        CHECK(text.rfind("/xml/", 0) == 0);
    }
}
