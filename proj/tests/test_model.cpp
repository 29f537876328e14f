#include <catch_amalgamated.hpp>

#include "optica/data_io.hpp"
#include "optica/shred.hpp"
#include "support.hpp"

using namespace optica;
using namespace optica::testing;

TEST_CASE("schema files declare entities, optics and keys", "[schema]") {
    const auto &f = Fixture::get();
    const Schema &s = f.couples.schema;
    CHECK(s.root_entity() == "Couples");
    CHECK(s.root_is_collection());
    REQUIRE(s.find("Couple", "fst") != nullptr);
    CHECK(s.find("Couple", "fst")->part == ModelType::entity("Person"));
    CHECK(s.find("Couples", "couples")->element == "couple");
    CHECK(f.couples.pk.at("Person") == "name");
    CHECK_FALSE(f.couples.pk.contains("Couple"));
    CHECK_THROWS_AS(f.couples.pk.at("Couple"), MissingPkError);
    CHECK(s.is_flat(ModelType::entity("Person")));
    CHECK_FALSE(s.is_flat(ModelType::entity("Couple")));
    CHECK(s.is_flat(ModelType::pair(ModelType::string(), ModelType::integer())));
    CHECK_FALSE(f.org.schema.is_flat(ModelType::entity("Department")));
    CHECK(f.org.schema.is_flat(ModelType::entity("Task")));
}

TEST_CASE("malformed schemas are rejected", "[schema]") {
    CHECK_THROWS_AS(parse_schema_file("entity A\noptic x : getter A Int\n"), SchemaError);
    CHECK_THROWS_AS(parse_schema_file("root A\nentity A\noptic x : lens A Int\n"), SchemaError);
    CHECK_THROWS_AS(parse_schema_file("root A\nentity A\noptic x : getter A B\n"), SchemaError);
    CHECK_THROWS_AS(parse_schema_file("root A\nentity A\noptic x : getter A Int\noptic x : getter A Int\n"),
                    SchemaError);
    CHECK_THROWS_AS(parse_schema_file("root A\nentity A\nentity B\n"), SchemaError);
    CHECK_THROWS_AS(parse_schema_file("root A\nentity A\noptic filtered : getter A Int\n"), SchemaError);
    CHECK_THROWS_AS(parse_schema_file("root A\nentity A\noptic x : fold A Int\npk A x\n"), SchemaError);
    CHECK_NOTHROW(parse_schema_file("# comment\nroot A\nentity A\noptic x : getter A Int\npk A x\n"));
}

TEST_CASE("values print compactly", "[value]") {
    CHECK(Value::pair(Value::string("Alex"), Value::integer(5)).to_string() == "(Alex,5)");
    CHECK(Value::list({Value::string("Quality"), Value::string("Research")}).to_string() == "[Quality,Research]");
    CHECK(Value::record("Person", {{"name", Value::string("Alex")}, {"age", Value::integer(60)}}).to_string() ==
          "Person(Alex,60)");
    CHECK(Value::string("a\"b").to_literal() == R"("a\"b")");
    CHECK(flatten_tuple(Value::pair(Value::pair(Value::integer(1), Value::integer(2)), Value::string("x"))) ==
          std::vector<Value>{Value::integer(1), Value::integer(2), Value::string("x")});
}

TEST_CASE("example data loads from XML", "[data]") {
    const auto &f = Fixture::get();
    REQUIRE(f.couples_data.tag() == Value::Tag::List);
    CHECK(f.couples_data.items().size() == 3);
    CHECK(f.couples_data.items()[0].to_string() == "Couple(Person(Alex,60),Person(Bert,55))");
    CHECK(f.org_data.items().size() == 4);
}

TEST_CASE("XML and JSON loaders agree", "[data]") {
    const auto &f = Fixture::get();
    std::string json = R"([{"fst": {"name": "Alex", "age": 60}, "snd": {"name": "Bert", "age": 55}}])";
    Value v = load_value(json, f.couples.schema);
    CHECK(v.items().size() == 1);
    CHECK(v.items()[0] == f.couples_data.items()[0]);
    CHECK(load_value("<xml></xml>", f.couples.schema) == Value::list({}));
}

TEST_CASE("malformed data is rejected", "[data]") {
    const auto &f = Fixture::get();
    const Schema &s = f.couples.schema;
    CHECK_THROWS_AS(load_value("<xml><couple><fst><name>A</name><age>1</age></fst></couple></xml>", s), DataError);
    CHECK_THROWS_AS(load_value("<xml><couple x=\"1\"></couple></xml>", s), DataError);
    CHECK_THROWS_AS(load_value("<xml><bogus/></xml>", s), DataError);
    CHECK_THROWS_AS(load_value("<xml><couple><fst><name>A</name><age>old</age></fst></couple></xml>", s), DataError);
    CHECK_THROWS_AS(load_value("<xml>", s), DataError);
    CHECK_THROWS_AS(load_value("[{\"fst\": 3}]", s), DataError);
}

TEST_CASE("print_xml then load_value is the identity", "[data][property]") {
    const auto &f = Fixture::get();
    Rng rng(11);
    for (int i = 0; i < 200; ++i) {
        const Schema &s = i % 2 ? f.org.schema : f.couples.schema;
        Value v = random_instance(s, rng);
        INFO(v.to_string());
        CHECK(load_value(print_xml(v, s), s) == v);
    }
    CHECK(load_value(print_xml(f.org_data, f.org.schema), f.org.schema) == f.org_data);
}

TEST_CASE("shredding the example data gives the expected tables", "[shred]") {
    const auto &f = Fixture::get();
    Database org = shred(f.org_data, f.org.schema, f.org.pk);
    REQUIRE(org.tables.size() == 3);
    CHECK(org.at("Department").columns == std::vector<std::string>{"dpt"});
    CHECK(org.at("Employee").columns == std::vector<std::string>{"emp", "dpt"});
    CHECK(org.at("Task").columns == std::vector<std::string>{"tsk", "emp"});
    CHECK(org.at("Department").rows.size() == 4);
    CHECK(org.at("Employee").rows.size() == 6);
    CHECK(org.at("Task").rows.size() == 11);
    Database couples = shred(f.couples_data, f.couples.schema, f.couples.pk);
    CHECK(couples.at("Couple").columns == std::vector<std::string>{"fst", "snd"});
    CHECK(couples.at("Couple").rows.size() == 3);
    CHECK(couples.at("Person").rows.size() == 6);
    CHECK(to_string(couples.at("Couple").rows[0]) == "(Alex,Bert)");
}

TEST_CASE("shredding needs keys and consistent entities", "[shred]") {
    const auto &f = Fixture::get();
    CHECK_THROWS_AS(shred(f.couples_data, f.couples.schema, PkMap{}), MissingPkError);
    Value clash = Value::list({Value::record(
        "Couple", {{"fst", Value::record("Person", {{"name", Value::string("A")}, {"age", Value::integer(1)}})},
                   {"snd", Value::record("Person", {{"name", Value::string("A")}, {"age", Value::integer(2)}})}})});
    CHECK_THROWS_AS(shred(clash, f.couples.schema, f.couples.pk), DataError);
}

TEST_CASE("shredding preserves child counts and is deterministic", "[shred][property]") {
    const auto &f = Fixture::get();
    Rng rng(12);
    for (int i = 0; i < 200; ++i) {
        Value v = random_org(rng);
        Database db = shred(v, f.org.schema, f.org.pk);
        std::size_t employees = values_of(ModelType::entity("Employee"), v, f.org.schema).size();
        std::size_t tasks = values_of(ModelType::entity("Task"), v, f.org.schema).size();
        std::size_t departments = values_of(ModelType::entity("Department"), v, f.org.schema).size();
        CHECK(db.at("Department").rows.size() == departments);
        CHECK(db.at("Employee").rows.size() == employees);
        CHECK(db.at("Task").rows.size() == tasks);
        Database again = shred(v, f.org.schema, f.org.pk);
        for (std::size_t t = 0; t < db.tables.size(); ++t) {
            CHECK(db.tables[t].columns == again.tables[t].columns);
            CHECK(db.tables[t].rows == again.tables[t].rows);
        }
    }
}
