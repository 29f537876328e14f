#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace optica {

/// Immutable nested value: base values, pairs, entity records and lists.
class Value {
  public:
    enum class Tag { Int, Bool, String, Pair, Record, List };
    using Field = std::pair<std::string, Value>;

    Value() : Value(integer(0)) {}

    static Value integer(std::int64_t i);
    static Value boolean(bool b);
    static Value string(std::string s);
    static Value pair(Value a, Value b);
    static Value record(std::string entity, std::vector<Field> fields);
    static Value list(std::vector<Value> items);

    Tag tag() const { return static_cast<Tag>(data_.index()); }
    bool is_base() const { return tag() <= Tag::String; }

    std::int64_t as_int() const;
    bool as_bool() const;
    const std::string &as_string() const;
    const Value &first() const;
    const Value &second() const;
    const std::string &entity() const;
    const std::vector<Field> &fields() const;
    /// Null when the record has no such field.
    const Value *field(const std::string &name) const;
    const std::vector<Value> &items() const;

    /// Total order used for multiset comparison.
    friend int compare(const Value &a, const Value &b);
    friend bool operator==(const Value &a, const Value &b) { return compare(a, b) == 0; }
    friend bool operator!=(const Value &a, const Value &b) { return compare(a, b) != 0; }
    friend bool operator<(const Value &a, const Value &b) { return compare(a, b) < 0; }

    /// Compact rendering: `(Alex,5)`, `[Quality,Research]`, `Person(Alex,60)`.
    std::string to_string() const;
    /// Literal rendering used by the optic printer: strings quoted.
    std::string to_literal() const;

  private:
    struct PairData;
    struct RecordData;
    using Data = std::variant<std::int64_t, bool, std::string, std::shared_ptr<const PairData>,
                              std::shared_ptr<const RecordData>, std::shared_ptr<const std::vector<Value>>>;
    explicit Value(Data d) : data_(std::move(d)) {}
    Data data_;
};

struct Value::PairData {
    Value first, second;
};

struct Value::RecordData {
    std::string entity;
    std::vector<Field> fields;
};

std::string to_string(const std::vector<Value> &values);

/// Flattens a value into its base components, left to right; lists are kept as single components.
std::vector<Value> flatten_tuple(const Value &v);

/// Relational cell; nullopt is SQL NULL.
using Cell = std::optional<Value>;
using Row = std::vector<Cell>;

struct RelTable {
    std::string name;
    std::vector<std::string> columns;
    std::vector<Row> rows;

    std::optional<std::size_t> column_index(const std::string &col) const;
};

struct Database {
    std::vector<RelTable> tables;

    const RelTable *find(const std::string &name) const;
    const RelTable &at(const std::string &name) const;
};

std::string to_string(const Cell &c);
std::string to_string(const Row &r);

} // namespace optica
