#include "optica/value.hpp"

#include "optica/error.hpp"

namespace optica {

Value Value::integer(std::int64_t i) { return Value(Data(std::in_place_index<0>, i)); }
Value Value::boolean(bool b) { return Value(Data(std::in_place_index<1>, b)); }
Value Value::string(std::string s) { return Value(Data(std::in_place_index<2>, std::move(s))); }

Value Value::pair(Value a, Value b) {
    return Value(Data(std::in_place_index<3>, std::make_shared<const PairData>(PairData{std::move(a), std::move(b)})));
}

Value Value::record(std::string entity, std::vector<Field> fields) {
    return Value(Data(std::in_place_index<4>,
                      std::make_shared<const RecordData>(RecordData{std::move(entity), std::move(fields)})));
}

Value Value::list(std::vector<Value> items) {
    return Value(Data(std::in_place_index<5>, std::make_shared<const std::vector<Value>>(std::move(items))));
}

namespace {
[[noreturn]] void bad_access(const char *what) { throw DataError(std::string("value is not ") + what); }
} // namespace

std::int64_t Value::as_int() const {
    if (tag() != Tag::Int)
        bad_access("an Int");
    return std::get<0>(data_);
}

bool Value::as_bool() const {
    if (tag() != Tag::Bool)
        bad_access("a Bool");
    return std::get<1>(data_);
}

const std::string &Value::as_string() const {
    if (tag() != Tag::String)
        bad_access("a String");
    return std::get<2>(data_);
}

const Value &Value::first() const {
    if (tag() != Tag::Pair)
        bad_access("a pair");
    return std::get<3>(data_)->first;
}

const Value &Value::second() const {
    if (tag() != Tag::Pair)
        bad_access("a pair");
    return std::get<3>(data_)->second;
}

const std::string &Value::entity() const {
    if (tag() != Tag::Record)
        bad_access("a record");
    return std::get<4>(data_)->entity;
}

const std::vector<Value::Field> &Value::fields() const {
    if (tag() != Tag::Record)
        bad_access("a record");
    return std::get<4>(data_)->fields;
}

const Value *Value::field(const std::string &name) const {
    for (auto &[n, v] : fields())
        if (n == name)
            return &v;
    return nullptr;
}

const std::vector<Value> &Value::items() const {
    if (tag() != Tag::List)
        bad_access("a list");
    return *std::get<5>(data_);
}

namespace {
template <class T> int three_way(const T &a, const T &b) { return a < b ? -1 : (b < a ? 1 : 0); }
} // namespace

int compare(const Value &a, const Value &b) {
    if (a.tag() != b.tag())
        return three_way(static_cast<int>(a.tag()), static_cast<int>(b.tag()));
    switch (a.tag()) {
    case Value::Tag::Int: return three_way(a.as_int(), b.as_int());
    case Value::Tag::Bool: return three_way(a.as_bool(), b.as_bool());
    case Value::Tag::String: return three_way(a.as_string(), b.as_string());
    case Value::Tag::Pair:
        if (int c = compare(a.first(), b.first()))
            return c;
        return compare(a.second(), b.second());
    case Value::Tag::Record: {
        if (int c = three_way(a.entity(), b.entity()))
            return c;
        auto &fa = a.fields();
        auto &fb = b.fields();
        for (std::size_t i = 0; i < fa.size() && i < fb.size(); ++i) {
            if (int c = three_way(fa[i].first, fb[i].first))
                return c;
            if (int c = compare(fa[i].second, fb[i].second))
                return c;
        }
        return three_way(fa.size(), fb.size());
    }
    case Value::Tag::List: {
        auto &ia = a.items();
        auto &ib = b.items();
        for (std::size_t i = 0; i < ia.size() && i < ib.size(); ++i)
            if (int c = compare(ia[i], ib[i]))
                return c;
        return three_way(ia.size(), ib.size());
    }
    }
    return 0;
}

std::string Value::to_string() const {
    switch (tag()) {
    case Tag::Int: return std::to_string(as_int());
    case Tag::Bool: return as_bool() ? "true" : "false";
    case Tag::String: return as_string();
    case Tag::Pair: return "(" + first().to_string() + "," + second().to_string() + ")";
    case Tag::Record: {
        std::string s = entity() + "(";
        bool sep = false;
        for (auto &f : fields()) {
            if (sep)
                s += ",";
            sep = true;
            s += f.second.to_string();
        }
        return s + ")";
    }
    case Tag::List: return optica::to_string(items());
    }
    return "?";
}

std::string Value::to_literal() const {
    if (tag() != Tag::String)
        return to_string();
    std::string s = "\"";
    for (char c : as_string()) {
        if (c == '"' || c == '\\')
            s += '\\';
        s += c;
    }
    return s + "\"";
}

std::string to_string(const std::vector<Value> &values) {
    std::string s = "[";
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i)
            s += ",";
        s += values[i].to_string();
    }
    return s + "]";
}

namespace {
void flatten_into(const Value &v, std::vector<Value> &out) {
    switch (v.tag()) {
    case Value::Tag::Pair:
        flatten_into(v.first(), out);
        flatten_into(v.second(), out);
        break;
    case Value::Tag::Record:
        for (auto &f : v.fields())
            flatten_into(f.second, out);
        break;
    case Value::Tag::List: {
        std::vector<Value> items;
        for (auto &i : v.items())
            items.push_back(Value::list(flatten_tuple(i)));
        out.push_back(Value::list(std::move(items)));
        break;
    }
    default: out.push_back(v);
    }
}
} // namespace

std::vector<Value> flatten_tuple(const Value &v) {
    std::vector<Value> out;
    flatten_into(v, out);
    return out;
}

std::optional<std::size_t> RelTable::column_index(const std::string &col) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == col)
            return i;
    return std::nullopt;
}

const RelTable *Database::find(const std::string &name) const {
    for (auto &t : tables)
        if (t.name == name)
            return &t;
    return nullptr;
}

const RelTable &Database::at(const std::string &name) const {
    if (auto *t = find(name))
        return *t;
    throw ExecError("unknown table " + name);
}

std::string to_string(const Cell &c) { return c ? c->to_string() : "NULL"; }

std::string to_string(const Row &r) {
    std::string s = "(";
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (i)
            s += ",";
        s += to_string(r[i]);
    }
    return s + ")";
}

} // namespace optica
