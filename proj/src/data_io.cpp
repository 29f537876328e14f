#include "optica/data_io.hpp"

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <charconv>
#include <nlohmann/json.hpp>
#include <sstream>

#include "optica/error.hpp"

namespace optica {

namespace {

namespace pt = boost::property_tree;
using nlohmann::json;

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos)
        return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

Value parse_base(const std::string &raw, BaseType t, const std::string &where) {
    std::string text = trim(raw);
    switch (t) {
    case BaseType::Int: {
        std::int64_t i = 0;
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), i);
        if (text.empty() || ec != std::errc() || ptr != text.data() + text.size())
            throw DataError("non-numeric text '" + text + "' in <" + where + ">");
        return Value::integer(i);
    }
    case BaseType::Bool:
        if (text == "true")
            return Value::boolean(true);
        if (text == "false")
            return Value::boolean(false);
        throw DataError("invalid boolean '" + text + "' in <" + where + ">");
    case BaseType::String: return Value::string(raw);
    }
    throw DataError("unreachable");
}

class XmlReader {
  public:
    explicit XmlReader(const Schema &s) : schema_(s) {}

    Value read_entity(const pt::ptree &node, const std::string &entity, const std::string &tag) const {
        if (!trim(node.data()).empty())
            throw DataError("unexpected text inside <" + tag + ">");
        auto fields = schema_.fields(entity);
        for (auto &[child_tag, child] : node) {
            if (child_tag == "<xmlattr>")
                throw DataError("attributes are not supported (in <" + tag + ">)");
            if (child_tag == "<xmlcomment>")
                continue;
            bool known = false;
            for (auto *p : fields)
                known = known || p->element == child_tag;
            if (!known)
                throw DataError("unexpected element <" + child_tag + "> inside <" + tag + ">");
        }
        std::vector<Value::Field> out;
        for (auto *p : fields) {
            std::vector<Value> items;
            for (auto &[child_tag, child] : node)
                if (child_tag == p->element)
                    items.push_back(read(child, p->part, child_tag));
            switch (p->kind) {
            case OpticKind::Getter:
                if (items.empty())
                    throw DataError("missing mandatory element <" + p->element + "> inside <" + tag + ">");
                if (items.size() > 1)
                    throw DataError("repeated element <" + p->element + "> inside <" + tag + ">");
                out.emplace_back(p->name, items.front());
                break;
            case OpticKind::Affine:
                if (items.size() > 1)
                    throw DataError("repeated optional element <" + p->element + "> inside <" + tag + ">");
                out.emplace_back(p->name, Value::list(std::move(items)));
                break;
            case OpticKind::Fold: out.emplace_back(p->name, Value::list(std::move(items))); break;
            }
        }
        return Value::record(entity, std::move(out));
    }

  private:
    Value read(const pt::ptree &node, const ModelType &t, const std::string &tag) const {
        if (t.is_base()) {
            for (auto &[child_tag, child] : node)
                if (child_tag != "<xmlcomment>")
                    throw DataError("unexpected element <" + child_tag + "> inside <" + tag + ">");
            return parse_base(node.data(), t.base_type(), tag);
        }
        return read_entity(node, t.entity_name(), tag);
    }

    const Schema &schema_;
};

Value wrap_root(const Value &record, const Schema &schema) {
    if (schema.root_is_collection())
        return record.fields().front().second;
    return record;
}

Value json_base(const json &j, BaseType t, const std::string &where) {
    switch (t) {
    case BaseType::Int:
        if (!j.is_number_integer())
            throw DataError("expected an integer for '" + where + "'");
        return Value::integer(j.get<std::int64_t>());
    case BaseType::Bool:
        if (!j.is_boolean())
            throw DataError("expected a boolean for '" + where + "'");
        return Value::boolean(j.get<bool>());
    case BaseType::String:
        if (!j.is_string())
            throw DataError("expected a string for '" + where + "'");
        return Value::string(j.get<std::string>());
    }
    throw DataError("unreachable");
}

Value json_entity(const json &j, const std::string &entity, const Schema &schema);

Value json_part(const json &j, const ModelType &t, const std::string &where, const Schema &schema) {
    if (t.is_base())
        return json_base(j, t.base_type(), where);
    return json_entity(j, t.entity_name(), schema);
}

Value json_entity(const json &j, const std::string &entity, const Schema &schema) {
    if (!j.is_object())
        throw DataError("expected an object for entity " + entity);
    auto fields = schema.fields(entity);
    for (auto &[key, _] : j.items()) {
        bool known = false;
        for (auto *p : fields)
            known = known || p->name == key;
        if (!known)
            throw DataError("unexpected key '" + key + "' in " + entity);
    }
    std::vector<Value::Field> out;
    for (auto *p : fields) {
        auto it = j.find(p->name);
        bool present = it != j.end() && !it->is_null();
        switch (p->kind) {
        case OpticKind::Getter:
            if (!present)
                throw DataError("missing mandatory field '" + p->name + "' in " + entity);
            out.emplace_back(p->name, json_part(*it, p->part, p->name, schema));
            break;
        case OpticKind::Affine: {
            std::vector<Value> items;
            if (present)
                items.push_back(json_part(*it, p->part, p->name, schema));
            out.emplace_back(p->name, Value::list(std::move(items)));
            break;
        }
        case OpticKind::Fold: {
            std::vector<Value> items;
            if (present) {
                if (!it->is_array())
                    throw DataError("expected an array for '" + p->name + "' in " + entity);
                for (auto &e : *it)
                    items.push_back(json_part(e, p->part, p->name, schema));
            }
            out.emplace_back(p->name, Value::list(std::move(items)));
            break;
        }
        }
    }
    return Value::record(entity, std::move(out));
}

std::string escape_xml(const std::string &s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        default: out += c;
        }
    }
    return out;
}

void write_xml(std::ostream &os, const Value &v, const ModelType &t, const std::string &tag, const Schema &schema,
               int depth) {
    std::string indent(static_cast<std::size_t>(depth) * 4, ' ');
    if (t.is_base()) {
        os << indent << "<" << tag << ">" << escape_xml(v.to_string()) << "</" << tag << ">\n";
        return;
    }
    os << indent << "<" << tag << ">\n";
    for (auto *p : schema.fields(t.entity_name())) {
        const Value *f = v.field(p->name);
        if (!f)
            throw DataError("record " + v.entity() + " lacks field " + p->name);
        if (p->kind == OpticKind::Getter)
            write_xml(os, *f, p->part, p->element, schema, depth + 1);
        else
            for (auto &item : f->items())
                write_xml(os, item, p->part, p->element, schema, depth + 1);
    }
    os << indent << "</" << tag << ">\n";
}

} // namespace

Value load_value_xml(std::string_view text, const Schema &schema) {
    pt::ptree tree;
    try {
        std::istringstream in{std::string(text)};
        pt::read_xml(in, tree);
    } catch (const pt::xml_parser_error &e) {
        throw DataError(std::string("malformed XML: ") + e.message());
    }
    const pt::ptree *root = nullptr;
    for (auto &[tag, child] : tree) {
        if (tag == "<xmlcomment>")
            continue;
        if (tag != "xml" || root)
            throw DataError("document must have a single <xml> root element");
        root = &child;
    }
    if (!root)
        throw DataError("document must have a single <xml> root element");
    Value v = wrap_root(XmlReader(schema).read_entity(*root, schema.root_entity(), "xml"), schema);
    return v;
}

Value load_value_json(std::string_view text, const Schema &schema) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error &e) {
        throw DataError(std::string("malformed JSON: ") + e.what());
    }
    if (schema.root_is_collection()) {
        auto *p = schema.fields(schema.root_entity()).front();
        if (!j.is_array())
            throw DataError("expected a top-level array of " + p->part.to_string());
        std::vector<Value> items;
        for (auto &e : j)
            items.push_back(json_part(e, p->part, p->name, schema));
        return Value::list(std::move(items));
    }
    return json_entity(j, schema.root_entity(), schema);
}

Value load_value(std::string_view text, const Schema &schema) {
    auto pos = text.find_first_not_of(" \t\r\n");
    if (pos != std::string_view::npos && (text[pos] == '[' || text[pos] == '{'))
        return load_value_json(text, schema);
    return load_value_xml(text, schema);
}

std::string print_xml(const Value &v, const Schema &schema) {
    std::ostringstream os;
    os << "<xml>\n";
    if (schema.root_is_collection()) {
        auto *p = schema.fields(schema.root_entity()).front();
        for (auto &item : v.items())
            write_xml(os, item, p->part, p->element, schema, 1);
    } else {
        for (auto *p : schema.fields(schema.root_entity())) {
            const Value *f = v.field(p->name);
            if (!f)
                throw DataError("root record lacks field " + p->name);
            if (p->kind == OpticKind::Getter)
                write_xml(os, *f, p->part, p->element, schema, 1);
            else
                for (auto &item : f->items())
                    write_xml(os, item, p->part, p->element, schema, 1);
        }
    }
    os << "</xml>\n";
    return os.str();
}

void check_value(const Value &v, const ModelType &type, const Schema &schema) {
    switch (type.tag()) {
    case ModelType::Tag::Base: {
        bool ok = (type.base_type() == BaseType::Int && v.tag() == Value::Tag::Int) ||
                  (type.base_type() == BaseType::Bool && v.tag() == Value::Tag::Bool) ||
                  (type.base_type() == BaseType::String && v.tag() == Value::Tag::String);
        if (!ok)
            throw DataError("value " + v.to_string() + " is not of type " + type.to_string());
        return;
    }
    case ModelType::Tag::Pair:
        if (v.tag() != Value::Tag::Pair)
            throw DataError("value " + v.to_string() + " is not a pair");
        check_value(v.first(), type.left(), schema);
        check_value(v.second(), type.right(), schema);
        return;
    case ModelType::Tag::Var: return;
    case ModelType::Tag::Entity: break;
    }
    const auto &entity = type.entity_name();
    if (entity == schema.root_entity() && schema.root_is_collection()) {
        if (v.tag() != Value::Tag::List)
            throw DataError("root value must be a list");
        auto *p = schema.fields(entity).front();
        for (auto &i : v.items())
            check_value(i, p->part, schema);
        return;
    }
    if (v.tag() != Value::Tag::Record || v.entity() != entity)
        throw DataError("value " + v.to_string() + " is not a " + entity + " record");
    auto fields = schema.fields(entity);
    if (v.fields().size() != fields.size())
        throw DataError("record " + entity + " has the wrong number of fields");
    for (std::size_t i = 0; i < fields.size(); ++i) {
        auto *p = fields[i];
        auto &[name, f] = v.fields()[i];
        if (name != p->name)
            throw DataError("record " + entity + " field " + name + " out of order");
        if (p->kind == OpticKind::Getter) {
            check_value(f, p->part, schema);
            continue;
        }
        if (f.tag() != Value::Tag::List)
            throw DataError("field " + name + " of " + entity + " must be a list");
        if (p->kind == OpticKind::Affine && f.items().size() > 1)
            throw DataError("affine field " + name + " of " + entity + " holds more than one value");
        for (auto &i : f.items())
            check_value(i, p->part, schema);
    }
}

} // namespace optica
