#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include <CLI11.hpp>

#include "optica/compr.hpp"
#include "optica/data_io.hpp"
#include "optica/eval.hpp"
#include "optica/parser.hpp"
#include "optica/shred.hpp"
#include "optica/sql.hpp"
#include "optica/xquery.hpp"

using namespace optica;

namespace {

enum Exit {
    Ok = 0,
    BadQuery = 1,
    NotFlatPart = 2,
    Io = 3,
    FoldOverBase = 4,
    NoRootFold = 5,
    MissingPk = 6,
    Runtime = 7,
};

struct IoError : Error {
    using Error::Error;
};

std::string slurp(const std::string &path) {
    if (path == "-")
        return {std::istreambuf_iterator<char>(std::cin), {}};
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot read " + path);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

struct Options {
    std::string command;
    std::string query;
    std::string schema_path;
    std::string data_path;
    std::vector<std::string> pk;
    std::string quote = "double";
    bool normalize = false;
    bool adapt = false;
    bool dump = false;
};

/// Underlines the offending span of a one-line or multi-line query.
void diagnose(const std::string &kind, const std::string &msg, const std::string &text, SourceSpan span) {
    std::cerr << kind << ": " << msg << "\n";
    std::size_t line_begin = text.rfind('\n', span.begin == 0 ? 0 : span.begin - 1);
    line_begin = line_begin == std::string::npos || span.begin == 0 ? 0 : line_begin + 1;
    std::size_t line_end = text.find('\n', line_begin);
    if (line_end == std::string::npos)
        line_end = text.size();
    std::size_t end = std::min(std::max(span.end, span.begin + 1), line_end);
    std::cerr << "  " << text.substr(line_begin, line_end - line_begin) << "\n  "
              << std::string(span.begin - line_begin, ' ')
              << std::string(end > span.begin ? end - span.begin : 1, '^') << "\n";
}

class Session {
  public:
    explicit Session(const Options &o) : o_(o), file_(parse_schema_file(slurp(o.schema_path))) {
        for (const std::string &entry : o.pk) {
            auto eq = entry.find('=');
            if (eq == std::string::npos || eq == 0 || eq + 1 == entry.size())
                throw SchemaError("--pk expects Entity=column, got " + entry);
            file_.pk.set(entry.substr(0, eq), entry.substr(eq + 1));
        }
        check_pk(file_.schema, file_.pk);
        text_ = o.query == "-" ? slurp("-") : o.query;
    }

    int run() {
        CheckedQuery q = check_query(parse_query(text_, schema()), schema());
        const std::string &c = o_.command;
        if (c == "check") {
            if (o_.dump)
                std::cout << dump(q.query, true) << "\n";
            std::cout << q.type.to_string() << "\n";
        } else if (c == "eval") {
            std::cout << eval_query(q.query, data()).to_string() << "\n";
        } else if (c == "emit-xquery") {
            std::cout << xquery::xq_query(q.query) << "\n";
        } else if (c == "emit-sql") {
            auto quote = o_.quote == "single" ? sql::Quote::Single : sql::Quote::Double;
            std::cout << sql::print_sql(sql::gen_sql(q.query, schema(), file_.pk), quote) << "\n";
        } else if (c == "emit-compr") {
            compr::Term t = compr::compr_query(q.query, schema());
            if (o_.adapt)
                t = compr::term::app(t, compr::build_nested_adapter(schema(), file_.pk));
            if (o_.normalize)
                t = compr::normalize(t);
            std::cout << compr::print_compr(t) << "\n";
        } else if (c == "exec-sql") {
            sql::Select s = sql::gen_sql(q.query, schema(), file_.pk);
            Database db = shred(data(), schema(), file_.pk);
            for (const Row &r : sql::exec_sql(s, db, {&schema()}))
                std::cout << to_string(r) << "\n";
        }
        return Ok;
    }

    const std::string &text() const { return text_; }

  private:
    const Schema &schema() const { return file_.schema; }

    Value data() const {
        if (o_.data_path.empty())
            throw IoError(o_.command + " needs --data");
        return load_value(slurp(o_.data_path), schema());
    }

    const Options &o_;
    SchemaFile file_;
    std::string text_;
};

int sql_exit(SqlErrorKind k) {
    switch (k) {
    case SqlErrorKind::NotFlatPart: return NotFlatPart;
    case SqlErrorKind::FoldOverBase: return FoldOverBase;
    case SqlErrorKind::NoRootFold: return NoRootFold;
    case SqlErrorKind::MissingPk: return MissingPk;
    }
    return Runtime;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Optic query compiler: checks, evaluates and translates optic queries."};
    app.require_subcommand(1);
    Options o;

    struct Spec {
        const char *name;
        const char *help;
    };
    const Spec specs[] = {
        {"check", "Type-check a query and print its type"},
        {"eval", "Evaluate a query over nested data"},
        {"emit-xquery", "Print the XQuery translation"},
        {"emit-sql", "Print the SQL translation over shredded tables"},
        {"emit-compr", "Print the comprehension translation"},
        {"exec-sql", "Run the SQL translation over the shredded data"},
    };
    for (const Spec &s : specs) {
        CLI::App *sub = app.add_subcommand(s.name, s.help);
        sub->add_option("query", o.query, "Query text, or - to read it from stdin")->required();
        sub->add_option("--schema", o.schema_path, "Schema file")->required();
        std::string name = s.name;
        if (name == "eval" || name == "exec-sql")
            sub->add_option("--data", o.data_path, "XML or JSON data file")->required();
        if (name == "emit-sql" || name == "exec-sql" || name == "emit-compr")
            sub->add_option("--pk", o.pk, "Primary key override, Entity=column (repeatable)");
        if (name == "emit-sql")
            sub->add_option("--quote", o.quote, "String literal quotes")->check(CLI::IsMember({"double", "single"}));
        if (name == "emit-compr") {
            sub->add_flag("--normalize", o.normalize, "Rewrite to normal form");
            sub->add_flag("--adapt", o.adapt, "Apply to the flat-to-nested adapter");
        }
        if (name == "check")
            sub->add_flag("--dump", o.dump, "Print the annotated syntax tree");
        sub->callback([&o, name] { o.command = name; });
    }
    CLI11_PARSE(app, argc, argv);

    std::string text;
    try {
        Session session(o);
        text = session.text();
        return session.run();
    } catch (const ParseError &e) {
        diagnose("parse error", e.what(), text, e.span());
        return BadQuery;
    } catch (const TypeError &e) {
        diagnose("type error", e.what(), text, e.span());
        return BadQuery;
    } catch (const SqlGenError &e) {
        std::cerr << "sql error (" << to_string(e.kind()) << "): " << e.what() << "\n";
        return sql_exit(e.kind());
    } catch (const MissingPkError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return MissingPk;
    } catch (const IoError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return Io;
    } catch (const SchemaError &e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return Io;
    } catch (const DataError &e) {
        std::cerr << "data error: " << e.what() << "\n";
        return Io;
    } catch (const Error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return Runtime;
    }
}
