#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace optica {

/// Half-open byte range into the query text.
struct SourceSpan {
    std::size_t begin = 0;
    std::size_t end = 0;
};

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class SchemaError : public Error {
  public:
    using Error::Error;
};

class DataError : public Error {
  public:
    using Error::Error;
};

class MissingPkError : public Error {
  public:
    explicit MissingPkError(std::string entity)
        : Error("no primary key declared for entity " + entity), entity_(std::move(entity)) {}
    const std::string &entity() const { return entity_; }

  private:
    std::string entity_;
};

class ParseError : public Error {
  public:
    ParseError(const std::string &msg, SourceSpan span) : Error(msg), span_(span) {}
    SourceSpan span() const { return span_; }

  private:
    SourceSpan span_;
};

class TypeError : public Error {
  public:
    TypeError(const std::string &msg, SourceSpan span) : Error(msg), span_(span) {}
    SourceSpan span() const { return span_; }

  private:
    SourceSpan span_;
};

enum class SqlErrorKind { NotFlatPart, FoldOverBase, NoRootFold, MissingPk };

const char *to_string(SqlErrorKind kind);

class SqlGenError : public Error {
  public:
    SqlGenError(SqlErrorKind kind, const std::string &msg) : Error(msg), kind_(kind) {}
    SqlErrorKind kind() const { return kind_; }

  private:
    SqlErrorKind kind_;
};

class ExecError : public Error {
  public:
    using Error::Error;
};

class NormalizeError : public Error {
  public:
    using Error::Error;
};

} // namespace optica
