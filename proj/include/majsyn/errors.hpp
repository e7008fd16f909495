#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace majsyn
{

/// Base class of every error raised by the library.
class error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Onset and dcset overlap, or a PLA assigns one minterm to both onset and offset.
class spec_conflict_error : public error
{
public:
  using error::error;
};

/// Minterm or variable index outside of the function's domain.
class range_error : public error
{
public:
  using error::error;
};

/// Operands disagree on the number of variables or outputs.
class arity_error : public error
{
public:
  using error::error;
};

/// Caller violated an operation's precondition.
class contract_error : public error
{
public:
  using error::error;
};

/// Invalid synthesis or tool configuration.
class config_error : public error
{
public:
  using error::error;
};

/// A synthesized network does not implement its specification.
class soundness_error : public error
{
public:
  using error::error;
};

/// Malformed textual input. `line` and `column` are 1-based; 0 means unknown.
class parse_error : public error
{
public:
  parse_error( std::string const& message, std::size_t line, std::size_t column = 0 )
      : error( format( message, line, column ) ), line_( line ), column_( column )
  {
  }

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

private:
  static std::string format( std::string const& message, std::size_t line, std::size_t column )
  {
    if ( line == 0 )
    {
      return column == 0 ? message : "column " + std::to_string( column ) + ": " + message;
    }
    std::string where = "line " + std::to_string( line );
    if ( column != 0 )
    {
      where += ", column " + std::to_string( column );
    }
    return where + ": " + message;
  }

  std::size_t line_;
  std::size_t column_;
};

} // namespace majsyn
