#ifndef DATAMIN_DOMAIN_HPP
#define DATAMIN_DOMAIN_HPP

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

namespace datamin {

// Scalar values are carried as 64-bit integers; booleans are 0/1 with the
// static type tracked separately (Type / Domain::kind).
using Value = std::int64_t;

enum class Type { Int, Bool };

inline const char* type_name(Type t) { return t == Type::Int ? "int" : "bool"; }

// A finite input domain: a bounded integer range or the two booleans.
// Booleans are stored with lo=0, hi=1 so enumeration code is uniform.
struct Domain {
  Type kind = Type::Int;
  Value lo = 0;
  Value hi = 0;

  static Domain bounded_int(Value lo, Value hi) {
    if (lo > hi) throw std::invalid_argument("domain bounds reversed: lo > hi");
    return Domain{Type::Int, lo, hi};
  }
  static Domain boolean() { return Domain{Type::Bool, 0, 1}; }

  std::uint64_t cardinality() const {
    return static_cast<std::uint64_t>(hi - lo) + 1;
  }
  bool contains(Value v) const { return v >= lo && v <= hi; }

  friend bool operator==(const Domain&, const Domain&) = default;
};

// Renders a value according to the type it is interpreted at.
inline std::string value_to_string(Value v, Type t) {
  if (t == Type::Bool) return v ? "true" : "false";
  return std::to_string(v);
}

// Named assignment of concrete values, used at API boundaries (CLI, JSON,
// test assertions). Hot paths use positional vectors via InputSpace instead.
using Valuation = std::map<std::string, Value>;

struct SourceLoc {
  int line = 0;
  int column = 0;
};

// Base of all toolkit errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Lexing, parsing, or validation failure; carries a source position.
struct ParseError : Error {
  ParseError(const std::string& msg, SourceLoc where)
      : Error(std::to_string(where.line) + ":" + std::to_string(where.column) +
              ": " + msg),
        loc(where) {}
  SourceLoc loc;
};

// Runtime evaluation failure: division by zero, arithmetic overflow,
// loop unroll bound exceeded, precondition violation.
struct EvalError : Error {
  using Error::Error;
};

// Enumeration budget or class-count cap exceeded.
struct BudgetError : Error {
  using Error::Error;
};

// Misuse of the solver interface (undeclared variable, model() on an
// unsatisfiable formula).
struct SolverError : Error {
  using Error::Error;
};

// A condition that the toolkit guarantees by construction was observed to
// fail; indicates a bug, never user error.
struct InternalError : Error {
  using Error::Error;
};

}  // namespace datamin

#endif
