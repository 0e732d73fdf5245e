#ifndef DATAMIN_PARSER_HPP
#define DATAMIN_PARSER_HPP

#include <string>
#include <string_view>

#include "datamin/ast.hpp"

namespace datamin::dsl {

// Parses and validates one program. Throws ParseError with line:column on
// syntax errors, type errors, duplicate inputs, use before assignment,
// missing returns, returns inside loops, and division by a literal zero.
Program parse(std::string_view source);

// Parses a single expression and type-checks it against the program's
// input signature; used to read guard strings back from minimiser
// documents. `want` is the required result type.
ExprPtr parse_expression(std::string_view source, const Program& context,
                         Type want);

}  // namespace datamin::dsl

#endif
