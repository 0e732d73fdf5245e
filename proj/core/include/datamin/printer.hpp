#ifndef DATAMIN_PRINTER_HPP
#define DATAMIN_PRINTER_HPP

#include <string>

#include "datamin/ast.hpp"

namespace datamin::dsl {

// Canonical rendering: fixed two-space indent, one statement per line,
// minimal parentheses. parse(print(p)) is structurally identical to p,
// and print() output is the input of the content digest.
std::string print_program(const Program& p);
std::string print_expr(const Expr& e);

}  // namespace datamin::dsl

#endif
