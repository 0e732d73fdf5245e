#ifndef DATAMIN_SMTLIB_HPP
#define DATAMIN_SMTLIB_HPP

#include <string>

#include "datamin/solver.hpp"

namespace datamin::logic {

// Renders an SMT-LIB2 v2.6 script: one constant declaration per environment
// variable, domain-bound assertions, the assertion of f, and (check-sat).
// Integer division/modulo are translated to truncating semantics via helper
// define-funs so an external solver agrees with the language's semantics.
// The library never spawns a solver process; callers may pipe the script.
std::string to_smtlib(const FormulaPtr& f, const Env& env);

}  // namespace datamin::logic

#endif
