#ifndef DATAMIN_FORMULA_HPP
#define DATAMIN_FORMULA_HPP

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "datamin/ast.hpp"
#include "datamin/intervals.hpp"

namespace datamin::logic {

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

enum class Quantifier { Forall, Exists };

// Predicate algebra over program inputs: boolean-typed expressions as
// atoms, n-ary and/or, negation, and quantifiers whose variables carry
// their finite domain. Immutable and shared, like Expr.
struct Formula {
  struct BoolConst { bool value; };
  struct Atom { dsl::ExprPtr expr; };  // boolean-typed Expr
  struct Not { FormulaPtr body; };
  struct And { std::vector<FormulaPtr> parts; };
  struct Or { std::vector<FormulaPtr> parts; };
  struct Quant { Quantifier kind; std::string var; Domain domain; FormulaPtr body; };

  std::variant<BoolConst, Atom, Not, And, Or, Quant> node;
};

FormulaPtr f_const(bool v);
FormulaPtr f_atom(dsl::ExprPtr e);
FormulaPtr f_not(FormulaPtr f);
FormulaPtr f_and(std::vector<FormulaPtr> parts);   // flattens, drops trues
FormulaPtr f_or(std::vector<FormulaPtr> parts);    // flattens, drops falses
FormulaPtr f_quant(Quantifier kind, std::string var, Domain domain, FormulaPtr body);

// Interval constraints rendered as formulas/expressions over one variable.
// Boolean variables render as `x` / `not x`; singleton integer intervals as
// `x == a`; full domains as `true`.
FormulaPtr interval_set_formula(const IntervalSet& set, const std::string& var,
                                const Domain& dom);
dsl::ExprPtr interval_set_expr(const IntervalSet& set, const std::string& var,
                               const Domain& dom);

// Substitutes a concrete value for a free variable (bound occurrences are
// left alone), folding constants in touched atoms.
FormulaPtr substitute(const FormulaPtr& f, const std::string& name, Value v,
                      Type t);

bool formula_equal(const Formula& a, const Formula& b);
std::string formula_to_string(const Formula& f);

// Renders a quantifier-free formula as a language expression (Error on
// quantifiers); used when emitting guards as source.
dsl::ExprPtr formula_to_expr(const Formula& f);

// Free variables in deterministic first-occurrence order.
std::vector<std::string> free_vars(const Formula& f);

}  // namespace datamin::logic

#endif
