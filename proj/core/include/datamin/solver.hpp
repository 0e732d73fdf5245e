#ifndef DATAMIN_SOLVER_HPP
#define DATAMIN_SOLVER_HPP

#include <optional>
#include <string>
#include <vector>

#include "datamin/formula.hpp"
#include "datamin/space.hpp"

namespace datamin::logic {

// Declaration context for the solver: an ordered list of (name, Domain).
// The order defines the lexicographic order used by model(): earlier
// declarations are more significant, values ascend within a domain
// (false < true for booleans).
using Env = std::vector<std::pair<std::string, Domain>>;

Env env_of_program(const dsl::Program& p);

// Truth of a formula at one point of its environment. Quantifiers are
// expanded over their finite domain with early exit; when quantifiers are
// present, subformulas over small variable sets are memoised so projection
// sweeps do not re-evaluate context-only parts per projected value.
bool eval_formula(const FormulaPtr& f, const Env& env,
                  std::span<const Value> point);

// Reusable form of eval_formula for sweeps: pays slot setup once.
class FormulaEvaluator {
 public:
  FormulaEvaluator(FormulaPtr f, Env env);
  FormulaEvaluator(FormulaEvaluator&&) noexcept;
  FormulaEvaluator& operator=(FormulaEvaluator&&) noexcept;
  ~FormulaEvaluator();

  bool at(std::span<const Value> point);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Satisfiability over the declared finite domains. Free variables of f
// must all be declared in env (SolverError otherwise).
bool check(const FormulaPtr& f, const Env& env);

// The lexicographically smallest satisfying valuation; SolverError when
// the formula is unsatisfiable. This determinism is what makes synthesized
// representatives equal to class minima.
Valuation model(const FormulaPtr& f, const Env& env);

// Same, positional over env order; nullopt when unsatisfiable.
std::optional<Point> model_point(const FormulaPtr& f, const Env& env);

// Quantifier elimination by finite-domain projection: the result is
// quantifier-free over the free variables of f, equivalent to f on every
// in-domain valuation, in canonical form (interval union over one free
// variable; disjunction of interval boxes over several; a constant when
// closed).
FormulaPtr quantifier_eliminate(const FormulaPtr& f, const Env& env);

// The true-set of a formula with (at most) the one free variable `var`,
// as canonical intervals.
IntervalSet project_to_intervals(const FormulaPtr& f, const std::string& var,
                                 const Domain& dom);

// The canonical quantifier-free formula denoting a set of points, given as
// sorted ranks over env's product space: the same interval-box shape
// quantifier_eliminate produces. Two point sets are equal iff their
// canonical formulas are structurally equal.
FormulaPtr canonical_set_formula(const Env& env,
                                 const std::vector<std::uint64_t>& sorted_ranks);

}  // namespace datamin::logic

#endif
