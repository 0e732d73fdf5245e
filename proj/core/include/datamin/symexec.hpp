#ifndef DATAMIN_SYMEXEC_HPP
#define DATAMIN_SYMEXEC_HPP

#include <string>
#include <vector>

#include "datamin/eval.hpp"
#include "datamin/solver.hpp"

namespace datamin::symexec {

// One completed execution path: the branch conditions taken, expressed
// over the input symbols, and the returned value as an expression over the
// input symbols. Intermediate variables are substituted away eagerly; the
// store keeps only the output binding.
struct SymbolicLeaf {
  logic::FormulaPtr path_condition;
  dsl::ExprPtr output;
};

// The terminal states of all paths. Leaves have pairwise exclusive path
// conditions (each branch contributes c to one side and not c to the
// other) and jointly cover the precondition-satisfying space; leaves whose
// path condition is unsatisfiable under the precondition are pruned.
struct SymbolicCharacterisation {
  InputSpace space;
  logic::FormulaPtr precondition;
  std::vector<SymbolicLeaf> leaves;
};

struct ExecOptions {
  int unroll_bound = dsl::kDefaultUnrollBound;
  // Cap for satisfiability pruning by enumeration. Branches that interval
  // analysis cannot settle are checked precisely when the input product
  // fits the budget, and conservatively kept otherwise.
  std::uint64_t enumeration_budget = 1'000'000;
};

// Runs the program on symbolic inputs, branching at conditionals and loop
// heads; loops are unrolled up to options.unroll_bound, and a feasible
// path still looping past the bound is an EvalError naming the offending
// path condition.
SymbolicCharacterisation symbolic_execute(const dsl::Program& p,
                                          const ExecOptions& options = {});

// Evaluates the characterisation at one concrete point: finds the unique
// leaf whose path condition holds and evaluates its output expression
// there. No matching leaf, or two, is an InternalError — the engine
// guarantees coverage and exclusivity.
Value concretise(const SymbolicCharacterisation& gamma, const Valuation& v);

// Sweep form: prepares per-leaf evaluators once.
class Concretiser {
 public:
  explicit Concretiser(const SymbolicCharacterisation& gamma);
  Value at(std::span<const Value> point);

 private:
  const SymbolicCharacterisation& gamma_;
  std::vector<logic::FormulaEvaluator> leaf_eval_;
  logic::FormulaEvaluator pre_eval_;
};

// Leaf list with stringified formulas, for the flag-gated CLI dump.
std::string to_debug_json(const SymbolicCharacterisation& gamma);

}  // namespace datamin::symexec

#endif
