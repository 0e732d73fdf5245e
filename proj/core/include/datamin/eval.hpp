#ifndef DATAMIN_EVAL_HPP
#define DATAMIN_EVAL_HPP

#include <span>
#include <string>
#include <vector>

#include "datamin/ast.hpp"
#include "datamin/space.hpp"

namespace datamin::dsl {

inline constexpr int kDefaultUnrollBound = 256;

// Read-only variable binding used by expression evaluation: positional
// values over a fixed name list. Lookup is by name with a small index.
class Binding {
 public:
  Binding(std::span<const std::pair<std::string, Domain>> vars,
          std::span<const Value> values);
  Binding(const InputSpace& space, std::span<const Value> values);

  const Value* lookup(const std::string& name) const;

 private:
  std::span<const std::pair<std::string, Domain>> vars_;
  std::span<const Value> values_;
};

// Evaluates a closed-over expression under a binding. Throws EvalError on
// division/modulo by zero, arithmetic overflow, or an unbound variable.
Value eval_expr(const Expr& e, const Binding& binding);

// Concrete semantics of a program at one input point. The public overload
// takes a named Valuation, validates domains and the precondition (hard
// error on violation), then runs the body. The positional overload is the
// hot path used by enumeration and assumes an in-domain point; it still
// checks the precondition.
Value evaluate(const Program& p, const Valuation& v,
               int unroll_bound = kDefaultUnrollBound);
Value evaluate_point(const Program& p, const InputSpace& space,
                     std::span<const Value> point,
                     int unroll_bound = kDefaultUnrollBound);

// Precondition truth at an in-domain point; does not run the body.
bool precondition_holds(const Program& p, const InputSpace& space,
                        std::span<const Value> point);

}  // namespace datamin::dsl

#endif
