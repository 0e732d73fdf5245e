#ifndef DATAMIN_TESTS_RANDOM_HPP
#define DATAMIN_TESTS_RANDOM_HPP

#include <random>
#include <string>
#include <vector>

#include "datamin/ast.hpp"
#include "datamin/formula.hpp"

namespace datamin::tests {

// Seeded generator with explicit modulo so results are stable across
// standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  std::uint64_t below(std::uint64_t n) { return gen_() % n; }
  Value in_range(Value lo, Value hi) {
    return lo + static_cast<Value>(below(static_cast<std::uint64_t>(hi - lo) + 1));
  }
  bool coin() { return below(2) != 0; }

 private:
  std::mt19937_64 gen_;
};

using Vars = std::vector<std::pair<std::string, Domain>>;

// Integer expressions stay overflow-safe for the domains used in tests:
// multiplication only by small literals, bounded depth.
inline dsl::ExprPtr random_int_expr(Rng& rng, const Vars& vars, int depth) {
  std::vector<std::string> int_vars;
  for (const auto& [name, dom] : vars)
    if (dom.kind == Type::Int) int_vars.push_back(name);

  auto leaf = [&]() -> dsl::ExprPtr {
    if (!int_vars.empty() && rng.below(3) != 0)
      return dsl::make_var(int_vars[rng.below(int_vars.size())]);
    return dsl::make_int(rng.in_range(-8, 8));
  };
  if (depth <= 0) return leaf();
  switch (rng.below(6)) {
    case 0: return leaf();
    case 1:
      return dsl::make_binary(dsl::BinOp::Add, random_int_expr(rng, vars, depth - 1),
                              random_int_expr(rng, vars, depth - 1));
    case 2:
      return dsl::make_binary(dsl::BinOp::Sub, random_int_expr(rng, vars, depth - 1),
                              random_int_expr(rng, vars, depth - 1));
    case 3:
      return dsl::make_binary(dsl::BinOp::Mul, random_int_expr(rng, vars, depth - 1),
                              dsl::make_int(rng.in_range(2, 7)));
    case 4:
      return dsl::make_binary(dsl::BinOp::Mod, random_int_expr(rng, vars, depth - 1),
                              dsl::make_int(rng.in_range(2, 9)));
    default:
      return dsl::make_binary(dsl::BinOp::Div, random_int_expr(rng, vars, depth - 1),
                              dsl::make_int(rng.in_range(2, 9)));
  }
}

inline dsl::ExprPtr random_bool_expr(Rng& rng, const Vars& vars, int depth) {
  std::vector<std::string> bool_vars;
  for (const auto& [name, dom] : vars)
    if (dom.kind == Type::Bool) bool_vars.push_back(name);

  auto comparison = [&]() -> dsl::ExprPtr {
    static const dsl::BinOp ops[] = {dsl::BinOp::Lt, dsl::BinOp::Le,
                                     dsl::BinOp::Gt, dsl::BinOp::Ge,
                                     dsl::BinOp::Eq, dsl::BinOp::Ne};
    return dsl::make_binary(ops[rng.below(6)], random_int_expr(rng, vars, 1),
                            random_int_expr(rng, vars, 1));
  };
  auto leaf = [&]() -> dsl::ExprPtr {
    if (!bool_vars.empty() && rng.below(3) == 0)
      return dsl::make_var(bool_vars[rng.below(bool_vars.size())]);
    return comparison();
  };
  if (depth <= 0) return leaf();
  switch (rng.below(5)) {
    case 0: return leaf();
    case 1:
      return dsl::make_unary(dsl::UnOp::Not, random_bool_expr(rng, vars, depth - 1));
    case 2:
      return dsl::make_binary(dsl::BinOp::And, random_bool_expr(rng, vars, depth - 1),
                              random_bool_expr(rng, vars, depth - 1));
    case 3:
      return dsl::make_binary(dsl::BinOp::Or, random_bool_expr(rng, vars, depth - 1),
                              random_bool_expr(rng, vars, depth - 1));
    default: return comparison();
  }
}

namespace detail {

inline dsl::Block random_decision_tree(Rng& rng, const Vars& vars, Type out,
                                       int depth) {
  dsl::Block block;
  if (depth <= 0 || rng.below(3) == 0) {
    dsl::ExprPtr result = out == Type::Bool ? random_bool_expr(rng, vars, 1)
                                            : random_int_expr(rng, vars, 2);
    block.stmts.push_back(
        std::make_shared<dsl::Stmt>(dsl::Stmt{dsl::Stmt::Return{result}, {}}));
    return block;
  }
  dsl::ExprPtr cond = random_bool_expr(rng, vars, 1);
  block.stmts.push_back(std::make_shared<dsl::Stmt>(dsl::Stmt{
      dsl::Stmt::If{cond, random_decision_tree(rng, vars, out, depth - 1),
                    random_decision_tree(rng, vars, out, depth - 1)},
      {}}));
  return block;
}

}  // namespace detail

// A loop-free program over the given signature: every path returns, the
// precondition is `true`, evaluation is total.
inline dsl::Program random_program(Rng& rng, std::string name, const Vars& inputs,
                                   Type out, int depth) {
  dsl::Program p;
  p.name = std::move(name);
  for (const auto& [n, d] : inputs) p.inputs.push_back({n, d});
  p.precondition = dsl::make_bool(true);
  p.output_type = out;
  Vars vars = inputs;
  p.body = detail::random_decision_tree(rng, vars, out, depth);
  return p;
}

// An endofunction on a single bounded-int domain: output folded into the
// domain with a double modulo, usable on the left of a composition.
inline dsl::Program random_endofunction(Rng& rng, std::string name,
                                        const std::string& var, const Domain& dom) {
  Vars inputs{{var, dom}};
  Value card = static_cast<Value>(dom.cardinality());
  dsl::ExprPtr e = random_int_expr(rng, inputs, 2);
  dsl::ExprPtr m1 = dsl::make_binary(dsl::BinOp::Mod, e, dsl::make_int(card));
  dsl::ExprPtr m2 = dsl::make_binary(
      dsl::BinOp::Mod,
      dsl::make_binary(dsl::BinOp::Add, m1, dsl::make_int(card)),
      dsl::make_int(card));
  dsl::ExprPtr shifted = dsl::make_binary(dsl::BinOp::Add, m2, dsl::make_int(dom.lo));

  dsl::Program p;
  p.name = std::move(name);
  p.inputs.push_back({var, dom});
  p.precondition = dsl::make_bool(true);
  p.output_type = Type::Int;
  p.body.stmts.push_back(
      std::make_shared<dsl::Stmt>(dsl::Stmt{dsl::Stmt::Return{shifted}, {}}));
  return p;
}

// Random formulas for solver tests; quantified variables get fresh names
// so no shadowing arises.
inline logic::FormulaPtr random_formula(Rng& rng, Vars scope, int depth,
                                        int quant_budget, int* fresh_counter) {
  if (depth <= 0)
    return logic::f_atom(random_bool_expr(rng, scope, 1));
  switch (rng.below(quant_budget > 0 ? 6 : 5)) {
    case 0: return logic::f_atom(random_bool_expr(rng, scope, 1));
    case 1:
      return logic::f_not(
          random_formula(rng, scope, depth - 1, quant_budget, fresh_counter));
    case 2:
      return logic::f_and(
          {random_formula(rng, scope, depth - 1, quant_budget, fresh_counter),
           random_formula(rng, scope, depth - 1, quant_budget, fresh_counter)});
    case 3:
      return logic::f_or(
          {random_formula(rng, scope, depth - 1, quant_budget, fresh_counter),
           random_formula(rng, scope, depth - 1, quant_budget, fresh_counter)});
    case 4:
      return logic::f_atom(random_bool_expr(rng, scope, 2));
    default: {
      std::string qv = "q" + std::to_string((*fresh_counter)++);
      Domain qd = Domain::bounded_int(0, static_cast<Value>(rng.below(6)) + 1);
      Vars inner = scope;
      inner.emplace_back(qv, qd);
      logic::FormulaPtr body =
          random_formula(rng, inner, depth - 1, quant_budget - 1, fresh_counter);
      return logic::f_quant(rng.coin() ? logic::Quantifier::Forall
                                       : logic::Quantifier::Exists,
                            qv, qd, body);
    }
  }
}

}  // namespace datamin::tests

#endif
