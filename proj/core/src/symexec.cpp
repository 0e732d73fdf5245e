#include "datamin/symexec.hpp"

#include <map>
#include <sstream>

#include "datamin/printer.hpp"
#include "datamin/solver.hpp"

namespace datamin::symexec {

namespace {

using dsl::Expr;
using dsl::ExprPtr;
using logic::FormulaPtr;

// -- Interval pruning ---------------------------------------------------

// Three-valued truth / saturated integer range, for settling branch
// conditions without touching the solver.
struct Range {
  Value lo, hi;
  bool known;
};

constexpr Range kTop{INT64_MIN, INT64_MAX, false};

struct Truth {
  bool can_false = true;
  bool can_true = true;
};

Value sat_add(Value a, Value b) {
  Value r;
  if (__builtin_add_overflow(a, b, &r)) return a > 0 ? INT64_MAX : INT64_MIN;
  return r;
}

Value sat_mul(Value a, Value b) {
  Value r;
  if (__builtin_mul_overflow(a, b, &r))
    return ((a > 0) == (b > 0)) ? INT64_MAX : INT64_MIN;
  return r;
}

struct IntervalAnalysis {
  const InputSpace& space;

  Range range_of(const Expr& e) const {
    if (auto* i = std::get_if<Expr::IntLit>(&e.node)) return {i->value, i->value, true};
    if (std::holds_alternative<Expr::BoolLit>(e.node)) return kTop;
    if (auto* v = std::get_if<Expr::Var>(&e.node)) {
      int idx = space.index_of(v->name);
      if (idx < 0) return kTop;
      const Domain& d = space.domain(static_cast<std::size_t>(idx));
      return {d.lo, d.hi, true};
    }
    if (auto* u = std::get_if<Expr::Unary>(&e.node)) {
      if (u->op != dsl::UnOp::Neg) return kTop;
      Range r = range_of(*u->operand);
      if (!r.known) return kTop;
      return {sat_mul(r.hi, -1), sat_mul(r.lo, -1), true};
    }
    const auto& bin = std::get<Expr::Binary>(e.node);
    Range a = range_of(*bin.lhs), b = range_of(*bin.rhs);
    if (!a.known || !b.known) return kTop;
    switch (bin.op) {
      case dsl::BinOp::Add: return {sat_add(a.lo, b.lo), sat_add(a.hi, b.hi), true};
      case dsl::BinOp::Sub: return {sat_add(a.lo, sat_mul(b.hi, -1)),
                                    sat_add(a.hi, sat_mul(b.lo, -1)), true};
      case dsl::BinOp::Mul: {
        Value c[4] = {sat_mul(a.lo, b.lo), sat_mul(a.lo, b.hi),
                      sat_mul(a.hi, b.lo), sat_mul(a.hi, b.hi)};
        Value lo = c[0], hi = c[0];
        for (Value x : c) { lo = std::min(lo, x); hi = std::max(hi, x); }
        return {lo, hi, true};
      }
      default: return kTop;  // div/mod stay imprecise; pruning is best-effort
    }
  }

  Truth truth_of(const Expr& e) const {
    if (auto* b = std::get_if<Expr::BoolLit>(&e.node))
      return {!b->value, b->value};
    if (auto* u = std::get_if<Expr::Unary>(&e.node)) {
      if (u->op != dsl::UnOp::Not) return {};
      Truth t = truth_of(*u->operand);
      return {t.can_true, t.can_false};
    }
    auto* bin = std::get_if<Expr::Binary>(&e.node);
    if (bin == nullptr) return {};
    switch (bin->op) {
      case dsl::BinOp::And: {
        Truth l = truth_of(*bin->lhs), r = truth_of(*bin->rhs);
        return {l.can_false || r.can_false, l.can_true && r.can_true};
      }
      case dsl::BinOp::Or: {
        Truth l = truth_of(*bin->lhs), r = truth_of(*bin->rhs);
        return {l.can_false && r.can_false, l.can_true || r.can_true};
      }
      case dsl::BinOp::Lt: case dsl::BinOp::Le:
      case dsl::BinOp::Gt: case dsl::BinOp::Ge:
      case dsl::BinOp::Eq: case dsl::BinOp::Ne: {
        Range a = range_of(*bin->lhs), b = range_of(*bin->rhs);
        if (!a.known || !b.known) return {};
        switch (bin->op) {
          case dsl::BinOp::Lt: return {a.hi >= b.lo, a.lo < b.hi};
          case dsl::BinOp::Le: return {a.hi > b.lo, a.lo <= b.hi};
          case dsl::BinOp::Gt: return {a.lo <= b.hi, a.hi > b.lo};
          case dsl::BinOp::Ge: return {a.lo < b.hi, a.hi >= b.lo};
          case dsl::BinOp::Eq:
            return {!(a.lo == a.hi && b.lo == b.hi && a.lo == b.lo),
                    a.lo <= b.hi && b.lo <= a.hi};
          default:  // Ne
            return {a.lo <= b.hi && b.lo <= a.hi,
                    !(a.lo == a.hi && b.lo == b.hi && a.lo == b.lo)};
        }
      }
      default: return {};
    }
  }
};

// -- The engine ----------------------------------------------------------

// Simultaneous substitution of the symbolic store into an expression, with
// constant folding along the way.
ExprPtr subst_store(const ExprPtr& e,
                    const std::vector<std::pair<std::string, ExprPtr>>& store) {
  if (auto* v = std::get_if<Expr::Var>(&e->node)) {
    for (const auto& [name, bound] : store)
      if (name == v->name) return bound;
    throw InternalError("symbolic store has no binding for '" + v->name + "'");
  }
  if (auto* u = std::get_if<Expr::Unary>(&e->node)) {
    ExprPtr inner = subst_store(u->operand, store);
    if (inner == u->operand) return e;
    return dsl::fold_constants(dsl::make_unary(u->op, inner, e->loc));
  }
  if (auto* bin = std::get_if<Expr::Binary>(&e->node)) {
    ExprPtr lhs = subst_store(bin->lhs, store);
    ExprPtr rhs = subst_store(bin->rhs, store);
    if (lhs == bin->lhs && rhs == bin->rhs) return e;
    return dsl::fold_constants(dsl::make_binary(bin->op, lhs, rhs, e->loc));
  }
  return e;
}

struct PathState {
  std::vector<std::pair<std::string, ExprPtr>> store;
  std::vector<FormulaPtr> pc;
  std::map<const dsl::Stmt*, int> live_loops;  // iteration counts per entry

  void bind(const std::string& name, ExprPtr value) {
    for (auto& [n, v] : store) {
      if (n == name) { v = std::move(value); return; }
    }
    store.emplace_back(name, std::move(value));
  }
};

class Engine {
 public:
  Engine(const dsl::Program& p, const ExecOptions& options)
      : program_(p),
        options_(options),
        space_(InputSpace::of_program(p)),
        env_(logic::env_of_program(p)),
        analysis_{space_},
        precondition_(logic::f_atom(dsl::fold_constants(p.precondition))) {}

  SymbolicCharacterisation run() {
    PathState init;
    for (const auto& in : program_.inputs)
      init.bind(in.name, dsl::make_var(in.name));
    std::vector<const dsl::Stmt*> continuation;
    for (auto it = program_.body.stmts.rbegin(); it != program_.body.stmts.rend(); ++it)
      continuation.push_back(it->get());
    exec(std::move(init), std::move(continuation));
    return SymbolicCharacterisation{space_, precondition_, std::move(leaves_)};
  }

 private:
  const dsl::Program& program_;
  ExecOptions options_;
  InputSpace space_;
  logic::Env env_;
  IntervalAnalysis analysis_;
  FormulaPtr precondition_;
  std::vector<SymbolicLeaf> leaves_;

  enum class Feasible { No, Yes, Unknown };

  // Decides Pre and pc and c together; `c` may be null.
  Feasible feasible(const PathState& state, const FormulaPtr& extra) const {
    std::vector<FormulaPtr> parts;
    parts.push_back(precondition_);
    parts.insert(parts.end(), state.pc.begin(), state.pc.end());
    if (extra) parts.push_back(extra);
    for (const auto& part : parts) {
      if (auto* c = std::get_if<logic::Formula::BoolConst>(&part->node)) {
        if (!c->value) return Feasible::No;
      } else if (auto* atom = std::get_if<logic::Formula::Atom>(&part->node)) {
        Truth t = analysis_.truth_of(*atom->expr);
        if (!t.can_true) return Feasible::No;
      } else if (auto* neg = std::get_if<logic::Formula::Not>(&part->node)) {
        if (auto* atom = std::get_if<logic::Formula::Atom>(&neg->body->node)) {
          Truth t = analysis_.truth_of(*atom->expr);
          if (!t.can_false) return Feasible::No;
        }
      }
    }
    if (space_.size() > options_.enumeration_budget) return Feasible::Unknown;
    return logic::check(logic::f_and(std::move(parts)), env_) ? Feasible::Yes
                                                              : Feasible::No;
  }

  std::string path_string(const PathState& state) const {
    return logic::formula_to_string(*logic::f_and(
        std::vector<FormulaPtr>(state.pc.begin(), state.pc.end())));
  }

  // Continuation-passing DFS; `rest` is a stack (back = next statement).
  void exec(PathState state, std::vector<const dsl::Stmt*> rest) {
    while (!rest.empty()) {
      const dsl::Stmt* s = rest.back();
      rest.pop_back();

      if (auto* d = std::get_if<dsl::Stmt::VarDecl>(&s->node)) {
        state.bind(d->name, subst_store(d->init, state.store));
        continue;
      }
      if (auto* a = std::get_if<dsl::Stmt::Assign>(&s->node)) {
        state.bind(a->name, subst_store(a->value, state.store));
        continue;
      }
      if (auto* i = std::get_if<dsl::Stmt::If>(&s->node)) {
        ExprPtr cond = subst_store(i->cond, state.store);
        branch(state, rest, cond,
               /*on_true=*/&i->then_block,
               /*on_false=*/i->else_block ? &*i->else_block : nullptr,
               /*loop=*/nullptr);
        return;
      }
      if (auto* w = std::get_if<dsl::Stmt::While>(&s->node)) {
        int count = state.live_loops.count(s) ? state.live_loops[s] : 0;
        if (count >= options_.unroll_bound) {
          ExprPtr cond = subst_store(w->cond, state.store);
          FormulaPtr still_looping = logic::f_atom(cond);
          if (feasible(state, still_looping) != Feasible::No)
            throw EvalError("loop exceeded the unroll bound of " +
                            std::to_string(options_.unroll_bound) +
                            " on path " + path_string(state));
          // Every in-domain input has left the loop by now.
          state.live_loops.erase(s);
          continue;
        }
        ExprPtr cond = subst_store(w->cond, state.store);
        branch(state, rest, cond, &w->body, nullptr, /*loop=*/s);
        return;
      }
      const auto& r = std::get<dsl::Stmt::Return>(s->node);
      ExprPtr output = subst_store(r.value, state.store);
      if (feasible(state, nullptr) != Feasible::No) {
        leaves_.push_back(SymbolicLeaf{
            logic::f_and(std::vector<FormulaPtr>(state.pc.begin(), state.pc.end())),
            std::move(output)});
      }
      return;
    }
    throw InternalError("path ended without a return in '" + program_.name + "'");
  }

  // Forks on `cond`. For a conditional, the true side runs `on_true` then
  // the continuation, the false side `on_false` (if any) then the
  // continuation. For a loop, the true side runs the body and re-queues
  // the loop statement; the false side leaves the loop.
  void branch(PathState& state, std::vector<const dsl::Stmt*>& rest,
              const ExprPtr& cond, const dsl::Block* on_true,
              const dsl::Block* on_false, const dsl::Stmt* loop) {
    FormulaPtr cond_true = logic::f_atom(cond);
    FormulaPtr cond_false = logic::f_not(cond_true);

    bool trivially_true = false, trivially_false = false;
    if (auto* b = std::get_if<dsl::Expr::BoolLit>(&cond->node)) {
      trivially_true = b->value;
      trivially_false = !b->value;
    }

    auto push_block = [](std::vector<const dsl::Stmt*>& stack, const dsl::Block& b) {
      for (auto it = b.stmts.rbegin(); it != b.stmts.rend(); ++it)
        stack.push_back(it->get());
    };

    // True side.
    if (!trivially_false && feasible(state, cond_true) != Feasible::No) {
      PathState next = state;
      if (!trivially_true) next.pc.push_back(cond_true);
      std::vector<const dsl::Stmt*> cont = rest;
      if (loop != nullptr) {
        cont.push_back(loop);
        next.live_loops[loop] = (state.live_loops.count(loop)
                                     ? state.live_loops.at(loop)
                                     : 0) + 1;
      }
      if (on_true != nullptr) push_block(cont, *on_true);
      exec(std::move(next), std::move(cont));
    }

    // False side.
    if (!trivially_true && feasible(state, cond_false) != Feasible::No) {
      PathState next = std::move(state);
      if (!trivially_false) next.pc.push_back(cond_false);
      if (loop != nullptr) next.live_loops.erase(loop);
      std::vector<const dsl::Stmt*> cont = std::move(rest);
      if (on_false != nullptr) push_block(cont, *on_false);
      exec(std::move(next), std::move(cont));
    }
  }
};

}  // namespace

SymbolicCharacterisation symbolic_execute(const dsl::Program& p,
                                          const ExecOptions& options) {
  return Engine(p, options).run();
}

Concretiser::Concretiser(const SymbolicCharacterisation& gamma)
    : gamma_(gamma),
      pre_eval_(gamma.precondition,
                logic::Env(gamma.space.vars().begin(), gamma.space.vars().end())) {
  logic::Env env(gamma.space.vars().begin(), gamma.space.vars().end());
  leaf_eval_.reserve(gamma.leaves.size());
  for (const auto& leaf : gamma.leaves)
    leaf_eval_.emplace_back(leaf.path_condition, env);
}

Value Concretiser::at(std::span<const Value> point) {
  if (!pre_eval_.at(point))
    throw EvalError("precondition violated at " +
                    gamma_.space.point_to_string(point));
  int match = -1;
  for (std::size_t i = 0; i < leaf_eval_.size(); ++i) {
    if (leaf_eval_[i].at(point)) {
      if (match >= 0)
        throw InternalError(
            "two leaves match one input; path conditions are not exclusive at " +
            gamma_.space.point_to_string(point));
      match = static_cast<int>(i);
    }
  }
  if (match < 0)
    throw InternalError("no leaf matches " + gamma_.space.point_to_string(point) +
                        "; path conditions do not cover the precondition");
  dsl::Binding binding(gamma_.space, point);
  return dsl::eval_expr(*gamma_.leaves[static_cast<std::size_t>(match)].output,
                        binding);
}

Value concretise(const SymbolicCharacterisation& gamma, const Valuation& v) {
  Point point = gamma.space.from_valuation(v);
  Concretiser c(gamma);
  return c.at(point);
}

std::string to_debug_json(const SymbolicCharacterisation& gamma) {
  std::ostringstream os;
  auto escape = [](const std::string& s) {
    std::string out;
    for (char c : s) {
      if (c == '"' || c == '\\') out.push_back('\\');
      out.push_back(c);
    }
    return out;
  };
  os << "{\n  \"precondition\": \""
     << escape(logic::formula_to_string(*gamma.precondition)) << "\",\n";
  os << "  \"leaves\": [\n";
  for (std::size_t i = 0; i < gamma.leaves.size(); ++i) {
    const auto& leaf = gamma.leaves[i];
    os << "    {\"path_condition\": \""
       << escape(logic::formula_to_string(*leaf.path_condition))
       << "\", \"output\": \"" << escape(dsl::print_expr(*leaf.output)) << "\"}"
       << (i + 1 < gamma.leaves.size() ? ",\n" : "\n");
  }
  os << "  ]\n}\n";
  return os.str();
}

}  // namespace datamin::symexec
