#include "datamin/eval.hpp"

#include <sstream>

namespace datamin::dsl {

Binding::Binding(std::span<const std::pair<std::string, Domain>> vars,
                 std::span<const Value> values)
    : vars_(vars), values_(values) {}

Binding::Binding(const InputSpace& space, std::span<const Value> values)
    : vars_(space.vars()), values_(values) {}

const Value* Binding::lookup(const std::string& name) const {
  for (std::size_t i = 0; i < vars_.size(); ++i)
    if (vars_[i].first == name) return &values_[i];
  return nullptr;
}

namespace {

[[noreturn]] void arith_fault(const char* what) {
  throw EvalError(std::string("arithmetic fault: ") + what);
}

Value checked_neg(Value a) {
  Value r;
  if (__builtin_sub_overflow(Value{0}, a, &r)) arith_fault("overflow in '-'");
  return r;
}

Value apply_binop_int(BinOp op, Value a, Value b) {
  Value r = 0;
  switch (op) {
    case BinOp::Add:
      if (__builtin_add_overflow(a, b, &r)) arith_fault("overflow in '+'");
      return r;
    case BinOp::Sub:
      if (__builtin_sub_overflow(a, b, &r)) arith_fault("overflow in '-'");
      return r;
    case BinOp::Mul:
      if (__builtin_mul_overflow(a, b, &r)) arith_fault("overflow in '*'");
      return r;
    case BinOp::Div:
      if (b == 0) arith_fault("division by zero");
      if (a == INT64_MIN && b == -1) arith_fault("overflow in '/'");
      return a / b;  // truncates toward zero
    case BinOp::Mod:
      if (b == 0) arith_fault("modulo by zero");
      if (a == INT64_MIN && b == -1) arith_fault("overflow in '%'");
      return a % b;  // sign of the dividend
    case BinOp::Lt: return a < b;
    case BinOp::Le: return a <= b;
    case BinOp::Gt: return a > b;
    case BinOp::Ge: return a >= b;
    case BinOp::Eq: return a == b;
    case BinOp::Ne: return a != b;
    default:
      throw InternalError("non-arithmetic operator on integers");
  }
}

// Environment of the interpreter: inputs first, then locals in declaration
// order. Linear lookup; programs in this language have a handful of names.
struct Frame {
  std::vector<std::pair<std::string, Value>> slots;

  Value* find(const std::string& name) {
    for (auto& [n, v] : slots)
      if (n == name) return &v;
    return nullptr;
  }
};

Value eval_in_frame(const Expr& e, Frame& frame);

Value eval_logical(const Expr::Binary& bin, Frame& frame) {
  Value lhs = eval_in_frame(*bin.lhs, frame);
  if (bin.op == BinOp::And) {
    if (!lhs) return 0;
    return eval_in_frame(*bin.rhs, frame);
  }
  if (lhs) return 1;
  return eval_in_frame(*bin.rhs, frame);
}

Value eval_in_frame(const Expr& e, Frame& frame) {
  if (auto* i = std::get_if<Expr::IntLit>(&e.node)) return i->value;
  if (auto* b = std::get_if<Expr::BoolLit>(&e.node)) return b->value ? 1 : 0;
  if (auto* v = std::get_if<Expr::Var>(&e.node)) {
    Value* slot = frame.find(v->name);
    if (slot == nullptr)
      throw EvalError("unbound variable '" + v->name + "'");
    return *slot;
  }
  if (auto* u = std::get_if<Expr::Unary>(&e.node)) {
    Value operand = eval_in_frame(*u->operand, frame);
    return u->op == UnOp::Neg ? checked_neg(operand) : (operand ? 0 : 1);
  }
  const auto& bin = std::get<Expr::Binary>(e.node);
  if (is_logical(bin.op)) return eval_logical(bin, frame);
  Value lhs = eval_in_frame(*bin.lhs, frame);
  Value rhs = eval_in_frame(*bin.rhs, frame);
  return apply_binop_int(bin.op, lhs, rhs);
}

struct Executor {
  Frame frame;
  int unroll_bound;

  std::optional<Value> run_block(const Block& b) {
    for (const auto& stmt : b.stmts) {
      auto result = run_stmt(*stmt);
      if (result) return result;
    }
    return std::nullopt;
  }

  std::optional<Value> run_stmt(const Stmt& s) {
    if (auto* d = std::get_if<Stmt::VarDecl>(&s.node)) {
      Value v = eval_in_frame(*d->init, frame);
      frame.slots.emplace_back(d->name, v);
      return std::nullopt;
    }
    if (auto* a = std::get_if<Stmt::Assign>(&s.node)) {
      Value v = eval_in_frame(*a->value, frame);
      Value* slot = frame.find(a->name);
      if (slot == nullptr) throw EvalError("assignment to unbound '" + a->name + "'");
      *slot = v;
      return std::nullopt;
    }
    if (auto* i = std::get_if<Stmt::If>(&s.node)) {
      if (eval_in_frame(*i->cond, frame)) return run_block(i->then_block);
      if (i->else_block) return run_block(*i->else_block);
      return std::nullopt;
    }
    if (auto* w = std::get_if<Stmt::While>(&s.node)) {
      int iterations = 0;
      while (eval_in_frame(*w->cond, frame)) {
        if (iterations++ >= unroll_bound)
          throw EvalError("loop exceeded the unroll bound of " +
                          std::to_string(unroll_bound));
        auto result = run_block(w->body);
        if (result)
          throw InternalError("return inside a loop body survived validation");
      }
      return std::nullopt;
    }
    const auto& r = std::get<Stmt::Return>(s.node);
    return eval_in_frame(*r.value, frame);
  }
};

}  // namespace

Value eval_expr(const Expr& e, const Binding& binding) {
  struct Rec {
    const Binding& b;
    Value eval(const Expr& e) const {
      if (auto* i = std::get_if<Expr::IntLit>(&e.node)) return i->value;
      if (auto* bl = std::get_if<Expr::BoolLit>(&e.node)) return bl->value ? 1 : 0;
      if (auto* v = std::get_if<Expr::Var>(&e.node)) {
        const Value* slot = b.lookup(v->name);
        if (slot == nullptr) throw EvalError("unbound variable '" + v->name + "'");
        return *slot;
      }
      if (auto* u = std::get_if<Expr::Unary>(&e.node)) {
        Value operand = eval(*u->operand);
        return u->op == UnOp::Neg ? checked_neg(operand) : (operand ? 0 : 1);
      }
      const auto& bin = std::get<Expr::Binary>(e.node);
      if (bin.op == BinOp::And) {
        if (!eval(*bin.lhs)) return 0;
        return eval(*bin.rhs);
      }
      if (bin.op == BinOp::Or) {
        if (eval(*bin.lhs)) return 1;
        return eval(*bin.rhs);
      }
      return apply_binop_int(bin.op, eval(*bin.lhs), eval(*bin.rhs));
    }
  };
  return Rec{binding}.eval(e);
}

bool precondition_holds(const Program& p, const InputSpace& space,
                        std::span<const Value> point) {
  Binding binding(space, point);
  return eval_expr(*p.precondition, binding) != 0;
}

Value evaluate_point(const Program& p, const InputSpace& space,
                     std::span<const Value> point, int unroll_bound) {
  if (!precondition_holds(p, space, point))
    throw EvalError("precondition of '" + p.name + "' violated at " +
                    space.point_to_string(point));
  Executor exec;
  exec.unroll_bound = unroll_bound;
  exec.frame.slots.reserve(point.size() + 4);
  for (std::size_t i = 0; i < p.inputs.size(); ++i)
    exec.frame.slots.emplace_back(p.inputs[i].name, point[i]);
  auto result = exec.run_block(p.body);
  if (!result)
    throw InternalError("program '" + p.name + "' fell through without return");
  return *result;
}

Value evaluate(const Program& p, const Valuation& v, int unroll_bound) {
  InputSpace space = InputSpace::of_program(p);
  Point point = space.from_valuation(v);
  return evaluate_point(p, space, point, unroll_bound);
}

}  // namespace datamin::dsl
