#include "datamin/ast.hpp"

#include <algorithm>

namespace datamin::dsl {

bool is_arithmetic(BinOp op) {
  switch (op) {
    case BinOp::Add: case BinOp::Sub: case BinOp::Mul:
    case BinOp::Div: case BinOp::Mod:
      return true;
    default:
      return false;
  }
}

bool is_comparison(BinOp op) {
  switch (op) {
    case BinOp::Lt: case BinOp::Le: case BinOp::Gt: case BinOp::Ge:
    case BinOp::Eq: case BinOp::Ne:
      return true;
    default:
      return false;
  }
}

bool is_logical(BinOp op) { return op == BinOp::And || op == BinOp::Or; }

const char* binop_token(BinOp op) {
  switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
    case BinOp::Div: return "/";
    case BinOp::Mod: return "%";
    case BinOp::Lt: return "<";
    case BinOp::Le: return "<=";
    case BinOp::Gt: return ">";
    case BinOp::Ge: return ">=";
    case BinOp::Eq: return "==";
    case BinOp::Ne: return "!=";
    case BinOp::And: return "and";
    case BinOp::Or: return "or";
  }
  return "?";
}

ExprPtr make_int(Value v) {
  return std::make_shared<Expr>(Expr{Expr::IntLit{v}, {}});
}

ExprPtr make_bool(bool v) {
  return std::make_shared<Expr>(Expr{Expr::BoolLit{v}, {}});
}

ExprPtr make_var(std::string name, SourceLoc loc) {
  return std::make_shared<Expr>(Expr{Expr::Var{std::move(name)}, loc});
}

ExprPtr make_unary(UnOp op, ExprPtr operand, SourceLoc loc) {
  return std::make_shared<Expr>(Expr{Expr::Unary{op, std::move(operand)}, loc});
}

ExprPtr make_binary(BinOp op, ExprPtr lhs, ExprPtr rhs, SourceLoc loc) {
  return std::make_shared<Expr>(
      Expr{Expr::Binary{op, std::move(lhs), std::move(rhs)}, loc});
}

bool expr_equal(const Expr& a, const Expr& b) {
  if (a.node.index() != b.node.index()) return false;
  if (auto* ai = std::get_if<Expr::IntLit>(&a.node))
    return ai->value == std::get<Expr::IntLit>(b.node).value;
  if (auto* ab = std::get_if<Expr::BoolLit>(&a.node))
    return ab->value == std::get<Expr::BoolLit>(b.node).value;
  if (auto* av = std::get_if<Expr::Var>(&a.node))
    return av->name == std::get<Expr::Var>(b.node).name;
  if (auto* au = std::get_if<Expr::Unary>(&a.node)) {
    const auto& bu = std::get<Expr::Unary>(b.node);
    return au->op == bu.op && expr_equal(*au->operand, *bu.operand);
  }
  const auto& abin = std::get<Expr::Binary>(a.node);
  const auto& bbin = std::get<Expr::Binary>(b.node);
  return abin.op == bbin.op && expr_equal(*abin.lhs, *bbin.lhs) &&
         expr_equal(*abin.rhs, *bbin.rhs);
}

namespace {

// Folds only when the result is exact: full literal operands, no division
// by zero, no overflow. Anything else is left for runtime/symbolic layers.
ExprPtr try_fold(const ExprPtr& e) {
  if (auto* u = std::get_if<Expr::Unary>(&e->node)) {
    if (u->op == UnOp::Not) {
      if (auto* b = std::get_if<Expr::BoolLit>(&u->operand->node))
        return make_bool(!b->value);
    } else {
      if (auto* n = std::get_if<Expr::IntLit>(&u->operand->node)) {
        Value r;
        if (!__builtin_sub_overflow(Value{0}, n->value, &r)) return make_int(r);
      }
    }
    return e;
  }
  auto* bin = std::get_if<Expr::Binary>(&e->node);
  if (bin == nullptr) return e;
  if (is_logical(bin->op)) {
    auto* lb = std::get_if<Expr::BoolLit>(&bin->lhs->node);
    auto* rb = std::get_if<Expr::BoolLit>(&bin->rhs->node);
    // Short-circuit folds that do not need the other side.
    if (lb != nullptr) {
      if (bin->op == BinOp::And) return lb->value ? bin->rhs : make_bool(false);
      return lb->value ? make_bool(true) : bin->rhs;
    }
    // Only neutral-element folds on the right: `x and false` may not drop x,
    // since x is still evaluated (and may fault) under left-to-right
    // short-circuit semantics.
    if (rb != nullptr) {
      if (bin->op == BinOp::And && rb->value) return bin->lhs;
      if (bin->op == BinOp::Or && !rb->value) return bin->lhs;
    }
    return e;
  }
  if (bin->op == BinOp::Eq || bin->op == BinOp::Ne) {
    auto* lb = std::get_if<Expr::BoolLit>(&bin->lhs->node);
    auto* rb = std::get_if<Expr::BoolLit>(&bin->rhs->node);
    if (lb && rb) {
      bool eq = lb->value == rb->value;
      return make_bool(bin->op == BinOp::Eq ? eq : !eq);
    }
  }
  auto* ln = std::get_if<Expr::IntLit>(&bin->lhs->node);
  auto* rn = std::get_if<Expr::IntLit>(&bin->rhs->node);
  if (!ln || !rn) return e;
  Value a = ln->value, b = rn->value, r = 0;
  switch (bin->op) {
    case BinOp::Add: if (__builtin_add_overflow(a, b, &r)) return e; return make_int(r);
    case BinOp::Sub: if (__builtin_sub_overflow(a, b, &r)) return e; return make_int(r);
    case BinOp::Mul: if (__builtin_mul_overflow(a, b, &r)) return e; return make_int(r);
    case BinOp::Div:
      if (b == 0 || (a == INT64_MIN && b == -1)) return e;
      return make_int(a / b);
    case BinOp::Mod:
      if (b == 0 || (a == INT64_MIN && b == -1)) return e;
      return make_int(a % b);
    case BinOp::Lt: return make_bool(a < b);
    case BinOp::Le: return make_bool(a <= b);
    case BinOp::Gt: return make_bool(a > b);
    case BinOp::Ge: return make_bool(a >= b);
    case BinOp::Eq: return make_bool(a == b);
    case BinOp::Ne: return make_bool(a != b);
    default: return e;
  }
}

}  // namespace

ExprPtr fold_constants(const ExprPtr& e) {
  if (auto* u = std::get_if<Expr::Unary>(&e->node)) {
    ExprPtr inner = fold_constants(u->operand);
    ExprPtr out = inner == u->operand ? e : make_unary(u->op, inner, e->loc);
    return try_fold(out);
  }
  if (auto* bin = std::get_if<Expr::Binary>(&e->node)) {
    ExprPtr lhs = fold_constants(bin->lhs);
    ExprPtr rhs = fold_constants(bin->rhs);
    ExprPtr out = (lhs == bin->lhs && rhs == bin->rhs)
                      ? e
                      : make_binary(bin->op, lhs, rhs, e->loc);
    return try_fold(out);
  }
  return e;
}

ExprPtr substitute(const ExprPtr& e, const std::string& name,
                   const ExprPtr& replacement) {
  if (auto* v = std::get_if<Expr::Var>(&e->node))
    return v->name == name ? replacement : e;
  if (auto* u = std::get_if<Expr::Unary>(&e->node)) {
    ExprPtr inner = substitute(u->operand, name, replacement);
    if (inner == u->operand) return e;
    return try_fold(make_unary(u->op, inner, e->loc));
  }
  if (auto* bin = std::get_if<Expr::Binary>(&e->node)) {
    ExprPtr lhs = substitute(bin->lhs, name, replacement);
    ExprPtr rhs = substitute(bin->rhs, name, replacement);
    if (lhs == bin->lhs && rhs == bin->rhs) return e;
    return try_fold(make_binary(bin->op, lhs, rhs, e->loc));
  }
  return e;
}

void collect_vars(const Expr& e, std::vector<std::string>& out) {
  if (auto* v = std::get_if<Expr::Var>(&e.node)) {
    if (std::find(out.begin(), out.end(), v->name) == out.end())
      out.push_back(v->name);
    return;
  }
  if (auto* u = std::get_if<Expr::Unary>(&e.node)) {
    collect_vars(*u->operand, out);
    return;
  }
  if (auto* bin = std::get_if<Expr::Binary>(&e.node)) {
    collect_vars(*bin->lhs, out);
    collect_vars(*bin->rhs, out);
  }
}

const Param* Program::find_input(const std::string& n) const {
  for (const auto& p : inputs)
    if (p.name == n) return &p;
  return nullptr;
}

int Program::input_index(const std::string& n) const {
  for (std::size_t i = 0; i < inputs.size(); ++i)
    if (inputs[i].name == n) return static_cast<int>(i);
  return -1;
}

bool Program::same_signature(const Program& other) const {
  if (inputs.size() != other.inputs.size()) return false;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (inputs[i].name != other.inputs[i].name) return false;
    if (!(inputs[i].domain == other.inputs[i].domain)) return false;
  }
  return true;
}

namespace {

bool block_equal(const Block& a, const Block& b);

bool stmt_equal(const Stmt& a, const Stmt& b) {
  if (a.node.index() != b.node.index()) return false;
  if (auto* ad = std::get_if<Stmt::VarDecl>(&a.node)) {
    const auto& bd = std::get<Stmt::VarDecl>(b.node);
    return ad->name == bd.name && expr_equal(*ad->init, *bd.init);
  }
  if (auto* aa = std::get_if<Stmt::Assign>(&a.node)) {
    const auto& ba = std::get<Stmt::Assign>(b.node);
    return aa->name == ba.name && expr_equal(*aa->value, *ba.value);
  }
  if (auto* ai = std::get_if<Stmt::If>(&a.node)) {
    const auto& bi = std::get<Stmt::If>(b.node);
    if (!expr_equal(*ai->cond, *bi.cond)) return false;
    if (!block_equal(ai->then_block, bi.then_block)) return false;
    if (ai->else_block.has_value() != bi.else_block.has_value()) return false;
    return !ai->else_block || block_equal(*ai->else_block, *bi.else_block);
  }
  if (auto* aw = std::get_if<Stmt::While>(&a.node)) {
    const auto& bw = std::get<Stmt::While>(b.node);
    return expr_equal(*aw->cond, *bw.cond) && block_equal(aw->body, bw.body);
  }
  const auto& ar = std::get<Stmt::Return>(a.node);
  const auto& br = std::get<Stmt::Return>(b.node);
  return expr_equal(*ar.value, *br.value);
}

bool block_equal(const Block& a, const Block& b) {
  if (a.stmts.size() != b.stmts.size()) return false;
  for (std::size_t i = 0; i < a.stmts.size(); ++i)
    if (!stmt_equal(*a.stmts[i], *b.stmts[i])) return false;
  return true;
}

}  // namespace

bool program_equal(const Program& a, const Program& b) {
  if (a.name != b.name || a.output_type != b.output_type) return false;
  if (!a.same_signature(b)) return false;
  if (!expr_equal(*a.precondition, *b.precondition)) return false;
  return block_equal(a.body, b.body);
}

}  // namespace datamin::dsl
