#include "datamin/printer.hpp"

#include <sstream>

namespace datamin::dsl {

namespace {

// Binding strength mirrors the parser's precedence ladder; parentheses are
// emitted only where re-parsing would otherwise regroup.
int precedence(const Expr& e) {
  if (auto* bin = std::get_if<Expr::Binary>(&e.node)) {
    switch (bin->op) {
      case BinOp::Or: return 1;
      case BinOp::And: return 2;
      case BinOp::Eq: case BinOp::Ne: return 3;
      case BinOp::Lt: case BinOp::Le: case BinOp::Gt: case BinOp::Ge: return 4;
      case BinOp::Add: case BinOp::Sub: return 5;
      case BinOp::Mul: case BinOp::Div: case BinOp::Mod: return 6;
    }
  }
  if (std::holds_alternative<Expr::Unary>(e.node)) return 7;
  return 8;
}

void print_expr_prec(std::ostream& os, const Expr& e, int parent_prec) {
  int prec = precedence(e);
  bool parens = prec < parent_prec;
  if (parens) os << '(';
  if (auto* i = std::get_if<Expr::IntLit>(&e.node)) {
    os << i->value;
  } else if (auto* b = std::get_if<Expr::BoolLit>(&e.node)) {
    os << (b->value ? "true" : "false");
  } else if (auto* v = std::get_if<Expr::Var>(&e.node)) {
    os << v->name;
  } else if (auto* u = std::get_if<Expr::Unary>(&e.node)) {
    os << (u->op == UnOp::Neg ? "-" : "not ");
    print_expr_prec(os, *u->operand, prec + 1);
  } else {
    const auto& bin = std::get<Expr::Binary>(e.node);
    // Left-associative: the right child needs one more level of binding.
    print_expr_prec(os, *bin.lhs, prec);
    os << ' ' << binop_token(bin.op) << ' ';
    print_expr_prec(os, *bin.rhs, prec + 1);
  }
  if (parens) os << ')';
}

void print_block(std::ostream& os, const Block& b, int indent);

void print_stmt(std::ostream& os, const Stmt& s, int indent) {
  std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  if (auto* d = std::get_if<Stmt::VarDecl>(&s.node)) {
    os << pad << "var " << d->name << " = ";
    print_expr_prec(os, *d->init, 0);
    os << ";\n";
  } else if (auto* a = std::get_if<Stmt::Assign>(&s.node)) {
    os << pad << a->name << " = ";
    print_expr_prec(os, *a->value, 0);
    os << ";\n";
  } else if (auto* i = std::get_if<Stmt::If>(&s.node)) {
    os << pad << "if (";
    print_expr_prec(os, *i->cond, 0);
    os << ") ";
    print_block(os, i->then_block, indent);
    if (i->else_block) {
      os << " else ";
      print_block(os, *i->else_block, indent);
    }
    os << "\n";
  } else if (auto* w = std::get_if<Stmt::While>(&s.node)) {
    os << pad << "while (";
    print_expr_prec(os, *w->cond, 0);
    os << ") ";
    print_block(os, w->body, indent);
    os << "\n";
  } else {
    const auto& r = std::get<Stmt::Return>(s.node);
    os << pad << "return ";
    print_expr_prec(os, *r.value, 0);
    os << ";\n";
  }
}

void print_block(std::ostream& os, const Block& b, int indent) {
  os << "{\n";
  for (const auto& s : b.stmts) print_stmt(os, *s, indent + 1);
  os << std::string(static_cast<std::size_t>(indent) * 2, ' ') << "}";
}

}  // namespace

std::string print_expr(const Expr& e) {
  std::ostringstream os;
  print_expr_prec(os, e, 0);
  return os.str();
}

std::string print_program(const Program& p) {
  std::ostringstream os;
  os << "program " << p.name << "(";
  for (std::size_t i = 0; i < p.inputs.size(); ++i) {
    if (i) os << ", ";
    const auto& in = p.inputs[i];
    os << in.name << ": ";
    if (in.domain.kind == Type::Bool) os << "bool";
    else os << "int[" << in.domain.lo << ".." << in.domain.hi << "]";
  }
  os << ") -> " << type_name(p.output_type);
  bool trivial_pre = false;
  if (auto* b = std::get_if<Expr::BoolLit>(&p.precondition->node))
    trivial_pre = b->value;
  if (!trivial_pre) {
    os << "\nrequires ";
    print_expr_prec(os, *p.precondition, 0);
    os << ";";
  }
  os << " ";
  print_block(os, p.body, 0);
  os << "\n";
  return os.str();
}

}  // namespace datamin::dsl
