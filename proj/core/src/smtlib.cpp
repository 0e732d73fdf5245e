#include "datamin/smtlib.hpp"

#include <sstream>

namespace datamin::logic {

namespace {

bool uses_div_or_mod(const dsl::Expr& e) {
  if (auto* u = std::get_if<dsl::Expr::Unary>(&e.node))
    return uses_div_or_mod(*u->operand);
  if (auto* bin = std::get_if<dsl::Expr::Binary>(&e.node)) {
    if (bin->op == dsl::BinOp::Div || bin->op == dsl::BinOp::Mod) return true;
    return uses_div_or_mod(*bin->lhs) || uses_div_or_mod(*bin->rhs);
  }
  return false;
}

bool formula_uses_div_or_mod(const Formula& f) {
  if (auto* a = std::get_if<Formula::Atom>(&f.node))
    return uses_div_or_mod(*a->expr);
  if (auto* n = std::get_if<Formula::Not>(&f.node))
    return formula_uses_div_or_mod(*n->body);
  if (auto* an = std::get_if<Formula::And>(&f.node)) {
    for (const auto& p : an->parts)
      if (formula_uses_div_or_mod(*p)) return true;
    return false;
  }
  if (auto* o = std::get_if<Formula::Or>(&f.node)) {
    for (const auto& p : o->parts)
      if (formula_uses_div_or_mod(*p)) return true;
    return false;
  }
  if (auto* q = std::get_if<Formula::Quant>(&f.node))
    return formula_uses_div_or_mod(*q->body);
  return false;
}

void write_int(std::ostream& os, Value v) {
  if (v < 0) {
    // Negative numerals are spelled (- n); magnitude via unsigned math so
    // INT64_MIN does not overflow.
    std::uint64_t mag = static_cast<std::uint64_t>(-(v + 1)) + 1;
    os << "(- " << mag << ")";
  } else {
    os << v;
  }
}

// Types are tracked so boolean == / != become iff rather than integer =.
struct ExprWriter {
  const Env& env;
  std::vector<std::pair<std::string, Type>> scope;

  Type var_type(const std::string& name) const {
    for (auto it = scope.rbegin(); it != scope.rend(); ++it)
      if (it->first == name) return it->second;
    for (const auto& [n, d] : env)
      if (n == name) return d.kind;
    throw SolverError("undeclared variable '" + name + "' in SMT export");
  }

  Type write(std::ostream& os, const dsl::Expr& e) {
    using namespace dsl;
    if (auto* i = std::get_if<Expr::IntLit>(&e.node)) {
      write_int(os, i->value);
      return Type::Int;
    }
    if (auto* b = std::get_if<Expr::BoolLit>(&e.node)) {
      os << (b->value ? "true" : "false");
      return Type::Bool;
    }
    if (auto* v = std::get_if<Expr::Var>(&e.node)) {
      os << v->name;
      return var_type(v->name);
    }
    if (auto* u = std::get_if<Expr::Unary>(&e.node)) {
      os << (u->op == UnOp::Neg ? "(- " : "(not ");
      write(os, *u->operand);
      os << ')';
      return u->op == UnOp::Neg ? Type::Int : Type::Bool;
    }
    const auto& bin = std::get<Expr::Binary>(e.node);
    const char* op = nullptr;
    Type result = Type::Bool;
    switch (bin.op) {
      case BinOp::Add: op = "+"; result = Type::Int; break;
      case BinOp::Sub: op = "-"; result = Type::Int; break;
      case BinOp::Mul: op = "*"; result = Type::Int; break;
      case BinOp::Div: op = "tdiv"; result = Type::Int; break;
      case BinOp::Mod: op = "tmod"; result = Type::Int; break;
      case BinOp::Lt: op = "<"; break;
      case BinOp::Le: op = "<="; break;
      case BinOp::Gt: op = ">"; break;
      case BinOp::Ge: op = ">="; break;
      case BinOp::Eq: op = "="; break;
      case BinOp::Ne: op = "distinct"; break;
      case BinOp::And: op = "and"; break;
      case BinOp::Or: op = "or"; break;
    }
    os << '(' << op << ' ';
    write(os, *bin.lhs);
    os << ' ';
    write(os, *bin.rhs);
    os << ')';
    return result;
  }

  void write_formula(std::ostream& os, const Formula& f) {
    if (auto* c = std::get_if<Formula::BoolConst>(&f.node)) {
      os << (c->value ? "true" : "false");
      return;
    }
    if (auto* a = std::get_if<Formula::Atom>(&f.node)) {
      write(os, *a->expr);
      return;
    }
    if (auto* n = std::get_if<Formula::Not>(&f.node)) {
      os << "(not ";
      write_formula(os, *n->body);
      os << ')';
      return;
    }
    if (auto* an = std::get_if<Formula::And>(&f.node)) {
      os << "(and";
      for (const auto& p : an->parts) {
        os << ' ';
        write_formula(os, *p);
      }
      os << ')';
      return;
    }
    if (auto* o = std::get_if<Formula::Or>(&f.node)) {
      os << "(or";
      for (const auto& p : o->parts) {
        os << ' ';
        write_formula(os, *p);
      }
      os << ')';
      return;
    }
    const auto& q = std::get<Formula::Quant>(f.node);
    const char* head = q.kind == Quantifier::Forall ? "forall" : "exists";
    const char* sort = q.domain.kind == Type::Bool ? "Bool" : "Int";
    os << '(' << head << " ((" << q.var << ' ' << sort << ")) ";
    scope.emplace_back(q.var, q.domain.kind);
    std::ostringstream bounds;
    bool bounded = q.domain.kind == Type::Int;
    if (bounded) {
      bounds << "(and (<= ";
      write_int(bounds, q.domain.lo);
      bounds << ' ' << q.var << ") (<= " << q.var << ' ';
      write_int(bounds, q.domain.hi);
      bounds << "))";
    }
    if (bounded && q.kind == Quantifier::Forall) {
      os << "(=> " << bounds.str() << ' ';
      write_formula(os, *q.body);
      os << ')';
    } else if (bounded) {
      os << "(and " << bounds.str() << ' ';
      write_formula(os, *q.body);
      os << ')';
    } else {
      write_formula(os, *q.body);
    }
    scope.pop_back();
    os << ')';
  }
};

}  // namespace

std::string to_smtlib(const FormulaPtr& f, const Env& env) {
  std::ostringstream os;
  os << "(set-logic ALL)\n";
  os << "(set-info :source |generated by datamin for cross-checking|)\n";
  if (formula_uses_div_or_mod(*f)) {
    // SMT-LIB div/mod are Euclidean; the language truncates toward zero
    // with the remainder taking the dividend's sign.
    os << "(define-fun tdiv ((a Int) (b Int)) Int\n"
          "  (ite (>= a 0) (ite (>= b 0) (div a b) (- (div a (- b))))\n"
          "       (ite (>= b 0) (- (div (- a) b)) (div (- a) (- b)))))\n";
    os << "(define-fun tmod ((a Int) (b Int)) Int (- a (* b (tdiv a b))))\n";
  }
  for (const auto& [name, dom] : env) {
    os << "(declare-const " << name << ' '
       << (dom.kind == Type::Bool ? "Bool" : "Int") << ")\n";
    if (dom.kind == Type::Int) {
      os << "(assert (and (<= ";
      write_int(os, dom.lo);
      os << ' ' << name << ") (<= " << name << ' ';
      write_int(os, dom.hi);
      os << ")))\n";
    }
  }
  ExprWriter writer{env, {}};
  os << "(assert ";
  writer.write_formula(os, *f);
  os << ")\n(check-sat)\n";
  return os.str();
}

}  // namespace datamin::logic
