#include "datamin/formula.hpp"

#include <algorithm>
#include <sstream>

#include "datamin/printer.hpp"

namespace datamin::logic {

FormulaPtr f_const(bool v) {
  static const FormulaPtr kTrue =
      std::make_shared<Formula>(Formula{Formula::BoolConst{true}});
  static const FormulaPtr kFalse =
      std::make_shared<Formula>(Formula{Formula::BoolConst{false}});
  return v ? kTrue : kFalse;
}

FormulaPtr f_atom(dsl::ExprPtr e) {
  if (auto* b = std::get_if<dsl::Expr::BoolLit>(&e->node)) return f_const(b->value);
  return std::make_shared<Formula>(Formula{Formula::Atom{std::move(e)}});
}

FormulaPtr f_not(FormulaPtr f) {
  if (auto* c = std::get_if<Formula::BoolConst>(&f->node)) return f_const(!c->value);
  if (auto* n = std::get_if<Formula::Not>(&f->node)) return n->body;
  return std::make_shared<Formula>(Formula{Formula::Not{std::move(f)}});
}

FormulaPtr f_and(std::vector<FormulaPtr> parts) {
  std::vector<FormulaPtr> flat;
  for (auto& p : parts) {
    if (auto* c = std::get_if<Formula::BoolConst>(&p->node)) {
      if (!c->value) return f_const(false);
      continue;
    }
    if (auto* a = std::get_if<Formula::And>(&p->node)) {
      flat.insert(flat.end(), a->parts.begin(), a->parts.end());
      continue;
    }
    flat.push_back(std::move(p));
  }
  if (flat.empty()) return f_const(true);
  if (flat.size() == 1) return flat.front();
  return std::make_shared<Formula>(Formula{Formula::And{std::move(flat)}});
}

FormulaPtr f_or(std::vector<FormulaPtr> parts) {
  std::vector<FormulaPtr> flat;
  for (auto& p : parts) {
    if (auto* c = std::get_if<Formula::BoolConst>(&p->node)) {
      if (c->value) return f_const(true);
      continue;
    }
    if (auto* o = std::get_if<Formula::Or>(&p->node)) {
      flat.insert(flat.end(), o->parts.begin(), o->parts.end());
      continue;
    }
    flat.push_back(std::move(p));
  }
  if (flat.empty()) return f_const(false);
  if (flat.size() == 1) return flat.front();
  return std::make_shared<Formula>(Formula{Formula::Or{std::move(flat)}});
}

FormulaPtr f_quant(Quantifier kind, std::string var, Domain domain,
                   FormulaPtr body) {
  if (std::get_if<Formula::BoolConst>(&body->node)) return body;
  return std::make_shared<Formula>(
      Formula{Formula::Quant{kind, std::move(var), domain, std::move(body)}});
}

dsl::ExprPtr interval_set_expr(const IntervalSet& set, const std::string& var,
                               const Domain& dom) {
  using namespace dsl;
  if (set.empty()) return make_bool(false);
  if (set.covers(dom)) return make_bool(true);
  ExprPtr var_ref = make_var(var);
  std::vector<ExprPtr> terms;
  for (const auto& iv : set.parts()) {
    if (dom.kind == Type::Bool) {
      if (iv.lo == 0 && iv.hi == 0) terms.push_back(make_unary(UnOp::Not, var_ref));
      else if (iv.lo == 1 && iv.hi == 1) terms.push_back(var_ref);
      else return make_bool(true);
    } else if (iv.lo == iv.hi) {
      terms.push_back(make_binary(BinOp::Eq, var_ref, make_int(iv.lo)));
    } else {
      ExprPtr lo_ok = make_binary(BinOp::Le, make_int(iv.lo), var_ref);
      ExprPtr hi_ok = make_binary(BinOp::Le, var_ref, make_int(iv.hi));
      // Clamp one-sided intervals to a single comparison.
      if (iv.lo <= dom.lo) terms.push_back(hi_ok);
      else if (iv.hi >= dom.hi) terms.push_back(lo_ok);
      else terms.push_back(make_binary(BinOp::And, lo_ok, hi_ok));
    }
  }
  ExprPtr out = terms.front();
  for (std::size_t i = 1; i < terms.size(); ++i)
    out = make_binary(BinOp::Or, out, terms[i]);
  return out;
}

FormulaPtr interval_set_formula(const IntervalSet& set, const std::string& var,
                                const Domain& dom) {
  return f_atom(interval_set_expr(set, var, dom));
}

namespace {

FormulaPtr substitute_rec(const FormulaPtr& f, const std::string& name,
                          const dsl::ExprPtr& value) {
  if (std::get_if<Formula::BoolConst>(&f->node)) return f;
  if (auto* a = std::get_if<Formula::Atom>(&f->node)) {
    dsl::ExprPtr e = dsl::substitute(a->expr, name, value);
    if (e == a->expr) return f;
    return f_atom(e);
  }
  if (auto* n = std::get_if<Formula::Not>(&f->node)) {
    FormulaPtr body = substitute_rec(n->body, name, value);
    return body == n->body ? f : f_not(body);
  }
  if (auto* an = std::get_if<Formula::And>(&f->node)) {
    std::vector<FormulaPtr> parts;
    bool changed = false;
    for (const auto& p : an->parts) {
      parts.push_back(substitute_rec(p, name, value));
      changed |= parts.back() != p;
    }
    return changed ? f_and(std::move(parts)) : f;
  }
  if (auto* o = std::get_if<Formula::Or>(&f->node)) {
    std::vector<FormulaPtr> parts;
    bool changed = false;
    for (const auto& p : o->parts) {
      parts.push_back(substitute_rec(p, name, value));
      changed |= parts.back() != p;
    }
    return changed ? f_or(std::move(parts)) : f;
  }
  const auto& q = std::get<Formula::Quant>(f->node);
  if (q.var == name) return f;  // bound occurrence shadows
  FormulaPtr body = substitute_rec(q.body, name, value);
  return body == q.body ? f : f_quant(q.kind, q.var, q.domain, body);
}

}  // namespace

FormulaPtr substitute(const FormulaPtr& f, const std::string& name, Value v,
                      Type t) {
  dsl::ExprPtr lit = t == Type::Bool ? dsl::make_bool(v != 0) : dsl::make_int(v);
  return substitute_rec(f, name, lit);
}

bool formula_equal(const Formula& a, const Formula& b) {
  if (a.node.index() != b.node.index()) return false;
  if (auto* c = std::get_if<Formula::BoolConst>(&a.node))
    return c->value == std::get<Formula::BoolConst>(b.node).value;
  if (auto* at = std::get_if<Formula::Atom>(&a.node))
    return dsl::expr_equal(*at->expr, *std::get<Formula::Atom>(b.node).expr);
  if (auto* n = std::get_if<Formula::Not>(&a.node))
    return formula_equal(*n->body, *std::get<Formula::Not>(b.node).body);
  if (auto* an = std::get_if<Formula::And>(&a.node)) {
    const auto& bn = std::get<Formula::And>(b.node);
    if (an->parts.size() != bn.parts.size()) return false;
    for (std::size_t i = 0; i < an->parts.size(); ++i)
      if (!formula_equal(*an->parts[i], *bn.parts[i])) return false;
    return true;
  }
  if (auto* ao = std::get_if<Formula::Or>(&a.node)) {
    const auto& bo = std::get<Formula::Or>(b.node);
    if (ao->parts.size() != bo.parts.size()) return false;
    for (std::size_t i = 0; i < ao->parts.size(); ++i)
      if (!formula_equal(*ao->parts[i], *bo.parts[i])) return false;
    return true;
  }
  const auto& aq = std::get<Formula::Quant>(a.node);
  const auto& bq = std::get<Formula::Quant>(b.node);
  return aq.kind == bq.kind && aq.var == bq.var && aq.domain == bq.domain &&
         formula_equal(*aq.body, *bq.body);
}

namespace {

void to_string_rec(std::ostringstream& os, const Formula& f) {
  if (auto* c = std::get_if<Formula::BoolConst>(&f.node)) {
    os << (c->value ? "true" : "false");
    return;
  }
  if (auto* a = std::get_if<Formula::Atom>(&f.node)) {
    os << dsl::print_expr(*a->expr);
    return;
  }
  if (auto* n = std::get_if<Formula::Not>(&f.node)) {
    os << "not (";
    to_string_rec(os, *n->body);
    os << ')';
    return;
  }
  if (auto* an = std::get_if<Formula::And>(&f.node)) {
    for (std::size_t i = 0; i < an->parts.size(); ++i) {
      if (i) os << " and ";
      os << '(';
      to_string_rec(os, *an->parts[i]);
      os << ')';
    }
    return;
  }
  if (auto* o = std::get_if<Formula::Or>(&f.node)) {
    for (std::size_t i = 0; i < o->parts.size(); ++i) {
      if (i) os << " or ";
      os << '(';
      to_string_rec(os, *o->parts[i]);
      os << ')';
    }
    return;
  }
  const auto& q = std::get<Formula::Quant>(f.node);
  os << (q.kind == Quantifier::Forall ? "forall " : "exists ") << q.var;
  if (q.domain.kind == Type::Bool) os << ": bool";
  else os << ": int[" << q.domain.lo << ".." << q.domain.hi << "]";
  os << ". (";
  to_string_rec(os, *q.body);
  os << ')';
}

void free_vars_rec(const Formula& f, std::vector<std::string>& bound,
                   std::vector<std::string>& out) {
  if (auto* a = std::get_if<Formula::Atom>(&f.node)) {
    std::vector<std::string> vars;
    dsl::collect_vars(*a->expr, vars);
    for (auto& v : vars) {
      if (std::find(bound.begin(), bound.end(), v) != bound.end()) continue;
      if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
    }
    return;
  }
  if (auto* n = std::get_if<Formula::Not>(&f.node)) {
    free_vars_rec(*n->body, bound, out);
    return;
  }
  if (auto* an = std::get_if<Formula::And>(&f.node)) {
    for (const auto& p : an->parts) free_vars_rec(*p, bound, out);
    return;
  }
  if (auto* o = std::get_if<Formula::Or>(&f.node)) {
    for (const auto& p : o->parts) free_vars_rec(*p, bound, out);
    return;
  }
  if (auto* q = std::get_if<Formula::Quant>(&f.node)) {
    bound.push_back(q->var);
    free_vars_rec(*q->body, bound, out);
    bound.pop_back();
  }
}

}  // namespace

std::string formula_to_string(const Formula& f) {
  std::ostringstream os;
  to_string_rec(os, f);
  return os.str();
}

dsl::ExprPtr formula_to_expr(const Formula& f) {
  using namespace dsl;
  if (auto* c = std::get_if<Formula::BoolConst>(&f.node)) return make_bool(c->value);
  if (auto* a = std::get_if<Formula::Atom>(&f.node)) return a->expr;
  if (auto* n = std::get_if<Formula::Not>(&f.node))
    return make_unary(UnOp::Not, formula_to_expr(*n->body));
  auto chain = [](const std::vector<FormulaPtr>& parts, BinOp op) {
    ExprPtr out = formula_to_expr(*parts.front());
    for (std::size_t i = 1; i < parts.size(); ++i)
      out = make_binary(op, out, formula_to_expr(*parts[i]));
    return out;
  };
  if (auto* an = std::get_if<Formula::And>(&f.node))
    return chain(an->parts, BinOp::And);
  if (auto* o = std::get_if<Formula::Or>(&f.node)) return chain(o->parts, BinOp::Or);
  throw Error("cannot render a quantified formula as an expression");
}

std::vector<std::string> free_vars(const Formula& f) {
  std::vector<std::string> bound, out;
  free_vars_rec(f, bound, out);
  return out;
}

}  // namespace datamin::logic
