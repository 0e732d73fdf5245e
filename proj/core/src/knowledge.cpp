#include "datamin/knowledge.hpp"

#include <algorithm>
#include <set>

namespace datamin::knowledge {

namespace {

using dsl::Block;
using dsl::Expr;
using dsl::ExprPtr;
using dsl::Program;
using dsl::Stmt;
using dsl::StmtPtr;

void require_same_signature(const Program& f, const Program& g) {
  if (!f.same_signature(g))
    throw Error("programs '" + f.name + "' and '" + g.name +
                "' have different input signatures");
}

void require_same_universe(const oracle::OutputTable& f,
                           const oracle::OutputTable& g, const Program& pf,
                           const Program& pg) {
  if (f.universe() != g.universe())
    throw Error("programs '" + pf.name + "' and '" + pg.name +
                "' have different preconditions; their disclosure is not "
                "comparable");
}

}  // namespace

KnowledgeSet knowledge_set(const Program& p, const Valuation& v,
                           std::uint64_t budget) {
  oracle::OutputTable table(p, budget);
  Point point = table.space().from_valuation(v);
  std::uint64_t rank = table.space().rank(point);
  if (!table.defined(rank))
    throw EvalError("precondition of '" + p.name + "' violated at " +
                    table.space().point_to_string(point));
  KnowledgeSet ks;
  ks.program = p.name;
  ks.at_input = v;
  ks.space = table.space();
  Value out = *table.at(rank);
  for (std::uint64_t r : table.universe())
    if (*table.at(r) == out) ks.members.push_back(r);
  return ks;
}

bool discloses_leq(const Program& f, const Program& g, std::uint64_t budget) {
  require_same_signature(f, g);
  oracle::OutputTable tf(f, budget);
  oracle::OutputTable tg(g, budget);
  require_same_universe(tf, tg, f, g);
  // ker(g) refines ker(f): g's output determines f's output.
  std::map<Value, Value> g_to_f;
  for (std::uint64_t r : tf.universe()) {
    auto [it, fresh] = g_to_f.try_emplace(*tg.at(r), *tf.at(r));
    if (!fresh && it->second != *tf.at(r)) return false;
  }
  return true;
}

namespace {

// -- Program composition --------------------------------------------------

void collect_identifiers(const Block& b, std::set<std::string>& out);

void collect_identifiers(const Expr& e, std::set<std::string>& out) {
  std::vector<std::string> vars;
  dsl::collect_vars(e, vars);
  out.insert(vars.begin(), vars.end());
}

void collect_identifiers(const Stmt& s, std::set<std::string>& out) {
  if (auto* d = std::get_if<Stmt::VarDecl>(&s.node)) {
    out.insert(d->name);
    collect_identifiers(*d->init, out);
  } else if (auto* a = std::get_if<Stmt::Assign>(&s.node)) {
    out.insert(a->name);
    collect_identifiers(*a->value, out);
  } else if (auto* i = std::get_if<Stmt::If>(&s.node)) {
    collect_identifiers(*i->cond, out);
    collect_identifiers(i->then_block, out);
    if (i->else_block) collect_identifiers(*i->else_block, out);
  } else if (auto* w = std::get_if<Stmt::While>(&s.node)) {
    collect_identifiers(*w->cond, out);
    collect_identifiers(w->body, out);
  } else {
    collect_identifiers(*std::get<Stmt::Return>(s.node).value, out);
  }
}

void collect_identifiers(const Block& b, std::set<std::string>& out) {
  for (const auto& s : b.stmts) collect_identifiers(*s, out);
}

std::string fresh_name(std::string base, const std::set<std::string>& used) {
  while (used.count(base)) base += "_";
  return base;
}

void collect_local_decls(const Block& b, std::set<std::string>& out) {
  for (const auto& s : b.stmts) {
    if (auto* d = std::get_if<Stmt::VarDecl>(&s->node)) out.insert(d->name);
    else if (auto* i = std::get_if<Stmt::If>(&s->node)) {
      collect_local_decls(i->then_block, out);
      if (i->else_block) collect_local_decls(*i->else_block, out);
    } else if (auto* w = std::get_if<Stmt::While>(&s->node)) {
      collect_local_decls(w->body, out);
    }
  }
}

ExprPtr rename_vars(const ExprPtr& e,
                    const std::map<std::string, std::string>& renames) {
  if (auto* v = std::get_if<Expr::Var>(&e->node)) {
    auto it = renames.find(v->name);
    return it == renames.end() ? e : dsl::make_var(it->second, e->loc);
  }
  if (auto* u = std::get_if<Expr::Unary>(&e->node)) {
    ExprPtr inner = rename_vars(u->operand, renames);
    return inner == u->operand ? e : dsl::make_unary(u->op, inner, e->loc);
  }
  if (auto* bin = std::get_if<Expr::Binary>(&e->node)) {
    ExprPtr lhs = rename_vars(bin->lhs, renames);
    ExprPtr rhs = rename_vars(bin->rhs, renames);
    if (lhs == bin->lhs && rhs == bin->rhs) return e;
    return dsl::make_binary(bin->op, lhs, rhs, e->loc);
  }
  return e;
}

StmtPtr wrap_not_done(const std::string& done_var, StmtPtr inner) {
  Block guard_block;
  guard_block.stmts.push_back(std::move(inner));
  return std::make_shared<Stmt>(Stmt{
      Stmt::If{dsl::make_unary(dsl::UnOp::Not, dsl::make_var(done_var)),
               std::move(guard_block), std::nullopt},
      {}});
}

// Rewrites a program body so it assigns instead of returning: locals are
// renamed per the map, `return e` becomes `out = e; done = true;` (with a
// bool-to-int step when the source output is boolean), and every statement
// is guarded by `if (not done)` so nothing runs past the first return.
// Loop bodies cannot contain returns, so loops need no internal guards.
struct Inliner {
  std::map<std::string, std::string> renames;
  std::string out_var;
  std::string done_var;
  bool bool_output;

  Block transform_block(const Block& b, bool guard) const {
    Block out;
    for (const auto& s : b.stmts) {
      StmtPtr t = transform_stmt(*s);
      out.stmts.push_back(guard ? wrap_not_done(done_var, std::move(t))
                                : std::move(t));
    }
    return out;
  }

  StmtPtr transform_stmt(const Stmt& s) const {
    if (auto* d = std::get_if<Stmt::VarDecl>(&s.node)) {
      return std::make_shared<Stmt>(Stmt{
          Stmt::VarDecl{renames.at(d->name), rename_vars(d->init, renames)}, {}});
    }
    if (auto* a = std::get_if<Stmt::Assign>(&s.node)) {
      auto it = renames.find(a->name);
      std::string name = it == renames.end() ? a->name : it->second;
      return std::make_shared<Stmt>(
          Stmt{Stmt::Assign{name, rename_vars(a->value, renames)}, {}});
    }
    if (auto* i = std::get_if<Stmt::If>(&s.node)) {
      std::optional<Block> else_block;
      if (i->else_block) else_block = transform_block(*i->else_block, true);
      return std::make_shared<Stmt>(
          Stmt{Stmt::If{rename_vars(i->cond, renames),
                        transform_block(i->then_block, true), std::move(else_block)},
               {}});
    }
    if (auto* w = std::get_if<Stmt::While>(&s.node)) {
      return std::make_shared<Stmt>(
          Stmt{Stmt::While{rename_vars(w->cond, renames),
                           transform_block(w->body, false)},
               {}});
    }
    const auto& r = std::get<Stmt::Return>(s.node);
    ExprPtr value = rename_vars(r.value, renames);
    Block assign;
    if (bool_output) {
      // out is int-typed; translate the boolean result to 0/1.
      Block then_b, else_b;
      then_b.stmts.push_back(std::make_shared<Stmt>(
          Stmt{Stmt::Assign{out_var, dsl::make_int(1)}, {}}));
      else_b.stmts.push_back(std::make_shared<Stmt>(
          Stmt{Stmt::Assign{out_var, dsl::make_int(0)}, {}}));
      assign.stmts.push_back(std::make_shared<Stmt>(
          Stmt{Stmt::If{value, std::move(then_b), std::move(else_b)}, {}}));
    } else {
      assign.stmts.push_back(
          std::make_shared<Stmt>(Stmt{Stmt::Assign{out_var, value}, {}}));
    }
    assign.stmts.push_back(std::make_shared<Stmt>(
        Stmt{Stmt::Assign{done_var, dsl::make_bool(true)}, {}}));
    // A single compound statement; the caller adds the not-done guard.
    Block wrapper = std::move(assign);
    return std::make_shared<Stmt>(
        Stmt{Stmt::If{dsl::make_bool(true), std::move(wrapper), std::nullopt}, {}});
  }
};

void append_inlined(Program& target, const Program& source,
                    std::set<std::string>& used, const std::string& tag,
                    std::string* out_var_name) {
  std::set<std::string> locals;
  collect_local_decls(source.body, locals);
  Inliner inliner;
  for (const auto& local : locals) {
    std::string renamed = fresh_name(tag + "_" + local, used);
    used.insert(renamed);
    inliner.renames[local] = renamed;
  }
  inliner.out_var = fresh_name(tag + "_out", used);
  used.insert(inliner.out_var);
  inliner.done_var = fresh_name(tag + "_done", used);
  used.insert(inliner.done_var);
  inliner.bool_output = source.output_type == Type::Bool;

  target.body.stmts.push_back(std::make_shared<Stmt>(
      Stmt{Stmt::VarDecl{inliner.out_var, dsl::make_int(0)}, {}}));
  target.body.stmts.push_back(std::make_shared<Stmt>(
      Stmt{Stmt::VarDecl{inliner.done_var, dsl::make_bool(false)}, {}}));
  Block inlined = inliner.transform_block(source.body, true);
  for (auto& s : inlined.stmts) target.body.stmts.push_back(std::move(s));
  *out_var_name = inliner.out_var;
}

}  // namespace

Program attacker_compose(const AttackerPair& pair, PairEncoding* encoding_out,
                         std::uint64_t budget) {
  const Program& p = pair.legitimate;
  const Program& h = pair.hidden;
  require_same_signature(p, h);

  // Output ranges over the collectable space, for an injective packing.
  // The hidden use must be defined wherever the legitimate precondition
  // holds; anything else cannot be composed.
  oracle::OutputTable tp(p, budget);
  InputSpace space = tp.space();
  PairEncoding enc;
  bool first = true;
  Point point;
  for (std::uint64_t r : tp.universe()) {
    space.unrank(r, point);
    if (!dsl::precondition_holds(h, space, point))
      throw Error("hidden use '" + h.name + "' is undefined at " +
                  space.point_to_string(point));
    Value ho = dsl::evaluate_point(h, space, point);
    Value po = *tp.at(r);
    if (first) {
      enc = PairEncoding{po, po, ho, ho};
      first = false;
    } else {
      enc.p_min = std::min(enc.p_min, po);
      enc.p_max = std::max(enc.p_max, po);
      enc.h_min = std::min(enc.h_min, ho);
      enc.h_max = std::max(enc.h_max, ho);
    }
  }
  if (first)
    throw Error("precondition of '" + p.name + "' is unsatisfiable; nothing to compose");

  std::set<std::string> used;
  for (const auto& in : p.inputs) used.insert(in.name);
  collect_identifiers(p.body, used);
  collect_identifiers(h.body, used);

  Program composed;
  composed.name = p.name + "_with_" + h.name;
  composed.inputs = p.inputs;
  composed.precondition = p.precondition;
  composed.output_type = Type::Int;

  std::string p_out, h_out;
  append_inlined(composed, p, used, "p", &p_out);
  append_inlined(composed, h, used, "h", &h_out);

  // (p_out - p_min) * h_span + (h_out - h_min)
  ExprPtr norm_p = dsl::make_binary(dsl::BinOp::Sub, dsl::make_var(p_out),
                                    dsl::make_int(enc.p_min));
  ExprPtr norm_h = dsl::make_binary(dsl::BinOp::Sub, dsl::make_var(h_out),
                                    dsl::make_int(enc.h_min));
  ExprPtr packed = dsl::make_binary(
      dsl::BinOp::Add,
      dsl::make_binary(dsl::BinOp::Mul, norm_p, dsl::make_int(enc.h_span())),
      norm_h);
  composed.body.stmts.push_back(
      std::make_shared<Stmt>(Stmt{Stmt::Return{packed}, {}}));

  if (encoding_out != nullptr) *encoding_out = enc;
  return composed;
}

bool verify_attacker_bound(const Program& p, const Program& h,
                           const synth::Minimiser& m, std::uint64_t budget) {
  Program composed = attacker_compose(AttackerPair{p, h}, nullptr, budget);
  oracle::OutputTable tp(p, budget);
  const InputSpace& space = tp.space();
  if (m.space.vars() != space.vars())
    throw Error("minimiser does not match the input signature of '" + p.name + "'");

  synth::Applier applier(m);
  oracle::OutputTable lhs(
      space,
      [&](std::span<const Value> pt) -> std::optional<Value> {
        std::uint64_t r = space.rank(pt);
        if (!tp.defined(r)) return std::nullopt;
        Point minimised = applier.at(pt);
        return dsl::evaluate_point(composed, space, minimised);
      },
      budget);

  return oracle::partitions_equal(oracle::kernel_of(lhs), oracle::kernel_of(tp));
}

std::vector<BreachWitness> audit_log(const std::vector<AuditEntry>& entries) {
  std::vector<BreachWitness> witnesses;
  // Group by output; within a group, keep the first occurrence of each
  // distinct input and report every cross pair.
  std::map<std::pair<bool, Value>, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    auto key = std::make_pair(entries[i].output_is_bool, entries[i].output);
    auto& firsts = groups[key];
    bool duplicate = false;
    for (std::size_t j : firsts) {
      if (entries[j].input == entries[i].input) { duplicate = true; break; }
    }
    if (!duplicate) firsts.push_back(i);
  }
  for (const auto& [key, firsts] : groups) {
    for (std::size_t a = 0; a < firsts.size(); ++a)
      for (std::size_t b = a + 1; b < firsts.size(); ++b)
        witnesses.push_back(BreachWitness{firsts[a], firsts[b], key.second});
  }
  std::sort(witnesses.begin(), witnesses.end(),
            [](const BreachWitness& x, const BreachWitness& y) {
              return std::tie(x.first_entry, x.second_entry) <
                     std::tie(y.first_entry, y.second_entry);
            });
  return witnesses;
}

}  // namespace datamin::knowledge
