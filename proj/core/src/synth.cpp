#include "datamin/synth.hpp"

#include <algorithm>

namespace datamin::synth {

const char* mode_name(Mode m) {
  return m == Mode::Monolithic ? "monolithic" : "distributed";
}

std::size_t Minimiser::class_count(std::size_t input) const {
  return mode == Mode::Distributed ? tables[input].size() : joint_table.size();
}

namespace {

using logic::FormulaPtr;

void require_matching_space(const dsl::Program& p,
                            const symexec::SymbolicCharacterisation& gamma) {
  InputSpace expected = InputSpace::of_program(p);
  if (expected.vars() != gamma.space.vars())
    throw InternalError("characterisation does not belong to program '" +
                        p.name + "'");
}

void require_budget(const InputSpace& space, std::uint64_t budget,
                    const char* what) {
  if (space.size() > budget)
    throw BudgetError(std::string(what) + ": input product of " +
                      std::to_string(space.size()) +
                      " points exceeds the enumeration budget of " +
                      std::to_string(budget));
}

// Pre and the disjunction of path conditions: the satisfiable, collectable
// space the class loop drains.
FormulaPtr reachable_space(const symexec::SymbolicCharacterisation& gamma) {
  std::vector<FormulaPtr> pcs;
  pcs.reserve(gamma.leaves.size());
  for (const auto& leaf : gamma.leaves) pcs.push_back(leaf.path_condition);
  return logic::f_and({gamma.precondition, logic::f_or(std::move(pcs))});
}

// Output agreement between the original inputs and the same inputs with
// coordinate `pin_index` (or all coordinates, monolithic) replaced by the
// pinned values: some leaf pair fires on both sides with equal outputs.
// The pinned side is substituted up front, mirroring that the compared
// value is fixed before quantifier elimination.
struct PinnedSide {
  std::vector<FormulaPtr> pcs;
  std::vector<dsl::ExprPtr> outs;
  FormulaPtr pre;
};

PinnedSide pin_side(const symexec::SymbolicCharacterisation& gamma,
                    const std::vector<std::pair<std::size_t, Value>>& pins) {
  PinnedSide side;
  side.pre = gamma.precondition;
  for (const auto& [idx, value] : pins) {
    const auto& [name, dom] = gamma.space.vars()[idx];
    side.pre = logic::substitute(side.pre, name, value, dom.kind);
  }
  for (const auto& leaf : gamma.leaves) {
    FormulaPtr pc = leaf.path_condition;
    dsl::ExprPtr out = leaf.output;
    for (const auto& [idx, value] : pins) {
      const auto& [name, dom] = gamma.space.vars()[idx];
      dsl::ExprPtr lit = dom.kind == Type::Bool ? dsl::make_bool(value != 0)
                                                : dsl::make_int(value);
      pc = logic::substitute(pc, name, value, dom.kind);
      out = dsl::fold_constants(dsl::substitute(out, name, lit));
    }
    if (auto* c = std::get_if<logic::Formula::BoolConst>(&pc->node);
        c != nullptr && !c->value)
      continue;  // this leaf can never fire on the pinned side
    side.pcs.push_back(std::move(pc));
    side.outs.push_back(std::move(out));
  }
  return side;
}

// The guard formula of one equivalence class: inputs v of the focus
// coordinate(s) such that for every assignment of the remaining inputs,
// v and the pinned representative agree — both collectable with equal
// output, or both outside the precondition.
FormulaPtr class_guard_formula(const symexec::SymbolicCharacterisation& gamma,
                               const std::vector<std::size_t>& focus,
                               const std::vector<std::pair<std::size_t, Value>>& pins) {
  PinnedSide pinned = pin_side(gamma, pins);

  std::vector<FormulaPtr> pairs;
  pairs.reserve(gamma.leaves.size() * pinned.pcs.size());
  for (const auto& leaf : gamma.leaves) {
    for (std::size_t j = 0; j < pinned.pcs.size(); ++j) {
      dsl::ExprPtr eq = dsl::fold_constants(
          dsl::make_binary(dsl::BinOp::Eq, leaf.output, pinned.outs[j]));
      pairs.push_back(logic::f_and(
          {leaf.path_condition, pinned.pcs[j], logic::f_atom(eq)}));
    }
  }
  FormulaPtr both_in = logic::f_and(
      {gamma.precondition, pinned.pre, logic::f_or(std::move(pairs))});
  FormulaPtr both_out =
      logic::f_and({logic::f_not(gamma.precondition), logic::f_not(pinned.pre)});
  FormulaPtr body = logic::f_or({std::move(both_in), std::move(both_out)});

  // Universally quantify every non-focus input, innermost last.
  const auto& vars = gamma.space.vars();
  for (std::size_t j = vars.size(); j-- > 0;) {
    if (std::find(focus.begin(), focus.end(), j) != focus.end()) continue;
    body = logic::f_quant(logic::Quantifier::Forall, vars[j].first,
                          vars[j].second, std::move(body));
  }
  return body;
}

}  // namespace

Minimiser synthesize_distributed(const dsl::Program& p,
                                 const symexec::SymbolicCharacterisation& gamma,
                                 const SynthOptions& options) {
  require_matching_space(p, gamma);
  require_budget(gamma.space, options.enumeration_budget, "synthesize_distributed");

  logic::Env env = logic::env_of_program(p);
  Minimiser m;
  m.mode = Mode::Distributed;
  m.program_name = p.name;
  m.space = gamma.space;
  m.precondition = gamma.precondition;
  m.tables.resize(gamma.space.arity());

  for (std::size_t a = 0; a < gamma.space.arity(); ++a) {
    const auto& [var, dom] = gamma.space.vars()[a];
    FormulaPtr remaining = reachable_space(gamma);
    std::vector<LocalRow>& rows = m.tables[a];

    while (auto point = logic::model_point(remaining, env)) {
      Value representative = (*point)[a];
      FormulaPtr wp = class_guard_formula(gamma, {a}, {{a, representative}});
      logic::IntervalSet guard = logic::project_to_intervals(wp, var, dom);
      if (!guard.contains(representative))
        throw InternalError("class guard for input '" + var +
                            "' misses its own representative");
      rows.push_back(LocalRow{guard, representative});
      if (rows.size() > options.class_cap)
        throw BudgetError("input '" + var + "' exceeds the class cap of " +
                          std::to_string(options.class_cap) +
                          " equivalence classes");
      remaining = logic::f_and(
          {remaining,
           logic::f_not(logic::interval_set_formula(guard, var, dom))});
    }
    std::sort(rows.begin(), rows.end(),
              [](const LocalRow& x, const LocalRow& y) {
                return x.representative < y.representative;
              });
  }
  return m;
}

Minimiser synthesize_monolithic(const dsl::Program& p,
                                const symexec::SymbolicCharacterisation& gamma,
                                const SynthOptions& options) {
  require_matching_space(p, gamma);
  require_budget(gamma.space, options.enumeration_budget, "synthesize_monolithic");

  logic::Env env = logic::env_of_program(p);
  Minimiser m;
  m.mode = Mode::Monolithic;
  m.program_name = p.name;
  m.space = gamma.space;
  m.precondition = gamma.precondition;

  std::vector<std::size_t> all_inputs(gamma.space.arity());
  for (std::size_t i = 0; i < all_inputs.size(); ++i) all_inputs[i] = i;

  FormulaPtr remaining = reachable_space(gamma);
  while (auto point = logic::model_point(remaining, env)) {
    std::vector<std::pair<std::size_t, Value>> pins;
    pins.reserve(point->size());
    for (std::size_t i = 0; i < point->size(); ++i) pins.emplace_back(i, (*point)[i]);
    FormulaPtr wp = class_guard_formula(gamma, all_inputs, pins);
    FormulaPtr guard = logic::quantifier_eliminate(wp, env);
    m.joint_table.push_back(JointRow{guard, *point});
    if (m.joint_table.size() > options.class_cap)
      throw BudgetError("program '" + p.name + "' exceeds the class cap of " +
                        std::to_string(options.class_cap) +
                        " equivalence classes");
    remaining = logic::f_and({remaining, logic::f_not(guard)});
  }
  // Classes come out ordered: each representative is the smallest point of
  // the space not yet covered, so representatives ascend lexicographically.
  return m;
}

Applier::Applier(const Minimiser& m)
    : m_(m),
      pre_(m.precondition,
           logic::Env(m.space.vars().begin(), m.space.vars().end())) {
  logic::Env env(m.space.vars().begin(), m.space.vars().end());
  joint_guards_.reserve(m.joint_table.size());
  for (const auto& row : m.joint_table) joint_guards_.emplace_back(row.guard, env);

  if (m.mode == Mode::Distributed) {
    dense_.resize(m.space.arity());
    for (std::size_t a = 0; a < m.space.arity(); ++a) {
      const Domain& dom = m.space.domain(a);
      if (dom.cardinality() > kDenseLookupCap) continue;
      auto& table = dense_[a];
      table.assign(dom.cardinality(), 0);
      for (std::size_t row = 0; row < m.tables[a].size(); ++row) {
        for (const auto& iv : m.tables[a][row].guard.parts()) {
          for (Value v = iv.lo; v <= iv.hi; ++v)
            table[static_cast<std::size_t>(v - dom.lo)] =
                static_cast<std::uint32_t>(row + 1);
        }
      }
    }
  }
}

Point Applier::at(std::span<const Value> point) {
  if (!m_.space.contains(point))
    throw EvalError("input " + m_.space.point_to_string(point) +
                    " is outside the declared domains");
  if (!pre_.at(point))
    throw EvalError("precondition violated at " + m_.space.point_to_string(point));

  Point out(point.begin(), point.end());
  if (m_.mode == Mode::Distributed) {
    for (std::size_t a = 0; a < m_.space.arity(); ++a) {
      std::uint32_t row_index = 0;
      if (!dense_[a].empty()) {
        row_index = dense_[a][static_cast<std::size_t>(
            point[a] - m_.space.domain(a).lo)];
      } else {
        for (std::size_t row = 0; row < m_.tables[a].size(); ++row) {
          if (m_.tables[a][row].guard.contains(point[a])) {
            row_index = static_cast<std::uint32_t>(row + 1);
            break;
          }
        }
      }
      if (row_index == 0)
        throw InternalError("no guard of input '" + m_.space.name(a) +
                            "' matches value " + std::to_string(point[a]) +
                            "; table is not total");
      out[a] = m_.tables[a][row_index - 1].representative;
    }
    return out;
  }
  for (std::size_t i = 0; i < joint_guards_.size(); ++i) {
    if (joint_guards_[i].at(point)) return m_.joint_table[i].representative;
  }
  throw InternalError("no monolithic guard matches " +
                      m_.space.point_to_string(point) + "; table is not total");
}

Point apply_point(const Minimiser& m, std::span<const Value> point) {
  Applier applier(m);
  return applier.at(point);
}

Valuation apply(const Minimiser& m, const Valuation& v) {
  Point point = m.space.from_valuation(v);
  return m.space.to_valuation(apply_point(m, point));
}

Valuation online_representative(const dsl::Program& p,
                                const symexec::SymbolicCharacterisation& gamma,
                                const Valuation& v,
                                const SynthOptions& options) {
  require_matching_space(p, gamma);
  require_budget(gamma.space, options.enumeration_budget, "online_representative");

  Point point = gamma.space.from_valuation(v);
  logic::Env env = logic::env_of_program(p);
  if (!logic::eval_formula(gamma.precondition, env, point))
    throw EvalError("precondition violated at " +
                    gamma.space.point_to_string(point));

  Point out = point;
  for (std::size_t a = 0; a < gamma.space.arity(); ++a) {
    const auto& [var, dom] = gamma.space.vars()[a];
    // One class extraction for the value at hand, one model call for its
    // canonical representative; no other class is enumerated.
    FormulaPtr wp = class_guard_formula(gamma, {a}, {{a, point[a]}});
    logic::IntervalSet guard = logic::project_to_intervals(wp, var, dom);
    Valuation rep = logic::model(
        logic::interval_set_formula(guard, var, dom), {{var, dom}});
    out[a] = rep.at(var);
  }
  return gamma.space.to_valuation(out);
}

}  // namespace datamin::synth
