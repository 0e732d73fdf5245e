#include "datamin/oracle.hpp"

#include <algorithm>
#include <unordered_map>

namespace datamin::oracle {

namespace {

void require_budget(const InputSpace& space, std::uint64_t budget,
                    const char* what) {
  if (space.size() > budget)
    throw BudgetError(std::string(what) + ": input product of " +
                      std::to_string(space.size()) +
                      " points exceeds the enumeration budget of " +
                      std::to_string(budget));
}

}  // namespace

OutputTable::OutputTable(const dsl::Program& p, std::uint64_t budget,
                         int unroll_bound)
    : space_(InputSpace::of_program(p)) {
  require_budget(space_, budget, "output table");
  out_.resize(space_.size());
  Point point;
  for (std::uint64_t r = 0; r < space_.size(); ++r) {
    space_.unrank(r, point);
    if (!dsl::precondition_holds(p, space_, point)) continue;
    out_[r] = dsl::evaluate_point(p, space_, point, unroll_bound);
    universe_.push_back(r);
  }
}

OutputTable::OutputTable(
    InputSpace space,
    const std::function<std::optional<Value>(std::span<const Value>)>& fn,
    std::uint64_t budget)
    : space_(std::move(space)) {
  require_budget(space_, budget, "output table");
  out_.resize(space_.size());
  Point point;
  for (std::uint64_t r = 0; r < space_.size(); ++r) {
    space_.unrank(r, point);
    out_[r] = fn(point);
    if (out_[r]) universe_.push_back(r);
  }
}

std::size_t Partition::class_of(std::uint64_t rank) const {
  for (std::size_t c = 0; c < classes.size(); ++c) {
    if (std::binary_search(classes[c].begin(), classes[c].end(), rank)) return c;
  }
  throw Error("rank " + std::to_string(rank) + " is not in the universe");
}

bool partitions_equal(const Partition& a, const Partition& b) {
  // Both sides are canonical: classes ordered by smallest member, members
  // ascending.
  return a.universe == b.universe && a.classes == b.classes;
}

Partition kernel_of(const OutputTable& table) {
  Partition part;
  part.space = table.space();
  part.universe = table.universe();
  std::unordered_map<Value, std::size_t> class_index;
  for (std::uint64_t r : part.universe) {
    Value out = *table.at(r);
    auto [it, fresh] = class_index.try_emplace(out, part.classes.size());
    if (fresh) part.classes.emplace_back();
    part.classes[it->second].push_back(r);
  }
  return part;
}

Partition kernel(const dsl::Program& p, std::uint64_t budget) {
  return kernel_of(OutputTable(p, budget));
}

std::vector<CoordinateRelation> coordinate_relations_of(const OutputTable& table) {
  const InputSpace& space = table.space();
  std::vector<CoordinateRelation> rels;
  rels.reserve(space.arity());

  for (std::size_t a = 0; a < space.arity(); ++a) {
    const Domain& dom = space.domain(a);

    // Rank offsets of every context (assignment to the other inputs) at
    // this coordinate's lowest value; rank(v, c) = offset[c] + (v-lo)*stride.
    std::uint64_t stride = 1;
    for (std::size_t i = a + 1; i < space.arity(); ++i)
      stride *= space.domain(i).cardinality();
    std::uint64_t card = dom.cardinality();
    std::vector<std::uint64_t> offsets;
    offsets.reserve(space.size() / card);
    for (std::uint64_t r = 0; r < space.size(); ++r) {
      if ((r / stride) % card == 0) offsets.push_back(r);
    }

    auto behaviour_at = [&](Value v, std::uint64_t offset) {
      return table.at(offset + static_cast<std::uint64_t>(v - dom.lo) * stride);
    };
    auto in_scope = [&](Value v) {
      for (std::uint64_t off : offsets)
        if (behaviour_at(v, off).has_value()) return true;
      return false;
    };
    // Two values are interchangeable iff swapping them in any context
    // preserves both collectability and the output.
    auto same_class = [&](Value u, Value v) {
      for (std::uint64_t off : offsets)
        if (behaviour_at(u, off) != behaviour_at(v, off)) return false;
      return true;
    };

    CoordinateRelation rel;
    rel.input_index = a;
    for (Value v = dom.lo; v <= dom.hi; ++v) {
      if (!in_scope(v)) continue;
      bool placed = false;
      for (auto& cls : rel.classes) {
        if (same_class(cls.front(), v)) {
          cls.push_back(v);
          placed = true;
          break;
        }
      }
      if (!placed) rel.classes.push_back({v});
    }
    rels.push_back(std::move(rel));
  }
  return rels;
}

std::vector<CoordinateRelation> coordinate_relations(const dsl::Program& p,
                                                     std::uint64_t budget) {
  return coordinate_relations_of(OutputTable(p, budget));
}

namespace {

logic::FormulaPtr precondition_formula(const dsl::Program& p) {
  return logic::f_atom(dsl::fold_constants(p.precondition));
}

}  // namespace

synth::Minimiser reference_best_distributed(const dsl::Program& p,
                                            std::uint64_t budget) {
  OutputTable table(p, budget);
  std::vector<CoordinateRelation> rels = coordinate_relations_of(table);

  synth::Minimiser m;
  m.mode = synth::Mode::Distributed;
  m.program_name = p.name;
  m.space = table.space();
  m.precondition = precondition_formula(p);
  m.tables.resize(m.space.arity());
  for (const auto& rel : rels) {
    auto& rows = m.tables[rel.input_index];
    for (const auto& cls : rel.classes) {
      rows.push_back(synth::LocalRow{logic::IntervalSet::from_sorted_values(cls),
                                     cls.front()});
    }
    std::sort(rows.begin(), rows.end(),
              [](const synth::LocalRow& x, const synth::LocalRow& y) {
                return x.representative < y.representative;
              });
  }
  return m;
}

synth::Minimiser reference_best_monolithic(const dsl::Program& p,
                                           std::uint64_t budget) {
  OutputTable table(p, budget);
  Partition part = kernel_of(table);

  synth::Minimiser m;
  m.mode = synth::Mode::Monolithic;
  m.program_name = p.name;
  m.space = table.space();
  m.precondition = precondition_formula(p);
  logic::Env env(m.space.vars().begin(), m.space.vars().end());
  for (const auto& cls : part.classes) {
    m.joint_table.push_back(synth::JointRow{
        logic::canonical_set_formula(env, cls), m.space.point_at(cls.front())});
  }
  std::sort(m.joint_table.begin(), m.joint_table.end(),
            [](const synth::JointRow& x, const synth::JointRow& y) {
              return x.representative < y.representative;
            });
  return m;
}

Partition induced_partition(const synth::Minimiser& m, const dsl::Program& p,
                            std::uint64_t budget) {
  OutputTable table(p, budget);
  synth::Applier applier(m);
  Partition part;
  part.space = table.space();
  part.universe = table.universe();
  std::unordered_map<std::uint64_t, std::size_t> class_index;
  Point point;
  for (std::uint64_t r : part.universe) {
    part.space.unrank(r, point);
    std::uint64_t label = part.space.rank(applier.at(point));
    auto [it, fresh] = class_index.try_emplace(label, part.classes.size());
    if (fresh) part.classes.emplace_back();
    part.classes[it->second].push_back(r);
  }
  return part;
}

bool same_partition(const synth::Minimiser& a, const synth::Minimiser& b) {
  if (a.mode != b.mode)
    throw Error("minimiser mode mismatch: " + std::string(synth::mode_name(a.mode)) +
                " vs " + synth::mode_name(b.mode));
  if (a.space.vars() != b.space.vars())
    throw Error("minimiser signature mismatch");

  if (a.mode == synth::Mode::Distributed) {
    for (std::size_t i = 0; i < a.space.arity(); ++i) {
      // Tables are canonical (disjoint interval guards sorted by class
      // minimum), so per-coordinate partitions are equal iff the guard
      // lists are, representatives aside.
      if (a.tables[i].size() != b.tables[i].size()) return false;
      auto guards_of = [](const std::vector<synth::LocalRow>& rows) {
        std::vector<logic::IntervalSet> gs;
        gs.reserve(rows.size());
        for (const auto& r : rows) gs.push_back(r.guard);
        std::sort(gs.begin(), gs.end(),
                  [](const logic::IntervalSet& x, const logic::IntervalSet& y) {
                    return x.min() < y.min();
                  });
        return gs;
      };
      if (guards_of(a.tables[i]) != guards_of(b.tables[i])) return false;
    }
    return true;
  }

  // Monolithic: compare induced labelings over the collectable space.
  logic::Env env(a.space.vars().begin(), a.space.vars().end());
  logic::FormulaEvaluator pre_a(a.precondition, env);
  logic::FormulaEvaluator pre_b(b.precondition, env);
  synth::Applier apply_a(a);
  synth::Applier apply_b(b);
  std::unordered_map<std::uint64_t, std::uint64_t> a_to_b, b_to_a;
  Point point;
  for (std::uint64_t r = 0; r < a.space.size(); ++r) {
    a.space.unrank(r, point);
    bool in_a = pre_a.at(point);
    if (in_a != pre_b.at(point))
      throw Error("minimisers disagree on the collectable space; "
                  "they do not target the same program");
    if (!in_a) continue;
    std::uint64_t la = a.space.rank(apply_a.at(point));
    std::uint64_t lb = a.space.rank(apply_b.at(point));
    auto [ia, fresh_a] = a_to_b.try_emplace(la, lb);
    if (!fresh_a && ia->second != lb) return false;
    auto [ib, fresh_b] = b_to_a.try_emplace(lb, la);
    if (!fresh_b && ib->second != la) return false;
  }
  return true;
}

}  // namespace datamin::oracle
