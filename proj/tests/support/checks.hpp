#ifndef DATAMIN_TESTS_CHECKS_HPP
#define DATAMIN_TESTS_CHECKS_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>

#include "datamin/knowledge.hpp"
#include "datamin/oracle.hpp"
#include "datamin/synth.hpp"

namespace datamin::tests {

// Behaviour of one point under the bottom-extended semantics: nullopt
// where the precondition fails, the output otherwise.
inline std::optional<Value> behaviour(const oracle::OutputTable& table,
                                      std::span<const Value> point) {
  return table.at(table.space().rank(point));
}

// p(m(v)) == p(v) and m(m(v)) == m(v) over the whole collectable space.
inline bool correct_and_idempotent(const oracle::OutputTable& table,
                                   const synth::Minimiser& m,
                                   std::string* witness = nullptr) {
  synth::Applier applier(m);
  Point point;
  for (std::uint64_t r : table.universe()) {
    table.space().unrank(r, point);
    Point rep = applier.at(point);
    std::uint64_t rep_rank = table.space().rank(rep);
    if (!table.defined(rep_rank) || *table.at(rep_rank) != *table.at(r)) {
      if (witness) *witness = table.space().point_to_string(point);
      return false;
    }
    if (applier.at(rep) != rep) {
      if (witness) *witness = table.space().point_to_string(point);
      return false;
    }
  }
  return true;
}

// Rank offsets of every assignment to the inputs other than `a`, taken at
// coordinate a's lowest value.
inline std::vector<std::uint64_t> context_offsets(const InputSpace& space,
                                                  std::size_t a) {
  std::uint64_t stride = 1;
  for (std::size_t i = a + 1; i < space.arity(); ++i)
    stride *= space.domain(i).cardinality();
  std::uint64_t card = space.domain(a).cardinality();
  std::vector<std::uint64_t> offsets;
  offsets.reserve(space.size() / card);
  for (std::uint64_t r = 0; r < space.size(); ++r)
    if ((r / stride) % card == 0) offsets.push_back(r);
  return offsets;
}

inline std::uint64_t coordinate_stride(const InputSpace& space, std::size_t a) {
  std::uint64_t stride = 1;
  for (std::size_t i = a + 1; i < space.arity(); ++i)
    stride *= space.domain(i).cardinality();
  return stride;
}

// Values sharing a guard are interchangeable in every context: swapping
// one for the other changes neither collectability nor the output.
inline bool properly_distributed(const oracle::OutputTable& table,
                                 const synth::Minimiser& m) {
  if (m.mode != synth::Mode::Distributed) return false;
  const InputSpace& space = table.space();
  for (std::size_t a = 0; a < space.arity(); ++a) {
    std::vector<std::uint64_t> offsets = context_offsets(space, a);
    std::uint64_t stride = coordinate_stride(space, a);
    const Domain& dom = space.domain(a);
    for (const auto& row : m.tables[a]) {
      std::uint64_t rep_off =
          static_cast<std::uint64_t>(row.representative - dom.lo) * stride;
      for (const auto& iv : row.guard.parts()) {
        for (Value v = iv.lo; v <= iv.hi; ++v) {
          if (v == row.representative) continue;
          std::uint64_t v_off = static_cast<std::uint64_t>(v - dom.lo) * stride;
          for (std::uint64_t base : offsets) {
            if (table.at(base + v_off) != table.at(base + rep_off)) return false;
          }
        }
      }
    }
  }
  return true;
}

// For every pair of distinct representatives of one coordinate there is a
// context in range(dm) where they produce different behaviour.
inline bool best_distributed_characterisation(const oracle::OutputTable& table,
                                              const synth::Minimiser& m) {
  if (m.mode != synth::Mode::Distributed) return false;
  const InputSpace& space = table.space();
  synth::Applier applier(m);
  std::set<std::uint64_t> range_ranks;
  Point point;
  for (std::uint64_t r : table.universe()) {
    space.unrank(r, point);
    range_ranks.insert(space.rank(applier.at(point)));
  }
  for (std::size_t a = 0; a < space.arity(); ++a) {
    for (std::size_t i = 0; i < m.tables[a].size(); ++i) {
      for (std::size_t j = i + 1; j < m.tables[a].size(); ++j) {
        Value v1 = m.tables[a][i].representative;
        Value v2 = m.tables[a][j].representative;
        bool distinguished = false;
        for (std::uint64_t rr : range_ranks) {
          space.unrank(rr, point);
          Point p1 = point, p2 = point;
          p1[a] = v1;
          p2[a] = v2;
          if (behaviour(table, p1) != behaviour(table, p2)) {
            distinguished = true;
            break;
          }
        }
        if (!distinguished) return false;
      }
    }
  }
  return true;
}

// Merging any two classes of any coordinate relation yields a product
// relation that leaves the kernel: their representatives differ in some
// context (and with them, by class equivalence, every cross pair).
inline bool merges_break_containment(const oracle::OutputTable& table) {
  const InputSpace& space = table.space();
  auto rels = oracle::coordinate_relations_of(table);
  Point point;
  for (const auto& rel : rels) {
    std::size_t a = rel.input_index;
    for (std::size_t i = 0; i < rel.classes.size(); ++i) {
      for (std::size_t j = i + 1; j < rel.classes.size(); ++j) {
        Value u = rel.classes[i].front();
        Value v = rel.classes[j].front();
        bool differs = false;
        for (std::uint64_t r = 0; r < space.size() && !differs; ++r) {
          space.unrank(r, point);
          if (point[a] != u) continue;
          Point swapped = point;
          swapped[a] = v;
          differs = behaviour(table, point) != behaviour(table, swapped);
        }
        if (!differs) return false;
      }
    }
  }
  return true;
}

// Product of the coordinate relations is inside the kernel, checked pair
// by pair; quadratic, for small spaces only.
inline bool product_relation_in_kernel(const oracle::OutputTable& table) {
  const InputSpace& space = table.space();
  auto rels = oracle::coordinate_relations_of(table);
  // class id per coordinate value; -1 for out-of-scope values.
  std::vector<std::map<Value, int>> class_of(space.arity());
  for (const auto& rel : rels) {
    for (std::size_t c = 0; c < rel.classes.size(); ++c)
      for (Value v : rel.classes[c])
        class_of[rel.input_index][v] = static_cast<int>(c);
  }
  const auto& universe = table.universe();
  Point pu, pv;
  for (std::size_t x = 0; x < universe.size(); ++x) {
    for (std::size_t y = x + 1; y < universe.size(); ++y) {
      space.unrank(universe[x], pu);
      space.unrank(universe[y], pv);
      bool related = true;
      for (std::size_t a = 0; a < space.arity() && related; ++a) {
        auto iu = class_of[a].find(pu[a]);
        auto iv = class_of[a].find(pv[a]);
        related = iu != class_of[a].end() && iv != class_of[a].end() &&
                  iu->second == iv->second;
      }
      if (related && *table.at(universe[x]) != *table.at(universe[y])) return false;
    }
  }
  return true;
}

// An identity minimiser (every collectable value its own class); the
// canonical "not minimised at all" control.
inline synth::Minimiser identity_minimiser(const dsl::Program& p,
                                           std::uint64_t budget = 2'000'000) {
  oracle::OutputTable table(p, budget);
  const InputSpace& space = table.space();
  synth::Minimiser m;
  m.mode = synth::Mode::Distributed;
  m.program_name = p.name;
  m.space = space;
  m.precondition = logic::f_atom(dsl::fold_constants(p.precondition));
  m.tables.resize(space.arity());
  Point point;
  std::vector<std::set<Value>> seen(space.arity());
  for (std::uint64_t r : table.universe()) {
    space.unrank(r, point);
    for (std::size_t a = 0; a < space.arity(); ++a) seen[a].insert(point[a]);
  }
  for (std::size_t a = 0; a < space.arity(); ++a) {
    for (Value v : seen[a])
      m.tables[a].push_back(synth::LocalRow{logic::IntervalSet::single(v, v), v});
  }
  return m;
}

}  // namespace datamin::tests

#endif
