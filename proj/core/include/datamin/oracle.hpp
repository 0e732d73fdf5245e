#ifndef DATAMIN_ORACLE_HPP
#define DATAMIN_ORACLE_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "datamin/eval.hpp"
#include "datamin/synth.hpp"

namespace datamin::oracle {

inline constexpr std::uint64_t kDefaultBudget = 1'000'000;

// Memoised concrete semantics over the full input product: out[rank] is
// the program output, or nullopt where the precondition fails. Built by a
// single enumeration pass; every brute-force check reads from here.
class OutputTable {
 public:
  OutputTable(const dsl::Program& p, std::uint64_t budget = kDefaultBudget,
              int unroll_bound = dsl::kDefaultUnrollBound);
  // Ground truth for an arbitrary semantic function over a space (used for
  // composed/minimised functions that are not program ASTs).
  OutputTable(InputSpace space,
              const std::function<std::optional<Value>(std::span<const Value>)>& fn,
              std::uint64_t budget = kDefaultBudget);

  const InputSpace& space() const { return space_; }
  const std::optional<Value>& at(std::uint64_t rank) const { return out_[rank]; }
  bool defined(std::uint64_t rank) const { return out_[rank].has_value(); }

  // Ranks of the precondition-satisfying points, ascending.
  const std::vector<std::uint64_t>& universe() const { return universe_; }

 private:
  InputSpace space_;
  std::vector<std::optional<Value>> out_;
  std::vector<std::uint64_t> universe_;
};

// Equivalence classes over the precondition-satisfying product space.
// Classes are ordered by their smallest member; members ascend within a
// class; every universe point is in exactly one class.
struct Partition {
  InputSpace space;
  std::vector<std::uint64_t> universe;            // ascending ranks
  std::vector<std::vector<std::uint64_t>> classes;  // ranks, grouped

  std::size_t class_of(std::uint64_t rank) const;  // index into classes
};

bool partitions_equal(const Partition& a, const Partition& b);

// Groups inputs by equal output: the kernel classes of the program.
Partition kernel(const dsl::Program& p, std::uint64_t budget = kDefaultBudget);
Partition kernel_of(const OutputTable& table);

// Per-coordinate equivalence classes over one input's collectable values.
struct CoordinateRelation {
  std::size_t input_index = 0;
  std::vector<std::vector<Value>> classes;  // ascending values, ordered by min
};

// The coarsest per-coordinate partitions whose product relation is
// contained in the kernel: two values of coordinate i are related iff
// swapping one for the other in any context leaves both the precondition
// truth and the output unchanged. Out-of-scope values (those in no
// precondition-satisfying valuation) are dropped.
std::vector<CoordinateRelation> coordinate_relations(
    const dsl::Program& p, std::uint64_t budget = kDefaultBudget);
std::vector<CoordinateRelation> coordinate_relations_of(const OutputTable& table);

// Reference best minimisers built directly from enumeration, with
// minimum-of-class representatives: the independent ground truth that the
// solver-driven synthesis is validated against.
synth::Minimiser reference_best_distributed(const dsl::Program& p,
                                            std::uint64_t budget = kDefaultBudget);
synth::Minimiser reference_best_monolithic(const dsl::Program& p,
                                           std::uint64_t budget = kDefaultBudget);

// Equivalence of minimisers modulo representative choice: do they induce
// identical partitions (per coordinate, or of the joint universe)?
// Throws on mode or signature mismatch.
bool same_partition(const synth::Minimiser& a, const synth::Minimiser& b);

// Partition induced by applying a minimiser's tables.
Partition induced_partition(const synth::Minimiser& m, const dsl::Program& p,
                            std::uint64_t budget = kDefaultBudget);

}  // namespace datamin::oracle

#endif
