#ifndef DATAMIN_SYNTH_HPP
#define DATAMIN_SYNTH_HPP

#include <string>
#include <vector>

#include "datamin/solver.hpp"
#include "datamin/symexec.hpp"

namespace datamin::synth {

enum class Mode { Monolithic, Distributed };

const char* mode_name(Mode m);

// One decision-table row of a local (single-coordinate) minimiser: the
// guard is the canonical interval form of one equivalence class, the
// representative is that class's minimum.
struct LocalRow {
  logic::IntervalSet guard;
  Value representative;
};

// One row of a monolithic table: the guard is a canonical disjunction of
// interval boxes over all inputs, the representative the class's
// lexicographically smallest valuation.
struct JointRow {
  logic::FormulaPtr guard;
  Point representative;
};

// An ordered decision table mapping each collectable input to the fixed
// representative of its equivalence class. Self-contained: carries the
// input signature and precondition so it can be applied and serialised
// without the program.
struct Minimiser {
  Mode mode = Mode::Monolithic;
  std::string program_name;
  InputSpace space;
  logic::FormulaPtr precondition;
  std::vector<std::vector<LocalRow>> tables;  // distributed: one per input
  std::vector<JointRow> joint_table;          // monolithic

  std::size_t class_count(std::size_t input) const;  // distributed table size
};

struct SynthOptions {
  std::uint64_t class_cap = 100'000;            // per input
  std::uint64_t enumeration_budget = 1'000'000; // product-space cap
};

// Builds a best distributed minimiser from the symbolic characterisation:
// per input, repeatedly pick the smallest uncovered valuation, derive that
// value's class guard by quantifier elimination over all other inputs, and
// exclude it, until the characterisation is exhausted. Guards within one
// table are disjoint and cover exactly the values that occur in some
// precondition-satisfying valuation.
Minimiser synthesize_distributed(const dsl::Program& p,
                                 const symexec::SymbolicCharacterisation& gamma,
                                 const SynthOptions& options = {});

// The same loop with all inputs fused into one tuple-valued input: classes
// are the kernel classes of the program restricted to the precondition.
Minimiser synthesize_monolithic(const dsl::Program& p,
                                const symexec::SymbolicCharacterisation& gamma,
                                const SynthOptions& options = {});

// Maps a point to its representative. Validates domain membership and the
// precondition (hard error on violation). A point that matches no guard is
// an InternalError: tables are total on collectable data by construction.
Valuation apply(const Minimiser& m, const Valuation& v);
Point apply_point(const Minimiser& m, std::span<const Value> point);

// Sweep form of apply_point: guard evaluators and per-value row lookups
// are prepared once.
class Applier {
 public:
  explicit Applier(const Minimiser& m);
  Point at(std::span<const Value> point);

 private:
  static constexpr std::uint64_t kDenseLookupCap = 1u << 21;

  const Minimiser& m_;
  logic::FormulaEvaluator pre_;
  std::vector<logic::FormulaEvaluator> joint_guards_;
  // dense_[a][v - lo] = row index + 1, or 0 where no guard matches; built
  // for domains small enough to table.
  std::vector<std::vector<std::uint32_t>> dense_;
};

// Computes the representative for one concrete input without enumerating
// all classes: per input, one class-guard derivation plus one model() call.
// Agrees with apply(synthesize_distributed(...), v) everywhere.
Valuation online_representative(const dsl::Program& p,
                                const symexec::SymbolicCharacterisation& gamma,
                                const Valuation& v,
                                const SynthOptions& options = {});

}  // namespace datamin::synth

#endif
