#ifndef DATAMIN_KNOWLEDGE_HPP
#define DATAMIN_KNOWLEDGE_HPP

#include <string>
#include <vector>

#include "datamin/oracle.hpp"

namespace datamin::knowledge {

// What an observer of the output learns about one input: every input the
// program maps to the same output, i.e. the kernel class of the input.
struct KnowledgeSet {
  std::string program;
  Valuation at_input;
  InputSpace space;
  std::vector<std::uint64_t> members;  // ascending ranks, includes at_input
};

KnowledgeSet knowledge_set(const dsl::Program& p, const Valuation& v,
                           std::uint64_t budget = oracle::kDefaultBudget);

// f discloses no more than g: every knowledge set through g is contained
// in the one through f, decided as kernel refinement (ker(g) subset of
// ker(f) as partitions). Programs must share the input signature and a
// semantically equal precondition.
bool discloses_leq(const dsl::Program& f, const dsl::Program& g,
                   std::uint64_t budget = oracle::kDefaultBudget);

// Legitimate use paired with a hidden secondary use over the same inputs.
struct AttackerPair {
  dsl::Program legitimate;
  dsl::Program hidden;
};

// Encoding metadata for the paired output: out = (o_p - p_min) * h_span +
// (o_h - h_min), invertible given the recorded ranges.
struct PairEncoding {
  Value p_min = 0, p_max = 0;
  Value h_min = 0, h_max = 0;
  Value h_span() const { return h_max - h_min + 1; }
};

// A program computing both outputs at once, as a single injectively
// encoded integer. The hidden program must be defined everywhere the
// legitimate precondition holds; output ranges are found by enumeration.
// The result is an ordinary program AST (inlined bodies, fresh locals) and
// round-trips through the printer and interpreter like any other.
dsl::Program attacker_compose(const AttackerPair& pair,
                              PairEncoding* encoding_out = nullptr,
                              std::uint64_t budget = oracle::kDefaultBudget);

// Does observing the composed output of minimised data reveal exactly as
// much as observing the legitimate output of raw data? True iff the kernel
// of (compose(p,h) after m) equals the kernel of p as partitions. Holds
// for every hidden h when m is a best monolithic minimiser for p.
bool verify_attacker_bound(const dsl::Program& p, const dsl::Program& h,
                           const synth::Minimiser& m,
                           std::uint64_t budget = oracle::kDefaultBudget);

// Offline audit: entries with equal output but distinct inputs witness
// that more data than necessary was disclosed.
struct AuditEntry {
  Valuation input;
  Value output;
  bool output_is_bool = false;
};

struct BreachWitness {
  std::size_t first_entry;   // indices into the audited log
  std::size_t second_entry;
  Value output;
};

std::vector<BreachWitness> audit_log(const std::vector<AuditEntry>& entries);

}  // namespace datamin::knowledge

#endif
