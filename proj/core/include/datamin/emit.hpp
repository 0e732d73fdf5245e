#ifndef DATAMIN_EMIT_HPP
#define DATAMIN_EMIT_HPP

#include <string>
#include <vector>

#include "datamin/synth.hpp"

namespace datamin::emit {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kDocumentSchema = "datamin/minimiser-v1";

// SHA-256 of the canonical printed source; binds a minimiser document to
// the exact program it was synthesized from.
std::string program_digest(const dsl::Program& p);

// Portable decision-table document (schema shipped as
// schemas/minimiser.schema.json). Output is deterministic and
// byte-identical across runs for the same inputs.
std::string to_json(const synth::Minimiser& m, const dsl::Program& p);

// Rebuilds a minimiser from a document, re-canonicalising guards against
// the program's signature. Verifies the digest (Error on mismatch unless
// check_digest is false).
synth::Minimiser from_json(const std::string& text, const dsl::Program& p,
                           bool check_digest = true);

// The minimiser as executable source: one program per input, named
// <program>_min_<input>. Distributed tables take just their own input;
// monolithic tables take the full signature and return that coordinate of
// the class representative. Evaluating emitted source agrees with apply()
// on every collectable input.
struct EmittedProgram {
  std::string input_name;
  std::string source;
};
std::vector<EmittedProgram> to_source(const synth::Minimiser& m,
                                      const dsl::Program& p);

}  // namespace datamin::emit

#endif
