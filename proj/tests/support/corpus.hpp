#ifndef DATAMIN_TESTS_CORPUS_HPP
#define DATAMIN_TESTS_CORPUS_HPP

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "datamin/parser.hpp"

namespace datamin::tests {

inline std::string corpus_dir() {
#ifdef DATAMIN_CORPUS_DIR
  return DATAMIN_CORPUS_DIR;
#else
  return "corpus";
#endif
}

inline std::string read_corpus_file(const std::string& name) {
  std::string path = corpus_dir() + "/" + name;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open corpus file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline const dsl::Program& corpus_program(const std::string& name) {
  static std::map<std::string, dsl::Program> cache;
  auto it = cache.find(name);
  if (it == cache.end())
    it = cache.emplace(name, dsl::parse(read_corpus_file(name))).first;
  return it->second;
}

inline const std::vector<std::string>& corpus_names() {
  static const std::vector<std::string> names = {
      "benefits.dm",  "loyalty.dm",  "credit.dm",       "necessity.dm",
      "or_gate.dm",   "identity.dm", "const7.dm",       "mod2.dm",
      "mod4.dm",      "positive.dm", "sum_small.dm",    "parity_flag.dm",
      "ordered_pair.dm"};
  return names;
}

}  // namespace datamin::tests

#endif
