#ifndef DATAMIN_SPACE_HPP
#define DATAMIN_SPACE_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "datamin/ast.hpp"

namespace datamin {

// A point is a positional assignment, aligned with an InputSpace's
// variable order.
using Point = std::vector<Value>;

// The finite product of declared variable domains, with mixed-radix
// rank <-> point conversion. Rank order is lexicographic in declaration
// order (first variable most significant), values ascending, so ascending
// rank enumeration visits points in the canonical order used everywhere
// (deterministic models, class representatives, table ordering).
class InputSpace {
 public:
  InputSpace() = default;
  explicit InputSpace(std::vector<std::pair<std::string, Domain>> vars);
  static InputSpace of_program(const dsl::Program& p);

  std::size_t arity() const { return vars_.size(); }
  const std::string& name(std::size_t i) const { return vars_[i].first; }
  const Domain& domain(std::size_t i) const { return vars_[i].second; }
  const std::vector<std::pair<std::string, Domain>>& vars() const { return vars_; }
  int index_of(const std::string& name) const;  // -1 if absent

  // Total number of points; throws BudgetError if it would not fit in 64
  // bits (callers bound it by far smaller budgets anyway).
  std::uint64_t size() const { return size_; }

  std::uint64_t rank(std::span<const Value> point) const;
  void unrank(std::uint64_t rank, Point& out) const;
  Point point_at(std::uint64_t rank) const;

  bool contains(std::span<const Value> point) const;

  Valuation to_valuation(std::span<const Value> point) const;
  Point from_valuation(const Valuation& v) const;  // validates names and domains

  std::string point_to_string(std::span<const Value> point) const;

 private:
  std::vector<std::pair<std::string, Domain>> vars_;
  std::vector<std::uint64_t> stride_;  // stride_[i] = product of cards after i
  std::uint64_t size_ = 1;
};

}  // namespace datamin

#endif
