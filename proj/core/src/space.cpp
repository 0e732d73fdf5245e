#include "datamin/space.hpp"

#include <sstream>

namespace datamin {

InputSpace::InputSpace(std::vector<std::pair<std::string, Domain>> vars)
    : vars_(std::move(vars)) {
  stride_.assign(vars_.size(), 1);
  size_ = 1;
  for (std::size_t i = vars_.size(); i-- > 0;) {
    stride_[i] = size_;
    std::uint64_t card = vars_[i].second.cardinality();
    if (card != 0 && size_ > UINT64_MAX / card)
      throw BudgetError("input product space exceeds 2^64 points");
    size_ *= card;
  }
}

InputSpace InputSpace::of_program(const dsl::Program& p) {
  std::vector<std::pair<std::string, Domain>> vars;
  vars.reserve(p.inputs.size());
  for (const auto& in : p.inputs) vars.emplace_back(in.name, in.domain);
  return InputSpace(std::move(vars));
}

int InputSpace::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < vars_.size(); ++i)
    if (vars_[i].first == name) return static_cast<int>(i);
  return -1;
}

std::uint64_t InputSpace::rank(std::span<const Value> point) const {
  std::uint64_t r = 0;
  for (std::size_t i = 0; i < vars_.size(); ++i)
    r += static_cast<std::uint64_t>(point[i] - vars_[i].second.lo) * stride_[i];
  return r;
}

void InputSpace::unrank(std::uint64_t rank, Point& out) const {
  out.resize(vars_.size());
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    std::uint64_t q = rank / stride_[i];
    out[i] = vars_[i].second.lo + static_cast<Value>(q % vars_[i].second.cardinality());
  }
}

Point InputSpace::point_at(std::uint64_t rank) const {
  Point p;
  unrank(rank, p);
  return p;
}

bool InputSpace::contains(std::span<const Value> point) const {
  if (point.size() != vars_.size()) return false;
  for (std::size_t i = 0; i < vars_.size(); ++i)
    if (!vars_[i].second.contains(point[i])) return false;
  return true;
}

Valuation InputSpace::to_valuation(std::span<const Value> point) const {
  Valuation v;
  for (std::size_t i = 0; i < vars_.size(); ++i) v[vars_[i].first] = point[i];
  return v;
}

Point InputSpace::from_valuation(const Valuation& v) const {
  Point point(vars_.size());
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    auto it = v.find(vars_[i].first);
    if (it == v.end())
      throw EvalError("missing value for input '" + vars_[i].first + "'");
    if (!vars_[i].second.contains(it->second))
      throw EvalError("value " + std::to_string(it->second) + " for '" +
                      vars_[i].first + "' is outside its domain");
    point[i] = it->second;
  }
  if (v.size() != vars_.size()) {
    for (const auto& [name, value] : v) {
      (void)value;
      if (index_of(name) < 0)
        throw EvalError("'" + name + "' is not an input of this program");
    }
  }
  return point;
}

std::string InputSpace::point_to_string(std::span<const Value> point) const {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    if (i) os << ", ";
    os << vars_[i].first << '='
       << value_to_string(point[i], vars_[i].second.kind);
  }
  os << '}';
  return os.str();
}

}  // namespace datamin
