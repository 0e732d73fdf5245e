#ifndef DATAMIN_INTERVALS_HPP
#define DATAMIN_INTERVALS_HPP

#include <string>
#include <vector>

#include "datamin/domain.hpp"

namespace datamin::logic {

// A union of disjoint, maximal, sorted closed intervals. The canonical
// quantifier-free shape for one variable: two IntervalSets denote the same
// set of values iff they are equal member-wise.
class IntervalSet {
 public:
  struct Interval {
    Value lo;
    Value hi;
    friend bool operator==(const Interval&, const Interval&) = default;
  };

  IntervalSet() = default;

  // Builds from arbitrary (possibly unsorted, overlapping) intervals.
  static IntervalSet of(std::vector<Interval> raw);
  static IntervalSet single(Value lo, Value hi);
  static IntervalSet from_sorted_values(const std::vector<Value>& ascending);

  bool empty() const { return parts_.empty(); }
  bool contains(Value v) const;
  Value min() const;  // throws on empty
  std::uint64_t count() const;

  IntervalSet complement_within(const Domain& dom) const;
  bool covers(const Domain& dom) const;

  const std::vector<Interval>& parts() const { return parts_; }

  friend bool operator==(const IntervalSet&, const IntervalSet&) = default;

 private:
  std::vector<Interval> parts_;
};

}  // namespace datamin::logic

#endif
