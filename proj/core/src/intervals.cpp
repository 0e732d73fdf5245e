#include "datamin/intervals.hpp"

#include <algorithm>

namespace datamin::logic {

IntervalSet IntervalSet::of(std::vector<Interval> raw) {
  std::sort(raw.begin(), raw.end(), [](const Interval& a, const Interval& b) {
    return a.lo != b.lo ? a.lo < b.lo : a.hi < b.hi;
  });
  IntervalSet out;
  for (const auto& iv : raw) {
    if (iv.lo > iv.hi) continue;
    if (!out.parts_.empty() && iv.lo <= out.parts_.back().hi + 1) {
      out.parts_.back().hi = std::max(out.parts_.back().hi, iv.hi);
    } else {
      out.parts_.push_back(iv);
    }
  }
  return out;
}

IntervalSet IntervalSet::single(Value lo, Value hi) {
  return of({Interval{lo, hi}});
}

IntervalSet IntervalSet::from_sorted_values(const std::vector<Value>& ascending) {
  IntervalSet out;
  for (Value v : ascending) {
    if (!out.parts_.empty() && v == out.parts_.back().hi + 1) {
      out.parts_.back().hi = v;
    } else if (!out.parts_.empty() && v <= out.parts_.back().hi) {
      continue;  // duplicate
    } else {
      out.parts_.push_back(Interval{v, v});
    }
  }
  return out;
}

bool IntervalSet::contains(Value v) const {
  auto it = std::upper_bound(
      parts_.begin(), parts_.end(), v,
      [](Value value, const Interval& iv) { return value < iv.lo; });
  if (it == parts_.begin()) return false;
  --it;
  return v <= it->hi;
}

Value IntervalSet::min() const {
  if (parts_.empty()) throw std::logic_error("min() of an empty interval set");
  return parts_.front().lo;
}

std::uint64_t IntervalSet::count() const {
  std::uint64_t n = 0;
  for (const auto& iv : parts_) n += static_cast<std::uint64_t>(iv.hi - iv.lo) + 1;
  return n;
}

IntervalSet IntervalSet::complement_within(const Domain& dom) const {
  IntervalSet out;
  Value next = dom.lo;
  for (const auto& iv : parts_) {
    Value lo = std::max(iv.lo, dom.lo);
    Value hi = std::min(iv.hi, dom.hi);
    if (lo > hi) continue;
    if (next < lo) out.parts_.push_back(Interval{next, lo - 1});
    if (hi == dom.hi) return out;  // also dodges hi+1 overflow at INT64_MAX
    next = hi + 1;
  }
  if (next <= dom.hi) out.parts_.push_back(Interval{next, dom.hi});
  return out;
}

bool IntervalSet::covers(const Domain& dom) const {
  return parts_.size() == 1 && parts_[0].lo <= dom.lo && parts_[0].hi >= dom.hi;
}

}  // namespace datamin::logic
