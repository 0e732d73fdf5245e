#include "datamin/solver.hpp"

#include <algorithm>
#include <unordered_map>

#include "datamin/eval.hpp"

namespace datamin::logic {

Env env_of_program(const dsl::Program& p) {
  Env env;
  env.reserve(p.inputs.size());
  for (const auto& in : p.inputs) env.emplace_back(in.name, in.domain);
  return env;
}

namespace {

constexpr std::uint64_t kMemoKeySpaceCap = 1u << 22;

bool contains_quantifier(const Formula& f) {
  if (std::holds_alternative<Formula::Quant>(f.node)) return true;
  if (auto* n = std::get_if<Formula::Not>(&f.node))
    return contains_quantifier(*n->body);
  if (auto* a = std::get_if<Formula::And>(&f.node)) {
    for (const auto& p : a->parts)
      if (contains_quantifier(*p)) return true;
    return false;
  }
  if (auto* o = std::get_if<Formula::Or>(&f.node)) {
    for (const auto& p : o->parts)
      if (contains_quantifier(*p)) return true;
    return false;
  }
  return false;
}

// Evaluates one formula at many points. Slots hold the environment
// variables plus every quantified variable; quantified names may not
// shadow anything in scope (the library never builds such formulas).
class FormulaRunner {
 public:
  FormulaRunner(FormulaPtr f, const Env& env) : f_(std::move(f)) {
    for (const auto& [name, dom] : env) add_slot(name, dom);
    env_size_ = slots_.size();
    collect_quantified(*f_);
    memo_enabled_ = contains_quantifier(*f_);
    if (memo_enabled_) annotate(*f_);
    // Every free variable must be declared by the environment.
    for (const auto& name : free_vars(*f_)) {
      auto it = slot_by_name_.find(name);
      if (it == slot_by_name_.end() ||
          static_cast<std::size_t>(it->second) >= env_size_)
        throw SolverError("undeclared variable '" + name + "'");
    }
  }

  bool at(std::span<const Value> point) {
    for (std::size_t i = 0; i < env_size_; ++i) values_[i] = point[i];
    return eval(f_.get());
  }

 private:
  struct NodeInfo {
    std::vector<int> slots;  // free slots of this node, ascending
    std::uint64_t key_space = 1;
    bool memoizable = false;
  };

  FormulaPtr f_;
  std::vector<std::pair<std::string, Domain>> slots_;
  std::vector<Value> values_;
  std::unordered_map<std::string, int> slot_by_name_;
  std::size_t env_size_ = 0;
  bool memo_enabled_ = false;
  std::unordered_map<const Formula*, NodeInfo> info_;
  std::unordered_map<const Formula*, std::unordered_map<std::uint64_t, bool>> memo_;

  void add_slot(const std::string& name, const Domain& dom) {
    if (slot_by_name_.count(name))
      throw SolverError("variable '" + name + "' declared or bound twice");
    slot_by_name_[name] = static_cast<int>(slots_.size());
    slots_.emplace_back(name, dom);
    values_.push_back(dom.lo);
  }

  void collect_quantified(const Formula& f) {
    if (auto* n = std::get_if<Formula::Not>(&f.node)) {
      collect_quantified(*n->body);
    } else if (auto* a = std::get_if<Formula::And>(&f.node)) {
      for (const auto& p : a->parts) collect_quantified(*p);
    } else if (auto* o = std::get_if<Formula::Or>(&f.node)) {
      for (const auto& p : o->parts) collect_quantified(*p);
    } else if (auto* q = std::get_if<Formula::Quant>(&f.node)) {
      auto it = slot_by_name_.find(q->var);
      if (it == slot_by_name_.end()) {
        add_slot(q->var, q->domain);
      } else if (static_cast<std::size_t>(it->second) < env_size_ ||
                 !(slots_[it->second].second == q->domain)) {
        // Shadowing a declared variable, or reusing a quantified name at a
        // different domain, would corrupt slot values / memo keys.
        throw SolverError("quantified variable '" + q->var +
                          "' shadows another declaration");
      }
      collect_quantified(*q->body);
    }
  }

  const NodeInfo& annotate(const Formula& f) {
    auto [it, fresh] = info_.try_emplace(&f);
    if (!fresh) return it->second;
    NodeInfo& info = it->second;
    auto merge = [&](const NodeInfo& child, const std::string* without = nullptr) {
      for (int s : child.slots) {
        if (without && slots_[s].first == *without) continue;
        if (std::find(info.slots.begin(), info.slots.end(), s) == info.slots.end())
          info.slots.push_back(s);
      }
    };
    if (auto* a = std::get_if<Formula::Atom>(&f.node)) {
      std::vector<std::string> vars;
      dsl::collect_vars(*a->expr, vars);
      for (const auto& v : vars) {
        auto sit = slot_by_name_.find(v);
        if (sit == slot_by_name_.end())
          throw SolverError("undeclared variable '" + v + "'");
        info.slots.push_back(sit->second);
      }
    } else if (auto* n = std::get_if<Formula::Not>(&f.node)) {
      merge(annotate(*n->body));
    } else if (auto* an = std::get_if<Formula::And>(&f.node)) {
      for (const auto& p : an->parts) merge(annotate(*p));
    } else if (auto* o = std::get_if<Formula::Or>(&f.node)) {
      for (const auto& p : o->parts) merge(annotate(*p));
    } else if (auto* q = std::get_if<Formula::Quant>(&f.node)) {
      merge(annotate(*q->body), &q->var);
    }
    std::sort(info.slots.begin(), info.slots.end());
    info.key_space = 1;
    for (int s : info.slots) {
      std::uint64_t card = slots_[s].second.cardinality();
      if (info.key_space > kMemoKeySpaceCap / std::max<std::uint64_t>(card, 1)) {
        info.key_space = 0;
        break;
      }
      info.key_space *= card;
    }
    info.memoizable =
        info.key_space != 0 && !std::holds_alternative<Formula::BoolConst>(f.node);
    return info;
  }

  std::uint64_t memo_key(const NodeInfo& info) const {
    std::uint64_t key = 0;
    for (int s : info.slots) {
      const Domain& dom = slots_[s].second;
      key = key * dom.cardinality() +
            static_cast<std::uint64_t>(values_[s] - dom.lo);
    }
    return key;
  }

  bool eval(const Formula* f) {
    if (auto* c = std::get_if<Formula::BoolConst>(&f->node)) return c->value;

    std::unordered_map<std::uint64_t, bool>* table = nullptr;
    std::uint64_t key = 0;
    if (memo_enabled_) {
      auto iit = info_.find(f);
      if (iit != info_.end() && iit->second.memoizable) {
        key = memo_key(iit->second);
        table = &memo_[f];
        auto hit = table->find(key);
        if (hit != table->end()) return hit->second;
      }
    }

    bool result;
    if (auto* a = std::get_if<Formula::Atom>(&f->node)) {
      dsl::Binding binding(slots_, values_);
      result = dsl::eval_expr(*a->expr, binding) != 0;
    } else if (auto* n = std::get_if<Formula::Not>(&f->node)) {
      result = !eval(n->body.get());
    } else if (auto* an = std::get_if<Formula::And>(&f->node)) {
      result = true;
      for (const auto& p : an->parts)
        if (!eval(p.get())) { result = false; break; }
    } else if (auto* o = std::get_if<Formula::Or>(&f->node)) {
      result = false;
      for (const auto& p : o->parts)
        if (eval(p.get())) { result = true; break; }
    } else {
      const auto& q = std::get<Formula::Quant>(f->node);
      int slot = slot_by_name_.at(q.var);
      result = q.kind == Quantifier::Forall;
      for (Value v = q.domain.lo; v <= q.domain.hi; ++v) {
        values_[slot] = v;
        bool inner = eval(q.body.get());
        if (q.kind == Quantifier::Forall && !inner) { result = false; break; }
        if (q.kind == Quantifier::Exists && inner) { result = true; break; }
      }
    }

    if (table != nullptr) table->emplace(key, result);
    return result;
  }
};

Env restrict_env_to_free(const FormulaPtr& f, const Env& env) {
  std::vector<std::string> free = free_vars(*f);
  Env out;
  for (const auto& [name, dom] : env) {
    if (std::find(free.begin(), free.end(), name) != free.end())
      out.emplace_back(name, dom);
  }
  for (const auto& name : free) {
    bool declared = false;
    for (const auto& [n, d] : env) declared |= (n == name);
    if (!declared) throw SolverError("undeclared variable '" + name + "'");
  }
  return out;
}

}  // namespace

bool eval_formula(const FormulaPtr& f, const Env& env,
                  std::span<const Value> point) {
  FormulaRunner runner(f, env);
  return runner.at(point);
}

struct FormulaEvaluator::Impl {
  FormulaRunner runner;
  Impl(FormulaPtr f, const Env& env) : runner(std::move(f), env) {}
};

FormulaEvaluator::FormulaEvaluator(FormulaPtr f, Env env)
    : impl_(std::make_unique<Impl>(std::move(f), env)) {}
FormulaEvaluator::FormulaEvaluator(FormulaEvaluator&&) noexcept = default;
FormulaEvaluator& FormulaEvaluator::operator=(FormulaEvaluator&&) noexcept = default;
FormulaEvaluator::~FormulaEvaluator() = default;

bool FormulaEvaluator::at(std::span<const Value> point) {
  return impl_->runner.at(point);
}

bool check(const FormulaPtr& f, const Env& env) {
  FormulaRunner runner(f, env);
  InputSpace space{Env(env)};
  Point point;
  for (std::uint64_t r = 0; r < space.size(); ++r) {
    space.unrank(r, point);
    if (runner.at(point)) return true;
  }
  return false;
}

std::optional<Point> model_point(const FormulaPtr& f, const Env& env) {
  FormulaRunner runner(f, env);
  InputSpace space{Env(env)};
  Point point;
  for (std::uint64_t r = 0; r < space.size(); ++r) {
    space.unrank(r, point);
    if (runner.at(point)) return point;
  }
  return std::nullopt;
}

Valuation model(const FormulaPtr& f, const Env& env) {
  auto point = model_point(f, env);
  if (!point) throw SolverError("model() called on an unsatisfiable formula");
  InputSpace space{Env(env)};
  return space.to_valuation(*point);
}

IntervalSet project_to_intervals(const FormulaPtr& f, const std::string& var,
                                 const Domain& dom) {
  Env env{{var, dom}};
  FormulaRunner runner(f, env);
  std::vector<Value> trues;
  Value point[1];
  for (Value v = dom.lo; v <= dom.hi; ++v) {
    point[0] = v;
    if (runner.at(point)) trues.push_back(v);
  }
  return IntervalSet::from_sorted_values(trues);
}

namespace {

// Canonical box decomposition of a sorted rank set: group consecutive
// values of the leading variable that have identical residual sets, emit
// the run as an interval, recurse on the residual.
FormulaPtr decompose_boxes(const Env& env, std::size_t var_index,
                           const std::vector<std::uint64_t>& ranks,
                           const InputSpace& space) {
  if (var_index + 1 == env.size()) {
    std::vector<Value> values;
    values.reserve(ranks.size());
    const Domain& dom = env[var_index].second;
    for (auto r : ranks) values.push_back(dom.lo + static_cast<Value>(r));
    return interval_set_formula(IntervalSet::from_sorted_values(values),
                                env[var_index].first, dom);
  }

  const Domain& dom = env[var_index].second;
  std::uint64_t stride = 1;
  for (std::size_t i = var_index + 1; i < env.size(); ++i)
    stride *= env[i].second.cardinality();

  // Slice ranks per value of this variable (ranks are sorted, so slices
  // are contiguous).
  std::vector<std::pair<Value, std::vector<std::uint64_t>>> slices;
  for (auto r : ranks) {
    Value v = dom.lo + static_cast<Value>(r / stride);
    if (slices.empty() || slices.back().first != v) slices.push_back({v, {}});
    slices.back().second.push_back(r % stride);
  }

  std::vector<FormulaPtr> boxes;
  std::size_t i = 0;
  while (i < slices.size()) {
    std::size_t j = i + 1;
    while (j < slices.size() && slices[j].first == slices[j - 1].first + 1 &&
           slices[j].second == slices[i].second)
      ++j;
    IntervalSet run = IntervalSet::single(slices[i].first, slices[j - 1].first);
    FormulaPtr head = interval_set_formula(run, env[var_index].first, dom);
    FormulaPtr tail = decompose_boxes(env, var_index + 1, slices[i].second, space);
    boxes.push_back(f_and({head, tail}));
    i = j;
  }
  return f_or(std::move(boxes));
}

}  // namespace

FormulaPtr canonical_set_formula(const Env& env,
                                 const std::vector<std::uint64_t>& sorted_ranks) {
  if (env.empty()) return f_const(!sorted_ranks.empty());
  InputSpace space{Env(env)};
  return decompose_boxes(env, 0, sorted_ranks, space);
}

FormulaPtr quantifier_eliminate(const FormulaPtr& f, const Env& env) {
  Env free_env = restrict_env_to_free(f, env);
  if (free_env.empty()) {
    FormulaRunner runner(f, free_env);
    return f_const(runner.at({}));
  }
  if (free_env.size() == 1) {
    IntervalSet set =
        project_to_intervals(f, free_env[0].first, free_env[0].second);
    return interval_set_formula(set, free_env[0].first, free_env[0].second);
  }
  FormulaRunner runner(f, free_env);
  InputSpace space{Env(free_env)};
  std::vector<std::uint64_t> trues;
  Point point;
  for (std::uint64_t r = 0; r < space.size(); ++r) {
    space.unrank(r, point);
    if (runner.at(point)) trues.push_back(r);
  }
  return decompose_boxes(free_env, 0, trues, space);
}

}  // namespace datamin::logic
